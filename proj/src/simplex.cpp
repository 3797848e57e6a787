#include "tlkit/simplex.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace tlkit {

namespace {

enum class State : std::uint8_t { basic, lower, upper };

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;
constexpr std::size_t kReinvertEvery = 64;
constexpr std::size_t kStallLimit = 50;

class DualLad {
 public:
  DualLad(std::span<const double> A, std::size_t m, std::size_t f, std::span<const double> y)
      : A_(A), y_(y), m_(m), f_(f), nv_(m + f), state_(nv_, State::lower), lb_(nv_, 0.0),
        ub_(nv_, 2.0), cost_(nv_, 0.0), art_sign_(f, 1.0) {
    b_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t r = 0; r < f; ++r) b_[static_cast<Eigen::Index>(r)] += A[i * f + r];
    // crash start at the unconstrained dual optimum u_j = 1 + sign(y_j)
    Eigen::VectorXd res = b_;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(y[i] > 0.0)) continue;
      state_[i] = State::upper;
      for (std::size_t r = 0; r < f; ++r) res[static_cast<Eigen::Index>(r)] -= 2.0 * A[i * f + r];
    }
    basis_.resize(f);
    for (std::size_t r = 0; r < f; ++r) {
      art_sign_[r] = res[static_cast<Eigen::Index>(r)] < 0.0 ? -1.0 : 1.0;
      ub_[m + r] = kInf;
      basis_[r] = m + r;
      state_[m + r] = State::basic;
    }
    double amax = 0.0;
    for (double a : A) amax = std::max(amax, std::abs(a));
    amax_ = std::max(amax, 1.0);
  }

  LadSolution solve() {
    // phase 1: drive artificials to zero
    for (std::size_t r = 0; r < f_; ++r) cost_[m_ + r] = -1.0;
    reinvert();
    run(true);
    // phase 2: artificials pinned at zero, never re-enter
    for (std::size_t r = 0; r < f_; ++r) {
      cost_[m_ + r] = 0.0;
      ub_[m_ + r] = 0.0;
      if (state_[m_ + r] != State::basic) state_[m_ + r] = State::lower;
    }
    for (std::size_t j = 0; j < m_; ++j) cost_[j] = y_[j];
    reinvert();
    run(false);
    reinvert();

    LadSolution out;
    const Eigen::VectorXd pi = multipliers();
    out.coef.assign(pi.data(), pi.data() + pi.size());
    for (std::size_t i = 0; i < m_; ++i) {
      double fit = 0.0;
      for (std::size_t r = 0; r < f_; ++r) fit += A_[i * f_ + r] * out.coef[r];
      out.objective += std::abs(y_[i] - fit);
    }
    for (std::size_t j = 0; j < m_; ++j) out.dual_objective += y_[j] * (value(j) - 1.0);
    out.iterations = iterations_;
    out.bland_iterations = bland_iterations_;
    return out;
  }

 private:
  Eigen::VectorXd column(std::size_t v) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f_));
    if (v < m_) {
      for (std::size_t r = 0; r < f_; ++r) c[static_cast<Eigen::Index>(r)] = A_[v * f_ + r];
    } else {
      c[static_cast<Eigen::Index>(v - m_)] = art_sign_[v - m_];
    }
    return c;
  }

  double value(std::size_t v) const {
    if (state_[v] == State::lower) return lb_[v];
    if (state_[v] == State::upper) return ub_[v];
    for (std::size_t r = 0; r < f_; ++r)
      if (basis_[r] == v) return xb_[static_cast<Eigen::Index>(r)];
    return 0.0;
  }

  Eigen::VectorXd multipliers() const {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(f_));
    for (std::size_t r = 0; r < f_; ++r) cb[static_cast<Eigen::Index>(r)] = cost_[basis_[r]];
    return binv_.transpose() * cb;
  }

  void reinvert() {
    const auto F = static_cast<Eigen::Index>(f_);
    Eigen::MatrixXd B(F, F);
    for (std::size_t r = 0; r < f_; ++r) B.col(static_cast<Eigen::Index>(r)) = column(basis_[r]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) throw std::runtime_error("solve_lad: singular basis");
    binv_ = lu.inverse();
    Eigen::VectorXd rhs = b_;
    for (std::size_t v = 0; v < nv_; ++v) {
      if (state_[v] == State::basic) continue;
      const double val = state_[v] == State::upper ? ub_[v] : lb_[v];
      if (val != 0.0) rhs -= val * column(v);
    }
    xb_ = binv_ * rhs;
    since_reinvert_ = 0;
  }

  double objective() const {
    double s = 0.0;
    for (std::size_t r = 0; r < f_; ++r) s += cost_[basis_[r]] * xb_[static_cast<Eigen::Index>(r)];
    for (std::size_t v = 0; v < nv_; ++v)
      if (state_[v] == State::upper) s += cost_[v] * ub_[v];
    return s;
  }

  void run(bool phase1) {
    const std::size_t cap = 200 * (m_ + f_) + 10000;
    bool bland = false;
    std::size_t stall = 0;
    double best = objective();
    for (std::size_t local = 0;; ++local) {
      if (local > cap) throw std::runtime_error("solve_lad: iteration limit reached");
      const Eigen::VectorXd pi = multipliers();
      const double tol = 1e-9 * std::max(1.0, amax_ * pi.cwiseAbs().maxCoeff());

      // pricing
      std::size_t q = nv_;
      double best_d = 0.0;
      int dir = 0;
      const std::size_t limit = phase1 ? nv_ : m_;
      for (std::size_t v = 0; v < limit; ++v) {
        if (state_[v] == State::basic) continue;
        double d = cost_[v];
        if (v < m_) {
          const double* row = A_.data() + v * f_;
          for (std::size_t r = 0; r < f_; ++r) d -= row[r] * pi[static_cast<Eigen::Index>(r)];
        } else {
          d -= art_sign_[v - m_] * pi[static_cast<Eigen::Index>(v - m_)];
        }
        int s = 0;
        if (state_[v] == State::lower && d > tol && ub_[v] > lb_[v]) s = 1;
        else if (state_[v] == State::upper && d < -tol) s = -1;
        if (s == 0) continue;
        if (bland) {
          q = v;
          dir = s;
          break;
        }
        if (std::abs(d) > best_d) {
          best_d = std::abs(d);
          q = v;
          dir = s;
        }
      }
      if (q == nv_) return;

      const Eigen::VectorXd alpha = binv_ * column(q);
      // ratio test; x_B moves by -dir * t * alpha
      double tmin = ub_[q] - lb_[q];
      std::size_t leave = f_;  // f_ means bound flip
      bool leave_upper = false;
      double leave_piv = 0.0;
      for (std::size_t r = 0; r < f_; ++r) {
        const double delta = dir * alpha[static_cast<Eigen::Index>(r)];
        const std::size_t bv = basis_[r];
        double t;
        bool to_upper;
        if (delta > kPivotTol) {
          t = (xb_[static_cast<Eigen::Index>(r)] - lb_[bv]) / delta;
          to_upper = false;
        } else if (delta < -kPivotTol && ub_[bv] < kInf) {
          t = (ub_[bv] - xb_[static_cast<Eigen::Index>(r)]) / -delta;
          to_upper = true;
        } else {
          continue;
        }
        t = std::max(t, 0.0);
        const double piv = std::abs(delta);
        bool take = false;
        if (t < tmin - 1e-12) take = true;
        else if (t <= tmin + 1e-12) {
          if (leave == f_) take = true;  // prefer a pivot over a flip at equal step
          else if (bland) take = bv < basis_[leave];
          else take = piv > leave_piv || (piv == leave_piv && bv < basis_[leave]);
        }
        if (take) {
          tmin = std::min(tmin, t);
          leave = r;
          leave_upper = to_upper;
          leave_piv = piv;
        }
      }
      if (!(tmin < kInf)) throw std::runtime_error("solve_lad: unbounded direction");

      xb_ -= (dir * tmin) * alpha;
      if (leave == f_) {
        state_[q] = state_[q] == State::lower ? State::upper : State::lower;
      } else {
        const std::size_t out = basis_[leave];
        state_[out] = leave_upper ? State::upper : State::lower;
        const double entering = dir > 0 ? lb_[q] + tmin : ub_[q] - tmin;
        const auto L = static_cast<Eigen::Index>(leave);
        const double piv = alpha[L];
        binv_.row(L) /= piv;
        for (Eigen::Index i = 0; i < binv_.rows(); ++i)
          if (i != L && alpha[i] != 0.0) binv_.row(i) -= alpha[i] * binv_.row(L);
        basis_[leave] = q;
        state_[q] = State::basic;
        xb_[L] = entering;
        if (++since_reinvert_ >= kReinvertEvery) reinvert();
      }
      ++iterations_;
      if (bland) ++bland_iterations_;

      const double obj = objective();
      if (obj > best + 1e-12 * std::max(1.0, std::abs(best))) {
        best = obj;
        stall = 0;
        bland = false;
      } else if (++stall >= kStallLimit) {
        bland = true;
      }
    }
  }

  std::span<const double> A_;
  std::span<const double> y_;
  std::size_t m_, f_, nv_;
  std::vector<State> state_;
  std::vector<double> lb_, ub_, cost_;
  std::vector<double> art_sign_;
  std::vector<std::size_t> basis_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  double amax_ = 1.0;
  std::size_t iterations_ = 0;
  std::size_t bland_iterations_ = 0;
  std::size_t since_reinvert_ = 0;
};

}  // namespace

LadSolution solve_lad(std::span<const double> A, std::size_t m, std::size_t f,
                      std::span<const double> y) {
  if (m == 0) throw std::invalid_argument("solve_lad: no rows");
  if (f == 0) throw std::invalid_argument("solve_lad: no columns");
  if (A.size() != m * f || y.size() != m) throw std::invalid_argument("solve_lad: shape mismatch");
  return DualLad(A, m, f, y).solve();
}

}  // namespace tlkit
