#include "tlkit/polycore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tlkit/kernels.hpp"

namespace tlkit {

double cheb_eval(int k, double x) {
  if (k < 0) throw std::invalid_argument("cheb_eval: k must be nonnegative");
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int i = 1; i < k; ++i) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

PiecewiseRef::PiecewiseRef(Kind k, double c, double e) : kind_(k), center_(c), eps_(e) {
  if (!(e > 0.0)) throw std::invalid_argument("PiecewiseRef: eps must be positive");
}

PiecewiseRef PiecewiseRef::trapezoid(double y, double eps) { return {Kind::trapezoid, y, eps}; }
PiecewiseRef PiecewiseRef::ramp(double theta, double eps) { return {Kind::ramp, theta, eps}; }

double PiecewiseRef::operator()(double z) const {
  const double y = center_, e = eps_;
  if (kind_ == Kind::ramp) return std::clamp((z - y) / e, -1.0, 1.0);
  if (z <= y - e || z >= y + 2 * e) return 0.0;
  if (z < y) return (z - (y - e)) / e;
  if (z <= y + e) return 1.0;
  return ((y + 2 * e) - z) / e;
}

std::vector<double> PiecewiseRef::breakpoints() const {
  if (kind_ == Kind::ramp) return {center_ - eps_, center_ + eps_};
  return {center_ - eps_, center_, center_ + eps_, center_ + 2 * eps_};
}

namespace {

std::vector<double> node_values(const PiecewiseRef& f, double w, int d, int& m) {
  if (!(w >= 1.0)) throw std::invalid_argument("project: window half-width must be >= 1");
  if (d < 0) throw std::invalid_argument("project: degree must be nonnegative");
  const int minimum = 8 * (d + 1);
  if (m == 0) m = std::max(minimum, kDefaultQuadraturePoints);
  if (m < minimum) throw std::invalid_argument("project: quadrature_points must be >= 8(d+1)");
  std::vector<double> fv(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = (2.0 * j + 1.0) * std::numbers::pi / (2.0 * m);
    fv[static_cast<std::size_t>(j)] = f(w * std::cos(theta));
  }
  return fv;
}

}  // namespace

ChebSeries project(const PiecewiseRef& f, double w, int d, int quadrature_points) {
  int m = quadrature_points;
  const auto fv = node_values(f, w, d, m);
  return {w, kernels::cheb_coefficients(fv, d)};
}

ChebSeries project_serial(const PiecewiseRef& f, double w, int d, int quadrature_points) {
  int m = quadrature_points;
  const auto fv = node_values(f, w, d, m);
  return {w, kernels::cheb_coefficients_serial(fv, d)};
}

double series_eval(const ChebSeries& s, double x) {
  const double u = x / s.w;
  double b1 = 0.0, b2 = 0.0;
  for (int k = s.degree(); k >= 1; --k) {
    const double b0 = s.coeffs[static_cast<std::size_t>(k)] + 2.0 * u * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return s.coeffs.empty() ? 0.0 : s.coeffs[0] + u * b1 - b2;
}

std::vector<double> expand_to_monomials_1d(const ChebSeries& s) {
  const int d = s.degree();
  if (d < 0) return {};
  if (d > 64) throw std::overflow_error("expand_to_monomials_1d: degree above 64");
  // rows of the Chebyshev coefficient triangle, T_k(u) = sum_i t[k][i] u^i
  std::vector<std::vector<double>> t(static_cast<std::size_t>(d) + 1);
  t[0] = {1.0};
  if (d >= 1) t[1] = {0.0, 1.0};
  for (int k = 1; k < d; ++k) {
    auto& nx = t[static_cast<std::size_t>(k) + 1];
    nx.assign(static_cast<std::size_t>(k) + 2, 0.0);
    const auto& cur = t[static_cast<std::size_t>(k)];
    const auto& prev = t[static_cast<std::size_t>(k) - 1];
    for (std::size_t i = 0; i < cur.size(); ++i) nx[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) nx[i] -= prev[i];
  }
  std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    const double a = s.coeffs[static_cast<std::size_t>(k)];
    const auto& row = t[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < row.size(); ++i) c[i] += a * row[i];
  }
  double scale = 1.0;
  for (auto& ci : c) {
    ci *= scale;
    scale /= s.w;
  }
  for (double ci : c)
    if (!std::isfinite(ci)) throw std::overflow_error("expand_to_monomials_1d: non-finite coefficient");
  return c;
}

double power_eval(std::span<const double> c, double x) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

double power_coefficient_bound(int d) { return 4.0 * (d + 1) * std::pow(3.0, d); }

// ---- MultiIndex ----

MultiIndex MultiIndex::from_dense(std::span<const int> exps) {
  MultiIndex m;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    if (exps[i] > 0) {
      m.e_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(exps[i]));
      m.degree_ += exps[i];
    }
  }
  return m;
}

MultiIndex MultiIndex::unit(std::uint32_t coord, std::uint32_t power) {
  MultiIndex m;
  if (power > 0) {
    m.e_.emplace_back(coord, power);
    m.degree_ = static_cast<int>(power);
  }
  return m;
}

MultiIndex MultiIndex::from_key(const std::string& key) {
  std::vector<int> exps;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("MultiIndex: bad key '" + key + "'");
    exps.push_back(v);
  }
  return from_dense(exps);
}

std::uint32_t MultiIndex::exponent(std::uint32_t coord) const {
  for (const auto& [c, p] : e_)
    if (c == coord) return p;
  return 0;
}

bool MultiIndex::multilinear() const {
  return std::all_of(e_.begin(), e_.end(), [](const Entry& e) { return e.second == 1; });
}

std::vector<int> MultiIndex::dense(std::size_t n) const {
  std::vector<int> out(n, 0);
  for (const auto& [c, p] : e_) {
    if (c >= n) throw std::out_of_range("MultiIndex::dense: coordinate beyond dimension");
    out[c] = static_cast<int>(p);
  }
  return out;
}

std::string MultiIndex::key(std::size_t n) const {
  std::string s;
  const auto d = dense(n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(d[i]);
  }
  return s;
}

MultiIndex MultiIndex::operator*(const MultiIndex& o) const {
  MultiIndex r;
  std::size_t i = 0, j = 0;
  while (i < e_.size() || j < o.e_.size()) {
    if (j == o.e_.size() || (i < e_.size() && e_[i].first < o.e_[j].first)) {
      r.e_.push_back(e_[i++]);
    } else if (i == e_.size() || o.e_[j].first < e_[i].first) {
      r.e_.push_back(o.e_[j++]);
    } else {
      r.e_.emplace_back(e_[i].first, e_[i].second + o.e_[j].second);
      ++i;
      ++j;
    }
  }
  r.degree_ = degree_ + o.degree_;
  return r;
}

MultiIndex MultiIndex::lowered(std::uint32_t c) const {
  MultiIndex r = *this;
  auto it = std::find_if(r.e_.begin(), r.e_.end(), [c](const Entry& e) { return e.first == c; });
  if (it == r.e_.end()) throw std::invalid_argument("MultiIndex::lowered: coordinate absent");
  if (--it->second == 0) r.e_.erase(it);
  --r.degree_;
  return r;
}

double MultiIndex::eval(std::span<const double> x) const {
  double v = 1.0;
  for (const auto& [c, p] : e_) {
    const double xc = x[c];
    double pw = 1.0;
    for (std::uint32_t k = 0; k < p; ++k) pw *= xc;
    v *= pw;
  }
  return v;
}

bool GrlexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  const std::size_t n = std::min(ea.size(), eb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
    if (ea[i].second != eb[i].second) return ea[i].second > eb[i].second;
  }
  return ea.size() > eb.size();
}

namespace {

void enumerate_degree(std::size_t n, std::size_t coord, int remaining, bool multilinear,
                      std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (coord + 1 == n) {
    if (multilinear && remaining > 1) return;
    cur[coord] = remaining;
    out.push_back(MultiIndex::from_dense(cur));
    cur[coord] = 0;
    return;
  }
  const int top = multilinear ? std::min(remaining, 1) : remaining;
  for (int p = top; p >= 0; --p) {
    cur[coord] = p;
    enumerate_degree(n, coord + 1, remaining - p, multilinear, cur, out);
  }
  cur[coord] = 0;
}

double binom(double n, double k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)));
}

}  // namespace

std::vector<MultiIndex> grlex_indices(std::size_t n, int max_degree, int min_degree,
                                      bool multilinear) {
  if (n == 0) throw std::invalid_argument("grlex_indices: n must be positive");
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  for (int k = std::max(min_degree, 0); k <= max_degree; ++k) {
    if (multilinear && static_cast<std::size_t>(k) > n) break;
    enumerate_degree(n, 0, k, multilinear, cur, out);
  }
  return out;
}

double count_indices(std::size_t n, int max_degree, int min_degree, bool multilinear) {
  double total = 0.0;
  for (int k = std::max(min_degree, 0); k <= max_degree; ++k) {
    total += multilinear ? binom(static_cast<double>(n), k)
                         : binom(static_cast<double>(n) + k - 1, k);
  }
  return total;
}

// ---- MonomialPoly ----

void MonomialPoly::add(const MultiIndex& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MonomialPoly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

int MonomialPoly::max_degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double MonomialPoly::eval(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += c * m.eval(x);
  return s;
}

MonomialPoly compose_direction(std::span<const double> coeffs, std::span<const double> v) {
  double nrm = 0.0;
  for (double vi : v) nrm += vi * vi;
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-9)
    throw std::invalid_argument("compose_direction: direction must be a unit vector");
  std::vector<std::uint32_t> support;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) support.push_back(static_cast<std::uint32_t>(i));
  const int d = coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
  if (count_indices(support.size(), d) > kMaxExpandedTerms)
    throw std::length_error("compose_direction: expansion exceeds the term cap");

  MonomialPoly out;
  std::map<MultiIndex, double, GrlexLess> power{{MultiIndex{}, 1.0}};
  for (int i = 0; i <= d; ++i) {
    if (i > 0) {
      std::map<MultiIndex, double, GrlexLess> next;
      for (const auto& [m, c] : power)
        for (auto j : support) next[m * MultiIndex::unit(j)] += c * v[j];
      power = std::move(next);
    }
    const double ci = coeffs[static_cast<std::size_t>(i)];
    if (ci == 0.0) continue;
    for (const auto& [m, c] : power) out.add(m, ci * c);
  }
  return out;
}

int sign_approximator_degree(double beta, double eps) {
  return static_cast<int>(std::ceil(2.0 * beta / (eps * eps) - 1e-9));
}

ChebSeries sign_approximator_series(double theta, double eps, double beta) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("sign approximator: eps must lie in (0, 0.5)");
  if (!(beta >= 1.0)) throw std::invalid_argument("sign approximator: beta must be >= 1");
  return project(PiecewiseRef::ramp(theta, eps), 2.0 * beta, sign_approximator_degree(beta, eps));
}

MonomialPoly build_sign_approximator(std::span<const double> v, double theta, double eps,
                                     double beta) {
  const auto c = expand_to_monomials_1d(sign_approximator_series(theta, eps, beta));
  return compose_direction(c, v);
}

}  // namespace tlkit
