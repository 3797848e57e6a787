#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tlkit {

// T_k(x) by the three-term recurrence; |x| > 1 is evaluated, not clamped.
double cheb_eval(int k, double x);

// f(x) = sum_k coeffs[k] * T_k(x / w)
struct ChebSeries {
  double w = 1.0;
  std::vector<double> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

class PiecewiseRef {
 public:
  enum class Kind { trapezoid, ramp };

  // 0 below y-eps, ramps to 1 on [y-eps, y], 1 on [y, y+eps], back to 0 at y+2eps.
  static PiecewiseRef trapezoid(double y, double eps);
  // clamp((x - theta) / eps, -1, 1)
  static PiecewiseRef ramp(double theta, double eps);

  Kind kind() const { return kind_; }
  double center() const { return center_; }
  double eps() const { return eps_; }
  double operator()(double z) const;
  // Kinks in increasing order; the function is affine between them.
  std::vector<double> breakpoints() const;

 private:
  PiecewiseRef(Kind k, double c, double e);
  Kind kind_;
  double center_;
  double eps_;
};

inline constexpr int kDefaultQuadraturePoints = 1 << 16;

// Degree-d projection of y -> f(w y) onto T_0..T_d by Gauss-Chebyshev quadrature.
// quadrature_points = 0 selects max(8(d+1), kDefaultQuadraturePoints); an explicit
// count below 8(d+1) is rejected.
ChebSeries project(const PiecewiseRef& f, double w, int d, int quadrature_points = 0);
ChebSeries project_serial(const PiecewiseRef& f, double w, int d, int quadrature_points = 0);

// Clenshaw evaluation
double series_eval(const ChebSeries& s, double x);

// Power-basis coefficients c_0..c_d with sum c_i x^i == series. Degree > 64 throws.
std::vector<double> expand_to_monomials_1d(const ChebSeries& s);
double power_eval(std::span<const double> c, double x);
// 4 (d+1) 3^d
double power_coefficient_bound(int d);

// Sparse exponent vector; absent coordinates have exponent 0.
class MultiIndex {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // coordinate, exponent > 0

  MultiIndex() = default;
  static MultiIndex from_dense(std::span<const int> exps);
  static MultiIndex unit(std::uint32_t coord, std::uint32_t power = 1);
  static MultiIndex from_key(const std::string& key);  // inverse of key()

  std::uint32_t exponent(std::uint32_t coord) const;
  int degree() const { return degree_; }
  const std::vector<Entry>& entries() const { return e_; }
  bool multilinear() const;
  std::vector<int> dense(std::size_t n) const;
  std::string key(std::size_t n) const;  // "a1,a2,...,an"
  std::uint32_t last_coord() const { return e_.back().first; }
  MultiIndex operator*(const MultiIndex& o) const;
  // This index with one unit removed from coordinate c; c must be present.
  MultiIndex lowered(std::uint32_t c) const;
  double eval(std::span<const double> x) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Entry> e_;
  int degree_ = 0;
};

// Graded order: total degree ascending, then dense exponent vectors in
// descending lexicographic order (x1 before x2, x1^2 before x1 x2).
struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All indices over n coordinates with min_degree <= degree <= max_degree, in
// GrlexLess order. multilinear restricts exponents to {0, 1}.
std::vector<MultiIndex> grlex_indices(std::size_t n, int max_degree, int min_degree = 0,
                                      bool multilinear = false);
// Number of indices grlex_indices would return, as a double to avoid overflow.
double count_indices(std::size_t n, int max_degree, int min_degree = 0, bool multilinear = false);

class MonomialPoly {
 public:
  using Terms = std::map<MultiIndex, double, GrlexLess>;

  void add(const MultiIndex& m, double c);
  double coeff(const MultiIndex& m) const;
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  int max_degree() const;
  double eval(std::span<const double> x) const;

 private:
  Terms terms_;
};

inline constexpr double kMaxExpandedTerms = 1e7;

// sum_i coeffs[i] (v.x)^i expanded; v must be a unit vector.
MonomialPoly compose_direction(std::span<const double> coeffs, std::span<const double> v);

// ceil(2 beta / eps^2)
int sign_approximator_degree(double beta, double eps);

// Ramp projected on the window [-2beta, 2beta] at degree ceil(2beta/eps^2),
// composed with x -> v.x. Requires 0 < eps < 0.5 and beta >= 1.
MonomialPoly build_sign_approximator(std::span<const double> v, double theta, double eps,
                                     double beta);
// The univariate stage of build_sign_approximator.
ChebSeries sign_approximator_series(double theta, double eps, double beta);

}  // namespace tlkit
