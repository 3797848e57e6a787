#include "tlkit/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tlkit {

double odd_double_factorial_for(int a) {
  if (a < 0 || a % 2 != 0) throw std::invalid_argument("odd_double_factorial_for: need even a >= 0");
  if (a > 33) throw std::overflow_error("double factorial beyond the checked range");
  std::uint64_t r = 1;
  for (int k = a - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return static_cast<double>(r);
}

double gaussian_moment(const MultiIndex& alpha) {
  double r = 1.0;
  for (const auto& [c, p] : alpha.entries()) {
    if (p % 2 != 0) return 0.0;
    r *= odd_double_factorial_for(static_cast<int>(p));
  }
  return r;
}

double cube_moment(const MultiIndex& alpha) {
  for (const auto& [c, p] : alpha.entries())
    if (p % 2 != 0) return 0.0;
  return 1.0;
}

double truncated_gaussian_mass(double t) { return std::erf(t / std::sqrt(2.0)); }

double truncated_gaussian_moment_1d(int d, double t) {
  if (d < 0 || d > 64) throw std::invalid_argument("truncated_gaussian_moment_1d: need 0 <= d <= 64");
  if (!(t > 0.0)) throw std::invalid_argument("truncated_gaussian_moment_1d: t must be positive");
  if (d % 2 == 1) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [d, c](double x) { return std::pow(x, d) * c * std::exp(-0.5 * x * x); };
  double err = 0.0;
  // even integrand: twice the half-line integral
  const double half = gauss_kronrod<double, 61>::integrate(f, 0.0, t, 20, 1e-12, &err);
  return 2.0 * half / truncated_gaussian_mass(t);
}

double truncation_error_bound(int max_degree, double t) {
  const double D = max_degree;
  return std::pow(2.0, D) * std::pow(D, (D + 2) / 2) * std::pow(t, D) * std::exp(-t * t / 2);
}

double MomentTable::at(const MultiIndex& alpha) const {
  auto it = std::lower_bound(index.begin(), index.end(), alpha, GrlexLess{});
  if (it == index.end() || !(*it == alpha)) throw std::out_of_range("MomentTable::at: index absent");
  return value[static_cast<std::size_t>(it - index.begin())];
}

nlohmann::ordered_json MomentTable::to_json() const {
  nlohmann::ordered_json j;
  j["max_degree"] = max_degree;
  j["n"] = n;
  j["sample_count"] = sample_count;
  if (truncation) j["truncation"] = *truncation;
  else j["truncation"] = nullptr;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < index.size(); ++i) entries[index[i].key(n)] = value[i];
  j["entries"] = std::move(entries);
  return j;
}

namespace {

template <class F>
MomentTable analytic_table(std::size_t n, int max_degree, F f) {
  if (max_degree < 1) throw std::invalid_argument("moment table: degree must be positive");
  MomentTable t;
  t.max_degree = max_degree;
  t.n = n;
  t.index = grlex_indices(n, max_degree, 1);
  t.value.reserve(t.index.size());
  for (const auto& a : t.index) t.value.push_back(f(a));
  return t;
}

template <class SumFn>
MomentTable empirical_impl(const LabeledDataset& data, int max_degree, SumFn sums) {
  if (data.empty()) throw std::invalid_argument("empirical_moments: empty input");
  if (max_degree < 1) throw std::invalid_argument("empirical_moments: degree must be positive");
  for (double v : data.x)
    if (!std::isfinite(v)) throw std::invalid_argument("empirical_moments: non-finite coordinate");
  MomentTable t;
  t.max_degree = max_degree;
  t.n = data.dim;
  t.index = grlex_indices(data.dim, max_degree, 1);
  t.sample_count = data.size();
  const auto plan = make_plan(t.index);
  auto s = sums(data.x.data(), data.size(), data.dim, plan);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& v : s) v *= inv;
  t.value = std::move(s);
  return t;
}

}  // namespace

MomentTable gaussian_table(std::size_t n, int max_degree) {
  return analytic_table(n, max_degree, gaussian_moment);
}

MomentTable cube_table(std::size_t n, int max_degree) {
  return analytic_table(n, max_degree, cube_moment);
}

kernels::MonomialPlan make_plan(const std::vector<MultiIndex>& indices) {
  kernels::MonomialPlan plan;
  std::map<MultiIndex, int, GrlexLess> pos;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& a = indices[i];
    if (a.degree() == 0) {
      plan.parent.push_back(-1);
      plan.coord.push_back(kernels::MonomialPlan::kNoCoord);
    } else {
      const auto c = a.last_coord();
      const auto low = a.lowered(c);
      int parent = -1;
      if (low.degree() > 0) {
        auto it = pos.find(low);
        if (it == pos.end()) throw std::invalid_argument("make_plan: prefix index missing");
        parent = it->second;
      }
      plan.parent.push_back(parent);
      plan.coord.push_back(c);
    }
    pos.emplace(a, static_cast<int>(i));
  }
  return plan;
}

MomentTable empirical_moments(const LabeledDataset& data, int max_degree) {
  return empirical_impl(data, max_degree, kernels::monomial_sums);
}

MomentTable empirical_moments_serial(const LabeledDataset& data, int max_degree) {
  return empirical_impl(data, max_degree, kernels::monomial_sums_serial);
}

TableComparison compare_tables(const MomentTable& observed, const MomentTable& reference,
                               double tol) {
  if (observed.max_degree != reference.max_degree)
    throw std::invalid_argument("compare_tables: mismatched degree");
  if (observed.n != reference.n) throw std::invalid_argument("compare_tables: mismatched dimension");
  TableComparison r;
  for (std::size_t i = 0; i < observed.index.size(); ++i) {
    const double gap = std::abs(observed.value[i] - reference.value[i]);
    if (i == 0 || gap > r.gap) {
      r.gap = gap;
      r.worst = observed.index[i];
      r.observed = observed.value[i];
      r.reference = reference.value[i];
    }
  }
  r.pass = r.gap <= tol;
  return r;
}

double directional_moment(const MomentTable& t, std::span<const double> v, int d) {
  if (d < 1 || d > t.max_degree) throw std::invalid_argument("directional_moment: degree out of range");
  if (v.size() != t.n) throw std::invalid_argument("directional_moment: dimension mismatch");
  double lf = std::lgamma(d + 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < t.index.size(); ++i) {
    const auto& a = t.index[i];
    if (a.degree() != d) continue;
    double coef = lf;
    double vp = 1.0;
    for (const auto& [c, p] : a.entries()) {
      coef -= std::lgamma(p + 1.0);
      vp *= std::pow(v[c], static_cast<double>(p));
    }
    s += std::round(std::exp(coef)) * vp * t.value[i];
  }
  return s;
}

}  // namespace tlkit
