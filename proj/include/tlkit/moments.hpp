#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "tlkit/dataset.hpp"
#include "tlkit/kernels.hpp"
#include "tlkit/polycore.hpp"

namespace tlkit {

// (a-1)!! for even a >= 0; even a > 33 throws std::overflow_error.
double odd_double_factorial_for(int a);

// prod_j (a_j - 1)!! over even a_j; 0 if any a_j is odd.
double gaussian_moment(const MultiIndex& alpha);
// Uniform cube: 1 if all a_j even, else 0.
double cube_moment(const MultiIndex& alpha);

// Gaussian mass of [-t, t].
double truncated_gaussian_mass(double t);
// E[x^d | |x| <= t] for x ~ N(0, 1); adaptive Gauss-Kronrod to relative 1e-10.
double truncated_gaussian_moment_1d(int d, double t);
// 2^D D^{(D+2)/2} t^D e^{-t^2/2}, the truncation error bound for moments of degree <= D.
double truncation_error_bound(int max_degree, double t);

// Moment values over all indices of degree 1..max_degree in graded order.
struct MomentTable {
  int max_degree = 0;
  std::size_t n = 0;
  std::vector<MultiIndex> index;
  std::vector<double> value;
  std::size_t sample_count = 0;  // 0 for analytic tables
  std::optional<double> truncation;

  double at(const MultiIndex& alpha) const;
  nlohmann::ordered_json to_json() const;
};

MomentTable gaussian_table(std::size_t n, int max_degree);
MomentTable cube_table(std::size_t n, int max_degree);

// Plan evaluating the given graded-order indices; every proper prefix (the index
// lowered at its last coordinate) must appear earlier in the list or be constant.
kernels::MonomialPlan make_plan(const std::vector<MultiIndex>& indices);

MomentTable empirical_moments(const LabeledDataset& data, int max_degree);
MomentTable empirical_moments_serial(const LabeledDataset& data, int max_degree);

struct TableComparison {
  bool pass = true;
  MultiIndex worst;
  double gap = 0.0;         // |observed - reference| at worst
  double observed = 0.0;
  double reference = 0.0;
};

// Throws std::invalid_argument on mismatched degree or dimension.
TableComparison compare_tables(const MomentTable& observed, const MomentTable& reference,
                               double tol);

// E[(v.x)^d] implied by the table through the multinomial expansion.
double directional_moment(const MomentTable& t, std::span<const double> v, int d);

}  // namespace tlkit
