#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlkit/dataset.hpp"
#include "tlkit/gauss_pair.hpp"
#include "tlkit/l1fit.hpp"
#include "tlkit/sources.hpp"
#include "tlkit/verdict.hpp"

namespace tlkit {

int cube_k_formula(double eps);       // ceil(ln^4(1/eps) / (50 eps^4)), >= 1
int cube_degree_formula(double eps);  // ceil(20 ln^2(1/eps) / eps^4)
int dl_k_formula(double eps);         // ceil(log2(1/eps)), >= 1

struct CubeOverrides {
  std::optional<int> k;
  std::optional<int> degree;
  std::optional<double> tv_tol;
  std::optional<std::uint64_t> learner_samples;
};

struct CubeParams {
  double eps = 0.0;
  std::size_t n = 0;
  int k = 0;
  int degree = 0;  // multilinear degree; values above n are clipped to n
  double tv_tol = 0.0;
  std::uint64_t learner_samples = 0;
  std::vector<std::string> deviations;

  nlohmann::ordered_json to_json() const;
};

// Halfspace parameters. tv_tol defaults to eps/4; learner_samples defaults to
// ceil(10 F / eps^2) for F multilinear features.
CubeParams derive_cube_params(double eps, std::size_t n, const CubeOverrides& ov = {});
// Decision-list parameters: k = ceil(log2(1/eps)), tv_tol = eps/4.
CubeParams derive_dl_params(double eps, std::size_t n, const CubeOverrides& ov = {});

// Nonempty subsets of size <= k as bit masks: by size, colex within a size.
std::vector<std::uint64_t> subsets_up_to(std::size_t n, int k);

struct BiasTable {
  std::size_t n = 0;
  int k = 0;
  std::vector<std::uint64_t> subsets;
  std::vector<double> bias;
  std::size_t sample_count = 0;
};

BiasTable kwise_bias_table(const LabeledDataset& data, int k);
BiasTable kwise_bias_table_serial(const LabeledDataset& data, int k);

// ceil(2 ln(20 K) / tv_tol^2) for K subsets
std::uint64_t kwise_sample_count(std::size_t subsets, double tv_tol);
// sqrt(2 ln(20 K) / m): uniform data exceeds it w.p. <= 0.1 over all K subsets,
// and a subset with |bias| >= 2 tau stays below it w.p. <= 0.1 / K.
double kwise_threshold(std::size_t subsets, std::uint64_t m);

// Max-bias tester; labels are never read.
Verdict run_kwise_tester(Stream& stream, const CubeParams& p);

struct CubeLearnerResult {
  FittedModel model;
  LearnReport report;
};

// L1 regression over multilinear monomials of degree <= p.degree, then best threshold.
CubeLearnerResult run_cube_halfspace_learner(Stream& stream, const CubeParams& p,
                                             std::size_t feature_cap = kMaxFeatures);

struct DecisionList {
  std::vector<std::uint32_t> order;  // coordinates, 0-based
  std::vector<int> bits;
  std::vector<int> values;
  int default_output = -1;

  nlohmann::ordered_json to_json() const;
  static DecisionList from_json(const nlohmann::json& j);
};

int eval_decision_list(const DecisionList& dl, std::span<const double> x);

struct DecisionListFit {
  DecisionList list;
  double empirical_error = 0.0;
  std::size_t samples = 0;
  std::size_t candidates = 0;

  nlohmann::ordered_json to_json() const;
};

std::uint64_t dl_sample_count(double eps, std::size_t n);

// Exhaustive search over length-k lists on k-subsets. Order: subsets colex, then
// orderings lexicographic, then bit masks, then value masks (mask bit i set means
// +1 at position i). The first list with minimal empirical error wins.
DecisionListFit fit_decision_list(const LabeledDataset& data, int k);
// Reference: evaluates every candidate list directly on every sample.
DecisionListFit fit_decision_list_serial(const LabeledDataset& data, int k);

DecisionListFit run_decision_list_learner(Stream& stream, double eps,
                                          std::optional<std::uint64_t> sample_cap = {});
Verdict run_decision_list_tester(Stream& stream, double eps);

// Exactly k-wise uniform families as explicit supports (uniform weight per row).
// Odd-weight columns of GF(2)^r: n = 2^(r-1) coordinates, 3-wise uniform, 2^r rows.
LabeledDataset kwise_family_odd_weight(int r);
// Columns (1, a, a^3) over GF(16): n = 15, 5-wise uniform, 512 rows.
LabeledDataset kwise_family_bch5();

}  // namespace tlkit
