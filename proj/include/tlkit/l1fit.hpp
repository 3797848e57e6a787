#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "tlkit/dataset.hpp"
#include "tlkit/polycore.hpp"

namespace tlkit {

inline constexpr std::size_t kMaxFeatures = 50000;

struct RegressionProblem {
  std::vector<MultiIndex> features;
  const LabeledDataset* samples = nullptr;
  int degree = 0;
};

struct FittedModel {
  std::size_t dim = 0;
  MonomialPoly poly;
  std::optional<double> threshold;
  double empirical_l1 = 0.0;  // mean |P(x_i) - y_i|
  double empirical_01 = 0.0;  // set by best_threshold
  std::size_t lp_iterations = 0;

  nlohmann::ordered_json to_json() const;
};

// Feature values, row-major samples x features.
std::vector<double> feature_matrix(const std::vector<MultiIndex>& features,
                                   const LabeledDataset& data);

// L1 regression over the span of the features. If every label is equal and the
// constant monomial is a feature, returns that constant without solving.
FittedModel fit_l1(const RegressionProblem& problem);

// Threshold minimizing the 0/1 error of [P(x) >= tau] over {P(x_i)}, midpoints of
// consecutive distinct values, and sentinels min-1 and max+1. Ties go to the
// smaller tau.
FittedModel best_threshold(FittedModel model, const LabeledDataset& samples);

// +1 iff P(x) >= threshold
int predict(const FittedModel& model, std::span<const double> x);
double error_rate(const FittedModel& model, const LabeledDataset& data);

}  // namespace tlkit
