#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlkit/dataset.hpp"
#include "tlkit/l1fit.hpp"
#include "tlkit/sources.hpp"
#include "tlkit/verdict.hpp"

namespace tlkit {

struct PairConstants {
  double C1 = 1.0, C2 = 1.0, C3 = 1.0, C4 = 1.0;
};

// Departures from the closed-form parameters. Every engaged field is listed in
// GaussPairParams::deviations.
struct GaussOverrides {
  std::optional<int> d;
  std::optional<int> delta;
  std::optional<double> moment_tol;
  std::optional<std::uint64_t> n1_cap;
  std::optional<std::uint64_t> n2_cap;
  std::optional<std::uint64_t> tail_cap;
  std::optional<std::size_t> feature_cap;
};

struct GaussPairParams {
  double eps = 0.0;
  PairConstants C;
  std::size_t n = 0;
  int d = 0;
  int delta = 0;
  double t = 0.0;
  std::uint64_t N1 = 0;
  std::uint64_t N2 = 0;
  std::uint64_t tail_samples = 0;
  double moment_tol = 0.0;
  double tail_threshold = 0.0;  // eps / (10 n)
  // closed-form values before caps
  double N1_formula = 0.0;
  double N2_formula = 0.0;
  std::optional<std::size_t> feature_cap;
  std::vector<std::string> deviations;

  nlohmann::ordered_json to_json() const;
};

int gauss_degree_formula(double eps);  // 2 floor(ln^3(1/eps) / (2 eps^4))
int gauss_delta_formula(double eps);   // floor(ln^4(1/eps) / eps^4) rounded down to even, >= 2

GaussPairParams derive_params(double eps, std::size_t n, PairConstants C = {},
                              const GaussOverrides& ov = {});

// Laptop-scale profile: C3 = 2, Delta >= 4, N1/N2 capped at 1e6, moment_tol 0.05.
struct DeskProfile {
  PairConstants C;
  GaussOverrides overrides;
};
DeskProfile gauss_desk_profile(double eps);

struct TailResult {
  bool pass = true;
  std::size_t worst_coordinate = 0;
  double worst_estimate = 0.0;
  std::size_t samples = 0;
};

// Fraction of samples with |x_j| > t per coordinate; fails iff some fraction >= threshold.
TailResult tail_check(const LabeledDataset& data, double t, double threshold);
TailResult tail_check(Stream& stream, const GaussPairParams& p);

struct Truncation {
  LabeledDataset data;
  std::size_t discarded = 0;
  double discard_fraction = 0.0;
};

// Keeps exactly the samples with every |x_j| <= t.
Truncation truncate(const LabeledDataset& data, double t);

// Tail check, then N2 fresh samples truncated at t and compared to the Gaussian
// moment table up to degree Delta at moment_tol. Labels are never read.
Verdict run_tester(Stream& stream, const GaussPairParams& p);

struct BoxedPredictor {
  FittedModel model;
  double t = 0.0;
  // model prediction inside the box, +1 outside
  int operator()(std::span<const double> x) const;
  double error_rate(const LabeledDataset& data) const;
};

struct LearnReport {
  std::size_t samples_drawn = 0;
  std::size_t samples_kept = 0;
  double discard_fraction = 0.0;
  std::size_t features = 0;
  int degree = 0;
  double empirical_l1 = 0.0;
  double empirical_01 = 0.0;
  double threshold = 0.0;
  std::size_t lp_iterations = 0;

  nlohmann::ordered_json to_json() const;
};

struct GaussLearnerResult {
  BoxedPredictor predictor;
  LearnReport report;
};

// N1 samples, truncation at t, L1 regression over all monomials of degree <= d,
// best threshold.
GaussLearnerResult run_learner(Stream& stream, const GaussPairParams& p);

struct AmplifiedVerdict {
  bool accept = false;
  std::size_t yes = 0;
  std::size_t runs = 0;
  double yes_fraction = 0.0;
  double threshold = 0.0;    // 1 - (delta2 + delta3) / 2
  double error_bound = 0.0;  // 2 exp(-2 (delta3 - delta2)^2 r / 9)
};

double amplification_bound(double delta2, double delta3, std::size_t r);

// Runs base(i) for i = 0..r-1 and accepts iff the Yes fraction reaches the threshold.
AmplifiedVerdict amplify_tester(const std::function<bool(std::size_t)>& base, std::size_t r,
                                double delta2, double delta3);

}  // namespace tlkit
