#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tlkit/dataset.hpp"
#include "tlkit/sources.hpp"
#include "tlkit/verdict.hpp"

namespace tlkit {

enum class FoolDomain { gaussian, cube };

struct FoolingConfig {
  std::size_t M = 50000;
  std::size_t N = 100;
  double delta2 = 0.1;
  double delta_fool = 0.5;
  double alpha = 0.05;
  FoolDomain domain = FoolDomain::gaussian;
  std::size_t n = 20;
  std::uint64_t seed = 1;
  std::size_t trials = 20;

  nlohmann::ordered_json to_json() const;
};

// sqrt(n - 2 sqrt(n ln(2/alpha))), 0 when the radicand is negative
double band_inner_radius(std::size_t n, double alpha);
// sqrt(n + 2 sqrt(n ln(2/alpha)) + 2 ln(2/alpha))
double band_outer_radius(std::size_t n, double alpha);
// sqrt((n/2) ln(2/alpha))
double cube_band_halfwidth(std::size_t n, double alpha);

// Gaussian: |x| > b -> +1, |x| < a -> -1. Cube (weight = number of +1
// coordinates): weight < n/2 - h -> -1, weight > n/2 + h -> +1. In the band the
// label is a fair bit drawn from hash(point, seed).
struct BandLabeler {
  FoolDomain domain = FoolDomain::gaussian;
  std::size_t n = 0;
  double a = 0.0, b = 0.0;  // gaussian radii
  double h = 0.0;           // cube half-width
  std::uint64_t seed = 0;

  bool in_band(std::span<const double> x) const;
  int operator()(std::span<const double> x) const;
};

BandLabeler make_band_labeler(FoolDomain domain, std::size_t n, double alpha, std::uint64_t seed);

struct FoolingSupport {
  std::shared_ptr<LabeledDataset> points;  // labels filled in by the labeler
  BandLabeler labeler;
  double out_of_band_fraction = 0.0;
};

// S ~ D^M with D = N(0, I_n) or the uniform cube.
FoolingSupport build_support(const FoolingConfig& c);

// prod_{i<N} (1 - i/M)
double collision_probability(std::size_t N, std::size_t M);
// 1 - delta2 - N^2/M - N/sqrt(Delta M)
double tester_fooling_bound(double delta2, std::size_t N, std::size_t M, double delta_fool);
// 1.5 (phi + N/M) + 5 sqrt(ln M / M)
double learner_fooling_bound(double phi, std::size_t N, std::size_t M);

class BudgetViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Predictor = std::function<int(std::span<const double>)>;
using TesterFn = std::function<Verdict(Stream&)>;
using LearnerFn = std::function<Predictor(Stream&)>;

struct FoolingReport {
  double acceptance_empirical = 0.0;  // on the fooled stream
  double acceptance_stderr = 0.0;
  double acceptance_reference = 0.0;  // same tester on the true distribution
  double acceptance_bound = 0.0;
  double advantage_empirical = 0.0;   // mean |Pr_S[f != g] - 1/2| over trials
  double advantage_stderr = 0.0;
  double advantage_bound = 0.0;
  double phi = 0.0;                   // measured out-of-band mass of S
  double collision_exact = 0.0;
  double collision_bound = 0.0;       // 1 - N^2/M
  bool acceptance_bound_vacuous = false;
  bool advantage_bound_vacuous = false;
  FoolingConfig config;

  nlohmann::ordered_json to_json() const;
};

// Each trial gets fresh streams of at most N samples drawn uniformly from S and
// labelled by the band labeler. Trials run in parallel; results do not depend on
// the thread count.
FoolingReport run_fooling_experiment(const FoolingConfig& c, const TesterFn& tester,
                                     const LearnerFn& learner);

// Budget-scaled components: half the budget for the tail check, half for
// moments of degree <= 2 at tolerance moment_tol.
TesterFn budget_gauss_tester(std::size_t n, std::size_t budget, double eps = 0.5, double moment_tol = 1.0);
// Max-bias tester over subsets of size <= k using the whole budget.
TesterFn budget_kwise_tester(std::size_t n, std::size_t budget, int k = 2);
// L1 regression over all monomials of degree <= degree from the full budget.
// Gaussian: truncated at the desk t, +1 outside the box. Cube: multilinear basis.
LearnerFn budget_l1_learner(FoolDomain domain, std::size_t n, std::size_t budget, int degree = 2,
                            double eps = 0.5);

}  // namespace tlkit
