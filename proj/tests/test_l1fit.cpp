#include <cmath>
#include <vector>

#include "doctest.h"
#include "l1_oracle.hpp"
#include "tlkit/l1fit.hpp"
#include "tlkit/rng.hpp"
#include "tlkit/simplex.hpp"
#include "tlkit/sources.hpp"

using namespace tlkit;

namespace {

LabeledDataset line(std::initializer_list<std::pair<double, int>> pts) {
  LabeledDataset d(1);
  for (const auto& [x, y] : pts) {
    const std::vector<double> r{x};
    d.push(r, y);
  }
  return d;
}

FittedModel fit(const LabeledDataset& d, std::vector<MultiIndex> f, int degree) {
  return fit_l1({std::move(f), &d, degree});
}

FittedModel with_values(const std::vector<double>& p, const std::vector<int>& y) {
  // P = x_1, so the sample values are the P-values
  LabeledDataset d(1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::vector<double> r{p[i]};
    d.push(r, y[i]);
  }
  FittedModel m;
  m.dim = 1;
  m.poly.add(MultiIndex::unit(0), 1.0);
  return best_threshold(m, d);
}

}  // namespace

TEST_CASE("fit_l1 examples") {
  const auto c = fit(line({{0.0, 1}, {1.0, 1}}), {MultiIndex{}}, 0);
  CHECK(c.poly.coeff(MultiIndex{}) == 1.0);
  CHECK(c.empirical_l1 == 0.0);

  const auto l = fit(line({{0.5, 1}, {-0.5, -1}, {0.5, 1}}), {MultiIndex{}, MultiIndex::unit(0)}, 1);
  CHECK(std::abs(l.poly.coeff(MultiIndex{})) < 1e-9);
  CHECK(l.poly.coeff(MultiIndex::unit(0)) == doctest::Approx(2.0));
  CHECK(l.empirical_l1 == doctest::Approx(0.0).epsilon(1e-9));

  const auto med = fit(line({{0.0, -1}, {0.0, -1}, {0.0, 1}}), {MultiIndex{}}, 0);
  CHECK(med.poly.coeff(MultiIndex{}) == doctest::Approx(-1.0));
  CHECK(med.empirical_l1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fit_l1 argument checks") {
  const auto d = line({{0.0, 1}});
  CHECK_THROWS_AS(fit_l1({{MultiIndex{}}, nullptr, 0}), std::invalid_argument);
  CHECK_THROWS_AS(fit(d, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(fit(d, {MultiIndex::unit(0, 2)}, 1), std::invalid_argument);
  CHECK_THROWS_AS(fit(d, {MultiIndex::unit(1)}, 1), std::invalid_argument);
}

TEST_CASE("best_threshold examples") {
  auto m = with_values({-1.0, -0.5, 0.5, 1.0}, {-1, -1, 1, 1});
  CHECK(m.empirical_01 == 0.0);
  CHECK(*m.threshold > -0.5);
  CHECK(*m.threshold < 0.5);
  m = with_values({1.0, -0.5, -1.0, 0.5}, {1, -1, -1, 1});
  CHECK(m.empirical_01 == 0.0);
  CHECK(*m.threshold > -0.5);
  CHECK(*m.threshold <= 0.5);

  std::vector<double> p(10, 0.3);
  std::vector<int> y{1, 1, 1, 1, 1, 1, -1, -1, -1, -1};
  m = with_values(p, y);
  CHECK(m.empirical_01 == doctest::Approx(0.4));
  const std::vector<double> x{0.3};
  CHECK(predict(m, x) == 1);

  m = with_values({0.1, 0.2}, {-1, -1});
  CHECK(m.empirical_01 == 0.0);
  CHECK(*m.threshold > 0.2);
}

TEST_CASE("predict uses P >= threshold") {
  FittedModel m;
  m.dim = 2;
  m.poly.add(MultiIndex::unit(0), 1.0);
  CHECK_THROWS_AS(predict(m, std::vector<double>{1.0, 0.0}), std::logic_error);
  m.threshold = 0.0;
  const std::vector<double> a{2.0, 5.0}, b{0.0, -3.0}, c{-0.1, 0.0};
  CHECK(predict(m, a) == 1);
  CHECK(predict(m, b) == 1);
  CHECK(predict(m, c) == -1);
}

TEST_CASE("property: fit_l1 matches the brute-force minimizer on 200 small instances") {
  Rng r(31, "lad-oracle");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + r.below(6);
    const bool two = r.below(2) == 1;
    std::vector<MultiIndex> feats{MultiIndex{}};
    if (two) feats.push_back(trial % 4 < 2 ? MultiIndex::unit(0) : MultiIndex::unit(0, 2));
    else if (trial % 3 == 0) feats[0] = MultiIndex::unit(0);
    LabeledDataset d(1);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> x{std::round(4.0 * r.normal()) / 4.0};
      d.push(x, r.sign());
    }
    const auto model = fit(d, feats, 2);
    const auto A = feature_matrix(feats, d);
    const std::vector<double> y(d.y.begin(), d.y.end());
    const double brute = oracle::lad_bruteforce(A, m, feats.size(), y);
    REQUIRE(std::abs(model.empirical_l1 * static_cast<double>(m) - brute) <= 1e-5);
  }
}

TEST_CASE("property: solve_lad matches brute force on real-valued responses") {
  Rng r(32, "lad-real");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + r.below(6), f = 1 + r.below(2);
    std::vector<double> A(m * f), y(m);
    for (auto& a : A) a = r.normal();
    for (auto& v : y) v = 3.0 * r.normal();
    const auto sol = solve_lad(A, m, f, y);
    REQUIRE(std::abs(sol.objective - oracle::lad_bruteforce(A, m, f, y)) <= 1e-5);
    REQUIRE(std::abs(sol.objective - oracle::lad_objective(A, m, f, y, sol.coef)) <= 1e-9);
    REQUIRE(std::abs(sol.objective - sol.dual_objective) <= 1e-7 * std::max(1.0, sol.objective));
  }
}

TEST_CASE("solve_lad on a larger degenerate problem reaches strong duality") {
  Rng r(33, "lad-big");
  const std::size_t m = 400, f = 10;
  std::vector<double> A(m * f), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::round(r.normal() * 2.0) / 2.0;  // repeated rows force degeneracy
    double p = 1.0;
    for (std::size_t j = 0; j < f; ++j, p *= x) A[i * f + j] = p;
    y[i] = r.sign();
  }
  const auto sol = solve_lad(A, m, f, y);
  CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-6 * sol.objective);
  CHECK(std::abs(sol.objective - oracle::lad_objective(A, m, f, y, sol.coef)) <= 1e-6 * sol.objective);
}

TEST_CASE("property: enlarging the basis never increases empirical L1") {
  Stream s(make_gaussian(2), halfspace_labels({1.0, -0.5}, 0.2, 0.15), 34, "nested");
  const auto d = s.take(300);
  const auto all = grlex_indices(2, 3);
  double prev = 1e300;
  for (std::size_t k = 1; k <= all.size(); ++k) {
    std::vector<MultiIndex> f(all.begin(), all.begin() + static_cast<long>(k));
    const double l1 = fit(d, f, 3).empirical_l1;
    REQUIRE(l1 <= prev + 1e-9);
    prev = l1;
  }
}

TEST_CASE("sample-complexity smoke: 0/1 error within opt + 2 eps") {
  // On the cube x_1 itself is a basis element matching the clean concept.
  const double eps = 0.1, noise = 0.1;
  const auto feats = grlex_indices(3, 2);
  const auto m = static_cast<std::size_t>(std::ceil(feats.size() / (eps * eps) * std::log(10.0)));
  Stream train(make_cube(3), halfspace_labels({1.0, 0.0, 0.0}, 0.0, noise), 35, "train");
  Stream hold(make_cube(3), halfspace_labels({1.0, 0.0, 0.0}, 0.0, noise), 35, "holdout");
  const auto d = train.take(m);
  const auto model = best_threshold(fit(d, feats, 2), d);
  const auto h = hold.take(20000);
  const double err = error_rate(model, h);
  const double sigma = std::sqrt(noise * (1 - noise) / 20000.0);
  CHECK(err <= noise + 2 * eps + 3 * sigma);
}

TEST_CASE("fitted model JSON lists terms and threshold") {
  auto m = with_values({-1.0, 1.0}, {-1, 1});
  const auto j = m.to_json();
  CHECK(j["terms"].size() == 1);
  CHECK(j["terms"][0]["index"] == "1");
  CHECK(j["threshold"].is_number());
}
