#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tlkit/moments.hpp"
#include "tlkit/rng.hpp"
#include "tlkit/sources.hpp"

using namespace tlkit;

namespace {

LabeledDataset rows(std::size_t dim, std::initializer_list<std::vector<double>> xs) {
  LabeledDataset d(dim);
  for (const auto& r : xs) d.push(r, 1);
  return d;
}

}  // namespace

TEST_CASE("gaussian_moment examples") {
  const std::vector<int> a4{4}, a11{1, 1}, a222{2, 2, 2};
  CHECK(gaussian_moment(MultiIndex::from_dense(a4)) == 3.0);
  CHECK(gaussian_moment(MultiIndex::from_dense(a11)) == 0.0);
  CHECK(gaussian_moment(MultiIndex::from_dense(a222)) == 1.0);
  CHECK(gaussian_moment(MultiIndex::unit(0, 6)) == 15.0);
}

TEST_CASE("double factorial guards its range") {
  CHECK(odd_double_factorial_for(0) == 1.0);
  CHECK(odd_double_factorial_for(8) == 105.0);
  CHECK(odd_double_factorial_for(32) > 1e17);
  CHECK_THROWS_AS(odd_double_factorial_for(34), std::overflow_error);
  CHECK_THROWS_AS(odd_double_factorial_for(3), std::invalid_argument);
}

TEST_CASE("cube_moment is the even-exponent indicator") {
  const std::vector<int> a{2, 4}, b{2, 1};
  CHECK(cube_moment(MultiIndex::from_dense(a)) == 1.0);
  CHECK(cube_moment(MultiIndex::from_dense(b)) == 0.0);
}

TEST_CASE("truncated_gaussian_moment_1d examples") {
  CHECK(truncated_gaussian_moment_1d(3, 2.0) == 0.0);
  CHECK(truncated_gaussian_moment_1d(2, 10.0) == doctest::Approx(1.0).epsilon(1e-6));
  const double v = truncated_gaussian_moment_1d(4, 5.0);
  CHECK(std::abs(v - 3.0) <= 1e-2);
  CHECK(std::abs(v - 3.0) <= truncation_error_bound(4, 5.0));
  CHECK(v < 3.0);
}

TEST_CASE("property: truncation at t = 12 changes no moment of degree <= 8 by more than 1e-6") {
  for (const auto& a : grlex_indices(3, 8, 1)) {
    double prod = 1.0;
    for (std::uint32_t c = 0; c < 3; ++c) prod *= truncated_gaussian_moment_1d(static_cast<int>(a.exponent(c)), 12.0);
    REQUIRE(std::abs(prod - gaussian_moment(a)) <= 1e-6);
  }
}

TEST_CASE("1-D Gaussian moments agree with quadrature to 1e-8") {
  for (int d = 0; d <= 10; ++d) {
    const double exact = d % 2 ? 0.0 : gaussian_moment(MultiIndex::unit(0, static_cast<std::uint32_t>(d)));
    CHECK(std::abs(truncated_gaussian_moment_1d(d, 40.0) - exact) <= 1e-8);
  }
}

TEST_CASE("analytic tables cover degrees 1..D and zero odd entries") {
  const auto t = gaussian_table(3, 4);
  CHECK(t.index.size() == 34);
  CHECK(t.sample_count == 0);
  for (std::size_t i = 0; i < t.index.size(); ++i) {
    REQUIRE(t.index[i].degree() >= 1);
    REQUIRE(t.index[i].degree() <= 4);
    bool odd = false;
    for (const auto& [c, p] : t.index[i].entries()) odd |= p % 2 == 1;
    if (odd) REQUIRE(t.value[i] == 0.0);
  }
  CHECK(t.at(MultiIndex::unit(2, 4)) == 3.0);
}

TEST_CASE("empirical_moments examples") {
  const auto ones = empirical_moments(rows(3, {{1.0, 1.0, 1.0}}), 3);
  for (double v : ones.value) CHECK(v == 1.0);
  const auto t = empirical_moments(rows(2, {{1.0, 0.0}, {-1.0, 0.0}}), 2);
  CHECK(t.at(MultiIndex::unit(0, 2)) == 1.0);
  CHECK(t.at(MultiIndex::unit(0)) == 0.0);
  CHECK(t.at(MultiIndex::unit(1)) == 0.0);
  CHECK(t.sample_count == 2);
  LabeledDataset empty(2);
  CHECK_THROWS_AS(empirical_moments(empty, 2), std::invalid_argument);
  CHECK_THROWS_AS(empirical_moments(rows(1, {{std::nan("")}}), 2), std::invalid_argument);
}

TEST_CASE("compare_tables examples") {
  const auto g = gaussian_table(2, 4);
  CHECK(compare_tables(g, g, 0.0).pass);

  auto h = g;
  const auto target = MultiIndex::unit(0) * MultiIndex::unit(1);
  const std::size_t at = static_cast<std::size_t>(
      std::find(h.index.begin(), h.index.end(), target) - h.index.begin());
  h.value[at] += 2 * 0.01;
  const auto c = compare_tables(h, g, 0.01);
  CHECK_FALSE(c.pass);
  CHECK(c.worst == target);
  CHECK(c.gap == doctest::Approx(0.02));

  CHECK_THROWS_AS(compare_tables(gaussian_table(2, 2), g, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compare_tables(gaussian_table(3, 4), g, 0.1), std::invalid_argument);
}

TEST_CASE("Rademacher coordinate fails at the fourth moment with gap 2") {
  const auto obs = empirical_moments(rows(1, {{1.0}, {-1.0}}), 4);
  const auto c = compare_tables(obs, gaussian_table(1, 4), 0.5);
  CHECK_FALSE(c.pass);
  CHECK(c.worst == MultiIndex::unit(0, 4));
  CHECK(c.gap == doctest::Approx(2.0));
}

TEST_CASE("property: empirical moments are permutation invariant to 1e-12") {
  Stream s(make_gaussian(3), coin_labels(), 4, "perm");
  const auto d = s.take(20000);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  Rng r(4, "shuffle");
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[r.below(i + 1)]);
  LabeledDataset p(3);
  for (auto i : order) p.push(d.row(i), d.label(i));
  const auto a = empirical_moments(d, 4), b = empirical_moments(p, 4);
  for (std::size_t i = 0; i < a.value.size(); ++i)
    REQUIRE(std::abs(a.value[i] - b.value[i]) <= 1e-12 * std::max(1.0, std::abs(a.value[i])));
}

TEST_CASE("empirical moments match the serial reference bitwise") {
  Stream s(make_gaussian(4), coin_labels(), 8, "ser");
  const auto d = s.take(10000);
  CHECK(empirical_moments(d, 4).value == empirical_moments_serial(d, 4).value);
}

TEST_CASE("property: table closeness bounds directional moment gaps") {
  const std::size_t n = 3;
  const int D = 4;
  const double tol = std::pow(static_cast<double>(n), -D);
  const auto g = gaussian_table(n, D);
  Rng r(21, "directional");
  for (int trial = 0; trial < 5; ++trial) {
    auto h = g;
    for (auto& v : h.value) v += tol * (2.0 * r.uniform() - 1.0);
    REQUIRE(compare_tables(h, g, tol).pass);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> v(n);
      double nrm = 0.0;
      for (auto& vi : v) {
        vi = r.normal();
        nrm += vi * vi;
      }
      for (auto& vi : v) vi /= std::sqrt(nrm);
      for (int d = 1; d <= D; ++d) {
        const double gap = std::abs(directional_moment(h, v, d) - directional_moment(g, v, d));
        REQUIRE(gap <= std::pow(static_cast<double>(n), d) * tol + 1e-15);
      }
    }
  }
  // exact directional moment for a unit v under N(0, I) is (d-1)!!
  const std::vector<double> v{0.6, 0.8, 0.0};
  CHECK(directional_moment(g, v, 4) == doctest::Approx(3.0));
  CHECK(directional_moment(g, v, 3) == doctest::Approx(0.0));
}

TEST_CASE("moment table JSON uses exponent-string keys") {
  const auto j = gaussian_table(2, 2).to_json();
  CHECK(j["entries"].contains("2,0"));
  CHECK(j["entries"]["2,0"].get<double>() == 1.0);
  CHECK(j["entries"]["1,1"].get<double>() == 0.0);
  CHECK(j["truncation"].is_null());
}
