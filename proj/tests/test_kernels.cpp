#include <omp.h>

#include <cmath>
#include <vector>

#include "doctest.h"
#include "tlkit/kernels.hpp"
#include "tlkit/moments.hpp"
#include "tlkit/rng.hpp"
#include "tlkit/sources.hpp"

using namespace tlkit;

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

std::vector<double> sample(DistributionPtr d, std::size_t m, std::uint64_t seed) {
  Stream s(std::move(d), coin_labels(), seed, "kernels");
  return s.take(m).x;
}

}  // namespace

TEST_CASE("cheb_coefficients: parallel equals serial bitwise") {
  std::vector<double> f(3001);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sin(0.37 * static_cast<double>(j)) + 0.1;
  for (int t : {1, 3, 4}) {
    Threads th(t);
    CHECK(kernels::cheb_coefficients(f, 80) == kernels::cheb_coefficients_serial(f, 80));
  }
}

TEST_CASE("monomial sums and matrix: parallel equals serial bitwise") {
  const std::size_t n = 4, m = 3 * kernels::kSampleBlock + 17;
  const auto x = sample(make_gaussian(n), m, 1);
  const auto plan = make_plan(grlex_indices(n, 4, 0));
  for (int t : {1, 2, 4}) {
    Threads th(t);
    CHECK(kernels::monomial_sums(x.data(), m, n, plan) == kernels::monomial_sums_serial(x.data(), m, n, plan));
    CHECK(kernels::monomial_matrix(x.data(), 500, n, plan) == kernels::monomial_matrix_serial(x.data(), 500, n, plan));
  }
}

TEST_CASE("monomial plan values match direct evaluation") {
  const std::size_t n = 3;
  const auto idx = grlex_indices(n, 3, 0);
  const auto plan = make_plan(idx);
  const std::vector<double> row{0.5, -2.0, 3.0};
  const auto mat = kernels::monomial_matrix(row.data(), 1, n, plan);
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(mat[i] == doctest::Approx(idx[i].eval(row)));
}

TEST_CASE("parity biases and histograms: parallel equals serial") {
  const std::size_t n = 10, m = 5000;
  const auto x = sample(make_cube(n), m, 2);
  const auto packed = kernels::pack_signs(x.data(), m, n);
  CHECK(packed.size() == m);
  CHECK(((packed[0] & 1u) != 0) == (x[0] < 0));
  std::vector<std::uint64_t> subsets{1, 3, 7, 0x3ff, 0x155};
  std::vector<int> labels(m);
  Rng r(2, "labels");
  for (auto& y : labels) y = r.sign();
  const std::vector<std::uint32_t> flat{0, 1, 2, 3, 4, 5, 7, 8, 9};
  for (int t : {1, 4}) {
    Threads th(t);
    CHECK(kernels::parity_biases(packed, subsets) == kernels::parity_biases_serial(packed, subsets));
    CHECK(kernels::pattern_histograms(packed, labels, flat, 3) ==
          kernels::pattern_histograms_serial(packed, labels, flat, 3));
  }
  const auto h = kernels::pattern_histograms(packed, labels, flat, 3);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < 16; ++i) total += h[i];
  CHECK(total == m);
}

TEST_CASE("moment tables do not depend on the thread count") {
  const auto x = sample(make_gaussian(3), 20000, 3);
  LabeledDataset d(3);
  d.x = x;
  d.y.assign(20000, 1);
  std::vector<double> one, four;
  {
    Threads th(1);
    one = empirical_moments(d, 4).value;
  }
  {
    Threads th(4);
    four = empirical_moments(d, 4).value;
  }
  CHECK(one == four);
}
