// Serial reference vs OpenMP kernel on the same inputs.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tlkit/kernels.hpp"
#include "tlkit/moments.hpp"
#include "tlkit/sources.hpp"

using namespace tlkit;

namespace {

std::vector<double> gaussian_rows(std::size_t n, std::size_t m) {
  Stream s(make_gaussian(n), coin_labels(), 1, "bench");
  return s.take(m).x;
}

LabeledDataset cube_rows(std::size_t n, std::size_t m) {
  Stream s(make_cube(n), coin_labels(), 2, "bench");
  return s.take(m);
}

std::vector<double> ramp_samples(std::size_t m) {
  std::vector<double> f(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = 2.0 * std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(m)));
    f[j] = std::clamp(x / 0.2, -1.0, 1.0);
  }
  return f;
}

template <bool Parallel>
void BM_cheb(benchmark::State& st) {
  const auto f = ramp_samples(1 << 16);
  const int d = static_cast<int>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::cheb_coefficients(f, d) : kernels::cheb_coefficients_serial(f, d));
}

template <bool Parallel>
void BM_monomial_sums(benchmark::State& st) {
  const std::size_t n = 3, m = static_cast<std::size_t>(st.range(0));
  const auto x = gaussian_rows(n, m);
  const auto plan = make_plan(grlex_indices(n, 4, 1));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::monomial_sums(x.data(), m, n, plan)
                                      : kernels::monomial_sums_serial(x.data(), m, n, plan));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * m));
}

template <bool Parallel>
void BM_monomial_matrix(benchmark::State& st) {
  const std::size_t n = 3, m = static_cast<std::size_t>(st.range(0));
  const auto x = gaussian_rows(n, m);
  const auto plan = make_plan(grlex_indices(n, 4, 0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::monomial_matrix(x.data(), m, n, plan)
                                      : kernels::monomial_matrix_serial(x.data(), m, n, plan));
}

template <bool Parallel>
void BM_parity_biases(benchmark::State& st) {
  const auto d = cube_rows(16, static_cast<std::size_t>(st.range(0)));
  const auto packed = kernels::pack_signs(d.x.data(), d.size(), d.dim);
  std::vector<std::uint64_t> subsets;
  for (std::uint64_t s = 1; s < (1u << 16); s += 97) subsets.push_back(s);
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::parity_biases(packed, subsets)
                                      : kernels::parity_biases_serial(packed, subsets));
}

template <bool Parallel>
void BM_pattern_histograms(benchmark::State& st) {
  const auto d = cube_rows(12, static_cast<std::size_t>(st.range(0)));
  const auto packed = kernels::pack_signs(d.x.data(), d.size(), d.dim);
  std::vector<std::uint32_t> flat;
  for (std::uint32_t a = 0; a < 12; ++a)
    for (std::uint32_t b = a + 1; b < 12; ++b)
      for (std::uint32_t c = b + 1; c < 12; ++c) flat.insert(flat.end(), {a, b, c});
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? kernels::pattern_histograms(packed, d.y, flat, 3)
                                      : kernels::pattern_histograms_serial(packed, d.y, flat, 3));
}

}  // namespace

BENCHMARK(BM_cheb<false>)->Arg(40)->Arg(80)->Name("cheb_coefficients/serial");
BENCHMARK(BM_cheb<true>)->Arg(40)->Arg(80)->Name("cheb_coefficients/omp");
BENCHMARK(BM_monomial_sums<false>)->Arg(1 << 16)->Arg(1 << 20)->Name("monomial_sums/serial");
BENCHMARK(BM_monomial_sums<true>)->Arg(1 << 16)->Arg(1 << 20)->Name("monomial_sums/omp");
BENCHMARK(BM_monomial_matrix<false>)->Arg(1 << 14)->Name("monomial_matrix/serial");
BENCHMARK(BM_monomial_matrix<true>)->Arg(1 << 14)->Name("monomial_matrix/omp");
BENCHMARK(BM_parity_biases<false>)->Arg(1 << 14)->Name("parity_biases/serial");
BENCHMARK(BM_parity_biases<true>)->Arg(1 << 14)->Name("parity_biases/omp");
BENCHMARK(BM_pattern_histograms<false>)->Arg(1 << 16)->Name("pattern_histograms/serial");
BENCHMARK(BM_pattern_histograms<true>)->Arg(1 << 16)->Name("pattern_histograms/omp");

BENCHMARK_MAIN();
