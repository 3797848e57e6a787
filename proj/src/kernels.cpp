#include "tlkit/kernels.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tlkit/summation.hpp"

namespace tlkit::kernels {

namespace {

// cos(pi i / (2m)) for i in [0, 4m); cos(k theta_j) = table[(2j+1) k mod 4m].
std::vector<double> cos_table(std::size_t m) {
  std::vector<double> t(4 * m);
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = std::cos(std::numbers::pi * static_cast<double>(i) / (2.0 * static_cast<double>(m)));
  return t;
}

double cheb_one(std::span<const double> f, const std::vector<double>& table, int k,
                std::vector<double>& buf) {
  const std::size_t m = f.size();
  const std::size_t period = 4 * m;
  const std::size_t kk = static_cast<std::size_t>(k) % period;
  std::size_t idx = kk;  // (2j+1) k mod 4m at j = 0
  const std::size_t step = (2 * kk) % period;
  for (std::size_t j = 0; j < m; ++j) {
    buf[j] = f[j] * table[idx];
    idx += step;
    if (idx >= period) idx -= period;
  }
  const double scale = (k == 0 ? 1.0 : 2.0) / static_cast<double>(m);
  return scale * pairwise_sum(buf);
}

void eval_plan(const double* row, const MonomialPlan& plan, double* out) {
  const std::size_t f = plan.size();
  for (std::size_t i = 0; i < f; ++i) {
    const double base = plan.parent[i] < 0 ? 1.0 : out[plan.parent[i]];
    out[i] = plan.coord[i] == MonomialPlan::kNoCoord ? base : base * row[plan.coord[i]];
  }
}

void block_sum(const double* x, std::size_t begin, std::size_t end, std::size_t dim,
               const MonomialPlan& plan, double* acc) {
  std::vector<double> vals(plan.size());
  for (std::size_t i = begin; i < end; ++i) {
    eval_plan(x + i * dim, plan, vals.data());
    for (std::size_t f = 0; f < vals.size(); ++f) acc[f] += vals[f];
  }
}

std::vector<double> combine_blocks(const std::vector<double>& partial, std::size_t blocks,
                                   std::size_t f) {
  std::vector<double> out(f);
  std::vector<double> col(blocks);
  for (std::size_t j = 0; j < f; ++j) {
    for (std::size_t b = 0; b < blocks; ++b) col[b] = partial[b * f + j];
    out[j] = pairwise_sum(col);
  }
  return out;
}

double bias_one(std::span<const std::uint64_t> packed, std::uint64_t s) {
  std::int64_t odd = 0;
  for (auto p : packed) odd += std::popcount(p & s) & 1;
  const auto m = static_cast<std::int64_t>(packed.size());
  return static_cast<double>(m - 2 * odd) / static_cast<double>(m);
}

void histogram_one(std::span<const std::uint64_t> packed, std::span<const int> labels,
                   const std::uint32_t* coords, int k, std::uint32_t* out) {
  for (std::size_t i = 0; i < packed.size(); ++i) {
    std::uint32_t pattern = 0;
    for (int b = 0; b < k; ++b) pattern |= static_cast<std::uint32_t>((packed[i] >> coords[b]) & 1u) << b;
    ++out[pattern * 2 + (labels[i] > 0 ? 1 : 0)];
  }
}

void check_histogram_args(std::span<const std::uint64_t> packed, std::span<const int> labels,
                          std::span<const std::uint32_t> subsets, int k) {
  if (k < 1 || k > 16) throw std::invalid_argument("pattern_histograms: k must lie in [1, 16]");
  if (packed.size() != labels.size()) throw std::invalid_argument("pattern_histograms: size mismatch");
  if (subsets.size() % static_cast<std::size_t>(k) != 0)
    throw std::invalid_argument("pattern_histograms: subset list not a multiple of k");
}

}  // namespace

std::vector<double> cheb_coefficients(std::span<const double> fvals, int d) {
  const auto table = cos_table(fvals.size());
  std::vector<double> a(static_cast<std::size_t>(d) + 1);
#pragma omp parallel
  {
    std::vector<double> buf(fvals.size());
#pragma omp for schedule(static)
    for (int k = 0; k <= d; ++k) a[static_cast<std::size_t>(k)] = cheb_one(fvals, table, k, buf);
  }
  return a;
}

std::vector<double> cheb_coefficients_serial(std::span<const double> fvals, int d) {
  const auto table = cos_table(fvals.size());
  std::vector<double> a(static_cast<std::size_t>(d) + 1);
  std::vector<double> buf(fvals.size());
  for (int k = 0; k <= d; ++k) a[static_cast<std::size_t>(k)] = cheb_one(fvals, table, k, buf);
  return a;
}

std::vector<double> monomial_sums(const double* x, std::size_t m, std::size_t dim,
                                  const MonomialPlan& plan) {
  const std::size_t f = plan.size();
  const std::size_t blocks = (m + kSampleBlock - 1) / kSampleBlock;
  std::vector<double> partial(blocks * f, 0.0);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    block_sum(x, ub * kSampleBlock, std::min(m, (ub + 1) * kSampleBlock), dim, plan,
              partial.data() + ub * f);
  }
  return combine_blocks(partial, blocks, f);
}

std::vector<double> monomial_sums_serial(const double* x, std::size_t m, std::size_t dim,
                                         const MonomialPlan& plan) {
  const std::size_t f = plan.size();
  const std::size_t blocks = (m + kSampleBlock - 1) / kSampleBlock;
  std::vector<double> partial(blocks * f, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    block_sum(x, b * kSampleBlock, std::min(m, (b + 1) * kSampleBlock), dim, plan,
              partial.data() + b * f);
  return combine_blocks(partial, blocks, f);
}

std::vector<double> monomial_matrix(const double* x, std::size_t m, std::size_t dim,
                                    const MonomialPlan& plan) {
  const std::size_t f = plan.size();
  std::vector<double> out(m * f);
  const auto mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < mm; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    eval_plan(x + ui * dim, plan, out.data() + ui * f);
  }
  return out;
}

std::vector<double> monomial_matrix_serial(const double* x, std::size_t m, std::size_t dim,
                                           const MonomialPlan& plan) {
  const std::size_t f = plan.size();
  std::vector<double> out(m * f);
  for (std::size_t i = 0; i < m; ++i) eval_plan(x + i * dim, plan, out.data() + i * f);
  return out;
}

std::vector<std::uint64_t> pack_signs(const double* x, std::size_t m, std::size_t dim) {
  if (dim > 64) throw std::invalid_argument("pack_signs: dimension above 64");
  std::vector<std::uint64_t> out(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = x[i * dim + j];
      if (v == -1.0) out[i] |= std::uint64_t{1} << j;
      else if (v != 1.0) throw std::invalid_argument("pack_signs: coordinate not in {-1, +1}");
    }
  return out;
}

std::vector<double> parity_biases(std::span<const std::uint64_t> packed,
                                  std::span<const std::uint64_t> subsets) {
  if (packed.empty()) throw std::invalid_argument("parity_biases: no samples");
  std::vector<double> out(subsets.size());
  const auto ns = static_cast<std::int64_t>(subsets.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t s = 0; s < ns; ++s)
    out[static_cast<std::size_t>(s)] = bias_one(packed, subsets[static_cast<std::size_t>(s)]);
  return out;
}

std::vector<double> parity_biases_serial(std::span<const std::uint64_t> packed,
                                         std::span<const std::uint64_t> subsets) {
  if (packed.empty()) throw std::invalid_argument("parity_biases: no samples");
  std::vector<double> out(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) out[s] = bias_one(packed, subsets[s]);
  return out;
}

std::vector<std::uint32_t> pattern_histograms(std::span<const std::uint64_t> packed,
                                              std::span<const int> labels,
                                              std::span<const std::uint32_t> subsets, int k) {
  check_histogram_args(packed, labels, subsets, k);
  const std::size_t cells = std::size_t{2} << k;
  const std::size_t ns = subsets.size() / static_cast<std::size_t>(k);
  std::vector<std::uint32_t> out(ns * cells, 0);
  const auto nsi = static_cast<std::int64_t>(ns);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t s = 0; s < nsi; ++s) {
    const auto us = static_cast<std::size_t>(s);
    histogram_one(packed, labels, subsets.data() + us * static_cast<std::size_t>(k), k,
                  out.data() + us * cells);
  }
  return out;
}

std::vector<std::uint32_t> pattern_histograms_serial(std::span<const std::uint64_t> packed,
                                                     std::span<const int> labels,
                                                     std::span<const std::uint32_t> subsets,
                                                     int k) {
  check_histogram_args(packed, labels, subsets, k);
  const std::size_t cells = std::size_t{2} << k;
  const std::size_t ns = subsets.size() / static_cast<std::size_t>(k);
  std::vector<std::uint32_t> out(ns * cells, 0);
  for (std::size_t s = 0; s < ns; ++s)
    histogram_one(packed, labels, subsets.data() + s * static_cast<std::size_t>(k), k,
                  out.data() + s * cells);
  return out;
}

}  // namespace tlkit::kernels
