#pragma once

// Data-parallel hot loops. Each OpenMP kernel has a serial twin with the same
// reduction order; results are bitwise identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tlkit::kernels {

// a_k = (2 - [k == 0]) / m * sum_j f_j cos(k theta_j), theta_j = (2j+1) pi / (2m),
// where m = fvals.size(). Parallel over k.
std::vector<double> cheb_coefficients(std::span<const double> fvals, int d);
std::vector<double> cheb_coefficients_serial(std::span<const double> fvals, int d);

// Straight-line program for monomial values: value[i] = base * x[coord[i]] where
// base is value[parent[i]], or 1 when parent[i] < 0. coord[i] == kNoCoord skips
// the multiplication (the constant monomial).
struct MonomialPlan {
  static constexpr std::uint32_t kNoCoord = 0xffffffffu;
  std::vector<int> parent;
  std::vector<std::uint32_t> coord;
  std::size_t size() const { return parent.size(); }
};

inline constexpr std::size_t kSampleBlock = 4096;

// Per-monomial sums over m row-major samples. Blocks of kSampleBlock rows are
// summed sequentially, then block partials are combined pairwise.
std::vector<double> monomial_sums(const double* x, std::size_t m, std::size_t dim,
                                  const MonomialPlan& plan);
std::vector<double> monomial_sums_serial(const double* x, std::size_t m, std::size_t dim,
                                         const MonomialPlan& plan);

// Row-major m x plan.size() matrix of monomial values.
std::vector<double> monomial_matrix(const double* x, std::size_t m, std::size_t dim,
                                    const MonomialPlan& plan);
std::vector<double> monomial_matrix_serial(const double* x, std::size_t m, std::size_t dim,
                                           const MonomialPlan& plan);

// Bit i of a packed sample is set iff coordinate i equals -1. dim <= 64.
std::vector<std::uint64_t> pack_signs(const double* x, std::size_t m, std::size_t dim);

// E[prod_{i in S} x_i] for each subset mask S.
std::vector<double> parity_biases(std::span<const std::uint64_t> packed,
                                  std::span<const std::uint64_t> subsets);
std::vector<double> parity_biases_serial(std::span<const std::uint64_t> packed,
                                         std::span<const std::uint64_t> subsets);

// For each k-subset (coordinates listed in subsets[s*k .. s*k+k)), counts of
// (pattern, label) where pattern bit i is set iff coordinate subsets[s*k+i] is -1.
// Layout: out[(s * 2^k + pattern) * 2 + (label > 0)].
std::vector<std::uint32_t> pattern_histograms(std::span<const std::uint64_t> packed,
                                              std::span<const int> labels,
                                              std::span<const std::uint32_t> subsets, int k);
std::vector<std::uint32_t> pattern_histograms_serial(std::span<const std::uint64_t> packed,
                                                     std::span<const int> labels,
                                                     std::span<const std::uint32_t> subsets,
                                                     int k);

}  // namespace tlkit::kernels
