#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tlkit {

// Row-major examples in R^dim (or {+-1}^dim stored as doubles) with +-1 labels.
struct LabeledDataset {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<int> y;
  std::uint64_t seed = 0;

  LabeledDataset() = default;
  explicit LabeledDataset(std::size_t d) : dim(d) {}

  std::size_t size() const { return y.size(); }
  bool empty() const { return y.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * dim, dim};
  }
  int label(std::size_t i) const { return y[i]; }

  void reserve(std::size_t m);
  void push(std::span<const double> r, int label);
  void append(const LabeledDataset& other);
  LabeledDataset slice(std::size_t begin, std::size_t end) const;
};

}  // namespace tlkit
