#include "tlkit/dataset.hpp"

#include <stdexcept>

namespace tlkit {

void LabeledDataset::reserve(std::size_t m) {
  x.reserve(m * dim);
  y.reserve(m);
}

void LabeledDataset::push(std::span<const double> r, int label) {
  if (r.size() != dim) throw std::invalid_argument("LabeledDataset::push: dimension mismatch");
  if (label != 1 && label != -1) throw std::invalid_argument("LabeledDataset::push: label must be +-1");
  x.insert(x.end(), r.begin(), r.end());
  y.push_back(label);
}

void LabeledDataset::append(const LabeledDataset& other) {
  if (other.empty()) return;
  if (other.dim != dim) throw std::invalid_argument("LabeledDataset::append: dimension mismatch");
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
}

LabeledDataset LabeledDataset::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw std::out_of_range("LabeledDataset::slice");
  LabeledDataset out(dim);
  out.seed = seed;
  out.x.assign(x.begin() + begin * dim, x.begin() + end * dim);
  out.y.assign(y.begin() + begin, y.begin() + end);
  return out;
}

}  // namespace tlkit
