#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tlkit/dataset.hpp"
#include "tlkit/rng.hpp"

namespace tlkit {

class Distribution {
 public:
  virtual ~Distribution() = default;
  virtual std::size_t dim() const = 0;
  virtual void sample(Rng& rng, std::span<double> out) const = 0;
  virtual std::string name() const = 0;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

DistributionPtr make_gaussian(std::size_t n, double scale = 1.0);
// x_1 uniform on {+-1}, remaining coordinates standard normal.
DistributionPtr make_rademacher_coord(std::size_t n);
DistributionPtr make_cube(std::size_t n);
// Uniform cube except x_3 = x_1 * x_2; requires n >= 3.
DistributionPtr make_parity_planted(std::size_t n);
// Cube with E[x_1] = mean, other coordinates uniform.
DistributionPtr make_biased_coord(std::size_t n, double mean);
DistributionPtr make_point_mass(std::vector<double> point);
// Uniform over the rows of a finite multiset.
DistributionPtr make_finite_support(std::shared_ptr<const LabeledDataset> support);

// Named factory used by the CLI: gaussian, cube, rademacher-coord,
// scaled-gaussian, parity-planted.
DistributionPtr make_distribution(std::string_view kind, std::size_t n, double scale = 1.5);

struct LabelModel {
  // Noise-free concept used to estimate opt on holdout; empty for pure noise.
  std::function<int(std::span<const double>)> clean;
  std::function<int(std::span<const double>, Rng&)> draw;
};

// sign(w.x - theta) with sign(0) = +1; each label flipped with probability noise.
LabelModel halfspace_labels(std::vector<double> w, double theta, double noise);
// sign(w.x - theta) flipped deterministically on the slab 0 <= (w.x - theta)/|w| < c,
// with c chosen so the slab has Gaussian mass flip_mass.
LabelModel boundary_flip_labels(std::vector<double> w, double theta, double flip_mass);
LabelModel coin_labels();
LabelModel constant_labels(int value);
LabelModel concept_labels(std::function<int(std::span<const double>)> f, double noise);

int sign_of(double v);  // +1 for v >= 0

class StreamExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Example oracle. Examples and labels come from separate generators, so the
// example sequence never depends on the label model.
class Stream {
 public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  Stream(DistributionPtr dist, LabelModel labels, std::uint64_t seed, std::string_view name,
         std::size_t budget = kUnlimited);
  // Replays a fixed dataset in order; running past its end throws StreamExhausted.
  explicit Stream(std::shared_ptr<const LabeledDataset> replay, std::size_t offset = 0,
                  std::size_t budget = kUnlimited);

  LabeledDataset take(std::size_t m);
  std::size_t consumed() const { return consumed_; }
  std::size_t dim() const;
  std::size_t remaining() const;

 private:
  DistributionPtr dist_;
  LabelModel labels_;
  std::shared_ptr<const LabeledDataset> replay_;
  std::size_t offset_ = 0;
  Rng xrng_;
  Rng yrng_;
  std::uint64_t seed_ = 0;
  std::size_t budget_;
  std::size_t consumed_ = 0;
};

}  // namespace tlkit
