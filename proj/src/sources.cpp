#include "tlkit/sources.hpp"

#include <cmath>
#include <numeric>

namespace tlkit {

namespace {

class Gaussian final : public Distribution {
 public:
  Gaussian(std::size_t n, double scale) : n_(n), scale_(scale) {}
  std::size_t dim() const override { return n_; }
  void sample(Rng& rng, std::span<double> out) const override {
    for (auto& v : out) v = scale_ * rng.normal();
  }
  std::string name() const override {
    return scale_ == 1.0 ? "gaussian" : "scaled-gaussian";
  }

 private:
  std::size_t n_;
  double scale_;
};

class RademacherCoord final : public Distribution {
 public:
  explicit RademacherCoord(std::size_t n) : n_(n) {}
  std::size_t dim() const override { return n_; }
  void sample(Rng& rng, std::span<double> out) const override {
    out[0] = rng.sign();
    for (std::size_t j = 1; j < n_; ++j) out[j] = rng.normal();
  }
  std::string name() const override { return "rademacher-coord"; }

 private:
  std::size_t n_;
};

class Cube final : public Distribution {
 public:
  Cube(std::size_t n, double mean1, bool parity) : n_(n), mean1_(mean1), parity_(parity) {}
  std::size_t dim() const override { return n_; }
  void sample(Rng& rng, std::span<double> out) const override {
    for (auto& v : out) v = rng.sign();
    if (mean1_ != 0.0) out[0] = rng.uniform() < 0.5 * (1.0 + mean1_) ? 1.0 : -1.0;
    if (parity_) out[2] = out[0] * out[1];
  }
  std::string name() const override {
    if (parity_) return "parity-planted";
    return mean1_ == 0.0 ? "cube" : "biased-coord";
  }

 private:
  std::size_t n_;
  double mean1_;
  bool parity_;
};

class PointMass final : public Distribution {
 public:
  explicit PointMass(std::vector<double> p) : p_(std::move(p)) {}
  std::size_t dim() const override { return p_.size(); }
  void sample(Rng&, std::span<double> out) const override {
    std::copy(p_.begin(), p_.end(), out.begin());
  }
  std::string name() const override { return "point-mass"; }

 private:
  std::vector<double> p_;
};

class FiniteSupport final : public Distribution {
 public:
  explicit FiniteSupport(std::shared_ptr<const LabeledDataset> s) : s_(std::move(s)) {
    if (!s_ || s_->empty()) throw std::invalid_argument("finite support must be non-empty");
  }
  std::size_t dim() const override { return s_->dim; }
  void sample(Rng& rng, std::span<double> out) const override {
    const auto r = s_->row(rng.below(s_->size()));
    std::copy(r.begin(), r.end(), out.begin());
  }
  std::string name() const override { return "finite-support"; }

 private:
  std::shared_ptr<const LabeledDataset> s_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

DistributionPtr make_gaussian(std::size_t n, double scale) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  return std::make_shared<Gaussian>(n, scale);
}

DistributionPtr make_rademacher_coord(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  return std::make_shared<RademacherCoord>(n);
}

DistributionPtr make_cube(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  return std::make_shared<Cube>(n, 0.0, false);
}

DistributionPtr make_parity_planted(std::size_t n) {
  if (n < 3) throw std::invalid_argument("parity-planted needs n >= 3");
  return std::make_shared<Cube>(n, 0.0, true);
}

DistributionPtr make_biased_coord(std::size_t n, double mean) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (std::abs(mean) > 1.0) throw std::invalid_argument("mean must lie in [-1, 1]");
  return std::make_shared<Cube>(n, mean, false);
}

DistributionPtr make_point_mass(std::vector<double> point) {
  if (point.empty()) throw std::invalid_argument("dimension must be positive");
  return std::make_shared<PointMass>(std::move(point));
}

DistributionPtr make_finite_support(std::shared_ptr<const LabeledDataset> support) {
  return std::make_shared<FiniteSupport>(std::move(support));
}

DistributionPtr make_distribution(std::string_view kind, std::size_t n, double scale) {
  if (kind == "gaussian") return make_gaussian(n);
  if (kind == "scaled-gaussian") return make_gaussian(n, scale);
  if (kind == "rademacher-coord") return make_rademacher_coord(n);
  if (kind == "cube") return make_cube(n);
  if (kind == "parity-planted") return make_parity_planted(n);
  throw std::invalid_argument("unknown distribution: " + std::string(kind));
}

LabelModel halfspace_labels(std::vector<double> w, double theta, double noise) {
  if (noise < 0.0 || noise > 0.5) throw std::invalid_argument("noise must lie in [0, 0.5]");
  auto clean = [w, theta](std::span<const double> x) { return sign_of(dot(w, x) - theta); };
  return concept_labels(clean, noise);
}

LabelModel boundary_flip_labels(std::vector<double> w, double theta, double flip_mass) {
  const double norm = std::sqrt(dot(w, w));
  if (norm == 0.0) throw std::invalid_argument("weight vector must be nonzero");
  // margin (w.x - theta)/|w| ~ N(-theta/|w|, 1); flip on [0, c)
  const double mu = -theta / norm;
  const double base = normal_cdf(-mu);
  if (flip_mass <= 0.0 || flip_mass >= 1.0 - base)
    throw std::invalid_argument("flip mass not attainable on the positive side");
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid - mu) - base < flip_mass ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  LabelModel m;
  m.clean = [w, theta](std::span<const double> x) { return sign_of(dot(w, x) - theta); };
  m.draw = [w, theta, norm, c](std::span<const double> x, Rng&) {
    const double margin = (dot(w, x) - theta) / norm;
    const int s = sign_of(margin);
    return (margin >= 0.0 && margin < c) ? -s : s;
  };
  return m;
}

LabelModel coin_labels() {
  LabelModel m;
  m.draw = [](std::span<const double>, Rng& rng) { return rng.sign(); };
  return m;
}

LabelModel constant_labels(int value) {
  const int v = sign_of(value);
  return concept_labels([v](std::span<const double>) { return v; }, 0.0);
}

LabelModel concept_labels(std::function<int(std::span<const double>)> f, double noise) {
  LabelModel m;
  m.clean = f;
  m.draw = [f, noise](std::span<const double> x, Rng& rng) {
    const int s = f(x);
    if (noise > 0.0 && rng.uniform() < noise) return -s;
    return s;
  };
  return m;
}

Stream::Stream(DistributionPtr dist, LabelModel labels, std::uint64_t seed, std::string_view name,
               std::size_t budget)
    : dist_(std::move(dist)),
      labels_(std::move(labels)),
      xrng_(seed, std::string(name) + "/x"),
      yrng_(seed, std::string(name) + "/y"),
      seed_(seed),
      budget_(budget) {
  if (!dist_) throw std::invalid_argument("Stream: null distribution");
  if (!labels_.draw) labels_ = constant_labels(1);
}

Stream::Stream(std::shared_ptr<const LabeledDataset> replay, std::size_t offset, std::size_t budget)
    : replay_(std::move(replay)), offset_(offset), xrng_(0, "replay"), yrng_(0, "replay"), budget_(budget) {
  if (!replay_) throw std::invalid_argument("Stream: null dataset");
  seed_ = replay_->seed;
}

std::size_t Stream::dim() const { return replay_ ? replay_->dim : dist_->dim(); }

std::size_t Stream::remaining() const {
  std::size_t r = budget_ - consumed_;
  if (replay_) r = std::min(r, replay_->size() - std::min(replay_->size(), offset_ + consumed_));
  return r;
}

LabeledDataset Stream::take(std::size_t m) {
  if (m > budget_ - consumed_)
    throw StreamExhausted("sample budget exceeded: requested " + std::to_string(m) + ", remaining " +
                          std::to_string(budget_ - consumed_));
  if (replay_) {
    const std::size_t begin = offset_ + consumed_;
    if (begin + m > replay_->size())
      throw StreamExhausted("dataset exhausted: requested " + std::to_string(m) + " rows at offset " +
                            std::to_string(begin) + " of " + std::to_string(replay_->size()));
    consumed_ += m;
    return replay_->slice(begin, begin + m);
  }
  LabeledDataset out(dist_->dim());
  out.seed = seed_;
  out.x.resize(m * out.dim);
  out.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::span<double> r(out.x.data() + i * out.dim, out.dim);
    dist_->sample(xrng_, r);
    out.y[i] = labels_.draw(r, yrng_);
  }
  consumed_ += m;
  return out;
}

}  // namespace tlkit
