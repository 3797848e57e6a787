#include "tlkit/fooling.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <vector>

#include "tlkit/cube_pair.hpp"
#include "tlkit/gauss_pair.hpp"

namespace tlkit {

nlohmann::ordered_json FoolingConfig::to_json() const {
  nlohmann::ordered_json j;
  j["domain"] = domain == FoolDomain::gaussian ? "gaussian" : "cube";
  j["n"] = n;
  j["M"] = M;
  j["N"] = N;
  j["delta2"] = delta2;
  j["delta_fool"] = delta_fool;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["trials"] = trials;
  return j;
}

double band_inner_radius(std::size_t n, double alpha) {
  const double dn = static_cast<double>(n);
  const double r = dn - 2.0 * std::sqrt(dn * std::log(2.0 / alpha));
  return r > 0.0 ? std::sqrt(r) : 0.0;
}

double band_outer_radius(std::size_t n, double alpha) {
  const double dn = static_cast<double>(n);
  const double l = std::log(2.0 / alpha);
  return std::sqrt(dn + 2.0 * std::sqrt(dn * l) + 2.0 * l);
}

double cube_band_halfwidth(std::size_t n, double alpha) {
  return std::sqrt(static_cast<double>(n) / 2.0 * std::log(2.0 / alpha));
}

bool BandLabeler::in_band(std::span<const double> x) const {
  if (domain == FoolDomain::gaussian) {
    double s = 0.0;
    for (double v : x) s += v * v;
    const double r = std::sqrt(s);
    return r >= a && r <= b;
  }
  double w = 0.0;
  for (double v : x) w += v > 0.0;
  const double mid = static_cast<double>(n) / 2.0;
  return w >= mid - h && w <= mid + h;
}

int BandLabeler::operator()(std::span<const double> x) const {
  if (in_band(x)) return (hash_point(x, seed) >> 63) ? 1 : -1;
  if (domain == FoolDomain::gaussian) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s) > b ? 1 : -1;
  }
  double w = 0.0;
  for (double v : x) w += v > 0.0;
  return w > static_cast<double>(n) / 2.0 ? 1 : -1;
}

BandLabeler make_band_labeler(FoolDomain domain, std::size_t n, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 0.125)) throw std::invalid_argument("alpha must lie in (0, 1/8)");
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  BandLabeler L;
  L.domain = domain;
  L.n = n;
  L.seed = mix64(seed ^ fnv1a("fool/labels"));
  if (domain == FoolDomain::gaussian) {
    L.a = band_inner_radius(n, alpha);
    L.b = band_outer_radius(n, alpha);
  } else {
    L.h = cube_band_halfwidth(n, alpha);
  }
  return L;
}

namespace {

void validate(const FoolingConfig& c) {
  if (c.M < 1 || c.N < 1) throw std::invalid_argument("fooling: M and N must be positive");
  if (c.N > c.M) throw std::invalid_argument("fooling: N must not exceed M");
  if (!(c.delta2 > 0.0 && c.delta2 < 1.0)) throw std::invalid_argument("fooling: delta2 must lie in (0, 1)");
  if (!(c.delta_fool > 0.0 && c.delta_fool < 1.0)) throw std::invalid_argument("fooling: delta_fool must lie in (0, 1)");
  if (!(c.alpha > 0.0 && c.alpha < 0.125)) throw std::invalid_argument("fooling: alpha must lie in (0, 1/8)");
  if (c.trials < 1) throw std::invalid_argument("fooling: trials must be positive");
  if (c.domain == FoolDomain::cube && c.n > 64) throw std::invalid_argument("fooling: cube dimension above 64");
}

DistributionPtr base_distribution(const FoolingConfig& c) {
  return c.domain == FoolDomain::gaussian ? make_gaussian(c.n) : make_cube(c.n);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

FoolingSupport build_support(const FoolingConfig& c) {
  validate(c);
  FoolingSupport s;
  s.labeler = make_band_labeler(c.domain, c.n, c.alpha, c.seed);
  s.points = std::make_shared<LabeledDataset>(c.n);
  s.points->seed = c.seed;
  s.points->x.resize(c.M * c.n);
  s.points->y.resize(c.M);
  const auto dist = base_distribution(c);
  Rng rng(c.seed, "fool/support");
  std::size_t outside = 0;
  for (std::size_t i = 0; i < c.M; ++i) {
    std::span<double> r(s.points->x.data() + i * c.n, c.n);
    dist->sample(rng, r);
    s.points->y[i] = s.labeler(r);
    outside += !s.labeler.in_band(r);
  }
  s.out_of_band_fraction = static_cast<double>(outside) / static_cast<double>(c.M);
  return s;
}

double collision_probability(std::size_t N, std::size_t M) {
  if (N > M) throw std::invalid_argument("collision_probability: N must not exceed M");
  double p = 1.0;
  const double dm = static_cast<double>(M);
  for (std::size_t i = 1; i < N; ++i) p *= 1.0 - static_cast<double>(i) / dm;
  return p;
}

double tester_fooling_bound(double delta2, std::size_t N, std::size_t M, double delta_fool) {
  const double dn = static_cast<double>(N), dm = static_cast<double>(M);
  return 1.0 - delta2 - dn * dn / dm - dn / std::sqrt(delta_fool * dm);
}

double learner_fooling_bound(double phi, std::size_t N, std::size_t M) {
  const double dm = static_cast<double>(M);
  return 1.5 * (phi + static_cast<double>(N) / dm) + 5.0 * std::sqrt(std::log(dm) / dm);
}

nlohmann::ordered_json FoolingReport::to_json() const {
  nlohmann::ordered_json j;
  j["acceptance_empirical"] = acceptance_empirical;
  j["acceptance_stderr"] = acceptance_stderr;
  j["acceptance_reference"] = acceptance_reference;
  j["acceptance_bound"] = acceptance_bound;
  j["acceptance_bound_vacuous"] = acceptance_bound_vacuous;
  j["advantage_empirical"] = advantage_empirical;
  j["advantage_stderr"] = advantage_stderr;
  j["advantage_bound"] = advantage_bound;
  j["advantage_bound_vacuous"] = advantage_bound_vacuous;
  j["phi"] = phi;
  j["collision_exact"] = collision_exact;
  j["collision_bound"] = collision_bound;
  j["config_echo"] = config.to_json();
  return j;
}

FoolingReport run_fooling_experiment(const FoolingConfig& c, const TesterFn& tester, const LearnerFn& learner) {
  const auto support = build_support(c);
  const auto fooled = make_finite_support(support.points);
  const auto truth = base_distribution(c);
  const BandLabeler L = support.labeler;
  const auto labels = concept_labels([L](std::span<const double> x) { return L(x); }, 0.0);

  const std::size_t R = c.trials;
  std::vector<double> acc(R), ref(R), adv(R);
  std::vector<std::exception_ptr> errors(R);
  const auto Ri = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ti = 0; ti < Ri; ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    try {
      const std::uint64_t seed = c.seed ^ static_cast<std::uint64_t>(t);
      try {
        Stream fs(fooled, labels, seed, "fool/tester", c.N);
        acc[t] = tester(fs).accept ? 1.0 : 0.0;
        Stream ts(truth, labels, seed, "fool/reference", c.N);
        ref[t] = tester(ts).accept ? 1.0 : 0.0;
        Stream ls(fooled, labels, seed, "fool/learner", c.N);
        const Predictor f = learner(ls);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < c.M; ++i) wrong += f(support.points->row(i)) != support.points->label(i);
        adv[t] = std::abs(static_cast<double>(wrong) / static_cast<double>(c.M) - 0.5);
      } catch (const StreamExhausted& e) {
        throw BudgetViolation(std::string("fooling: budget violation: ") + e.what());
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  FoolingReport r;
  r.config = c;
  r.acceptance_empirical = mean_of(acc);
  r.acceptance_stderr = stderr_of(acc);
  r.acceptance_reference = mean_of(ref);
  r.acceptance_bound = tester_fooling_bound(c.delta2, c.N, c.M, c.delta_fool);
  r.phi = support.out_of_band_fraction;
  r.advantage_empirical = mean_of(adv);
  r.advantage_stderr = stderr_of(adv);
  r.advantage_bound = learner_fooling_bound(r.phi, c.N, c.M);
  r.collision_exact = collision_probability(c.N, c.M);
  r.collision_bound = 1.0 - static_cast<double>(c.N) * static_cast<double>(c.N) / static_cast<double>(c.M);
  r.acceptance_bound_vacuous = r.acceptance_bound <= 0.0;
  r.advantage_bound_vacuous = r.advantage_bound >= 0.5;
  return r;
}

TesterFn budget_gauss_tester(std::size_t n, std::size_t budget, double eps, double moment_tol) {
  if (budget < 2) throw std::invalid_argument("budget_gauss_tester: budget must be at least 2");
  auto dp = gauss_desk_profile(eps);
  dp.overrides.delta = 2;
  dp.overrides.tail_cap = budget / 2;
  dp.overrides.n2_cap = budget - budget / 2;
  dp.overrides.moment_tol = moment_tol;
  const auto p = derive_params(eps, n, dp.C, dp.overrides);
  return [p](Stream& s) { return run_tester(s, p); };
}

TesterFn budget_kwise_tester(std::size_t n, std::size_t budget, int k) {
  CubeOverrides ov;
  ov.k = k;
  auto p = derive_cube_params(0.5, n, ov);
  const std::size_t K = subsets_up_to(n, k).size();
  // choose tv_tol so the sample count equals the budget
  p.tv_tol = std::sqrt(2.0 * std::log(20.0 * static_cast<double>(K)) / static_cast<double>(budget));
  while (kwise_sample_count(K, p.tv_tol) > budget) p.tv_tol *= 1.0 + 1e-12;
  return [p](Stream& s) { return run_kwise_tester(s, p); };
}

LearnerFn budget_l1_learner(FoolDomain domain, std::size_t n, std::size_t budget, int degree, double eps) {
  if (domain == FoolDomain::gaussian) {
    auto dp = gauss_desk_profile(eps);
    dp.overrides.d = degree;
    dp.overrides.n1_cap = budget;
    const auto p = derive_params(eps, n, dp.C, dp.overrides);
    return [p](Stream& s) -> Predictor {
      auto res = std::make_shared<GaussLearnerResult>(run_learner(s, p));
      return [res](std::span<const double> x) { return res->predictor(x); };
    };
  }
  CubeOverrides ov;
  ov.degree = degree;
  ov.learner_samples = budget;
  const auto p = derive_cube_params(eps, n, ov);
  return [p](Stream& s) -> Predictor {
    auto res = std::make_shared<CubeLearnerResult>(run_cube_halfspace_learner(s, p));
    return [res](std::span<const double> x) { return predict(res->model, x); };
  };
}

}  // namespace tlkit
