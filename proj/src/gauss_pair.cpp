#include "tlkit/gauss_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tlkit/moments.hpp"

namespace tlkit {

namespace {

constexpr double kSaturate = 4.0e18;

std::uint64_t to_count(double v) {
  return v >= kSaturate ? static_cast<std::uint64_t>(kSaturate)
                        : static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

int gauss_degree_formula(double eps) {
  const double l = std::log(1.0 / eps);
  const int d = 2 * static_cast<int>(std::floor(l * l * l / (2.0 * std::pow(eps, 4))));
  return std::max(d, 2);
}

int gauss_delta_formula(double eps) {
  const double l = std::log(1.0 / eps);
  const double raw = std::floor(l * l * l * l / std::pow(eps, 4));
  const int v = raw > 1e9 ? 1000000000 : static_cast<int>(raw);
  return std::max(v - v % 2, 2);
}

nlohmann::ordered_json GaussPairParams::to_json() const {
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["n"] = n;
  j["C1"] = C.C1;
  j["C2"] = C.C2;
  j["C3"] = C.C3;
  j["C4"] = C.C4;
  j["d"] = d;
  j["Delta"] = delta;
  j["t"] = t;
  j["N1"] = N1;
  j["N2"] = N2;
  j["N1_formula"] = N1_formula;
  j["N2_formula"] = N2_formula;
  j["tail_samples"] = tail_samples;
  j["tail_threshold"] = tail_threshold;
  j["moment_tol"] = moment_tol;
  return j;
}

GaussPairParams derive_params(double eps, std::size_t n, PairConstants C, const GaussOverrides& ov) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("derive_params: eps must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("derive_params: n must be positive");
  if (C.C1 <= 0 || C.C2 <= 0 || C.C3 <= 0 || C.C4 <= 0)
    throw std::invalid_argument("derive_params: constants must be positive");
  GaussPairParams p;
  p.eps = eps;
  p.C = C;
  p.n = n;
  const double dn = static_cast<double>(n);

  p.d = gauss_degree_formula(eps);
  if (ov.d) {
    if (*ov.d < 1) throw std::invalid_argument("derive_params: d override must be positive");
    if (*ov.d != p.d) p.deviations.push_back("d overridden: " + std::to_string(p.d) + " -> " + std::to_string(*ov.d));
    p.d = *ov.d;
  }
  p.delta = gauss_delta_formula(eps);
  if (ov.delta) {
    if (*ov.delta < 1) throw std::invalid_argument("derive_params: Delta override must be positive");
    if (*ov.delta != p.delta)
      p.deviations.push_back("Delta overridden: " + std::to_string(p.delta) + " -> " + std::to_string(*ov.delta));
    p.delta = *ov.delta;
  }
  const double D = p.delta;
  p.t = C.C1 * D * std::log(D) * std::sqrt(std::log(dn)) + std::sqrt(2.0 * std::log(C.C2 * dn / eps));

  p.N1_formula = std::ceil(std::pow(dn, C.C3 * p.d));
  p.N2_formula = std::ceil(std::pow(p.t, 2.0 * D) * std::pow(dn, C.C4 * D));
  p.N1 = to_count(p.N1_formula);
  p.N2 = to_count(p.N2_formula);
  if (ov.n1_cap && p.N1 > *ov.n1_cap) {
    p.deviations.push_back("N1 capped: " + std::to_string(p.N1) + " -> " + std::to_string(*ov.n1_cap));
    p.N1 = *ov.n1_cap;
  }
  if (ov.n2_cap && p.N2 > *ov.n2_cap) {
    p.deviations.push_back("N2 capped: " + std::to_string(p.N2) + " -> " + std::to_string(*ov.n2_cap));
    p.N2 = *ov.n2_cap;
  }

  const double l200 = std::log(200.0 * dn);
  const double r = 30.0 * dn / eps;
  p.tail_samples = to_count(l200 * r * r / 2.0);
  if (ov.tail_cap && p.tail_samples > *ov.tail_cap) {
    p.deviations.push_back("tail sample count capped: " + std::to_string(p.tail_samples) + " -> " +
                           std::to_string(*ov.tail_cap));
    p.tail_samples = *ov.tail_cap;
  }
  p.tail_threshold = eps / (10.0 * dn);

  p.moment_tol = 1.0 / (2.0 * std::pow(dn, D));
  if (ov.moment_tol) {
    if (!(*ov.moment_tol > 0.0)) throw std::invalid_argument("derive_params: moment_tol must be positive");
    if (*ov.moment_tol != p.moment_tol) {
      nlohmann::json a = p.moment_tol, b = *ov.moment_tol;
      p.deviations.push_back("moment_tol overridden: " + a.dump() + " -> " + b.dump());
    }
    p.moment_tol = *ov.moment_tol;
  }
  if (ov.feature_cap) p.feature_cap = *ov.feature_cap;
  return p;
}

DeskProfile gauss_desk_profile(double eps) {
  DeskProfile dp;
  dp.C.C3 = 2.0;
  if (gauss_delta_formula(eps) < 4) dp.overrides.delta = 4;
  dp.overrides.n1_cap = 1000000;
  dp.overrides.n2_cap = 1000000;
  dp.overrides.moment_tol = 0.05;
  return dp;
}

TailResult tail_check(const LabeledDataset& data, double t, double threshold) {
  if (data.empty()) throw std::invalid_argument("tail_check: no samples");
  std::vector<std::size_t> count(data.dim, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < data.dim; ++j) count[j] += std::abs(r[j]) > t;
  }
  TailResult out;
  out.samples = data.size();
  for (std::size_t j = 0; j < data.dim; ++j) {
    const double est = static_cast<double>(count[j]) / static_cast<double>(data.size());
    if (j == 0 || est > out.worst_estimate) {
      out.worst_estimate = est;
      out.worst_coordinate = j;
    }
  }
  out.pass = out.worst_estimate < threshold;
  return out;
}

TailResult tail_check(Stream& stream, const GaussPairParams& p) {
  // one batch serves every coordinate; the union bound covers all n estimates
  return tail_check(stream.take(p.tail_samples), p.t, p.tail_threshold);
}

Truncation truncate(const LabeledDataset& data, double t) {
  Truncation out;
  out.data = LabeledDataset(data.dim);
  out.data.seed = data.seed;
  out.data.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    if (std::all_of(r.begin(), r.end(), [t](double v) { return std::abs(v) <= t; }))
      out.data.push(r, data.label(i));
    else
      ++out.discarded;
  }
  out.discard_fraction = data.empty() ? 0.0 : static_cast<double>(out.discarded) / static_cast<double>(data.size());
  return out;
}

Verdict run_tester(Stream& stream, const GaussPairParams& p) {
  if (stream.dim() != p.n) throw std::invalid_argument("run_tester: stream dimension differs from n");
  Verdict v;
  v.dim = p.n;
  const auto tail = tail_check(stream, p);
  v.samples_used = tail.samples;
  if (!tail.pass) {
    v.accept = false;
    v.stage = Stage::tail;
    v.worst_coordinate = tail.worst_coordinate;
    v.gap = tail.worst_estimate;
    v.threshold = p.tail_threshold;
    return v;
  }
  const auto batch = stream.take(p.N2);
  v.samples_used += batch.size();
  const auto kept = truncate(batch, p.t);
  v.threshold = p.moment_tol;
  if (kept.data.empty()) {
    v.accept = false;
    v.stage = Stage::moments;
    v.gap = std::numeric_limits<double>::infinity();
    return v;
  }
  const auto observed = empirical_moments(kept.data, p.delta);
  const auto cmp = compare_tables(observed, gaussian_table(p.n, p.delta), p.moment_tol);
  v.worst_index = cmp.worst;
  v.gap = cmp.gap;
  v.accept = cmp.pass;
  v.stage = cmp.pass ? Stage::ok : Stage::moments;
  return v;
}

int BoxedPredictor::operator()(std::span<const double> x) const {
  for (double v : x)
    if (std::abs(v) > t) return 1;
  return predict(model, x);
}

double BoxedPredictor::error_rate(const LabeledDataset& data) const {
  if (data.empty()) throw std::invalid_argument("error_rate: empty data");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) wrong += (*this)(data.row(i)) != data.label(i);
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

nlohmann::ordered_json LearnReport::to_json() const {
  nlohmann::ordered_json j;
  j["samples_drawn"] = samples_drawn;
  j["samples_kept"] = samples_kept;
  j["discard_fraction"] = discard_fraction;
  j["features"] = features;
  j["degree"] = degree;
  j["empirical_l1"] = empirical_l1;
  j["empirical_01"] = empirical_01;
  j["threshold"] = threshold;
  j["lp_iterations"] = lp_iterations;
  return j;
}

GaussLearnerResult run_learner(Stream& stream, const GaussPairParams& p) {
  if (stream.dim() != p.n) throw std::invalid_argument("run_learner: stream dimension differs from n");
  const double nf = count_indices(p.n, p.d);
  const double cap = static_cast<double>(p.feature_cap.value_or(kMaxFeatures));
  if (nf > cap) throw std::length_error("run_learner: monomial basis exceeds the feature cap");
  const auto batch = stream.take(p.N1);
  auto kept = truncate(batch, p.t);
  if (kept.data.empty()) throw std::runtime_error("run_learner: every sample was discarded by truncation");

  RegressionProblem prob{grlex_indices(p.n, p.d, 0), &kept.data, p.d};
  auto model = best_threshold(fit_l1(prob), kept.data);

  GaussLearnerResult out;
  out.report.samples_drawn = batch.size();
  out.report.samples_kept = kept.data.size();
  out.report.discard_fraction = kept.discard_fraction;
  out.report.features = prob.features.size();
  out.report.degree = p.d;
  out.report.empirical_l1 = model.empirical_l1;
  out.report.empirical_01 = model.empirical_01;
  out.report.threshold = *model.threshold;
  out.report.lp_iterations = model.lp_iterations;
  out.predictor = BoxedPredictor{std::move(model), p.t};
  return out;
}

double amplification_bound(double delta2, double delta3, std::size_t r) {
  const double g = delta3 - delta2;
  return 2.0 * std::exp(-2.0 * g * g * static_cast<double>(r) / 9.0);
}

AmplifiedVerdict amplify_tester(const std::function<bool(std::size_t)>& base, std::size_t r,
                                double delta2, double delta3) {
  if (!(delta2 > 0.0 && delta2 < delta3 && delta3 < 1.0))
    throw std::invalid_argument("amplify_tester: need 0 < delta2 < delta3 < 1");
  if (r < 1) throw std::invalid_argument("amplify_tester: r must be positive");
  AmplifiedVerdict v;
  v.runs = r;
  for (std::size_t i = 0; i < r; ++i) v.yes += base(i) ? 1 : 0;
  v.yes_fraction = static_cast<double>(v.yes) / static_cast<double>(r);
  v.threshold = 1.0 - (delta2 + delta3) / 2.0;
  v.accept = v.yes_fraction >= v.threshold;
  v.error_bound = amplification_bound(delta2, delta3, r);
  return v;
}

}  // namespace tlkit
