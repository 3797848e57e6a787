#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <iomanip>
#include <memory>
#include <sstream>

#include "tlkit/cli.hpp"
#include "tlkit/polycore.hpp"

namespace tlkit::cli {

namespace {

using Json = nlohmann::ordered_json;
using Predictor = std::function<int(std::span<const double>)>;

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

LabelModel build_labels(const LabelSpec& L, std::size_t n) {
  std::vector<double> w = L.w;
  if (w.empty()) {
    w.assign(n, 0.0);
    w[0] = 1.0;
  }
  if ((L.kind == "halfspace" || L.kind == "boundary_flip") && w.size() != n)
    throw ConfigError("labels.w: length must equal n");
  if (L.kind == "halfspace") return halfspace_labels(w, L.theta, L.noise);
  if (L.kind == "boundary_flip") return boundary_flip_labels(w, L.theta, L.flip_mass);
  if (L.kind == "coin") return coin_labels();
  if (L.kind == "constant") return constant_labels(L.value);
  if (L.kind == "majority") {
    if (static_cast<std::size_t>(L.majority_k) > n) throw ConfigError("labels.k: exceeds n");
    const int k = L.majority_k;
    return concept_labels(
        [k](std::span<const double> x) {
          double s = 0.0;
          for (int i = 0; i < k; ++i) s += x[static_cast<std::size_t>(i)];
          return sign_of(s);
        },
        L.noise);
  }
  const DecisionList dl = *L.list;
  for (auto c : dl.order)
    if (c >= n) throw ConfigError("labels.list: coordinate beyond n");
  return concept_labels([dl](std::span<const double> x) { return eval_decision_list(dl, x); }, L.noise);
}

// Per-trial streams for the tester, learner and holdout stages.
struct Sources {
  DistributionPtr dist;
  LabelModel labels;
  std::shared_ptr<const LabeledDataset> data;

  std::size_t dim() const { return data ? data->dim : dist->dim(); }
  Stream stream(std::uint64_t seed, const char* name, std::size_t offset) const {
    if (data) return Stream(data, offset);
    return Stream(dist, labels, seed, name);
  }
};

Sources make_sources(const ExperimentConfig& c) {
  Sources s;
  if (c.data) {
    s.data = std::make_shared<const LabeledDataset>(ingest_csv(c.data->path, c.data->labels01));
    if (s.data->dim != c.n)
      throw ConfigError("n: dataset has " + std::to_string(s.data->dim) + " feature columns, config says " +
                        std::to_string(c.n));
  } else {
    s.dist = make_distribution(c.distribution, c.n, c.scale);
    s.labels = build_labels(c.labels, c.n);
  }
  return s;
}

struct Holdout {
  double error = 0.0;
  double opt_estimate = 0.0;
};

// opt is estimated by the clean concept when one exists, else by the better constant.
Holdout evaluate(const Predictor& f, const LabeledDataset& h, const LabelModel& lm) {
  std::size_t wrong = 0, clean_wrong = 0, plus = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto x = h.row(i);
    wrong += f(x) != h.label(i);
    plus += h.label(i) > 0;
    if (lm.clean) clean_wrong += lm.clean(x) != h.label(i);
  }
  const double m = static_cast<double>(h.size());
  Holdout r;
  r.error = static_cast<double>(wrong) / m;
  const double constant = std::min(plus, h.size() - plus) / m;
  r.opt_estimate = lm.clean ? std::min(constant, static_cast<double>(clean_wrong) / m) : constant;
  return r;
}

struct TrialResult {
  Json json;
  bool accept = false;
  bool learned = false;
  Holdout holdout;
};

// Shared tester-then-learner protocol; stage-specific pieces come in as callables.
template <class TesterF, class LearnerF>
std::vector<TrialResult> run_trials(const ExperimentConfig& c, const Sources& src, TesterF tester,
                                    LearnerF learner) {
  const std::size_t R = c.trials;
  std::vector<TrialResult> out(R);
  std::vector<std::exception_ptr> errors(R);
  const auto Ri = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ti = 0; ti < Ri; ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    try {
      const std::uint64_t seed = c.seed ^ static_cast<std::uint64_t>(t);
      TrialResult r;
      r.json["trial"] = t;
      r.json["seed"] = seed;
      auto ts = src.stream(seed, "tester", 0);
      const Verdict v = tester(ts);
      r.accept = v.accept;
      r.json["verdict"] = v.to_json();
      if (v.accept || c.force_learn) {
        auto ls = src.stream(seed, "learner", ts.consumed());
        Json report;
        const Predictor f = learner(ls, report);
        auto hs = src.stream(seed, "holdout", ts.consumed() + ls.consumed());
        const auto h = src.data ? hs.take(hs.remaining()) : hs.take(c.holdout);
        if (h.empty()) throw StreamExhausted("no samples left for the holdout");
        r.holdout = evaluate(f, h, src.labels);
        r.learned = true;
        report["holdout_samples"] = h.size();
        report["holdout_error"] = r.holdout.error;
        report["opt_estimate"] = r.holdout.opt_estimate;
        report["target_met"] = r.holdout.error <= r.holdout.opt_estimate + c.target_slack;
        r.json["learner"] = std::move(report);
      } else {
        r.json["learner"] = nullptr;
      }
      out[t] = std::move(r);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int finish_pair(const ExperimentConfig& c, std::vector<TrialResult>& trials, Json& report) {
  Json per = Json::array();
  std::size_t accepts = 0, learned = 0;
  double err = 0.0, opt = 0.0;
  for (auto& t : trials) {
    accepts += t.accept;
    if (t.learned) {
      ++learned;
      err += t.holdout.error;
      opt += t.holdout.opt_estimate;
    }
    per.push_back(std::move(t.json));
  }
  const double R = static_cast<double>(trials.size());
  Json agg;
  agg["accept_rate"] = accepts / R;
  agg["learned_trials"] = learned;
  if (learned) {
    agg["mean_holdout_error"] = err / static_cast<double>(learned);
    agg["mean_opt_estimate"] = opt / static_cast<double>(learned);
  } else {
    agg["mean_holdout_error"] = nullptr;
    agg["mean_opt_estimate"] = nullptr;
  }
  agg["target_slack"] = c.target_slack;
  report["per_trial"] = std::move(per);
  const bool accepted = 2 * accepts >= trials.size();
  bool met = learned > 0 && err <= opt + c.target_slack * static_cast<double>(learned);
  agg["target_met"] = learned ? Json(met) : Json(nullptr);
  report["aggregate"] = std::move(agg);
  if (!accepted) return 2;
  return met ? 0 : 3;
}

int run_gauss(const ExperimentConfig& c, Json& report) {
  PairConstants C = c.constants;
  GaussOverrides ov = c.gauss;
  if (c.profile == "desk") {
    const auto dp = gauss_desk_profile(c.eps);
    if (!c.source.contains("constants")) C = dp.C;
    if (!ov.delta) ov.delta = dp.overrides.delta;
    if (!ov.n1_cap) ov.n1_cap = dp.overrides.n1_cap;
    if (!ov.n2_cap) ov.n2_cap = dp.overrides.n2_cap;
    if (!ov.moment_tol) ov.moment_tol = dp.overrides.moment_tol;
  }
  const auto p = derive_params(c.eps, c.n, C, ov);
  report["effective_params"] = p.to_json();
  report["deviations"] = p.deviations;
  const auto src = make_sources(c);
  auto trials = run_trials(
      c, src, [&](Stream& s) { return run_tester(s, p); },
      [&](Stream& s, Json& rep) -> Predictor {
        auto res = std::make_shared<GaussLearnerResult>(run_learner(s, p));
        rep = res->report.to_json();
        rep["model"] = res->predictor.model.to_json();
        return [res](std::span<const double> x) { return res->predictor(x); };
      });
  return finish_pair(c, trials, report);
}

int run_cube(const ExperimentConfig& c, Json& report) {
  const auto p = derive_cube_params(c.eps, c.n, c.cube);
  const std::size_t cap = c.gauss.feature_cap.value_or(kMaxFeatures);
  report["effective_params"] = p.to_json();
  report["deviations"] = p.deviations;
  const auto src = make_sources(c);
  auto trials = run_trials(
      c, src, [&](Stream& s) { return run_kwise_tester(s, p); },
      [&](Stream& s, Json& rep) -> Predictor {
        auto res = std::make_shared<CubeLearnerResult>(run_cube_halfspace_learner(s, p, cap));
        rep = res->report.to_json();
        rep["model"] = res->model.to_json();
        return [res](std::span<const double> x) { return predict(res->model, x); };
      });
  return finish_pair(c, trials, report);
}

int run_dl(const ExperimentConfig& c, Json& report) {
  CubeOverrides ov = c.cube;
  if (c.dl_samples) ov.learner_samples = c.dl_samples;
  const auto p = derive_dl_params(c.eps, c.n, ov);
  report["effective_params"] = p.to_json();
  report["deviations"] = p.deviations;
  const auto src = make_sources(c);
  auto trials = run_trials(
      c, src, [&](Stream& s) { return run_kwise_tester(s, p); },
      [&](Stream& s, Json& rep) -> Predictor {
        auto fit = std::make_shared<DecisionListFit>(fit_decision_list(s.take(p.learner_samples), p.k));
        rep = fit->to_json();
        return [fit](std::span<const double> x) { return eval_decision_list(fit->list, x); };
      });
  return finish_pair(c, trials, report);
}

int run_fool(const ExperimentConfig& c, Json& report) {
  FoolingConfig fc = c.fooling;
  fc.seed = c.seed;
  const bool kwise = c.fool_tester == "kwise" || (c.fool_tester == "auto" && fc.domain == FoolDomain::cube);
  const TesterFn tester = kwise ? budget_kwise_tester(fc.n, fc.N) : budget_gauss_tester(fc.n, fc.N);
  const LearnerFn learner = budget_l1_learner(fc.domain, fc.n, fc.N);
  const auto r = run_fooling_experiment(fc, tester, learner);
  report["effective_params"] = fc.to_json();
  report["effective_params"]["tester"] = kwise ? "kwise" : "gauss";
  report["deviations"] = std::vector<std::string>{
      "tester and learner scaled to the sample budget N",
      "in-band labels keyed to support points instead of band cells"};
  Json j = r.to_json();
  const double acc_sigma = std::max(r.acceptance_stderr, 0.5 / std::sqrt(static_cast<double>(fc.trials)));
  const bool acc_ok = r.acceptance_empirical >= r.acceptance_bound - 3 * acc_sigma;
  const bool adv_ok = r.advantage_empirical <= r.advantage_bound + 3 * r.advantage_stderr;
  j["acceptance_within_bound"] = acc_ok;
  j["advantage_within_bound"] = adv_ok;
  report["fooling"] = std::move(j);
  return acc_ok && adv_ok ? 0 : 3;
}

int run_approx(const ExperimentConfig& c, Json& report) {
  const auto& a = c.approx;
  const auto f = a.target == "ramp" ? PiecewiseRef::ramp(a.center, a.eps) : PiecewiseRef::trapezoid(a.center, a.eps);
  report["effective_params"] = {{"target", a.target}, {"center", a.center}, {"eps", a.eps}, {"w", a.w},
                                {"quadrature_points", a.quadrature_points}};
  report["deviations"] = Json::array();
  Json rows = Json::array();
  for (int d : a.degrees) {
    const auto s = project(f, a.w, d, a.quadrature_points);
    double sup = 0.0, amax = 0.0;
    const long steps = std::lround(2.0 * a.w / 1e-3);
    for (long i = 0; i <= steps; ++i) {
      const double x = -a.w + static_cast<double>(i) * 1e-3;
      sup = std::max(sup, std::abs(f(x) - series_eval(s, x)));
    }
    for (double ak : s.coeffs) amax = std::max(amax, std::abs(ak));
    rows.push_back({{"degree", d}, {"sup_error", sup}, {"error_times_degree", sup * d}, {"max_abs_coeff", amax},
                    {"coeffs", s.coeffs}});
  }
  report["approx"] = std::move(rows);
  return 0;
}

}  // namespace

RunOutcome run(const ExperimentConfig& c) {
  RunOutcome out;
  Json& r = out.report;
  r["tool"] = "tlkit";
  r["mode"] = mode_name(c.mode);
  r["timestamp"] = utc_now();
  r["seed"] = c.seed;
  r["trials"] = c.trials;
  r["force_learn"] = c.force_learn;
  r["config"] = c.source;
  switch (c.mode) {
    case Mode::gauss_pair: out.exit_code = run_gauss(c, r); break;
    case Mode::cube_pair: out.exit_code = run_cube(c, r); break;
    case Mode::decision_list: out.exit_code = run_dl(c, r); break;
    case Mode::fooling: out.exit_code = run_fool(c, r); break;
    case Mode::approx_bench: out.exit_code = run_approx(c, r); break;
  }
  r["exit_code"] = out.exit_code;
  return out;
}

RunOutcome run_config_text(const std::string& text, bool force_learn) {
  auto fail = [](const char* kind, const std::string& msg) {
    RunOutcome o;
    o.exit_code = 1;
    o.report["tool"] = "tlkit";
    o.report["timestamp"] = utc_now();
    o.report["error"] = {{"kind", kind}, {"message", msg}};
    o.report["exit_code"] = 1;
    return o;
  };
  try {
    auto c = parse_config(text);
    if (force_learn) c.force_learn = true;
    return run(c);
  } catch (const ConfigError& e) {
    return fail("config", e.what());
  } catch (const IngestError& e) {
    return fail("ingest", e.what());
  } catch (const BudgetViolation& e) {
    return fail("budget", e.what());
  } catch (const StreamExhausted& e) {
    return fail("samples", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}

std::string stable_dump(const nlohmann::ordered_json& report) {
  auto j = report;
  j.erase("timestamp");
  return j.dump(2);
}

}  // namespace tlkit::cli
