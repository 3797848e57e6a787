// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "l1_oracle.hpp"
#include "tlkit/cli.hpp"
#include "tlkit/l1fit.hpp"
#include "tlkit/moments.hpp"
#include "tlkit/polycore.hpp"
#include "tlkit/rng.hpp"

using namespace tlkit;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < limit_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s,
              limit_s, in_time ? "" : " (over time)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Configs shared by criteria 4-9 and rerun by criterion 10.
std::map<std::string, std::string> configs() {
  std::map<std::string, std::string> c;
  c["gauss_complete"] = R"({"mode": "gauss_pair", "seed": 100, "trials": 20, "n": 3, "eps": 0.5,
    "profile": "desk", "labels": {"kind": "coin"}})";
  c["gauss_rademacher"] = R"({"mode": "gauss_pair", "seed": 200, "trials": 20, "n": 3, "eps": 0.5,
    "profile": "desk", "distribution": "rademacher-coord", "labels": {"kind": "coin"}})";
  c["gauss_scaled"] = R"({"mode": "gauss_pair", "seed": 300, "trials": 20, "n": 3, "eps": 0.5,
    "profile": "desk", "distribution": "scaled-gaussian", "scale": 1.5, "labels": {"kind": "coin"}})";
  c["gauss_learn"] = R"({"mode": "gauss_pair", "seed": 400, "trials": 20, "n": 3, "eps": 0.5,
    "profile": "desk", "force_learn": true, "holdout": 20000,
    "labels": {"kind": "halfspace", "w": [0.6, -0.8, 0.0], "theta": 0.2, "noise": 0.1}})";
  c["cube_uniform"] = R"({"mode": "cube_pair", "seed": 500, "trials": 20, "n": 8, "eps": 0.5,
    "distribution": "cube", "overrides": {"k": 3, "degree": 3}, "labels": {"kind": "coin"}})";
  c["cube_planted"] = R"({"mode": "cube_pair", "seed": 600, "trials": 20, "n": 8, "eps": 0.5,
    "distribution": "parity-planted", "overrides": {"k": 3, "degree": 3}, "labels": {"kind": "coin"}})";
  c["cube_majority"] = R"({"mode": "cube_pair", "seed": 700, "trials": 20, "n": 5, "eps": 0.5,
    "distribution": "cube", "force_learn": true, "overrides": {"k": 3, "degree": 3},
    "labels": {"kind": "majority", "k": 3, "noise": 0.0}})";
  c["cube_majority_noisy"] = R"({"mode": "cube_pair", "seed": 800, "trials": 20, "n": 5, "eps": 0.5,
    "distribution": "cube", "force_learn": true, "overrides": {"k": 3, "degree": 3},
    "labels": {"kind": "majority", "k": 3, "noise": 0.1}})";
  c["decision_list"] = R"({"mode": "decision_list", "seed": 900, "trials": 20, "n": 10, "eps": 0.25,
    "distribution": "cube", "force_learn": true, "target_slack": 0.1,
    "labels": {"kind": "decision_list", "noise": 0.05,
               "list": {"order": [3, 7], "bits": [1, -1], "values": [-1, 1], "default": -1}}})";
  c["fooling"] = R"({"mode": "fooling", "seed": 1000,
    "fooling": {"M": 50000, "N": 100, "delta2": 0.1, "delta_fool": 0.5, "alpha": 0.05,
                "domain": "gaussian", "n": 20, "trials": 20}})";
  c["approx"] = R"({"mode": "approx_bench", "approx": {"target": "ramp", "center": 0, "eps": 0.2, "w": 2,
    "degrees": [10, 20, 40, 80]}})";
  return c;
}

std::map<std::string, Json> reports;

const Json& run_named(const std::string& name) {
  auto it = reports.find(name);
  if (it != reports.end()) return it->second;
  const auto o = cli::run_config_text(configs().at(name));
  if (o.exit_code == 1) throw std::runtime_error(name + ": " + o.report["error"]["message"].get<std::string>());
  return reports[name] = o.report;
}

double accept_rate(const std::string& name) { return run_named(name)["aggregate"]["accept_rate"].get<double>(); }

// Largest per-trial excess of holdout error over the opt estimate.
double worst_excess(const std::string& name, double* max_error = nullptr) {
  double worst = -1.0, err = 0.0;
  for (const auto& t : run_named(name)["per_trial"]) {
    const auto& l = t["learner"];
    worst = std::max(worst, l["holdout_error"].get<double>() - l["opt_estimate"].get<double>());
    err = std::max(err, l["holdout_error"].get<double>());
  }
  if (max_error) *max_error = err;
  return worst;
}

}  // namespace

int main() {
  report(1, "moment identities", 1.0, [] {
    double q = 0.0, tr = 0.0;
    for (int d = 0; d <= 10; ++d) {
      const double exact = d % 2 ? 0.0 : gaussian_moment(MultiIndex::unit(0, static_cast<std::uint32_t>(d)));
      q = std::max(q, std::abs(truncated_gaussian_moment_1d(d, 40.0) - exact));
    }
    for (const auto& a : grlex_indices(3, 8, 1)) {
      double prod = 1.0;
      for (std::uint32_t c = 0; c < 3; ++c) prod *= truncated_gaussian_moment_1d(static_cast<int>(a.exponent(c)), 12.0);
      tr = std::max(tr, std::abs(prod - gaussian_moment(a)));
    }
    return Outcome{q <= 1e-8 && tr <= 1e-6, fmt("quadrature gap %.2e", q) + fmt(", t=12 truncation gap %.2e", tr)};
  });

  report(2, "Chebyshev contract", 5.0, [] {
    const auto j = run_named("approx");
    std::vector<double> err, ed;
    double amax = 0.0;
    for (const auto& r : j["approx"]) {
      err.push_back(r["sup_error"].get<double>());
      ed.push_back(r["error_times_degree"].get<double>());
      amax = std::max(amax, r["max_abs_coeff"].get<double>());
    }
    bool mono = true, bounded = true;
    for (std::size_t i = 1; i < err.size(); ++i) mono &= err[i] <= err[i - 1] + 1e-6;
    for (double v : ed) bounded &= v <= 1.5 * ed[1];
    Rng r(2, "acceptance/roundtrip");
    double rt = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int d = static_cast<int>(r.below(17));
      ChebSeries s{1.0 + 3.0 * r.uniform(), {}};
      for (int k = 0; k <= d; ++k) s.coeffs.push_back(8.0 * r.uniform() - 4.0);
      const auto c = expand_to_monomials_1d(s);
      double scale = 0.0;
      for (double a : s.coeffs) scale += std::abs(a);
      for (int i = 0; i < 25; ++i) {
        const double x = s.w * (-1.0 + 2.0 * i / 24.0);
        rt = std::max(rt, std::abs(series_eval(s, x) - power_eval(c, x)) / std::max(1.0, scale));
      }
    }
    std::string det = "errors";
    for (double e : err) det += fmt(" %.4f", e);
    det += fmt(", max |a_k| %.3f", amax) + fmt(", round-trip %.1e", rt);
    return Outcome{mono && bounded && amax <= 4.0 && rt <= 1e-9, det};
  });

  report(3, "L1 oracle equivalence", 10.0, [] {
    Rng r(3, "acceptance/lad");
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = 1 + r.below(6);
      std::vector<MultiIndex> feats{MultiIndex{}};
      if (r.below(2)) feats.push_back(trial % 2 ? MultiIndex::unit(0) : MultiIndex::unit(0, 2));
      LabeledDataset d(1);
      for (std::size_t i = 0; i < m; ++i) {
        const std::vector<double> x{r.normal()};
        d.push(x, r.sign());
      }
      const auto model = fit_l1({feats, &d, 2});
      const auto A = feature_matrix(feats, d);
      const std::vector<double> y(d.y.begin(), d.y.end());
      worst = std::max(worst, std::abs(model.empirical_l1 * static_cast<double>(m) -
                                       oracle::lad_bruteforce(A, m, feats.size(), y)));
    }
    return Outcome{worst <= 1e-5, fmt("max objective gap %.2e over 200 instances", worst)};
  });

  report(4, "Gaussian completeness", 120.0, [] {
    const double rate = accept_rate("gauss_complete");
    const double floor = 0.9 - 3.0 * std::sqrt(0.9 * 0.1 / 20.0);
    return Outcome{rate >= floor, fmt("accept rate %.2f", rate) + fmt(" (floor %.3f)", floor)};
  });

  report(5, "Gaussian soundness", 120.0, [] {
    const double a = 1.0 - accept_rate("gauss_rademacher"), b = 1.0 - accept_rate("gauss_scaled");
    return Outcome{a >= 0.95 && b >= 0.95, fmt("reject rate Rademacher %.2f", a) + fmt(", scaled %.2f", b)};
  });

  report(6, "end-to-end learning", 300.0, [] {
    const auto& agg = run_named("gauss_learn")["aggregate"];
    const double err = agg["mean_holdout_error"].get<double>(), opt = agg["mean_opt_estimate"].get<double>();
    return Outcome{err <= opt + 0.15, fmt("mean holdout error %.4f", err) + fmt(" vs opt %.4f", opt) +
                                          fmt(", worst trial excess %.4f", worst_excess("gauss_learn"))};
  });

  report(7, "cube pair", 180.0, [] {
    const double acc = accept_rate("cube_uniform"), rej = 1.0 - accept_rate("cube_planted");
    double clean_err = 0.0;
    worst_excess("cube_majority", &clean_err);
    const double noisy = worst_excess("cube_majority_noisy");
    return Outcome{acc >= 0.9 && rej >= 0.95 && clean_err <= 0.05 && noisy <= 0.15,
                   fmt("uniform accept %.2f", acc) + fmt(", planted reject %.2f", rej) +
                       fmt(", majority worst error %.4f", clean_err) + fmt(", noisy worst excess %.4f", noisy)};
  });

  report(8, "decision lists", 120.0, [] {
    const double ex = worst_excess("decision_list");
    return Outcome{ex <= 0.1, fmt("worst trial excess over opt %.4f", ex)};
  });

  report(9, "fooling harness", 300.0, [] {
    const auto& f = run_named("fooling")["fooling"];
    const double acc = f["acceptance_empirical"].get<double>(), ab = f["acceptance_bound"].get<double>();
    const double adv = f["advantage_empirical"].get<double>(), vb = f["advantage_bound"].get<double>();
    const double ref = f["acceptance_reference"].get<double>();
    long double p = 1.0L;
    for (int i = 1; i < 100; ++i) p *= 1.0L - static_cast<long double>(i) / 50000.0L;
    const double cgap = static_cast<double>(std::abs(static_cast<long double>(f["collision_exact"].get<double>()) - p));
    const bool ok = f["acceptance_within_bound"].get<bool>() && f["advantage_within_bound"].get<bool>() &&
                    cgap <= 1e-12 && ref >= 0.9;
    return Outcome{ok, fmt("acceptance %.3f", acc) + fmt(" vs bound %.4f", ab) + fmt(" (true D %.2f)", ref) +
                           fmt(", advantage %.4f", adv) + fmt(" vs bound %.4f", vb) +
                           fmt(", collision gap %.1e", cgap)};
  });

  report(10, "determinism", 600.0, [] {
    std::size_t same = 0, total = 0;
    for (const auto& [name, text] : configs()) {
      const auto again = cli::run_config_text(text);
      ++total;
      same += cli::stable_dump(run_named(name)) == cli::stable_dump(again.report);
    }
    return Outcome{same == total, std::to_string(same) + "/" + std::to_string(total) + " reports byte-identical on rerun"};
  });

  return failures == 0 ? 0 : 1;
}
