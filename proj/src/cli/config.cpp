#include <fstream>
#include <set>
#include <sstream>

#include "tlkit/cli.hpp"

namespace tlkit::cli {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::gauss_pair: return "gauss_pair";
    case Mode::cube_pair: return "cube_pair";
    case Mode::decision_list: return "decision_list";
    case Mode::fooling: return "fooling";
    case Mode::approx_bench: return "approx_bench";
  }
  return "?";
}

namespace {

using Json = nlohmann::ordered_json;

// Reads fields of one object and rejects any key that was never asked for.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + " must be an object");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k) && !j_.at(k).is_null();
  }
  const Json& at(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  template <class T>
  void get(const std::string& k, T& out) {
    if (!has(k)) return;
    try {
      out = j_.at(k).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where(k) + ": wrong type");
    }
  }
  template <class T>
  void get(const std::string& k, std::optional<T>& out) {
    if (!has(k)) return;
    T v{};
    get(k, v);
    out = v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(where(k) + ": unknown key");
  }

  std::string where(const std::string& k) const {
    if (k.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? k : path_ + "." + k;
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Mode parse_mode(const std::string& s) {
  if (s == "gauss_pair") return Mode::gauss_pair;
  if (s == "cube_pair") return Mode::cube_pair;
  if (s == "decision_list") return Mode::decision_list;
  if (s == "fooling") return Mode::fooling;
  if (s == "approx_bench") return Mode::approx_bench;
  throw ConfigError("mode: unknown mode '" + s + "'");
}

void parse_labels(const Json& j, LabelSpec& L) {
  Fields f(j, "labels");
  f.get("kind", L.kind);
  static const std::set<std::string> kinds{"halfspace", "boundary_flip", "coin", "constant", "majority", "decision_list"};
  require(kinds.count(L.kind) == 1, "labels.kind", "unknown label model '" + L.kind + "'");
  f.get("w", L.w);
  f.get("theta", L.theta);
  f.get("noise", L.noise);
  f.get("flip_mass", L.flip_mass);
  f.get("value", L.value);
  f.get("k", L.majority_k);
  if (f.has("list")) {
    try {
      L.list = DecisionList::from_json(f.at("list"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("labels.list: ") + e.what());
    }
  }
  f.finish();
  require(L.noise >= 0.0 && L.noise <= 0.5, "labels.noise", "must lie in [0, 0.5]");
  require(L.flip_mass > 0.0 && L.flip_mass < 0.5, "labels.flip_mass", "must lie in (0, 0.5)");
  require(L.value == 1 || L.value == -1, "labels.value", "must be -1 or +1");
  require(L.majority_k >= 1, "labels.k", "must be positive");
  require(L.kind != "decision_list" || L.list.has_value(), "labels.list", "required for decision_list labels");
}

void parse_overrides(const Json& j, ExperimentConfig& c) {
  Fields f(j, "overrides");
  f.get("d", c.gauss.d);
  f.get("Delta", c.gauss.delta);
  f.get("moment_tol", c.gauss.moment_tol);
  f.get("N1_cap", c.gauss.n1_cap);
  f.get("N2_cap", c.gauss.n2_cap);
  f.get("tail_cap", c.gauss.tail_cap);
  f.get("feature_cap", c.gauss.feature_cap);
  f.get("k", c.cube.k);
  f.get("degree", c.cube.degree);
  f.get("tv_tol", c.cube.tv_tol);
  f.get("learner_samples", c.cube.learner_samples);
  f.get("dl_samples", c.dl_samples);
  f.finish();
}

void parse_fooling(const Json& j, FoolingConfig& fc, std::string& tester) {
  Fields f(j, "fooling");
  f.get("M", fc.M);
  f.get("N", fc.N);
  f.get("delta2", fc.delta2);
  f.get("delta_fool", fc.delta_fool);
  f.get("alpha", fc.alpha);
  f.get("n", fc.n);
  f.get("trials", fc.trials);
  std::string domain = "gaussian";
  f.get("domain", domain);
  require(domain == "gaussian" || domain == "cube", "fooling.domain", "must be gaussian or cube");
  fc.domain = domain == "gaussian" ? FoolDomain::gaussian : FoolDomain::cube;
  f.get("tester", tester);
  require(tester == "auto" || tester == "gauss" || tester == "kwise", "fooling.tester", "must be auto, gauss or kwise");
  f.finish();
  require(fc.N >= 1 && fc.N <= fc.M, "fooling.N", "must lie in [1, M]");
  require(fc.trials >= 1, "fooling.trials", "must be at least 1");
  require(fc.alpha > 0.0 && fc.alpha < 0.125, "fooling.alpha", "must lie in (0, 1/8)");
  require(fc.delta2 > 0.0 && fc.delta2 < 1.0, "fooling.delta2", "must lie in (0, 1)");
  require(fc.delta_fool > 0.0 && fc.delta_fool < 1.0, "fooling.delta_fool", "must lie in (0, 1)");
}

void parse_approx(const Json& j, ApproxSpec& a) {
  Fields f(j, "approx");
  f.get("target", a.target);
  f.get("center", a.center);
  f.get("eps", a.eps);
  f.get("w", a.w);
  f.get("degrees", a.degrees);
  f.get("quadrature_points", a.quadrature_points);
  f.finish();
  require(a.target == "ramp" || a.target == "trapezoid", "approx.target", "must be ramp or trapezoid");
  require(a.eps > 0.0, "approx.eps", "must be positive");
  require(a.w >= 1.0, "approx.w", "must be at least 1");
  require(!a.degrees.empty(), "approx.degrees", "must be nonempty");
  for (int d : a.degrees) require(d >= 0 && d <= 4096, "approx.degrees", "entries must lie in [0, 4096]");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error at " + line_col(text, e.byte));
  }
  ExperimentConfig c;
  c.source = j;
  Fields f(j, "");
  require(f.has("mode"), "mode", "required");
  std::string mode;
  f.get("mode", mode);
  c.mode = parse_mode(mode);
  if (c.mode != Mode::approx_bench) require(f.has("seed"), "seed", "required for randomized modes");
  f.get("seed", c.seed);
  long long trials = 1;
  f.get("trials", trials);
  require(trials >= 1, "trials", "must be at least 1");
  c.trials = static_cast<std::size_t>(trials);
  f.get("output", c.output);
  f.get("eps", c.eps);
  long long n = static_cast<long long>(c.n);
  f.get("n", n);
  require(n >= 1, "n", "must be positive");
  c.n = static_cast<std::size_t>(n);
  f.get("distribution", c.distribution);
  f.get("scale", c.scale);
  if (f.has("labels")) parse_labels(f.at("labels"), c.labels);
  if (f.has("data")) {
    Fields d(f.at("data"), "data");
    DataSpec ds;
    require(d.has("path"), "data.path", "required");
    d.get("path", ds.path);
    d.get("labels01", ds.labels01);
    d.finish();
    c.data = ds;
  }
  f.get("profile", c.profile);
  require(c.profile == "formula" || c.profile == "desk", "profile", "must be formula or desk");
  if (f.has("constants")) {
    Fields k(f.at("constants"), "constants");
    k.get("C1", c.constants.C1);
    k.get("C2", c.constants.C2);
    k.get("C3", c.constants.C3);
    k.get("C4", c.constants.C4);
    k.finish();
    require(c.constants.C1 > 0 && c.constants.C2 > 0 && c.constants.C3 > 0 && c.constants.C4 > 0, "constants",
            "must be positive");
  }
  if (f.has("overrides")) parse_overrides(f.at("overrides"), c);
  f.get("holdout", c.holdout);
  require(c.holdout >= 1, "holdout", "must be positive");
  f.get("target_slack", c.target_slack);
  require(c.target_slack >= 0.0, "target_slack", "must be nonnegative");
  f.get("force_learn", c.force_learn);
  if (f.has("fooling")) parse_fooling(f.at("fooling"), c.fooling, c.fool_tester);
  c.fooling.seed = c.seed;
  if (f.has("approx")) parse_approx(f.at("approx"), c.approx);
  f.finish();

  require(c.eps > 0.0 && c.eps < 1.0, "eps", "must lie in (0, 1)");
  static const std::set<std::string> dists{"gaussian", "cube", "rademacher-coord", "scaled-gaussian", "parity-planted"};
  require(dists.count(c.distribution) == 1, "distribution", "unknown distribution '" + c.distribution + "'");
  require(c.scale > 0.0, "scale", "must be positive");
  if (c.mode == Mode::cube_pair || c.mode == Mode::decision_list)
    require(c.n <= 64, "n", "cube modes need n <= 64");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tlkit::cli
