#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tlkit/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tlkit::cli::ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const tlkit::cli::RunOutcome& o, const std::string& out) {
  const std::string text = o.report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "tlkit: cannot write '" << out << "'\n";
      return 1;
    }
    f << text;
  }
  if (o.report.contains("error")) std::cerr << "tlkit: " << o.report["error"]["message"].get<std::string>() << "\n";
  return o.exit_code;
}

int run_command(const std::string& config, bool force_learn, std::string out, bool fooling_only) {
  std::string text;
  try {
    text = read_file(config);
  } catch (const std::exception& e) {
    tlkit::cli::RunOutcome o;
    o.exit_code = 1;
    o.report["error"] = {{"kind", "config"}, {"message", e.what()}};
    o.report["exit_code"] = 1;
    return emit(o, out);
  }
  if (fooling_only) {
    bool wrong_mode = false;
    try {
      wrong_mode = tlkit::cli::parse_config(text).mode != tlkit::cli::Mode::fooling;
    } catch (const std::exception&) {
      // run_config_text below reports the parse or validation error
    }
    if (wrong_mode) {
      tlkit::cli::RunOutcome o;
      o.exit_code = 1;
      o.report["error"] = {{"kind", "config"}, {"message", "mode: fool needs mode 'fooling'"}};
      o.report["exit_code"] = 1;
      return emit(o, out);
    }
  }
  const auto o = tlkit::cli::run_config_text(text, force_learn);
  if (out.empty() && o.report.contains("config") && o.report["config"].contains("output"))
    out = o.report["config"]["output"].get<std::string>();
  return emit(o, out);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("TLKIT_THREADS")) {
    const int k = std::atoi(t);
    if (k > 0) omp_set_num_threads(k);
  }

  CLI::App app{"tester-learner experiments"};
  app.require_subcommand(1);

  std::string config, out;
  bool force_learn = false;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config, "config JSON")->required();
  run->add_flag("--force-learn", force_learn, "run the learner even when the tester rejects");
  run->add_option("--out", out, "report path (default: stdout)");

  auto* fool = app.add_subcommand("fool", "run a fooling experiment config");
  fool->add_option("--config", config, "config JSON")->required();
  fool->add_option("--out", out, "report path (default: stdout)");

  std::string dist = "gaussian", labels = "halfspace";
  std::size_t n = 3, samples = 1000;
  std::uint64_t seed = 0;
  double noise = 0.0, scale = 1.5;
  auto* gen = app.add_subcommand("gen", "write a labelled sample as CSV");
  gen->add_option("--dist", dist, "distribution")
      ->check(CLI::IsMember({"gaussian", "cube", "rademacher-coord", "scaled-gaussian", "parity-planted"}));
  gen->add_option("--n", n, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "seed")->required();
  gen->add_option("--labels", labels, "label model")->check(CLI::IsMember({"halfspace", "coin"}));
  gen->add_option("--noise", noise, "label noise rate")->check(CLI::Range(0.0, 0.5));
  gen->add_option("--scale", scale, "scale for scaled-gaussian")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_command(config, force_learn, out, false);
  if (*fool) return run_command(config, false, out, true);

  try {
    using namespace tlkit;
    std::vector<double> w(n, 0.0);
    w[0] = 1.0;
    const auto lm = labels == "coin" ? coin_labels() : halfspace_labels(w, 0.0, noise);
    Stream s(make_distribution(dist, n, scale), lm, seed, "gen");
    const std::string csv = cli::to_csv(s.take(samples));
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream f(out);
      if (!f) throw std::runtime_error("cannot write '" + out + "'");
      f << csv;
    }
  } catch (const std::exception& e) {
    std::cerr << "tlkit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
