#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "tlkit/cli.hpp"

using namespace tlkit;
using namespace tlkit::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto d = fs::temp_directory_path() / "tlkit_cli_test";
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exe(const std::string& args) {
  const std::string cmd = std::string(TLKIT_EXE) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

const char* kGaussDesk = R"({"mode": "gauss_pair", "seed": 3, "n": 3, "eps": 0.5, "profile": "desk",
  "labels": {"kind": "halfspace", "w": [1, 0, 0], "noise": 0.1}, "holdout": 5000})";

}  // namespace

TEST_CASE("load_config: minimal gauss_pair config gets default constants") {
  const auto c = parse_config(R"({"mode": "gauss_pair", "seed": 1})");
  CHECK(c.mode == Mode::gauss_pair);
  CHECK(c.constants.C1 == 1.0);
  CHECK(c.constants.C2 == 1.0);
  CHECK(c.constants.C3 == 1.0);
  CHECK(c.constants.C4 == 1.0);
  CHECK(c.trials == 1);
  CHECK(c.profile == "formula");
}

TEST_CASE("load_config: validation errors name the field") {
  auto err = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(err(R"({"mode": "gauss_pair", "seed": 1, "trials": 0})").find("trials") == 0);
  CHECK(err(R"({"mode": "gauss_pair"})").find("seed") == 0);
  CHECK(err(R"({"mode": "gauss_pair", "seed": 1, "colour": 2})").find("colour: unknown key") == 0);
  CHECK(err(R"({"mode": "gauss_pair", "seed": 1, "overrides": {"Delta": 4, "x": 1}})").find("overrides.x") == 0);
  CHECK(err(R"({"mode": "nope", "seed": 1})").find("mode") == 0);
  CHECK(err(R"({"mode": "gauss_pair", "seed": 1, "eps": 1.5})").find("eps") == 0);
  CHECK(err(R"({"mode": "gauss_pair", "seed": "x"})").find("seed: wrong type") == 0);
  CHECK(err("{\n  \"mode\": \"gauss_pair\",\n  \"seed\" 1\n}").find("line 3") != std::string::npos);
  CHECK(parse_config(R"({"mode": "approx_bench"})").mode == Mode::approx_bench);
}

TEST_CASE("load_config: moment_tol override is recorded once as a deviation") {
  auto o = run_config_text(R"({"mode": "gauss_pair", "seed": 1, "n": 2, "eps": 0.5,
    "overrides": {"moment_tol": 0.2, "N2_cap": 100, "tail_cap": 20000}, "labels": {"kind": "coin"}})");
  REQUIRE(o.exit_code != 1);
  const auto& dev = o.report["deviations"];
  int hits = 0;
  for (const auto& d : dev) hits += d.get<std::string>().find("moment_tol") != std::string::npos;
  CHECK(hits == 1);
  CHECK(dev.size() == 3);
  CHECK(o.report["effective_params"]["moment_tol"] == 0.2);
}

TEST_CASE("a formula-profile run with no overrides has no deviations") {
  auto o = run_config_text(R"({"mode": "approx_bench", "approx": {"degrees": [4]}})");
  CHECK(o.exit_code == 0);
  CHECK(o.report["deviations"].empty());
  auto g = run_config_text(R"({"mode": "gauss_pair", "seed": 1, "n": 2, "eps": 0.5, "force_learn": true})");
  CHECK(g.exit_code != 1);
  CHECK(g.report["deviations"].empty());
}

TEST_CASE("ingest_dataset examples") {
  const auto d = ingest_csv_text("x1,x2,y\n0.5,1,1\n-2,3e-1,-1\n");
  CHECK(d.size() == 2);
  CHECK(d.dim == 2);
  CHECK(d.row(1)[1] == 0.3);
  CHECK(d.label(1) == -1);
  CHECK_THROWS_AS(ingest_csv_text(""), IngestError);
  CHECK_THROWS_AS(ingest_csv_text("x1,y\n1,0\n"), IngestError);
  const auto m = ingest_csv_text("y,x1\n0,1\n1,2\n", true);
  CHECK(m.label(0) == -1);
  CHECK(m.row(1)[0] == 2.0);
  try {
    ingest_csv_text("x1,y\n1,1\nabc,1\n");
    FAIL("expected an error");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("row 3, column 1") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_csv_text("x1,x2\n1,1\n"), IngestError);
  CHECK_THROWS_AS(ingest_csv_text("x1,y\n1,2\n"), IngestError);
}

TEST_CASE("CSV round trip") {
  Stream s(make_gaussian(2), coin_labels(), 1, "csv");
  const auto d = s.take(10);
  const auto e = ingest_csv_text(to_csv(d));
  CHECK(e.x == d.x);
  CHECK(e.y == d.y);
}

TEST_CASE("run: Gaussian accepted and learned, Rademacher coordinate rejected") {
  auto ok = run_config_text(kGaussDesk);
  CHECK(ok.exit_code == 0);
  CHECK(ok.report["aggregate"]["accept_rate"] == 1.0);
  CHECK(ok.report["per_trial"][0]["learner"]["target_met"] == true);

  std::string rad = kGaussDesk;
  rad.replace(rad.find("\"n\""), 0, "\"distribution\": \"rademacher-coord\", ");
  auto bad = run_config_text(rad);
  CHECK(bad.exit_code == 2);
  CHECK(bad.report["per_trial"][0]["verdict"]["stage"] == "moments");
  CHECK(bad.report["per_trial"][0]["learner"].is_null());
  auto forced = run_config_text(rad, true);
  CHECK(forced.exit_code == 2);
  CHECK(forced.report["per_trial"][0]["learner"].is_object());

  auto broken = run_config_text("{\"mode\": ");
  CHECK(broken.exit_code == 1);
  CHECK(broken.report["error"]["kind"] == "config");
}

TEST_CASE("run: identical config and seed give byte-identical reports") {
  const std::string cfg = R"({"mode": "cube_pair", "seed": 9, "n": 5, "eps": 0.5, "distribution": "cube",
    "trials": 3, "overrides": {"k": 2, "degree": 3}, "labels": {"kind": "majority", "k": 3, "noise": 0.1}})";
  const auto a = run_config_text(cfg), b = run_config_text(cfg);
  CHECK(a.exit_code == 0);
  CHECK(stable_dump(a.report) == stable_dump(b.report));
  CHECK(a.report.contains("timestamp"));
  CHECK(stable_dump(a.report).find("timestamp") == std::string::npos);
}

TEST_CASE("run: decision_list and fooling modes") {
  auto dl = run_config_text(R"({"mode": "decision_list", "seed": 4, "n": 8, "eps": 0.25, "distribution": "cube",
    "overrides": {"dl_samples": 5000},
    "labels": {"kind": "decision_list", "noise": 0.05,
               "list": {"order": [3, 7], "bits": [1, -1], "values": [-1, 1], "default": -1}}})");
  CHECK(dl.exit_code == 0);
  CHECK(dl.report["deviations"].size() == 1);

  auto fo = run_config_text(R"({"mode": "fooling", "seed": 2,
    "fooling": {"M": 5000, "N": 100, "trials": 4, "n": 20}})");
  CHECK(fo.exit_code == 0);
  CHECK(fo.report["fooling"]["collision_exact"].get<double>() > 0.0);
}

TEST_CASE("run: replayed CSV data") {
  const auto dir = scratch();
  Stream s(make_gaussian(2), halfspace_labels({1.0, 0.0}, 0.0, 0.0), 5, "file");
  write(dir / "data.csv", to_csv(s.take(60000)));
  const std::string cfg = R"({"mode": "gauss_pair", "seed": 1, "n": 2, "eps": 0.5, "profile": "desk",
    "overrides": {"N2_cap": 20000, "tail_cap": 20000, "moment_tol": 0.3},
    "data": {"path": ")" + (dir / "data.csv").string() + R"("}})";
  auto o = run_config_text(cfg);
  CHECK(o.exit_code == 0);
  CHECK(o.report["per_trial"][0]["learner"]["holdout_samples"] == 60000 - 40000 - 256);
  auto missing = run_config_text(R"({"mode": "gauss_pair", "seed": 1, "data": {"path": "/nonexistent.csv"}})");
  CHECK(missing.exit_code == 1);
  CHECK(missing.report["error"]["kind"] == "ingest");
}

TEST_CASE("tlkit executable: run, fool, gen and exit codes") {
  const auto dir = scratch();
  write(dir / "good.json", kGaussDesk);
  CHECK(exe("run --config " + (dir / "good.json").string() + " --out " + (dir / "good.out.json").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "good.out.json"));
  CHECK(rep["exit_code"] == 0);

  write(dir / "bad.json", R"({"mode": "gauss_pair", "seed": 1, "trials": 0})");
  CHECK(exe("run --config " + (dir / "bad.json").string()) == 1);
  CHECK(exe("fool --config " + (dir / "good.json").string()) == 1);

  write(dir / "fool.json", R"({"mode": "fooling", "seed": 2, "fooling": {"M": 2000, "N": 50, "trials": 2}})");
  CHECK(exe("fool --config " + (dir / "fool.json").string()) == 0);

  CHECK(exe("gen --dist parity-planted --n 4 --samples 20 --seed 3 --out " + (dir / "g.csv").string()) == 0);
  const auto g = ingest_csv(dir / "g.csv");
  CHECK(g.size() == 20);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.row(i)[2] == g.row(i)[0] * g.row(i)[1]);
  CHECK(exe("gen --dist nope --seed 1") != 0);
  const std::string threaded = "TLKIT_THREADS=2 " + std::string(TLKIT_EXE) + " run --config " +
                               (dir / "good.json").string() + " --out " + (dir / "t2.json").string();
  CHECK(WEXITSTATUS(std::system(threaded.c_str())) == 0);
  CHECK(stable_dump(nlohmann::ordered_json::parse(slurp(dir / "t2.json"))) ==
        stable_dump(nlohmann::ordered_json::parse(slurp(dir / "good.out.json"))));
}
