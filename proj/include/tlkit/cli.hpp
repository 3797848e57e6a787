#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlkit/cube_pair.hpp"
#include "tlkit/dataset.hpp"
#include "tlkit/fooling.hpp"
#include "tlkit/gauss_pair.hpp"
#include "tlkit/sources.hpp"

namespace tlkit::cli {

// Machine-readable error kinds, echoed in reports as error.kind.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { gauss_pair, cube_pair, decision_list, fooling, approx_bench };

const char* mode_name(Mode m);

struct LabelSpec {
  std::string kind = "halfspace";  // halfspace, boundary_flip, coin, constant, majority, decision_list
  std::vector<double> w;           // empty: e_1
  double theta = 0.0;
  double noise = 0.0;
  double flip_mass = 0.1;
  int value = 1;
  int majority_k = 3;
  std::optional<DecisionList> list;
};

struct DataSpec {
  std::string path;
  bool labels01 = false;
};

struct ApproxSpec {
  std::string target = "ramp";  // ramp or trapezoid
  double center = 0.0;
  double eps = 0.2;
  double w = 2.0;
  std::vector<int> degrees{10, 20, 40, 80};
  int quadrature_points = 0;
};

struct ExperimentConfig {
  Mode mode = Mode::gauss_pair;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::optional<std::string> output;
  double eps = 0.5;
  std::size_t n = 3;
  std::string distribution = "gaussian";
  double scale = 1.5;
  LabelSpec labels;
  std::optional<DataSpec> data;
  std::string profile = "formula";  // formula or desk
  PairConstants constants;
  GaussOverrides gauss;
  CubeOverrides cube;
  std::optional<std::uint64_t> dl_samples;
  std::size_t holdout = 20000;
  double target_slack = 0.15;
  FoolingConfig fooling;
  std::string fool_tester = "auto";  // auto, gauss, kwise
  ApproxSpec approx;
  bool force_learn = false;
  nlohmann::ordered_json source;  // the parsed document, echoed in reports
};

// Unknown keys are rejected; parse errors carry line and column, validation
// errors name the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// CSV with a header row; the label column is "y", every other column a feature
// in column order. Labels must be -1/+1, or 0/1 when map01 is set.
LabeledDataset ingest_csv(const std::string& path, bool map01 = false);
LabeledDataset ingest_csv_text(const std::string& text, bool map01 = false);
std::string to_csv(const LabeledDataset& d);

struct RunOutcome {
  nlohmann::ordered_json report;
  int exit_code = 0;  // 0 ok, 1 error, 2 tester rejected, 3 learner missed its target
};

RunOutcome run(const ExperimentConfig& cfg);
// Parses, runs, and converts any failure into an error report with exit code 1.
RunOutcome run_config_text(const std::string& text, bool force_learn = false);

// The report with the timestamp field removed, for byte comparisons.
std::string stable_dump(const nlohmann::ordered_json& report);

}  // namespace tlkit::cli
