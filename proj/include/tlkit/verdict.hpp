#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"
#include "tlkit/polycore.hpp"

namespace tlkit {

enum class Stage { tail, moments, ok };

const char* stage_name(Stage s);

struct Verdict {
  bool accept = false;
  Stage stage = Stage::ok;  // ok iff accept
  std::size_t dim = 0;
  std::optional<std::size_t> worst_coordinate;
  std::optional<MultiIndex> worst_index;
  double gap = 0.0;        // deviation at the worst coordinate / index
  double threshold = 0.0;  // tolerance the gap was compared against
  std::size_t samples_used = 0;

  nlohmann::ordered_json to_json() const;
};

}  // namespace tlkit
