#include "tlkit/verdict.hpp"

namespace tlkit {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::tail: return "tail";
    case Stage::moments: return "moments";
    case Stage::ok: return "ok";
  }
  return "?";
}

nlohmann::ordered_json Verdict::to_json() const {
  nlohmann::ordered_json j;
  j["accept"] = accept;
  j["stage"] = stage_name(stage);
  if (worst_coordinate) j["worst_coordinate"] = *worst_coordinate + 1;
  else j["worst_coordinate"] = nullptr;
  if (worst_index) j["worst_index"] = worst_index->key(dim);
  else j["worst_index"] = nullptr;
  j["gap"] = gap;
  j["threshold"] = threshold;
  j["samples_used"] = samples_used;
  return j;
}

}  // namespace tlkit
