#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydcrit/scenario.hpp"

namespace rydcrit::runner {

inline constexpr int kSchemaVersion = 1;

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool parallel = false;
};

struct ScenarioResult {
  std::string name;
  std::vector<std::string> files;  // written artifacts, in write order
  nlohmann::ordered_json metrics;  // headline numbers also echoed in the summary line

  std::string summary() const;
};

// Runs one scenario pipeline and writes its artifacts under out_dir/name/.
ScenarioResult run(const scenario::Scenario& sc, const RunOptions& options = {});

}  // namespace rydcrit::runner
