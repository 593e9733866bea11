#pragma once

#include <json.hpp>

#include "run_config.hpp"

namespace diffavg::cli {

/// Result of one subcommand: a JSON summary for stdout / the sidecar, an
/// optional CSV table, and whether the run met its own numerical contract.
struct Outcome {
  nlohmann::json summary;
  std::string csv;
  bool ok = true;
};

Outcome run_command(const RunConfig& cfg);

/// write-then-rename so readers never see a partial file
void write_atomic(const std::string& path, const std::string& text);

}  // namespace diffavg::cli
