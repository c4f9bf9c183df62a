#pragma once

#include <string>
#include <vector>

#include "rh/checks.hpp"
#include "rh/config.hpp"

namespace rh {

enum class Stage { Nodes, Pade, Equilibrium, Phase, Parametrix };
const char* stage_name(Stage s);

struct StageStatus {
  Stage stage;
  std::string status;  // "ok", "not-run", "skipped: regime not regular", "error: ..."
};

struct AcceptanceReport {
  std::string config_name;
  std::string command = "verify";  // subcommand that produced the report
  std::string cfg_hash;
  std::string canonical_config;
  std::string contour;
  std::string simd_backend;
  std::vector<StageStatus> stages;  // all five, in pipeline order
  std::vector<CheckRecord> checks;  // sorted by id
  std::vector<Table> tables;
};

// Runs the requested stages (plus the stages they depend on) in order
// nodes -> pade -> equilibrium -> phase -> parametrix. Stage errors are
// caught, tagged and recorded; the report is always returned.
AcceptanceReport run_pipeline(const RunConfig& cfg, const std::vector<Stage>& requested);

// 0 if every check is ok, 1 otherwise (including stage errors).
int report_exit_code(const AcceptanceReport& r);

}  // namespace rh
