#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amd/presets.hpp"

namespace amd {
namespace app {

/// Everything an experiment run needs. Populated from the command line and/or
/// a JSON config file (command-line flags win); the AMD_SEED environment
/// variable overrides the seed unconditionally.
struct ExperimentConfig {
  std::string experiment;  // decompose | gaps | veff | evolve | scan | holonomy
  std::string preset;

  // inline system, alternative to a preset (decompose / gaps / evolve)
  struct InlineSystem {
    int dim = 0;
    Operator hamiltonian;
    std::vector<Operator> dissipators;
  };
  std::optional<InlineSystem> system;

  // rates and loop parameters
  double omega = 1.0;
  double gamma_plus = 1.0;
  double gamma_minus = 3.0;
  double gamma = 5.0;
  double loop_a = std::sqrt(2.0) * M_PI;
  double loop_b = std::sqrt(2.0) * M_PI;

  // run parameters
  std::vector<double> T_values;
  double T = 200.0;
  long steps = 0;        // 0: automatic
  int s_points = 101;
  int transport_N = 2000;
  std::vector<std::string> v_ops = {"sigma-z@1"};
  std::string method = "both";  // holonomy: transport | full | both
  bool start_b_mixed = false;

  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  bool plot = false;
  std::string out_dir = ".";
};

/// Load a config file (schema_version 1) into `cfg`; fields present in the
/// file overwrite current values.
void load_config_file(const std::string& path, ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Validate and execute; writes report.json, data.csv and optionally plot.svg
/// under cfg.out_dir. Returns the process exit code (0 ok, 2 validation
/// error, 3 numerical diagnostic).
int run_experiment(const ExperimentConfig& cfg);

/// Text table of the preset registry.
std::string preset_table();

/// Full command-line entry point (argument parsing + dispatch).
int main(int argc, char** argv);

}  // namespace app
}  // namespace amd
