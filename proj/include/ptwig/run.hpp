#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ptwig/serialize.hpp"
#include "ptwig/wigner.hpp"

namespace ptwig {

enum class Command {
  SpectrumSweep,
  EpFind,
  WignerGrid,
  FlowFieldCmd,
  CirculationSweep,
  Validate,
};

struct RunConfig {
  Command command = Command::Validate;
  std::vector<double> eps_values;  // one value for the grid commands
  std::string eps_text;            // original range text, echoed in outputs
  int n_max = 71;
  int state_index = 1;
  PhaseGrid grid;
  std::string output_path;  // empty -> "<command>.<ext>"
  OutputFormat format = OutputFormat::Csv;
  bool include_dwdt = false;
  std::pair<int, int> branches{1, 2};
  std::pair<double, double> bracket{1.40, 1.45};
  double ep_tol = 1e-5;
  double r_init = 7.0;
  int workers = 1;
  std::string output_dir;  // prepended to relative output paths
};

// "start:stop:step" (stop included when it lands within half a step) or a
// single value.
std::vector<double> parse_eps_range(const std::string& text);

// Reads PTWIG_OUTPUT_DIR / PTWIG_WORKERS into the config when set.
void apply_env_overrides(RunConfig& config);

// Exit status: 0 ok, 2 malformed config, 3 numerical non-convergence,
// 4 I/O failure. Progress and validate reports go to `out`.
int run(const RunConfig& config, std::ostream& out);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Oracle cross-check battery behind the `validate` command.
std::vector<CheckResult> run_validation(std::ostream* progress = nullptr);

}  // namespace ptwig
