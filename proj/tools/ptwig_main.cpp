#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptwig/run.hpp"
#include "ptwig/version.hpp"

namespace {

using ptwig::Command;
using ptwig::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& format,
                std::string& eps_text) {
  cmd->add_option("--out", cfg.output_path, "output file path");
  cmd->add_option("--format", format, "output format (csv|json)");
  cmd->add_option("--n-max", cfg.n_max, "Fock basis truncation")
      ->check(CLI::Range(8, 100));
  cmd->add_option("--workers", cfg.workers, "worker thread count")
      ->check(CLI::PositiveNumber);
  (void)eps_text;
}

void add_grid(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--xmin", cfg.grid.x_min);
  cmd->add_option("--xmax", cfg.grid.x_max);
  cmd->add_option("--pmin", cfg.grid.p_min);
  cmd->add_option("--pmax", cfg.grid.p_max);
  cmd->add_option("--nx", cfg.grid.nx, "x node count (odd, >= 33)");
  cmd->add_option("--np", cfg.grid.np, "p node count (odd, >= 33)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectra, Wigner distributions, flow fields and circulation "
      "diagnostics for the PT-symmetric oscillator family with potential "
      "-(ix)^eps"};
  app.set_version_flag("--version", ptwig::kGenerator);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string eps_text;
  std::string branches_text = "1,2";
  std::string bracket_text = "1.40,1.45";

  auto* sweep = app.add_subcommand("spectrum-sweep",
                                   "eigenvalues and branches over epsilon");
  sweep->add_option("--eps", eps_text, "epsilon range start:stop:step")
      ->required();
  add_common(sweep, cfg, format, eps_text);

  auto* ep = app.add_subcommand("ep-find", "bisect the exceptional point");
  ep->add_option("--branches", branches_text, "branch pair, e.g. 1,2");
  ep->add_option("--bracket", bracket_text, "epsilon bracket lo,hi");
  ep->add_option("--tol", cfg.ep_tol, "bisection width tolerance");
  add_common(ep, cfg, format, eps_text);

  auto* wg = app.add_subcommand("wigner-grid",
                                "Wigner distribution of one eigenstate");
  wg->add_option("--eps", eps_text, "epsilon value")->required();
  wg->add_option("--state", cfg.state_index, "eigenstate index (0 = ground)");
  add_grid(wg, cfg);
  add_common(wg, cfg, format, eps_text);

  auto* ff = app.add_subcommand("flow-field",
                                "Wigner flow (J_x, J_p) of one eigenstate");
  ff->add_option("--eps", eps_text, "epsilon value")->required();
  ff->add_option("--state", cfg.state_index, "eigenstate index (0 = ground)");
  add_grid(ff, cfg);
  add_common(ff, cfg, format, eps_text);

  auto* cs = app.add_subcommand("circulation-sweep",
                                "circulation order parameter over epsilon");
  cs->add_option("--eps", eps_text, "epsilon range start:stop:step")
      ->required();
  cs->add_option("--state", cfg.state_index, "eigenstate index (0 = ground)");
  cs->add_option("--r-init", cfg.r_init, "initial half-width of the domain");
  cs->add_flag("--include-dwdt", cfg.include_dwdt,
               "subtract the dW/dt = 2 Im(E) W term inside the area integral");
  add_common(cs, cfg, format, eps_text);

  auto* val =
      app.add_subcommand("validate", "run the oracle cross-check battery");
  add_common(val, cfg, format, eps_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) cfg.command = Command::SpectrumSweep;
    if (ep->parsed()) cfg.command = Command::EpFind;
    if (wg->parsed()) cfg.command = Command::WignerGrid;
    if (ff->parsed()) cfg.command = Command::FlowFieldCmd;
    if (cs->parsed()) cfg.command = Command::CirculationSweep;
    if (val->parsed()) cfg.command = Command::Validate;

    cfg.format = ptwig::parse_format(format);
    if (!eps_text.empty()) {
      cfg.eps_text = eps_text;
      cfg.eps_values = ptwig::parse_eps_range(eps_text);
    }
    if (ep->parsed()) {
      const auto comma_pair = [](const std::string& s, auto parse) {
        const auto c = s.find(',');
        if (c == std::string::npos)
          throw std::invalid_argument("expected 'a,b': " + s);
        return std::make_pair(parse(s.substr(0, c)), parse(s.substr(c + 1)));
      };
      cfg.branches = comma_pair(
          branches_text, [](const std::string& s) { return std::stoi(s); });
      cfg.bracket = comma_pair(
          bracket_text, [](const std::string& s) { return std::stod(s); });
    }
    ptwig::apply_env_overrides(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  return ptwig::run(cfg, std::cout);
}
