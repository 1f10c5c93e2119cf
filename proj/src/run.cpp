#include "ptwig/run.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ptwig/quadrature.hpp"
#include "ptwig/spectrum.hpp"
#include "ptwig/version.hpp"

namespace ptwig {

std::vector<double> parse_eps_range(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  auto to_double = [&](const std::string& s) {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument("bad number in epsilon range: '" + s + "'");
    return v;
  };
  if (c1 == std::string::npos) {
    out.push_back(to_double(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("epsilon range must be start:stop:step");
  const double start = to_double(text.substr(0, c1));
  const double stop = to_double(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = to_double(text.substr(c2 + 1));
  if (!(step > 0.0)) throw std::invalid_argument("epsilon step must be > 0");
  if (!(stop >= start))
    throw std::invalid_argument("epsilon range must ascend");
  // stop is included when it lands within half a step of the lattice
  const int count = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
  for (int k = 0; k < count; ++k) out.push_back(start + k * step);
  return out;
}

void apply_env_overrides(RunConfig& config) {
  if (const char* dir = std::getenv("PTWIG_OUTPUT_DIR"))
    config.output_dir = dir;
  if (const char* w = std::getenv("PTWIG_WORKERS")) {
    const int n = std::atoi(w);
    if (n >= 1) config.workers = n;
  }
}

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::SpectrumSweep:
      return "spectrum-sweep";
    case Command::EpFind:
      return "ep-find";
    case Command::WignerGrid:
      return "wigner-grid";
    case Command::FlowFieldCmd:
      return "flow-field";
    case Command::CirculationSweep:
      return "circulation-sweep";
    default:
      return "validate";
  }
}

std::string resolve_output(const RunConfig& cfg) {
  std::string path = cfg.output_path;
  if (path.empty())
    path = std::string(command_name(cfg.command)) +
           (cfg.format == OutputFormat::Csv ? ".csv" : ".json");
  if (!cfg.output_dir.empty() &&
      !std::filesystem::path(path).is_absolute())
    path = (std::filesystem::path(cfg.output_dir) / path).string();
  return path;
}

Meta base_meta(const RunConfig& cfg) {
  Meta m;
  m.emplace_back("generator", kGenerator);
  m.emplace_back("command", command_name(cfg.command));
  if (!cfg.eps_text.empty()) m.emplace_back("eps", cfg.eps_text);
  m.emplace_back("n_max", std::to_string(cfg.n_max));
  m.emplace_back("tol_real", format_double(1e-8));
  return m;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.n_max < 8 || cfg.n_max > 100)
    throw std::invalid_argument("n_max must be in [8, 100]");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  switch (cfg.command) {
    case Command::SpectrumSweep:
    case Command::CirculationSweep:
      if (cfg.eps_values.empty())
        throw std::invalid_argument("an epsilon range is required");
      break;
    case Command::WignerGrid:
    case Command::FlowFieldCmd:
      if (cfg.eps_values.size() != 1)
        throw std::invalid_argument("exactly one epsilon value is required");
      if (cfg.state_index < 0 || cfg.state_index >= cfg.n_max)
        throw std::invalid_argument("state index out of range");
      validate_grid(cfg.grid);
      break;
    case Command::EpFind:
      if (!(cfg.bracket.first < cfg.bracket.second))
        throw std::invalid_argument("bracket must be (lo, hi) with lo < hi");
      break;
    default:
      break;
  }
}

Table spectrum_sweep_table(const RunConfig& cfg) {
  const auto points = sweep(cfg.eps_values, cfg.n_max, cfg.workers);
  Table t;
  t.columns = {"epsilon", "level", "re_e", "im_e", "class", "branch"};
  for (const auto& pt : points) {
    for (int lvl = 0; lvl < pt.spectrum.n_max; ++lvl) {
      const auto& p = pt.spectrum.pairs[lvl];
      t.rows.push_back({format_double(pt.spectrum.epsilon),
                        std::to_string(lvl), format_double(p.value.real()),
                        format_double(p.value.imag()), to_string(p.cls),
                        std::to_string(pt.branch_id[lvl])});
    }
  }
  return t;
}

Table ep_find_table(const RunConfig& cfg) {
  const EpResult r =
      find_ep(cfg.branches, cfg.bracket, cfg.n_max, cfg.ep_tol);
  Table t;
  t.columns = {"eps_ep",   "bracket_lo", "bracket_hi",
               "branch_a", "branch_b",   "n_max"};
  t.rows.push_back({format_double(r.eps_ep), format_double(r.bracket.first),
                    format_double(r.bracket.second),
                    std::to_string(r.branch_pair.first),
                    std::to_string(r.branch_pair.second),
                    std::to_string(r.n_max)});
  return t;
}

struct StatePick {
  Eigen::VectorXcd coeffs;
  std::complex<double> energy;
};

StatePick pick_state(double eps, int n_max, int index) {
  const Spectrum s = eigendecompose(assemble(eps, n_max));
  return {s.pairs[index].coeffs, s.pairs[index].value};
}

Table wigner_grid_table(const RunConfig& cfg, bool with_flow, Meta& meta) {
  const double eps = cfg.eps_values.front();
  const StatePick st = pick_state(eps, cfg.n_max, cfg.state_index);
  meta.emplace_back("state", std::to_string(cfg.state_index));
  meta.emplace_back("re_e", format_double(st.energy.real()));
  meta.emplace_back("im_e", format_double(st.energy.imag()));
  const WignerField w = wigner_from_coeffs(st.coeffs, cfg.grid, st.energy);
  Table t;
  t.columns = {"x", "p", "w"};
  FlowField flow;
  if (with_flow) {
    t.columns = {"x", "p", "w", "jx", "jp", "nj"};
    flow = flow_field(w, st.coeffs, PotentialSpec{eps});
  }
  for (int i = 0; i < cfg.grid.nx; ++i) {
    for (int j = 0; j < cfg.grid.np; ++j) {
      std::vector<std::string> row{format_double(cfg.grid.x(i)),
                                   format_double(cfg.grid.p(j)),
                                   format_double(w.values(i, j))};
      if (with_flow) {
        row.push_back(format_double(flow.jx(i, j)));
        row.push_back(format_double(flow.jp(i, j)));
        row.push_back(format_double(flow.norm(i, j)));
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table circulation_sweep_table(const RunConfig& cfg) {
  Table t;
  t.columns = {"epsilon", "state",   "re_e",           "im_e",
               "circulation", "r_final", "growth_history"};
  for (double eps : cfg.eps_values) {
    const StatePick st = pick_state(eps, cfg.n_max, cfg.state_index);
    const CirculationResult c = circulation(
        st.coeffs, st.energy, PotentialSpec{eps}, cfg.r_init, cfg.include_dwdt);
    std::string growth;
    for (const auto& [R, v] : c.growth_history) {
      if (!growth.empty()) growth += ';';
      growth += format_double(R) + ":" + format_double(v);
    }
    t.rows.push_back({format_double(eps), std::to_string(cfg.state_index),
                      format_double(st.energy.real()),
                      format_double(st.energy.imag()), format_double(c.value),
                      format_double(c.r_final), growth});
  }
  return t;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  RunConfig cfg = config;
  try {
    validate_config(cfg);
  } catch (const std::exception& e) {
    out << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    Meta meta = base_meta(cfg);
    Table table;
    switch (cfg.command) {
      case Command::SpectrumSweep:
        table = spectrum_sweep_table(cfg);
        break;
      case Command::EpFind:
        meta.emplace_back("bracket", format_double(cfg.bracket.first) + "," +
                                         format_double(cfg.bracket.second));
        meta.emplace_back("branches",
                          std::to_string(cfg.branches.first) + "," +
                              std::to_string(cfg.branches.second));
        meta.emplace_back("tol", format_double(cfg.ep_tol));
        table = ep_find_table(cfg);
        break;
      case Command::WignerGrid:
        table = wigner_grid_table(cfg, false, meta);
        break;
      case Command::FlowFieldCmd:
        table = wigner_grid_table(cfg, true, meta);
        break;
      case Command::CirculationSweep:
        meta.emplace_back("state", std::to_string(cfg.state_index));
        meta.emplace_back("include_dwdt", cfg.include_dwdt ? "true" : "false");
        meta.emplace_back("r_init", format_double(cfg.r_init));
        table = circulation_sweep_table(cfg);
        break;
      case Command::Validate: {
        const auto checks = run_validation(&out);
        bool all = true;
        for (const auto& c : checks) all = all && c.pass;
        out << (all ? "validate: all checks passed"
                    : "validate: FAILURES present")
            << "\n";
        if (!all) return 3;
        return 0;
      }
    }
    const std::string path = resolve_output(cfg);
    try {
      write_file_atomic(path, serialize(table, meta, cfg.format));
    } catch (const std::ios_base::failure& e) {
      out << "i/o error: " << e.what() << "\n";
      return 4;
    }
    out << command_name(cfg.command) << ": wrote " << path << "\n";
    return 0;
  } catch (const ConvergenceError& e) {
    out << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    out << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    out << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    out << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace ptwig
