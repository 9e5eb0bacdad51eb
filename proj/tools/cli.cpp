#include "cli.hpp"

#include "vmdg/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vmdg {
namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat `key = value` file turned into `--key value` tokens that precede the
// command-line flags, so flags given later win.
std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("bad cell count '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Options shared by run and converge.
struct RunFlags {
  RunConfig config;
  std::string nv;
  std::string flux = "upwind";
  std::string mapping;

  void attach(CLI::App& app) {
    app.add_option("--scenario", config.scenario, "scenario name");
    app.add_option("--k", config.k, "polynomial degree");
    app.add_option("--nx", config.nx, "cells in x (0: scenario default)");
    app.add_option("--nv", nv, "cells per v axis, comma separated");
    app.add_option("--cfl", config.cfl, "CFL number (<= 0: 0.3/(2k+1))");
    app.add_option("--t_final", config.t_final, "final time");
    app.add_option("--flux", flux, "upwind, central, alternating_EmBp, alternating_EpBm");
    app.add_option("--mapping", mapping, "classical or relativistic (default: scenario)");
    app.add_option("--stride", config.stride, "observer stride in steps");
    app.add_option("--output", config.output, "output path ('-' or empty: stdout)");
    app.add_option("--seed", config.seed, "seed");
    app.add_option("--adaptive_dt", config.adaptive_dt, "recompute tau every step");
    app.add_option("--sources", config.sources, "apply scenario source terms");
  }

  RunConfig resolve() const {
    RunConfig c = config;
    c.nv = parse_int_list(nv);
    c.flux = parse_flux_kind(flux);
    if (!mapping.empty()) c.mapping = parse_mapping(mapping);
    return c;
  }
};

template <class Write>
void emit(const std::string& path, std::ostream& out, Write&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  write(file);
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vlasov-Maxwell RKDG solver and verification harness", "vm_rkdg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.fallthrough();
  std::string config_path;

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "run one simulation and write diagnostics CSV");
  run_flags.attach(*run_cmd);

  RunFlags study_flags;
  int levels = 4;
  std::string mode = "spatial";
  bool assert_eoc = false;
  double min_eoc = std::nan("");
  auto* converge_cmd = app.add_subcommand("converge", "refinement study, writes convergence CSV");
  study_flags.attach(*converge_cmd);
  converge_cmd->add_option("--levels", levels, "refinement levels");
  converge_cmd->add_option("--mode", mode, "spatial, temporal or coupled");
  converge_cmd->add_option("--min_eoc", min_eoc, "EOC threshold for --assert");
  converge_cmd->add_flag("--assert", assert_eoc, "exit 1 when the EOC check fails");

  std::uint64_t id_seed = 7;
  int trials = 20;
  double tolerance = 1e-10;
  bool assert_ids = false;
  auto* identities_cmd = app.add_subcommand("verify-identities", "randomized a_h and b_h identities");
  identities_cmd->add_option("--seed", id_seed, "seed");
  identities_cmd->add_option("--trials", trials, "draws per configuration");
  identities_cmd->add_option("--tolerance", tolerance, "relative tolerance");
  identities_cmd->add_flag("--assert", assert_ids, "exit 1 unless every draw passes");

  std::string check_name;
  bool assert_check = false;
  auto* check_cmd = app.add_subcommand("scenario-check", "PDE spot check of scenarios");
  check_cmd->add_option("--scenario", check_name, "scenario (default: all)");
  check_cmd->add_flag("--assert", assert_check, "exit 1 when a check fails");

  for (auto* sub : {run_cmd, converge_cmd, identities_cmd, check_cmd}) {
    sub->add_option("--config", config_path, "flat key = value file; flags override it");
    for (auto* opt : sub->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  // A --config file is spliced in right after the subcommand name.
  std::vector<std::string> argv = args;
  for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
    if (argv[i] != "--config") continue;
    try {
      const auto tokens = read_config_file(argv[i + 1]);
      if (!argv.empty()) argv.insert(argv.begin() + 1, tokens.begin(), tokens.end());
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run_cmd) {
      const RunConfig config = run_flags.resolve();
      if (const auto w = theory_regime_warning(config.k); !w.empty()) err << "warning: " << w << '\n';
      const RunOutput result = run_simulation(config);
      emit(config.output, out, [&](std::ostream& os) { write_diagnostics_csv(os, result.records); });
      return 0;
    }

    if (*converge_cmd) {
      StudyConfig study;
      study.base = study_flags.resolve();
      study.levels = levels;
      study.mode = parse_study_mode(mode);
      if (assert_eoc && levels < 3) throw std::invalid_argument("--assert needs at least 3 levels");
      if (const auto w = theory_regime_warning(study.base.k); !w.empty()) err << "warning: " << w << '\n';
      const StudyResult result = converge(study);
      emit(study.base.output, out, [&](std::ostream& os) { write_convergence_csv(os, result.rows); });
      for (const auto& note : result.notes) err << "note: " << note << '\n';
      for (std::size_t l = 0; l < result.div_e.size(); ++l)
        err << "level " << l << " div_e residual " << result.div_e[l] << '\n';
      const double observed = result.combined_eoc();
      err << "final combined EOC: " << observed << '\n';
      if (!assert_eoc) return 0;
      bool ok = true;
      if (study.mode == StudyMode::temporal) {
        const double target = std::isnan(min_eoc) ? 2.75 : min_eoc;
        ok = observed >= target && observed <= 3.25 && result.pollution_check_passed.value_or(false);
      } else {
        const int k = study.base.k;
        const double fallback = study.base.flux == MaxwellFluxKind::upwind ? k + 0.4 : k;
        ok = observed >= (std::isnan(min_eoc) ? fallback : min_eoc);
      }
      err << (ok ? "EOC check passed" : "EOC check FAILED") << '\n';
      return ok ? 0 : 1;
    }

    if (*identities_cmd) {
      if (trials < 1) throw std::invalid_argument("trials must be >= 1");
      const IdentityReport report = verify_identities(id_seed, trials, tolerance);
      for (const auto& c : report.cases)
        out << std::left << std::setw(34) << c.name << ' ' << c.passes << '/' << c.trials
            << "  worst defect " << std::scientific << std::setprecision(3) << c.worst
            << std::defaultfloat << '\n';
      return assert_ids && !report.all_passed() ? 1 : 0;
    }

    if (*check_cmd) {
      std::vector<std::string> names = check_name.empty() ? scenario_names() : std::vector{check_name};
      bool all = true;
      for (const auto& name : names) {
        const ScenarioReport r = verify_scenario(lookup(name));
        out << std::left << std::setw(30) << r.name << ' ';
        if (r.has_exact)
          out << "residual " << std::scientific << std::setprecision(3) << r.max_relative_residual
              << std::defaultfloat;
        else
          out << "no exact solution";
        out << "  margin " << r.support_margin_cells << " cells  " << (r.passed ? "ok" : "FAILED") << '\n';
        all = all && r.passed;
      }
      return assert_check && !all ? 1 : 0;
    }
  } catch (const BlowUpError& e) {
    err << "blow-up at step " << e.step << ": " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vmdg
