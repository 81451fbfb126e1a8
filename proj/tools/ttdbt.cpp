// Command-line front end: binds key = value config files plus flag
// overrides (flags win) to the library's design, simulation, sweep and
// hardware-report operations.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ttdbt/channel.hpp"
#include "ttdbt/codebook.hpp"
#include "ttdbt/estimator.hpp"
#include "ttdbt/experiments.hpp"
#include "ttdbt/hwspec.hpp"
#include "ttdbt/run_config.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
  CLI::Option* config_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  flags.config_opt = cmd->add_option("--config", flags.config_path,
                                     "Config file (key = value lines)");
  flags.seed_opt =
      cmd->add_option("--seed", flags.seed, "Base seed (overrides config)");
  flags.threads_opt = cmd->add_option("--threads", flags.threads,
                                      "Worker threads for Monte Carlo trials");
}

ttdbt::RunConfig load_base(const CommonFlags& flags) {
  ttdbt::RunConfig rc;
  if (flags.config_opt->count() > 0)
    rc = ttdbt::load_config(flags.config_path);
  if (flags.seed_opt->count() > 0) rc.seed = flags.seed;
  if (flags.threads_opt->count() > 0) {
    if (flags.threads < 1)
      throw std::invalid_argument("--threads must be >= 1");
    rc.threads = flags.threads;
  }
  return rc;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write output file: " + path);
  fn(file);
  file.flush();
  if (!file) throw std::runtime_error("error writing output file: " + path);
}

ttdbt::Architecture parse_arch(const std::string& value) {
  if (value == "rf") return ttdbt::Architecture::rf;
  if (value == "bb") return ttdbt::Architecture::bb;
  throw std::invalid_argument("--arch expects rf or bb, got '" + value + "'");
}

int cmd_design(const ttdbt::RunConfig& rc, const std::string& out_path) {
  rc.system.validate();
  const ttdbt::TapDesign taps = ttdbt::design_taps(rc.system);
  const ttdbt::BeamMap bmap = ttdbt::beam_map(rc.system);
  with_output(out_path, [&](std::ostream& os) {
    const auto [delta_tau, tau_max] = ttdbt::delay_spec(rc.system);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "tap design: R=%d  delta_tau_ns=%.6g  tau_max_ns=%.6g  "
                  "psi_rad=%.9g\n",
                  rc.system.diversity_r, delta_tau * 1e9, tau_max * 1e9,
                  taps.psi_rad);
    os << buf;
    ttdbt::write_tap_table(os, taps);
    os << "subcarrier sets (direction -> " << rc.system.diversity_r
       << " probed subcarriers):\n";
    for (int d = 0; d < bmap.subcarriers.rows(); ++d) {
      os << "  M_" << (d + 1) << " = {";
      for (int r = 0; r < bmap.subcarriers.cols(); ++r) {
        if (r > 0) os << ", ";
        os << bmap.subcarriers(d, r);
      }
      os << "}\n";
    }
  });
  return 0;
}

int run_and_report(const ttdbt::SweepSpec& spec, const std::string& out_path) {
  const std::vector<ttdbt::SweepRecord> records = ttdbt::run_sweep(spec);
  if (out_path.empty()) {
    ttdbt::write_csv(std::cout, records);
  } else {
    with_output(out_path, [&](std::ostream& os) {
      ttdbt::write_csv(os, records);
    });
    ttdbt::write_summary(std::cout, records);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-shot beam-training simulator for true-time-delay "
               "analog arrays"};
  app.require_subcommand(1);

  // design
  CLI::App* design = app.add_subcommand(
      "design", "Print the delay/phase tap table and probed subcarrier sets");
  CommonFlags design_flags;
  add_common(design, design_flags);
  std::string design_output;
  design->add_option("--output", design_output,
                     "Write the report to a file instead of stdout");

  // simulate
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one Monte Carlo operating point and report RMSE");
  CommonFlags sim_flags;
  add_common(simulate, sim_flags);
  double sim_snr_db = 0.0;
  std::string sim_arch;
  int sim_trials = 0;
  double sim_sigma_a = 0.0, sim_sigma_p = 0.0, sim_sigma_t_ps = 0.0;
  std::string sim_output;
  CLI::Option* sim_snr_opt =
      simulate->add_option("--snr-db", sim_snr_db, "Operating SNR in dB");
  CLI::Option* sim_arch_opt =
      simulate->add_option("--arch", sim_arch, "Array architecture: rf | bb")
          ->check(CLI::IsMember({"rf", "bb"}));
  CLI::Option* sim_trials_opt =
      simulate->add_option("--trials", sim_trials, "Monte Carlo trials");
  CLI::Option* sim_sa_opt = simulate->add_option(
      "--sigma-a-db", sim_sigma_a, "Per-branch gain error std (dB)");
  CLI::Option* sim_sp_opt = simulate->add_option(
      "--sigma-p-rad", sim_sigma_p, "Per-branch phase error std (rad)");
  CLI::Option* sim_st_opt = simulate->add_option(
      "--sigma-t-ps", sim_sigma_t_ps, "Per-branch delay error std (ps)");
  simulate->add_option("--output", sim_output, "CSV output path");

  // sweep
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep one parameter over a list of values and emit CSV");
  CommonFlags sweep_flags;
  add_common(sweep, sweep_flags);
  std::string sweep_param;
  std::vector<double> sweep_values, sweep_values_ps;
  double sweep_snr_db = 0.0;
  std::string sweep_arch;
  int sweep_trials = 0;
  double sweep_sigma_a = 0.0, sweep_sigma_p = 0.0, sweep_sigma_t_ps = 0.0;
  std::string sweep_output;
  CLI::Option* sweep_param_opt =
      sweep->add_option("--sweep", sweep_param,
                        "Swept parameter: r | snr | sigma_a | sigma_p | "
                        "sigma_t")
          ->check(CLI::IsMember({"r", "snr", "sigma_a", "sigma_p", "sigma_t"}));
  CLI::Option* sweep_values_opt =
      sweep->add_option("--values", sweep_values,
                        "Swept values (comma separated, in the parameter's "
                        "reported unit; ps for sigma_t)")
          ->delimiter(',');
  CLI::Option* sweep_values_ps_opt =
      sweep->add_option("--values-ps", sweep_values_ps,
                        "Swept delay-error values in picoseconds "
                        "(sigma_t sweeps only)")
          ->delimiter(',');
  CLI::Option* sweep_snr_opt =
      sweep->add_option("--snr-db", sweep_snr_db, "Fixed SNR in dB");
  CLI::Option* sweep_arch_opt =
      sweep->add_option("--arch", sweep_arch, "Array architecture: rf | bb")
          ->check(CLI::IsMember({"rf", "bb"}));
  CLI::Option* sweep_trials_opt =
      sweep->add_option("--trials", sweep_trials, "Monte Carlo trials per value");
  CLI::Option* sweep_sa_opt = sweep->add_option(
      "--sigma-a-db", sweep_sigma_a, "Fixed gain error std (dB)");
  CLI::Option* sweep_sp_opt = sweep->add_option(
      "--sigma-p-rad", sweep_sigma_p, "Fixed phase error std (rad)");
  CLI::Option* sweep_st_opt = sweep->add_option(
      "--sigma-t-ps", sweep_sigma_t_ps, "Fixed delay error std (ps)");
  CLI::Option* sweep_output_opt =
      sweep->add_option("--output", sweep_output, "CSV output path");

  // hwspec
  CLI::App* hwspec = app.add_subcommand(
      "hwspec", "Report delay-line requirements and feasibility per "
                "diversity order");
  CommonFlags hw_flags;
  add_common(hwspec, hw_flags);
  double hw_f_clk_ghz = 4.0;
  std::vector<int> hw_r_values{1, 2, 4};
  CLI::Option* hw_clk_opt = hwspec->add_option(
      "--f-clk-ghz", hw_f_clk_ghz, "Sampling clock in GHz (default 4)");
  hwspec->add_option("--r-values", hw_r_values,
                     "Diversity orders to tabulate (default 1,2,4)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (design->parsed()) {
      return cmd_design(load_base(design_flags), design_output);
    }

    if (simulate->parsed()) {
      ttdbt::RunConfig rc = load_base(sim_flags);
      if (sim_snr_opt->count() > 0) rc.snr_db = sim_snr_db;
      if (sim_arch_opt->count() > 0) rc.arch = parse_arch(sim_arch);
      if (sim_trials_opt->count() > 0) rc.trials = sim_trials;
      if (sim_sa_opt->count() > 0) rc.sigma_a_db = sim_sigma_a;
      if (sim_sp_opt->count() > 0) rc.sigma_p_rad = sim_sigma_p;
      if (sim_st_opt->count() > 0) rc.sigma_t_s = sim_sigma_t_ps * 1e-12;
      if (rc.trials < 1)
        throw std::invalid_argument("trials must be >= 1");

      ttdbt::SweepSpec spec;
      spec.param = ttdbt::SweepParam::snr_db;
      spec.values = {rc.snr_db};
      spec.cfg = rc.system;
      spec.arch = rc.arch;
      spec.sigma_a_db = rc.sigma_a_db;
      spec.sigma_p_rad = rc.sigma_p_rad;
      spec.sigma_t_s = rc.sigma_t_s;
      spec.trials = rc.trials;
      spec.base_seed = rc.seed;
      spec.threads = rc.threads;
      const std::vector<ttdbt::SweepRecord> records = ttdbt::run_sweep(spec);
      ttdbt::write_summary(std::cout, records);
      if (!sim_output.empty()) {
        with_output(sim_output, [&](std::ostream& os) {
          ttdbt::write_csv(os, records);
        });
      }
      return 0;
    }

    if (sweep->parsed()) {
      ttdbt::RunConfig rc = load_base(sweep_flags);
      if (sweep_snr_opt->count() > 0) rc.snr_db = sweep_snr_db;
      if (sweep_arch_opt->count() > 0) rc.arch = parse_arch(sweep_arch);
      if (sweep_trials_opt->count() > 0) rc.trials = sweep_trials;
      if (sweep_sa_opt->count() > 0) rc.sigma_a_db = sweep_sigma_a;
      if (sweep_sp_opt->count() > 0) rc.sigma_p_rad = sweep_sigma_p;
      if (sweep_st_opt->count() > 0) rc.sigma_t_s = sweep_sigma_t_ps * 1e-12;
      if (sweep_output_opt->count() > 0) rc.output = sweep_output;
      if (rc.trials < 1)
        throw std::invalid_argument("trials must be >= 1");

      if (sweep_param_opt->count() > 0) {
        if (sweep_param == "r")
          rc.sweep = ttdbt::SweepParam::diversity_r;
        else if (sweep_param == "snr")
          rc.sweep = ttdbt::SweepParam::snr_db;
        else if (sweep_param == "sigma_a")
          rc.sweep = ttdbt::SweepParam::gain_sigma_db;
        else if (sweep_param == "sigma_p")
          rc.sweep = ttdbt::SweepParam::phase_sigma_rad;
        else
          rc.sweep = ttdbt::SweepParam::delay_sigma_s;
      }
      if (!rc.sweep)
        throw std::invalid_argument(
            "sweep parameter required (--sweep or config key 'sweep')");

      if (sweep_values_opt->count() > 0 && sweep_values_ps_opt->count() > 0)
        throw std::invalid_argument(
            "--values and --values-ps are mutually exclusive");
      if (sweep_values_ps_opt->count() > 0) {
        if (*rc.sweep != ttdbt::SweepParam::delay_sigma_s)
          throw std::invalid_argument(
              "--values-ps applies only to sigma_t sweeps");
        rc.sweep_values.clear();
        for (double v : sweep_values_ps) rc.sweep_values.push_back(v * 1e-12);
      } else if (sweep_values_opt->count() > 0) {
        rc.sweep_values = sweep_values;
        if (*rc.sweep == ttdbt::SweepParam::delay_sigma_s)
          for (double& v : rc.sweep_values) v *= 1e-12;
      }
      if (rc.sweep_values.empty())
        throw std::invalid_argument(
            "sweep values required (--values or config key 'values')");

      ttdbt::SweepSpec spec;
      spec.param = *rc.sweep;
      spec.values = rc.sweep_values;
      spec.cfg = rc.system;
      spec.arch = rc.arch;
      spec.snr_db = rc.snr_db;
      spec.sigma_a_db = rc.sigma_a_db;
      spec.sigma_p_rad = rc.sigma_p_rad;
      spec.sigma_t_s = rc.sigma_t_s;
      spec.trials = rc.trials;
      spec.base_seed = rc.seed;
      spec.threads = rc.threads;
      return run_and_report(spec, rc.output);
    }

    if (hwspec->parsed()) {
      ttdbt::RunConfig rc = load_base(hw_flags);
      if (hw_clk_opt->count() > 0) {
        if (!(hw_f_clk_ghz > 0.0))
          throw std::invalid_argument("--f-clk-ghz must be positive");
        rc.f_clk_hz = hw_f_clk_ghz * 1e9;
      }
      if (hw_r_values.empty())
        throw std::invalid_argument("--r-values must be non-empty");
      ttdbt::write_hw_table(std::cout, rc.system, hw_r_values, rc.f_clk_hz,
                            rc.hw);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
