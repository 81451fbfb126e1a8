#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttdbt/channel.hpp"
#include "ttdbt/codebook.hpp"
#include "ttdbt/estimator.hpp"

namespace ttdbt {

enum class SweepParam {
  diversity_r,
  snr_db,
  gain_sigma_db,
  phase_sigma_rad,
  delay_sigma_s,
};

// CSV/report name of a swept parameter ("r", "snr_db", "sigma_a_db",
// "sigma_p_rad", "sigma_t_ps"). Values are reported in the named unit
// (picoseconds for the delay sigma).
std::string sweep_param_name(SweepParam p);
double sweep_param_report_value(SweepParam p, double value);

enum class Algorithm { super, coarse };

// A Monte Carlo sweep: one parameter varies over `values`, everything else
// is fixed. Trials are paired — both algorithms see the same received
// symbol — and reproducible: trial t of value v runs on seed
// hash(hash(base_seed, v), t) regardless of thread count.
struct SweepSpec {
  SweepParam param = SweepParam::snr_db;
  std::vector<double> values;  // in SI-ish units: R as count, sigma_t in s
  SystemConfig cfg;
  Architecture arch = Architecture::rf;
  double snr_db = 0.0;
  double sigma_a_db = 0.0;
  double sigma_p_rad = 0.0;
  double sigma_t_s = 0.0;
  int trials = 2000;
  std::uint64_t base_seed = 0;
  int threads = 1;
};

struct SweepRecord {
  std::string param_name;
  double param_value = 0.0;
  Algorithm algorithm = Algorithm::super;
  Architecture arch = Architecture::rf;
  int trials = 0;
  double rmse_rad = 0.0;
  double rmse_deg = 0.0;
  double mean_abs_rad = 0.0;
  std::uint64_t seed = 0;
};

struct TrialResult {
  double theta_super = 0.0;
  double theta_coarse = 0.0;
  double theta_true = 0.0;  // dominant-cluster AoA
};

// Shared per-sweep-point context (immutable during trials).
struct TrialContext {
  SystemConfig cfg;
  TapDesign taps;
  BeamMap bmap;
  Dictionary dict;
  Architecture arch = Architecture::rf;
  double snr_db = 0.0;
  double sigma_a_db = 0.0;
  double sigma_p_rad = 0.0;
  double sigma_t_s = 0.0;

  static TrialContext make(const SystemConfig& cfg, Architecture arch,
                           double snr_db, double sigma_a_db,
                           double sigma_p_rad, double sigma_t_s);
};

// One independent trial: fresh clusters, channel, impairments and noise;
// both estimators run on the same received symbol.
TrialResult run_trial(std::uint64_t trial_seed, const TrialContext& ctx);

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

// √(Σe²/n); throws std::invalid_argument on an empty list.
double rmse(const std::vector<double>& errors_rad);

// CSV with the fixed header
// param_name,param_value,algorithm,architecture,trials,rmse_rad,rmse_deg,seed
// and shortest round-trip number formatting; byte-identical across re-runs.
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);

// Human-readable summary table of the same records.
void write_summary(std::ostream& os, const std::vector<SweepRecord>& records);

}  // namespace ttdbt
