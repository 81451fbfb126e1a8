#include "ttdbt/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ttdbt {

namespace {

std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* algorithm_name(Algorithm a) {
  return a == Algorithm::super ? "super" : "coarse";
}

const char* architecture_name(Architecture a) {
  return a == Architecture::rf ? "rf" : "bb";
}

}  // namespace

std::string sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::diversity_r:
      return "r";
    case SweepParam::snr_db:
      return "snr_db";
    case SweepParam::gain_sigma_db:
      return "sigma_a_db";
    case SweepParam::phase_sigma_rad:
      return "sigma_p_rad";
    case SweepParam::delay_sigma_s:
      return "sigma_t_ps";
  }
  return "";
}

double sweep_param_report_value(SweepParam p, double value) {
  return p == SweepParam::delay_sigma_s ? value * 1e12 : value;
}

TrialContext TrialContext::make(const SystemConfig& cfg, Architecture arch,
                                double snr_db, double sigma_a_db,
                                double sigma_p_rad, double sigma_t_s) {
  cfg.validate();
  TrialContext ctx;
  ctx.cfg = cfg;
  ctx.taps = design_taps(cfg);
  ctx.bmap = beam_map(cfg);
  ctx.dict = build_dictionary(ctx.bmap, cfg);
  ctx.arch = arch;
  ctx.snr_db = snr_db;
  ctx.sigma_a_db = sigma_a_db;
  ctx.sigma_p_rad = sigma_p_rad;
  ctx.sigma_t_s = sigma_t_s;
  return ctx;
}

TrialResult run_trial(std::uint64_t trial_seed, const TrialContext& ctx) {
  Rng rng(trial_seed);
  const SystemConfig& cfg = ctx.cfg;
  const ClusterSet clusters = draw_clusters(
      rng, cfg.clusters(), cfg.cluster_powers_db, cfg.angle_range_rad);
  const ChannelRealization real =
      cfg.channel_mode == ChannelMode::ray_based
          ? realize_channel_rays(rng, clusters, cfg)
          : realize_channel_iid(rng, clusters, cfg.coherence_subbands);
  const ImpairmentDraw imp =
      sample_impairments(rng, ctx.taps, ctx.sigma_a_db, ctx.sigma_p_rad,
                         ctx.sigma_t_s, ctx.arch);
  RxSymbol sym =
      synth_rx(rng, real, clusters, imp, ctx.bmap, cfg, ctx.snr_db);
  sym = quantize_adc(rng, sym, ctx.bmap, cfg);
  const PowerEstimate p = estimate_powers(sym, ctx.bmap);

  TrialResult res;
  res.theta_super = estimate_aoa_super(p, ctx.dict).theta_rad;
  res.theta_coarse = estimate_aoa_coarse(p, cfg.directions);
  res.theta_true = clusters.aoa_rad[0];
  return res;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty())
    throw std::invalid_argument("run_sweep: values must be non-empty");
  if (spec.trials < 1)
    throw std::invalid_argument("run_sweep: trials must be >= 1");

  std::vector<SweepRecord> records;
  records.reserve(spec.values.size() * 2);

  for (size_t vi = 0; vi < spec.values.size(); ++vi) {
    const double value = spec.values[vi];
    SystemConfig cfg = spec.cfg;
    double snr_db = spec.snr_db;
    double sigma_a_db = spec.sigma_a_db;
    double sigma_p_rad = spec.sigma_p_rad;
    double sigma_t_s = spec.sigma_t_s;
    switch (spec.param) {
      case SweepParam::diversity_r:
        cfg.diversity_r = static_cast<int>(std::lround(value));
        break;
      case SweepParam::snr_db:
        snr_db = value;
        break;
      case SweepParam::gain_sigma_db:
        sigma_a_db = value;
        break;
      case SweepParam::phase_sigma_rad:
        sigma_p_rad = value;
        break;
      case SweepParam::delay_sigma_s:
        sigma_t_s = value;
        break;
    }
    const TrialContext ctx = TrialContext::make(cfg, spec.arch, snr_db,
                                                sigma_a_db, sigma_p_rad,
                                                sigma_t_s);

    // Per-trial seeds depend only on (base seed, value index, trial index),
    // never on scheduling, so any thread count reproduces the same results.
    const std::uint64_t value_seed = hash_combine(spec.base_seed, vi);
    std::vector<TrialResult> results(spec.trials);

    const int n_threads = std::max(1, spec.threads);
    if (n_threads == 1) {
      for (int t = 0; t < spec.trials; ++t)
        results[t] = run_trial(hash_combine(value_seed, t), ctx);
    } else {
      std::atomic<int> next{0};
      std::exception_ptr error;
      std::mutex error_mu;
      auto worker = [&] {
        try {
          for (;;) {
            const int t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= spec.trials) return;
            results[t] = run_trial(hash_combine(value_seed, t), ctx);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(n_threads);
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      if (error) std::rethrow_exception(error);
    }

    // Deterministic reduction in trial order regardless of completion order.
    std::vector<double> err_super(spec.trials), err_coarse(spec.trials);
    double abs_super = 0.0, abs_coarse = 0.0;
    for (int t = 0; t < spec.trials; ++t) {
      err_super[t] = results[t].theta_super - results[t].theta_true;
      err_coarse[t] = results[t].theta_coarse - results[t].theta_true;
      abs_super += std::abs(err_super[t]);
      abs_coarse += std::abs(err_coarse[t]);
    }

    const std::string name = sweep_param_name(spec.param);
    const double report_value = sweep_param_report_value(spec.param, value);
    constexpr double kRadToDeg = 180.0 / std::numbers::pi;
    for (Algorithm algo : {Algorithm::super, Algorithm::coarse}) {
      SweepRecord rec;
      rec.param_name = name;
      rec.param_value = report_value;
      rec.algorithm = algo;
      rec.arch = spec.arch;
      rec.trials = spec.trials;
      rec.rmse_rad = rmse(algo == Algorithm::super ? err_super : err_coarse);
      rec.rmse_deg = rec.rmse_rad * kRadToDeg;
      rec.mean_abs_rad =
          (algo == Algorithm::super ? abs_super : abs_coarse) / spec.trials;
      rec.seed = spec.base_seed;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

double rmse(const std::vector<double>& errors_rad) {
  if (errors_rad.empty())
    throw std::invalid_argument("rmse: error list must be non-empty");
  double acc = 0.0;
  for (double e : errors_rad) acc += e * e;
  return std::sqrt(acc / errors_rad.size());
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "param_name,param_value,algorithm,architecture,trials,rmse_rad,"
        "rmse_deg,seed\n";
  for (const SweepRecord& r : records) {
    os << r.param_name << ',' << format_shortest(r.param_value) << ','
       << algorithm_name(r.algorithm) << ',' << architecture_name(r.arch)
       << ',' << r.trials << ',' << format_shortest(r.rmse_rad) << ','
       << format_shortest(r.rmse_deg) << ',' << r.seed << '\n';
  }
}

void write_summary(std::ostream& os, const std::vector<SweepRecord>& records) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %12s %-7s %-4s %7s %12s %12s\n",
                "param", "value", "algo", "arch", "trials", "rmse_rad",
                "rmse_deg");
  os << buf;
  for (const SweepRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%-12s %12.6g %-7s %-4s %7d %12.6g %12.6g\n",
                  r.param_name.c_str(), r.param_value,
                  algorithm_name(r.algorithm), architecture_name(r.arch),
                  r.trials, r.rmse_rad, r.rmse_deg);
    os << buf;
  }
}

}  // namespace ttdbt
