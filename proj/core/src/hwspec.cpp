#include "ttdbt/hwspec.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ttdbt {

namespace {

// Boundary comparisons tolerate one part in 10^12 so that unit-converted
// literals (e.g. 15 ns entered as 15·(2/2 GHz)) compare equal to their
// nominal values.
constexpr double kRelTol = 1e-12;

}  // namespace

std::pair<double, double> delay_spec(const SystemConfig& cfg) {
  if (!(cfg.bw_hz > 0.0))
    throw std::invalid_argument("delay_spec: bw_hz must be positive");
  if (cfg.diversity_r < 1)
    throw std::invalid_argument("delay_spec: diversity_r must be >= 1");
  const double delta_tau = cfg.diversity_r / cfg.bw_hz;
  return {delta_tau, (cfg.n_r - 1) * delta_tau};
}

int interleaving(double tau_max_s, double f_clk_hz) {
  if (!(f_clk_hz > 0.0))
    throw std::invalid_argument("interleaving: f_clk_hz must be positive");
  if (tau_max_s < 0.0)
    throw std::invalid_argument("interleaving: tau_max_s must be >= 0");
  return static_cast<int>(std::lround(tau_max_s * f_clk_hz)) + 1;
}

std::optional<double> table_hybrid_tau_max(int diversity_r) {
  // Measured delay ranges of the reference hybrid design (four 4-element
  // sub-arrays); no closed form generalizes both entries, so they are
  // table-driven.
  switch (diversity_r) {
    case 2:
      return 2e-9;
    case 4:
      return 6e-9;
    default:
      return std::nullopt;
  }
}

HwReport hw_report(const SystemConfig& cfg, double f_clk_hz, HwArch arch,
                   std::optional<double> hybrid_tau_max_s,
                   const HwCapability& cap) {
  HwReport rep;
  rep.diversity_r = cfg.diversity_r;
  rep.f_clk_hz = f_clk_hz;
  rep.arch = arch;

  const auto [delta_tau, tau_max_analog] = delay_spec(cfg);
  rep.delta_tau_s = delta_tau;
  if (arch == HwArch::analog) {
    rep.tau_max_s = tau_max_analog;
  } else {
    if (!hybrid_tau_max_s)
      throw std::invalid_argument(
          "hw_report: hybrid architecture requires an explicit delay range");
    rep.tau_max_s = *hybrid_tau_max_s;
  }
  rep.n_i = interleaving(rep.tau_max_s, f_clk_hz);

  const bool range_ok = rep.tau_max_s <= cap.max_range_s * (1.0 + kRelTol);
  const bool resolution_ok =
      rep.delta_tau_s >= cap.min_resolution_s * (1.0 - kRelTol);
  rep.feasible = range_ok && resolution_ok;

  char buf[192];
  if (rep.feasible) {
    std::snprintf(buf, sizeof buf,
                  "feasible: delay range %.4g ns within %.4g ns, step %.4g ps "
                  "at or above %.4g ps resolution",
                  rep.tau_max_s * 1e9, cap.max_range_s * 1e9,
                  rep.delta_tau_s * 1e12, cap.min_resolution_s * 1e12);
  } else if (!range_ok && !resolution_ok) {
    std::snprintf(buf, sizeof buf,
                  "infeasible: delay range %.4g ns exceeds %.4g ns and step "
                  "%.4g ps is finer than %.4g ps resolution",
                  rep.tau_max_s * 1e9, cap.max_range_s * 1e9,
                  rep.delta_tau_s * 1e12, cap.min_resolution_s * 1e12);
  } else if (!range_ok) {
    std::snprintf(buf, sizeof buf,
                  "infeasible: delay range %.4g ns exceeds the %.4g ns "
                  "capability",
                  rep.tau_max_s * 1e9, cap.max_range_s * 1e9);
  } else {
    std::snprintf(buf, sizeof buf,
                  "infeasible: delay step %.4g ps is finer than the %.4g ps "
                  "resolution capability",
                  rep.delta_tau_s * 1e12, cap.min_resolution_s * 1e12);
  }
  rep.narrative = buf;
  return rep;
}

void write_hw_table(std::ostream& os, const SystemConfig& cfg,
                    const std::vector<int>& diversity_orders, double f_clk_hz,
                    const HwCapability& cap) {
  char buf[240];
  std::snprintf(buf, sizeof buf, "%3s %14s %15s %10s %10s %15s %10s %10s\n",
                "R", "delta_tau_ns", "analog_tau_ns", "analog_NI",
                "analog_ok", "hybrid_tau_ns", "hybrid_NI", "hybrid_ok");
  os << buf;
  for (int r : diversity_orders) {
    SystemConfig c = cfg;
    c.diversity_r = r;
    const HwReport ana = hw_report(c, f_clk_hz, HwArch::analog, std::nullopt,
                                   cap);
    const std::optional<double> hyb_tau = table_hybrid_tau_max(r);
    if (hyb_tau) {
      const HwReport hyb =
          hw_report(c, f_clk_hz, HwArch::hybrid, hyb_tau, cap);
      std::snprintf(buf, sizeof buf,
                    "%3d %14.3f %15.3f %10d %10s %15.3f %10d %10s\n", r,
                    ana.delta_tau_s * 1e9, ana.tau_max_s * 1e9, ana.n_i,
                    ana.feasible ? "yes" : "no", hyb.tau_max_s * 1e9, hyb.n_i,
                    hyb.feasible ? "yes" : "no");
    } else {
      std::snprintf(buf, sizeof buf,
                    "%3d %14.3f %15.3f %10d %10s %15s %10s %10s\n", r,
                    ana.delta_tau_s * 1e9, ana.tau_max_s * 1e9, ana.n_i,
                    ana.feasible ? "yes" : "no", "-", "-", "-");
    }
    os << buf;
  }
}

}  // namespace ttdbt
