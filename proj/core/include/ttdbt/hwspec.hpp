#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttdbt/channel.hpp"

namespace ttdbt {

enum class HwArch { analog, hybrid };

// Delay-line capability limits used for feasibility verdicts. Defaults are
// the reference switched-capacitor implementation: 15 ns range, 5 ps
// resolution.
struct HwCapability {
  double max_range_s = 15e-9;
  double min_resolution_s = 5e-12;
};

struct HwReport {
  int diversity_r = 1;
  double delta_tau_s = 0.0;  // per-branch delay step R/BW
  double tau_max_s = 0.0;    // (N_R-1)·Δτ for the analog architecture
  int n_i = 1;               // time-interleaving factor
  double f_clk_hz = 4e9;
  HwArch arch = HwArch::analog;
  bool feasible = true;
  std::string narrative;  // names the binding constraint when infeasible
};

// (Δτ, τ_max) = (R/BW, (N_R-1)·R/BW).
std::pair<double, double> delay_spec(const SystemConfig& cfg);

// Interleaving phases needed for a delay range at a sampling clock:
// N_I = round(τ_max·f_CLK) + 1.
int interleaving(double tau_max_s, double f_clk_hz);

// Builds the report for one diversity order. The hybrid architecture has no
// closed-form range; callers pass its delay range explicitly
// (hybrid_tau_max_s), or use table_hybrid_tau_max() for the reference
// 16-element, four-sub-array design.
HwReport hw_report(const SystemConfig& cfg, double f_clk_hz, HwArch arch,
                   std::optional<double> hybrid_tau_max_s,
                   const HwCapability& cap);

// Reference hybrid delay ranges (four 4-element sub-arrays): 2 ns at R=2,
// 6 ns at R=4; empty otherwise.
std::optional<double> table_hybrid_tau_max(int diversity_r);

// Aligned text table over the given diversity orders: analog and hybrid
// delay range / interleaving columns plus a feasibility verdict.
void write_hw_table(std::ostream& os, const SystemConfig& cfg,
                    const std::vector<int>& diversity_orders, double f_clk_hz,
                    const HwCapability& cap);

}  // namespace ttdbt
