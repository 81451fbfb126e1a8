#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "ttdbt/channel.hpp"
#include "ttdbt/rng.hpp"

namespace ttdbt {

// Per-branch delay/phase taps realizing the frequency-diversity codebook:
// τ_n = (n-1)·R/BW, φ_n = (n-1)·(sgn(ψ)π - ψ) with sgn(0) := +1 and
// ψ = mod(2πR(fc - BW/2)/BW + π, 2π) - π.
struct TapDesign {
  Eigen::VectorXd delays_s;    // τ_n, n = 1..N_R, τ_1 = 0
  Eigen::VectorXd phases_rad;  // φ_n, φ_1 = 0
  double psi_rad = 0.0;        // ψ ∈ (-π, π]
  int diversity_r = 1;
};

TapDesign design_taps(const SystemConfig& cfg);

// DFT probing beams and their subcarrier assignment:
//   [f_d]_n = exp(-j2π(n-1)(d-1-D/2)/D)
//   M_d = {1 + (d-1)·⌊M_tot/(DR)⌋ + (r-1)·M_tot/R : r = 1..R}
struct BeamMap {
  Eigen::MatrixXi subcarriers;  // D x R, 1-based subcarrier indices
  Eigen::MatrixXcd beams;       // N_R x D, unit-magnitude entries
  std::vector<int> used;        // flattened (d-major) copy of subcarriers
};

BeamMap beam_map(const SystemConfig& cfg);

// Ideal TTD weight vector at subcarrier m: [w]_n = exp(-j(2πf_m τ_n + φ_n)).
// In exact spacing mode w[m] equals f_d elementwise for every m ∈ M_d.
Eigen::VectorXcd awv_ideal(const TapDesign& taps, int m,
                           const SystemConfig& cfg);

enum class Architecture { rf, bb };

// One per-trial draw of hardware impairments:
//   gain    α_n,  10·log10 α_n ~ N(0, σ_A²)
//   phase   φ̃_n ~ N(φ_n, σ_P²)
//   delay   τ̃_n ~ N(τ_n, σ_T²)
// With all sigmas zero the draw reproduces the ideal taps exactly.
struct ImpairmentDraw {
  Eigen::VectorXd gain;             // α_n
  Eigen::VectorXd phase_rad;        // φ̃_n
  Eigen::VectorXd delay_s;          // τ̃_n
  Eigen::VectorXd nominal_delay_s;  // τ_n
  double sigma_a_db = 0.0;
  double sigma_p_rad = 0.0;
  double sigma_t_s = 0.0;
  Architecture arch = Architecture::rf;
};

ImpairmentDraw sample_impairments(Rng& rng, const TapDesign& taps,
                                  double sigma_a_db, double sigma_p_rad,
                                  double sigma_t_s, Architecture arch);

// Impaired weight vector at subcarrier m.
//   RF: α_n exp(-j(2πf_m τ̃_n + φ̃_n))
//   BB: α_n exp(-j(2πf_m τ̃_n - 2πfc(τ̃_n - τ_n) + φ̃_n))
// The BB phase regroups 2π(f_m-fc)τ̃_n plus the static compensation 2πfc τ_n
// so that a delay-error-free BB branch is bit-identical to RF.
Eigen::VectorXcd awv_impaired(const ImpairmentDraw& imp, int m,
                              const SystemConfig& cfg);

// Pointing angle of beam d (1-based): arcsin(2(d-1-D/2)/D).
double beam_pointing(int d, int n_directions);

// Plain-text tap table: branch index, delay in ps, phase in radians.
void write_tap_table(std::ostream& os, const TapDesign& taps);

}  // namespace ttdbt
