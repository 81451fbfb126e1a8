#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ttdbt/channel.hpp"
#include "ttdbt/codebook.hpp"

namespace ttdbt {

// One received OFDM training symbol restricted to the D·R probed
// subcarriers, stored in the BeamMap's (d-major, then r) order.
// combined_noise_var is the post-combining noise variance per subcarrier,
// σ_N²·Σ_n α_n².
struct RxSymbol {
  Eigen::VectorXcd y;
  double noise_var = 0.0;           // per-antenna σ_N²
  double combined_noise_var = 0.0;  // σ_N²·Σ α_n²
};

// Synthesizes Y[m] = M^{-1/2}·√N_R·N_T·(w[m]^H H̃[m] ṽ) + w[m]^H n[m] on the
// probed subcarriers, with H̃ built from unit-norm steering vectors and
// ṽ = ã_T(θ_1^(T)) (perfect transmit pointing). The √N_R·N_T factor is the
// aperture gain that unit-norm steering vectors move out of H and v; with it
// the per-direction expected power matches expected_direction_power().
// Noise is drawn per subcarrier as the combined scalar w^H n ~
// CN(0, σ_N²·Σα_n²), in (d, r) order. SNR is Σσ_l²/σ_N² with Σσ_l² = 1,
// so σ_N² = 10^(-snr_db/10).
RxSymbol synth_rx(Rng& rng, const ChannelRealization& real,
                  const ClusterSet& clusters, const ImpairmentDraw& imp,
                  const BeamMap& bmap, const SystemConfig& cfg, double snr_db);

// Ideal-hardware convenience overload.
RxSymbol synth_rx(Rng& rng, const ChannelRealization& real,
                  const ClusterSet& clusters, const TapDesign& taps,
                  const BeamMap& bmap, const SystemConfig& cfg, double snr_db);

// Models the single-ADC receive chain: embeds the probed subcarriers into
// the full m_tot-point frequency grid (noise on all bins), inverse
// transforms, quantizes real and imaginary parts with a mid-rise quantizer
// whose full scale is 3x the per-component RMS of the time samples, forward
// transforms and restricts back to the probed set. adc_bits == 0 is the
// identity. The rng draws the unused-bin noise, ascending in m. With
// cfg.adc_freq_shortcut the quantizer is applied to Y[m] directly (no
// transform, no unused-bin noise) — a faster approximation, off by default.
RxSymbol quantize_adc(Rng& rng, const RxSymbol& sym, const BeamMap& bmap,
                      const SystemConfig& cfg);

// Dictionary of squared beam gains over a cell-centered angle grid:
// ξ_q = -π/2 + (2q-1)π/(2Q), [B]_{d,q} = |f_d^H ã_R(ξ_q)|².
struct Dictionary {
  Eigen::MatrixXd b;          // D x Q
  Eigen::VectorXd grid_rad;   // ξ_q
  Eigen::VectorXd col_norm;   // ‖[B]_{:,q}‖
};

Dictionary build_dictionary(const BeamMap& bmap, const SystemConfig& cfg);

// Per-direction power estimate p̂_d = (1/R)·Σ_{m∈M_d} |Y[m]|².
struct PowerEstimate {
  Eigen::VectorXd p;  // length D
};

PowerEstimate estimate_powers(const RxSymbol& sym, const BeamMap& bmap);

struct SuperEstimate {
  double theta_rad = 0.0;
  int q_star = 0;  // 1-based grid index
};

// Correlation estimate: q* = argmax_q p̂ᵀ[B]_{:,q}/‖[B]_{:,q}‖, ties to the
// smallest q; θ̂ = ξ_{q*}.
SuperEstimate estimate_aoa_super(const PowerEstimate& p, const Dictionary& dict);

// Baseline: θ̂ = beam_pointing(argmax_d p̂_d), ties to the smallest d.
double estimate_aoa_coarse(const PowerEstimate& p, int n_directions);

// Analytic expected received power in direction d (1-based):
// p_d = (N_R·N_T²/M)·Σ_l |f_d^H ã_R(θ_l)|²·|ã_T(θ_l)^H ṽ|²·σ_l² + N_R·σ_N².
double expected_direction_power(int d, const ClusterSet& clusters,
                                const BeamMap& bmap, const SystemConfig& cfg,
                                double noise_var);

}  // namespace ttdbt
