#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ttdbt/rng.hpp"

namespace ttdbt {

enum class SpacingMode { exact, endpoint };
enum class ChannelMode { ray_based, iid_subband };

// All scalar system parameters. Defaults are the evaluation setup used
// throughout: 60 GHz carrier, 2 GHz bandwidth, 4096 subcarriers, 128x16
// arrays, 32 sounded directions, 1024-point dictionary, diversity 4,
// 5-bit ADC, 3 clusters (one strong, two 10 dB weaker), 20 rays per
// cluster over a 10 ns delay window, 20 coherence sub-bands.
struct SystemConfig {
  double fc_hz = 60e9;
  double bw_hz = 2e9;
  int m_tot = 4096;
  int n_t = 128;
  int n_r = 16;
  int directions = 32;   // D
  int grid_q = 1024;     // Q
  int diversity_r = 4;   // R
  int adc_bits = 5;      // 0 disables quantization
  bool adc_freq_shortcut = false;  // quantize Y[m] directly, skip the DFT
  SpacingMode spacing = SpacingMode::exact;

  ChannelMode channel_mode = ChannelMode::ray_based;
  std::vector<double> cluster_powers_db = {0.0, -10.0, -10.0};
  int rays_per_cluster = 20;
  double delay_spread_s = 10e-9;
  int coherence_subbands = 20;  // K_c
  // Cluster AoA/AoD are drawn uniformly on (-angle_range, +angle_range).
  // The default +-60 degree sector keeps evaluation away from the endfire
  // degeneracy of a half-wavelength ULA (a(θ) at sinθ -> ±1 coincide), where
  // any power-profile estimator loses the sign of the angle. 90 degrees
  // restores the full open interval.
  double angle_range_rad = 1.0471975511965976;  // pi/3

  int clusters() const { return static_cast<int>(cluster_powers_db.size()); }
  double subcarrier_spacing_hz() const {
    return spacing == SpacingMode::endpoint ? bw_hz / (m_tot - 1) : bw_hz / m_tot;
  }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Frequency of subcarrier m (1-based), f_1 = fc - BW/2.
double subcarrier_frequency(int m, const SystemConfig& cfg);

// Coherence sub-band index k in 1..k_c for subcarrier m (1-based):
// k = ceil(m * k_c / m_tot); monotone and surjective when k_c | m_tot.
int subband_index(int m, const SystemConfig& cfg, int k_c);

// Unit-norm ULA steering vector, [a]_n = N^{-1/2} exp(-j(n-1)π sinθ).
Eigen::VectorXcd array_response(double theta_rad, int n_antennas);

// Multipath cluster geometry; powers sorted descending and normalized to
// unit total.
struct ClusterSet {
  std::vector<double> power;    // σ_l², Σ = 1
  std::vector<double> aoa_rad;  // θ_l^(R)
  std::vector<double> aod_rad;  // θ_l^(T)
  int size() const { return static_cast<int>(power.size()); }
};

ClusterSet draw_clusters(Rng& rng, int n_clusters,
                         const std::vector<double>& relative_powers_db,
                         double angle_range_rad);

struct Ray {
  std::complex<double> amplitude;
  double delay_s;
};

// One fading realization: either i.i.d. complex-Gaussian gains per
// (cluster, sub-band) or an explicit per-cluster ray list evaluated on
// demand at any subcarrier.
struct ChannelRealization {
  ChannelMode mode = ChannelMode::ray_based;
  Eigen::MatrixXcd subband_gains;       // L x K_c (iid_subband mode)
  std::vector<std::vector<Ray>> rays;   // L x rays (ray_based mode)
  int k_c = 0;
  double bw_c_hz = 0.0;

  // Complex gain of cluster l (0-based) at subcarrier m (1-based).
  std::complex<double> gain(int l, int m, const SystemConfig& cfg) const;
};

ChannelRealization realize_channel_iid(Rng& rng, const ClusterSet& clusters,
                                       int k_c);
ChannelRealization realize_channel_rays(Rng& rng, const ClusterSet& clusters,
                                        const SystemConfig& cfg);

// N_R x N_T channel matrix at sub-band k (iid mode) or subcarrier m
// (ray mode); index is 1-based in both interpretations.
Eigen::MatrixXcd channel_matrix(const ChannelRealization& real,
                                const ClusterSet& clusters, int k_or_m,
                                const SystemConfig& cfg);

}  // namespace ttdbt
