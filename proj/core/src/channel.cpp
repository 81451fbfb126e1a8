#include "ttdbt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ttdbt {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void config_error(const std::string& field,
                               const std::string& what) {
  throw std::invalid_argument("SystemConfig: " + field + " " + what);
}

}  // namespace

void SystemConfig::validate() const {
  if (!(fc_hz > 0.0)) config_error("fc_hz", "must be positive");
  if (!(bw_hz > 0.0)) config_error("bw_hz", "must be positive");
  if (m_tot < 1) config_error("m_tot", "must be >= 1");
  if (n_t < 1) config_error("n_t", "must be >= 1");
  if (n_r < 1) config_error("n_r", "must be >= 1");
  if (directions < 1) config_error("directions", "must be >= 1");
  if (grid_q < directions) config_error("grid_q", "must be >= directions");
  if (diversity_r < 1) config_error("diversity_r", "must be >= 1");
  if (m_tot % diversity_r != 0)
    config_error("diversity_r", "must divide m_tot");
  if (directions * diversity_r > m_tot)
    config_error("directions", "times diversity_r must be <= m_tot");
  if (adc_bits < 0 || adc_bits > 24)
    config_error("adc_bits", "must be in 0..24");
  if (cluster_powers_db.empty())
    config_error("cluster_powers_db", "must be non-empty");
  if (rays_per_cluster < 1) config_error("rays_per_cluster", "must be >= 1");
  if (!(delay_spread_s >= 0.0))
    config_error("delay_spread_s", "must be >= 0");
  if (coherence_subbands < 1)
    config_error("coherence_subbands", "must be >= 1");
  if (channel_mode == ChannelMode::iid_subband &&
      diversity_r > coherence_subbands)
    config_error("diversity_r",
                 "must be <= coherence_subbands in iid_subband mode");
  if (!(angle_range_rad > 0.0) || angle_range_rad > kPi / 2)
    config_error("angle_range_rad", "must be in (0, pi/2]");
}

double subcarrier_frequency(int m, const SystemConfig& cfg) {
  if (m < 1 || m > cfg.m_tot)
    throw std::invalid_argument("subcarrier_frequency: m out of range");
  return cfg.fc_hz - 0.5 * cfg.bw_hz + (m - 1) * cfg.subcarrier_spacing_hz();
}

int subband_index(int m, const SystemConfig& cfg, int k_c) {
  if (m < 1 || m > cfg.m_tot)
    throw std::invalid_argument("subband_index: m out of range");
  if (k_c < 1) throw std::invalid_argument("subband_index: k_c must be >= 1");
  const long long num = static_cast<long long>(m) * k_c;  // ceil(m*k_c/m_tot)
  return static_cast<int>((num + cfg.m_tot - 1) / cfg.m_tot);
}

Eigen::VectorXcd array_response(double theta_rad, int n_antennas) {
  if (n_antennas < 1)
    throw std::invalid_argument("array_response: n_antennas must be >= 1");
  Eigen::VectorXcd a(n_antennas);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
  const double step = kPi * std::sin(theta_rad);
  for (int n = 0; n < n_antennas; ++n) a(n) = std::polar(scale, -step * n);
  return a;
}

ClusterSet draw_clusters(Rng& rng, int n_clusters,
                         const std::vector<double>& relative_powers_db,
                         double angle_range_rad) {
  if (n_clusters < 1)
    throw std::invalid_argument("draw_clusters: n_clusters must be >= 1");
  if (static_cast<int>(relative_powers_db.size()) != n_clusters)
    throw std::invalid_argument(
        "draw_clusters: relative_powers_db must have n_clusters entries");
  if (!(angle_range_rad > 0.0) || angle_range_rad > kPi / 2)
    throw std::invalid_argument(
        "draw_clusters: angle_range_rad must be in (0, pi/2]");

  ClusterSet cs;
  cs.power.resize(n_clusters);
  double total = 0.0;
  for (int l = 0; l < n_clusters; ++l) {
    cs.power[l] = std::pow(10.0, relative_powers_db[l] / 10.0);
    total += cs.power[l];
  }
  for (double& p : cs.power) p /= total;
  std::sort(cs.power.begin(), cs.power.end(), std::greater<>());

  cs.aoa_rad.resize(n_clusters);
  cs.aod_rad.resize(n_clusters);
  for (int l = 0; l < n_clusters; ++l) {
    cs.aoa_rad[l] = rng.uniform(-angle_range_rad, angle_range_rad);
    cs.aod_rad[l] = rng.uniform(-angle_range_rad, angle_range_rad);
  }
  return cs;
}

ChannelRealization realize_channel_iid(Rng& rng, const ClusterSet& clusters,
                                       int k_c) {
  if (k_c < 1)
    throw std::invalid_argument("realize_channel_iid: k_c must be >= 1");
  ChannelRealization real;
  real.mode = ChannelMode::iid_subband;
  real.k_c = k_c;
  real.subband_gains.resize(clusters.size(), k_c);
  for (int l = 0; l < clusters.size(); ++l)
    for (int k = 0; k < k_c; ++k)
      real.subband_gains(l, k) = rng.cnormal(clusters.power[l]);
  return real;
}

ChannelRealization realize_channel_rays(Rng& rng, const ClusterSet& clusters,
                                        const SystemConfig& cfg) {
  if (cfg.rays_per_cluster < 1)
    throw std::invalid_argument(
        "realize_channel_rays: rays_per_cluster must be >= 1");
  ChannelRealization real;
  real.mode = ChannelMode::ray_based;
  real.k_c = cfg.coherence_subbands;
  real.bw_c_hz =
      cfg.delay_spread_s > 0.0 ? 1.0 / cfg.delay_spread_s : cfg.bw_hz;
  real.rays.resize(clusters.size());
  for (int l = 0; l < clusters.size(); ++l) {
    real.rays[l].resize(cfg.rays_per_cluster);
    const double ray_var = clusters.power[l] / cfg.rays_per_cluster;
    for (Ray& ray : real.rays[l]) {
      ray.amplitude = rng.cnormal(ray_var);
      ray.delay_s = rng.uniform(0.0, cfg.delay_spread_s);
    }
  }
  return real;
}

std::complex<double> ChannelRealization::gain(int l, int m,
                                              const SystemConfig& cfg) const {
  if (mode == ChannelMode::iid_subband) {
    if (l < 0 || l >= subband_gains.rows())
      throw std::out_of_range("ChannelRealization::gain: cluster out of range");
    return subband_gains(l, subband_index(m, cfg, k_c) - 1);
  }
  if (l < 0 || l >= static_cast<int>(rays.size()))
    throw std::out_of_range("ChannelRealization::gain: cluster out of range");
  // Phase referenced to the carrier: the absolute phase at fc is absorbed
  // into the complex ray amplitude.
  const double f_bb = subcarrier_frequency(m, cfg) - cfg.fc_hz;
  std::complex<double> g(0.0, 0.0);
  for (const Ray& ray : rays[l])
    g += ray.amplitude * std::polar(1.0, -2.0 * kPi * f_bb * ray.delay_s);
  return g;
}

Eigen::MatrixXcd channel_matrix(const ChannelRealization& real,
                                const ClusterSet& clusters, int k_or_m,
                                const SystemConfig& cfg) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(cfg.n_r, cfg.n_t);
  for (int l = 0; l < clusters.size(); ++l) {
    std::complex<double> g;
    if (real.mode == ChannelMode::iid_subband) {
      if (k_or_m < 1 || k_or_m > real.k_c)
        throw std::out_of_range("channel_matrix: sub-band index out of range");
      g = real.subband_gains(l, k_or_m - 1);
    } else {
      g = real.gain(l, k_or_m, cfg);
    }
    const Eigen::VectorXcd a_r = array_response(clusters.aoa_rad[l], cfg.n_r);
    const Eigen::VectorXcd a_t = array_response(clusters.aod_rad[l], cfg.n_t);
    h.noalias() += g * (a_r * a_t.adjoint());
  }
  return h;
}

}  // namespace ttdbt
