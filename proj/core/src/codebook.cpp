#include "ttdbt/codebook.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ttdbt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TapDesign design_taps(const SystemConfig& cfg) {
  if (!(cfg.bw_hz > 0.0))
    throw std::invalid_argument("design_taps: bw_hz must be positive");
  if (cfg.diversity_r < 1)
    throw std::invalid_argument("design_taps: diversity_r must be >= 1");

  TapDesign taps;
  taps.diversity_r = cfg.diversity_r;

  // psi = mod(2πR(fc - BW/2)/BW + π, 2π) - π, evaluated in the cycle domain
  // (fractional part of R(fc - BW/2)/BW + 1/2) to keep full precision when
  // the argument spans hundreds of cycles.
  const double cycles =
      cfg.diversity_r * (cfg.fc_hz - 0.5 * cfg.bw_hz) / cfg.bw_hz + 0.5;
  const double frac = cycles - std::floor(cycles);  // in [0, 1)
  double psi = kTwoPi * frac - kPi;                 // in [-π, π)
  if (psi <= -kPi) psi = kPi;  // canonical representative in (-π, π]
  taps.psi_rad = psi;

  // sgn(0) := +1. With psi = 0 this yields the phase step π; the zero step
  // from sgn(0) = 0 would shift every beam by half the angular range and
  // break the per-direction constancy of the weights.
  const double sgn = psi >= 0.0 ? 1.0 : -1.0;
  const double delta_tau = cfg.diversity_r / cfg.bw_hz;
  const double delta_phi = sgn * kPi - psi;

  taps.delays_s.resize(cfg.n_r);
  taps.phases_rad.resize(cfg.n_r);
  for (int n = 0; n < cfg.n_r; ++n) {
    taps.delays_s(n) = n * delta_tau;
    taps.phases_rad(n) = n * delta_phi;
  }
  return taps;
}

BeamMap beam_map(const SystemConfig& cfg) {
  const int m_tot = cfg.m_tot;
  const int n_dir = cfg.directions;
  const int r = cfg.diversity_r;
  if (r < 1 || m_tot % r != 0)
    throw std::invalid_argument("beam_map: diversity_r must divide m_tot");
  const int stride = m_tot / (n_dir * r);
  if (stride < 1)
    throw std::invalid_argument(
        "beam_map: directions*diversity_r must be <= m_tot");
  const int band = m_tot / r;

  BeamMap bmap;
  bmap.subcarriers.resize(n_dir, r);
  bmap.used.reserve(static_cast<size_t>(n_dir) * r);
  for (int d = 0; d < n_dir; ++d)
    for (int rr = 0; rr < r; ++rr) {
      const int m = 1 + d * stride + rr * band;
      bmap.subcarriers(d, rr) = m;
      bmap.used.push_back(m);
    }

  bmap.beams.resize(cfg.n_r, n_dir);
  for (int d = 0; d < n_dir; ++d)
    for (int n = 0; n < cfg.n_r; ++n)
      bmap.beams(n, d) = std::polar(1.0, -kTwoPi * n * (d - 0.5 * n_dir) / n_dir);
  return bmap;
}

Eigen::VectorXcd awv_ideal(const TapDesign& taps, int m,
                           const SystemConfig& cfg) {
  const double f_m = subcarrier_frequency(m, cfg);
  const int n_r = static_cast<int>(taps.delays_s.size());
  Eigen::VectorXcd w(n_r);
  for (int n = 0; n < n_r; ++n)
    w(n) = std::polar(1.0, -(kTwoPi * f_m * taps.delays_s(n) + taps.phases_rad(n)));
  return w;
}

ImpairmentDraw sample_impairments(Rng& rng, const TapDesign& taps,
                                  double sigma_a_db, double sigma_p_rad,
                                  double sigma_t_s, Architecture arch) {
  if (sigma_a_db < 0.0 || sigma_p_rad < 0.0 || sigma_t_s < 0.0)
    throw std::invalid_argument(
        "sample_impairments: sigmas must be non-negative");
  const int n_r = static_cast<int>(taps.delays_s.size());
  ImpairmentDraw imp;
  imp.arch = arch;
  imp.sigma_a_db = sigma_a_db;
  imp.sigma_p_rad = sigma_p_rad;
  imp.sigma_t_s = sigma_t_s;
  imp.nominal_delay_s = taps.delays_s;
  imp.gain.resize(n_r);
  imp.phase_rad.resize(n_r);
  imp.delay_s.resize(n_r);
  // Draws always happen, even at sigma 0 (where they contribute exactly
  // nothing), so the generator stream stays aligned across sigma settings.
  for (int n = 0; n < n_r; ++n)
    imp.gain(n) = std::pow(10.0, sigma_a_db * rng.normal() / 10.0);
  for (int n = 0; n < n_r; ++n)
    imp.phase_rad(n) = taps.phases_rad(n) + sigma_p_rad * rng.normal();
  for (int n = 0; n < n_r; ++n)
    imp.delay_s(n) = taps.delays_s(n) + sigma_t_s * rng.normal();
  return imp;
}

Eigen::VectorXcd awv_impaired(const ImpairmentDraw& imp, int m,
                              const SystemConfig& cfg) {
  const double f_m = subcarrier_frequency(m, cfg);
  const int n_r = static_cast<int>(imp.gain.size());
  Eigen::VectorXcd w(n_r);
  for (int n = 0; n < n_r; ++n) {
    double phase = kTwoPi * f_m * imp.delay_s(n) + imp.phase_rad(n);
    if (imp.arch == Architecture::bb) {
      // Baseband branch: phase 2π(f_m - fc)τ̃_n plus the static compensation
      // 2π fc τ_n folded into the phase tap; written as the RF phase minus
      // 2π fc (τ̃_n - τ_n) so a delay-error-free branch matches RF
      // bit for bit.
      phase -= kTwoPi * cfg.fc_hz * (imp.delay_s(n) - imp.nominal_delay_s(n));
    }
    w(n) = std::polar(imp.gain(n), -phase);
  }
  return w;
}

double beam_pointing(int d, int n_directions) {
  if (d < 1 || d > n_directions)
    throw std::invalid_argument("beam_pointing: d out of range");
  return std::asin(2.0 * (d - 1 - 0.5 * n_directions) / n_directions);
}

void write_tap_table(std::ostream& os, const TapDesign& taps) {
  os << "branch    delay_ps     phase_rad\n";
  char buf[96];
  for (int n = 0; n < taps.delays_s.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%6d  %10.3f  %12.6f\n", n + 1,
                  taps.delays_s(n) * 1e12, taps.phases_rad(n));
    os << buf;
  }
}

}  // namespace ttdbt
