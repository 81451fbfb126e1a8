#include "ttdbt/estimator.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ttdbt {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; plan once per transform size under a
// lock and reuse. Executing a cached plan on per-call buffers via
// fftw_execute_dft is thread-safe. FFTW_UNALIGNED lets the plans run on
// arbitrary std::vector storage.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair plans_for(int n) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<std::complex<double>> tmp(n);
    fftw_complex* p = reinterpret_cast<fftw_complex*>(tmp.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    it = cache.emplace(n, pp).first;
  }
  return it->second;
}

// Mid-rise quantization of one component: step Δ, codes clamped to
// [-2^(b-1), 2^(b-1)-1], reconstruction at code centers.
double quantize_component(double x, double step, int bits) {
  const double half = static_cast<double>(1LL << (bits - 1));
  double code = std::floor(x / step);
  if (code < -half) code = -half;
  if (code > half - 1.0) code = half - 1.0;
  return (code + 0.5) * step;
}

std::complex<double> quantize_sample(std::complex<double> x, double step,
                                     int bits) {
  return {quantize_component(x.real(), step, bits),
          quantize_component(x.imag(), step, bits)};
}

ImpairmentDraw ideal_impairments(const TapDesign& taps) {
  ImpairmentDraw imp;
  imp.arch = Architecture::rf;
  imp.gain = Eigen::VectorXd::Ones(taps.delays_s.size());
  imp.phase_rad = taps.phases_rad;
  imp.delay_s = taps.delays_s;
  imp.nominal_delay_s = taps.delays_s;
  return imp;
}

}  // namespace

RxSymbol synth_rx(Rng& rng, const ChannelRealization& real,
                  const ClusterSet& clusters, const ImpairmentDraw& imp,
                  const BeamMap& bmap, const SystemConfig& cfg,
                  double snr_db) {
  if (real.mode == ChannelMode::iid_subband && cfg.diversity_r > real.k_c)
    throw std::invalid_argument(
        "synth_rx: diversity_r must be <= k_c in iid_subband mode");
  const int n_dir = static_cast<int>(bmap.subcarriers.rows());
  const int r = static_cast<int>(bmap.subcarriers.cols());
  const int n_used = n_dir * r;

  const double noise_var = std::pow(10.0, -snr_db / 10.0);
  const double combined_var = noise_var * imp.gain.squaredNorm();
  const double pilot = 1.0 / std::sqrt(static_cast<double>(n_used));
  // Aperture gain of the unit-norm steering-vector convention: the channel
  // and precoder each carry a 1/√N factor, so √N_R·N_T restores the
  // physical array gains (N_R at the combiner, N_T² in transmit power).
  const double aperture = std::sqrt(static_cast<double>(cfg.n_r)) * cfg.n_t;

  const int n_l = clusters.size();
  const Eigen::VectorXcd v = array_response(clusters.aod_rad[0], cfg.n_t);
  std::vector<Eigen::VectorXcd> a_r(n_l);
  std::vector<std::complex<double>> tx_gain(n_l);
  for (int l = 0; l < n_l; ++l) {
    a_r[l] = array_response(clusters.aoa_rad[l], cfg.n_r);
    tx_gain[l] = array_response(clusters.aod_rad[l], cfg.n_t).dot(v);
  }

  RxSymbol sym;
  sym.noise_var = noise_var;
  sym.combined_noise_var = combined_var;
  sym.y.resize(n_used);
  int idx = 0;
  for (int d = 0; d < n_dir; ++d)
    for (int rr = 0; rr < r; ++rr, ++idx) {
      const int m = bmap.subcarriers(d, rr);
      const Eigen::VectorXcd w = awv_impaired(imp, m, cfg);
      std::complex<double> sig(0.0, 0.0);
      for (int l = 0; l < n_l; ++l)
        sig += real.gain(l, m, cfg) * w.dot(a_r[l]) * tx_gain[l];
      // Combined noise w^H n is a scalar CN(0, σ_N²·Σα²); drawn even when
      // the variance is zero so the bin/draw alignment is SNR-invariant.
      sym.y(idx) = pilot * aperture * sig + rng.cnormal(combined_var);
    }
  return sym;
}

RxSymbol synth_rx(Rng& rng, const ChannelRealization& real,
                  const ClusterSet& clusters, const TapDesign& taps,
                  const BeamMap& bmap, const SystemConfig& cfg,
                  double snr_db) {
  return synth_rx(rng, real, clusters, ideal_impairments(taps), bmap, cfg,
                  snr_db);
}

RxSymbol quantize_adc(Rng& rng, const RxSymbol& sym, const BeamMap& bmap,
                      const SystemConfig& cfg) {
  if (cfg.adc_bits == 0) return sym;
  const int bits = cfg.adc_bits;
  RxSymbol out = sym;

  if (cfg.adc_freq_shortcut) {
    const double mean_sq = sym.y.squaredNorm() / sym.y.size();
    const double full_scale = 3.0 * std::sqrt(0.5 * mean_sq);
    if (full_scale <= 0.0) return out;
    const double step = full_scale / static_cast<double>(1LL << (bits - 1));
    for (int i = 0; i < out.y.size(); ++i)
      out.y(i) = quantize_sample(out.y(i), step, bits);
    return out;
  }

  const int m_tot = cfg.m_tot;
  if (static_cast<int>(bmap.used.size()) != sym.y.size())
    throw std::invalid_argument("quantize_adc: symbol/beam map size mismatch");

  std::vector<std::complex<double>> grid(m_tot, {0.0, 0.0});
  std::vector<char> used(m_tot, 0);
  for (size_t i = 0; i < bmap.used.size(); ++i) {
    grid[bmap.used[i] - 1] = sym.y(i);
    used[bmap.used[i] - 1] = 1;
  }
  // The unprobed bins still carry combined receiver noise; drawn in
  // ascending bin order, after the probed-bin draws of synth_rx.
  for (int m = 0; m < m_tot; ++m)
    if (!used[m]) grid[m] = rng.cnormal(sym.combined_noise_var);

  const PlanPair plans = plans_for(m_tot);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plans.bwd, buf, buf);
  const double inv = 1.0 / m_tot;
  double mean_sq = 0.0;
  for (auto& x : grid) {
    x *= inv;
    mean_sq += std::norm(x);
  }
  mean_sq /= m_tot;

  // Full scale at 3x the per-component RMS of the time-domain samples
  // (≈0.3% clip probability for Gaussian-like waveforms).
  const double full_scale = 3.0 * std::sqrt(0.5 * mean_sq);
  if (full_scale > 0.0) {
    const double step = full_scale / static_cast<double>(1LL << (bits - 1));
    for (auto& x : grid) x = quantize_sample(x, step, bits);
  }

  fftw_execute_dft(plans.fwd, buf, buf);
  for (size_t i = 0; i < bmap.used.size(); ++i)
    out.y(i) = grid[bmap.used[i] - 1];
  return out;
}

Dictionary build_dictionary(const BeamMap& bmap, const SystemConfig& cfg) {
  const int n_dir = static_cast<int>(bmap.beams.cols());
  const int q_n = cfg.grid_q;
  if (q_n < 1)
    throw std::invalid_argument("build_dictionary: grid_q must be >= 1");

  Dictionary dict;
  dict.b.resize(n_dir, q_n);
  dict.grid_rad.resize(q_n);
  dict.col_norm.resize(q_n);
  for (int q = 0; q < q_n; ++q) {
    const double xi = -0.5 * kPi + (2 * q + 1) * kPi / (2.0 * q_n);
    dict.grid_rad(q) = xi;
    const Eigen::VectorXcd a = array_response(xi, cfg.n_r);
    for (int d = 0; d < n_dir; ++d)
      dict.b(d, q) = std::norm(bmap.beams.col(d).dot(a));
    dict.col_norm(q) = dict.b.col(q).norm();
  }
  return dict;
}

PowerEstimate estimate_powers(const RxSymbol& sym, const BeamMap& bmap) {
  const int n_dir = static_cast<int>(bmap.subcarriers.rows());
  const int r = static_cast<int>(bmap.subcarriers.cols());
  if (sym.y.size() != n_dir * r)
    throw std::invalid_argument(
        "estimate_powers: symbol/beam map size mismatch");
  PowerEstimate pe;
  pe.p.resize(n_dir);
  int idx = 0;
  for (int d = 0; d < n_dir; ++d) {
    double acc = 0.0;
    for (int rr = 0; rr < r; ++rr, ++idx) acc += std::norm(sym.y(idx));
    pe.p(d) = acc / r;
  }
  return pe;
}

SuperEstimate estimate_aoa_super(const PowerEstimate& p,
                                 const Dictionary& dict) {
  const int q_n = static_cast<int>(dict.b.cols());
  if (p.p.size() != dict.b.rows())
    throw std::invalid_argument(
        "estimate_aoa_super: power/dictionary size mismatch");
  int best_q = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int q = 0; q < q_n; ++q) {
    const double score = p.p.dot(dict.b.col(q)) / dict.col_norm(q);
    if (score > best) {  // strict: ties resolve to the smallest q
      best = score;
      best_q = q;
    }
  }
  return {dict.grid_rad(best_q), best_q + 1};
}

double estimate_aoa_coarse(const PowerEstimate& p, int n_directions) {
  if (p.p.size() != n_directions)
    throw std::invalid_argument(
        "estimate_aoa_coarse: power/directions size mismatch");
  int best_d = 0;
  for (int d = 1; d < n_directions; ++d)
    if (p.p(d) > p.p(best_d)) best_d = d;  // ties resolve to the smallest d
  return beam_pointing(best_d + 1, n_directions);
}

double expected_direction_power(int d, const ClusterSet& clusters,
                                const BeamMap& bmap, const SystemConfig& cfg,
                                double noise_var) {
  const int n_dir = static_cast<int>(bmap.beams.cols());
  if (d < 1 || d > n_dir)
    throw std::invalid_argument("expected_direction_power: d out of range");
  const int n_used =
      static_cast<int>(bmap.subcarriers.rows() * bmap.subcarriers.cols());
  const Eigen::VectorXcd v = array_response(clusters.aod_rad[0], cfg.n_t);
  double acc = 0.0;
  for (int l = 0; l < clusters.size(); ++l) {
    const Eigen::VectorXcd a_rx = array_response(clusters.aoa_rad[l], cfg.n_r);
    const Eigen::VectorXcd a_tx = array_response(clusters.aod_rad[l], cfg.n_t);
    acc += std::norm(bmap.beams.col(d - 1).dot(a_rx)) *
           std::norm(a_tx.dot(v)) * clusters.power[l];
  }
  const double signal_scale =
      static_cast<double>(cfg.n_r) * cfg.n_t * cfg.n_t / n_used;
  return signal_scale * acc + cfg.n_r * noise_var;
}

}  // namespace ttdbt
