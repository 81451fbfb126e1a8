#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ttdbt/codebook.hpp"

using namespace ttdbt;

namespace {

constexpr double kPi = std::numbers::pi;

SystemConfig reference_config() { return SystemConfig{}; }

double max_awv_deviation(const SystemConfig& cfg) {
  const TapDesign taps = design_taps(cfg);
  const BeamMap bmap = beam_map(cfg);
  double worst = 0.0;
  for (int d = 0; d < bmap.subcarriers.rows(); ++d)
    for (int r = 0; r < bmap.subcarriers.cols(); ++r) {
      const Eigen::VectorXcd w = awv_ideal(taps, bmap.subcarriers(d, r), cfg);
      worst = std::max(worst, (w - bmap.beams.col(d)).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

TEST_CASE("design_taps produces uniformly spaced delays and phases") {
  const SystemConfig cfg = reference_config();
  const TapDesign taps = design_taps(cfg);
  REQUIRE(taps.delays_s.size() == 16);

  const double delta_tau = 4.0 / 2e9;  // R/BW = 2 ns
  for (int n = 0; n < 16; ++n)
    CHECK(taps.delays_s(n) == n * delta_tau);
  CHECK(taps.delays_s(15) == doctest::Approx(30e-9).epsilon(1e-12));
  CHECK(taps.delays_s(0) == 0.0);
  CHECK(taps.phases_rad(0) == 0.0);

  // 2πR(fc - BW/2)/BW is an exact multiple of 2π here, so ψ = 0 and the
  // phase step is π (sgn(0) = +1).
  CHECK(taps.psi_rad == 0.0);
  for (int n = 0; n < 16; ++n)
    CHECK(taps.phases_rad(n) == doctest::Approx(n * kPi).epsilon(1e-12));

  SUBCASE("R=1 gives half-nanosecond steps") {
    SystemConfig cfg1 = cfg;
    cfg1.diversity_r = 1;
    const TapDesign taps1 = design_taps(cfg1);
    CHECK(taps1.delays_s(1) - taps1.delays_s(0) ==
          doctest::Approx(0.5e-9).epsilon(1e-12));
  }

  SUBCASE("psi stays in (-pi, pi]") {
    for (double fc_ghz : {59.7, 60.0, 60.3, 61.13, 73.5}) {
      SystemConfig c = cfg;
      c.fc_hz = fc_ghz * 1e9;
      const TapDesign t = design_taps(c);
      CHECK(t.psi_rad > -kPi);
      CHECK(t.psi_rad <= kPi);
    }
  }
}

TEST_CASE("beam_map lays out disjoint subcarrier sets and DFT beams") {
  const SystemConfig cfg = reference_config();
  const BeamMap bmap = beam_map(cfg);
  REQUIRE(bmap.subcarriers.rows() == 32);
  REQUIRE(bmap.subcarriers.cols() == 4);

  CHECK(bmap.subcarriers(0, 0) == 1);
  CHECK(bmap.subcarriers(0, 1) == 1025);
  CHECK(bmap.subcarriers(0, 2) == 2049);
  CHECK(bmap.subcarriers(0, 3) == 3073);
  CHECK(bmap.subcarriers(1, 0) == 33);
  CHECK(bmap.subcarriers(1, 1) == 1057);
  CHECK(bmap.subcarriers(1, 2) == 2081);
  CHECK(bmap.subcarriers(1, 3) == 3105);

  SUBCASE("pairwise disjoint, all within range") {
    std::vector<int> all(bmap.used);
    CHECK(all.size() == 128);
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(all.front() >= 1);
    CHECK(all.back() <= 4096);
  }

  SUBCASE("broadside beam is all ones") {
    const int d_broadside = 32 / 2 + 1;  // 1-based
    for (int n = 0; n < 16; ++n) {
      CHECK(bmap.beams(n, d_broadside - 1).real() == doctest::Approx(1.0));
      CHECK(std::abs(bmap.beams(n, d_broadside - 1).imag()) < 1e-12);
    }
  }

  SUBCASE("unit-magnitude entries") {
    for (int d = 0; d < 32; ++d)
      for (int n = 0; n < 16; ++n)
        CHECK(std::abs(bmap.beams(n, d)) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("overcrowded configuration rejected") {
    SystemConfig bad = cfg;
    bad.m_tot = 64;
    bad.directions = 32;
    bad.diversity_r = 4;  // D*R = 128 > 64
    CHECK_THROWS_AS(beam_map(bad), std::invalid_argument);
  }
}

TEST_CASE("per-direction weights are constant across the probed set") {
  SystemConfig cfg = reference_config();

  SUBCASE("exact spacing: identity to machine precision") {
    cfg.spacing = SpacingMode::exact;
    CHECK(max_awv_deviation(cfg) < 1e-9);
  }

  SUBCASE("endpoint spacing: bounded, nonzero deviation") {
    cfg.spacing = SpacingMode::endpoint;
    const double dev = max_awv_deviation(cfg);
    // The off-by-one grid stretches the per-branch phase by at most
    // 2*pi*(M_tot - M_1)*(N_R - 1)*R / (M_tot*(M_tot - 1)) ~ 0.0913 rad
    // for this configuration, and the worst case is nearly attained.
    CHECK(dev < 0.0914);
    CHECK(dev > 0.01);
  }
}

TEST_CASE("awv_ideal entries are unit magnitude, branch 1 is one") {
  const SystemConfig cfg = reference_config();
  const TapDesign taps = design_taps(cfg);
  for (int m : {1, 17, 1025, 2049, 4096}) {
    const Eigen::VectorXcd w = awv_ideal(taps, m, cfg);
    CHECK(w(0) == std::complex<double>(1.0, 0.0));
    for (int n = 0; n < 16; ++n)
      CHECK(std::abs(w(n)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sample_impairments draws the documented statistics") {
  const SystemConfig cfg = reference_config();
  const TapDesign taps = design_taps(cfg);

  SUBCASE("all sigmas zero reproduces the nominal taps exactly") {
    Rng rng(31);
    const ImpairmentDraw imp =
        sample_impairments(rng, taps, 0.0, 0.0, 0.0, Architecture::rf);
    for (int n = 0; n < 16; ++n) {
      CHECK(imp.gain(n) == 1.0);
      CHECK(imp.phase_rad(n) == taps.phases_rad(n));
      CHECK(imp.delay_s(n) == taps.delays_s(n));
    }
  }

  SUBCASE("gain error: sample std of 10 log10(alpha) is sigma_a") {
    Rng rng(37);
    const int draws = 6250;  // 6250 x 16 branches = 1e5 samples
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const ImpairmentDraw imp =
          sample_impairments(rng, taps, 2.5, 0.0, 0.0, Architecture::rf);
      for (int n = 0; n < 16; ++n) {
        const double db = 10.0 * std::log10(imp.gain(n));
        sum += db;
        sum_sq += db * db;
      }
    }
    const double n_samples = draws * 16.0;
    const double mean = sum / n_samples;
    const double stddev = std::sqrt(sum_sq / n_samples - mean * mean);
    CHECK(stddev == doctest::Approx(2.5).epsilon(0.02));
  }

  SUBCASE("delay error: sample std of the delay perturbation is sigma_t") {
    Rng rng(41);
    const int draws = 6250;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const ImpairmentDraw imp = sample_impairments(rng, taps, 0.0, 0.0,
                                                    125e-12, Architecture::bb);
      for (int n = 0; n < 16; ++n) {
        const double dt = imp.delay_s(n) - taps.delays_s(n);
        sum += dt;
        sum_sq += dt * dt;
      }
    }
    const double n_samples = draws * 16.0;
    const double mean = sum / n_samples;
    const double stddev = std::sqrt(sum_sq / n_samples - mean * mean);
    CHECK(stddev == doctest::Approx(125e-12).epsilon(0.02));
  }

  SUBCASE("negative sigma rejected") {
    Rng rng(43);
    CHECK_THROWS_AS(
        sample_impairments(rng, taps, -1.0, 0.0, 0.0, Architecture::rf),
        std::invalid_argument);
  }

  SUBCASE("matching seeds reproduce the draw bit for bit") {
    Rng r1(47), r2(47);
    const ImpairmentDraw a =
        sample_impairments(r1, taps, 1.0, 0.2, 5e-12, Architecture::rf);
    const ImpairmentDraw b =
        sample_impairments(r2, taps, 1.0, 0.2, 5e-12, Architecture::rf);
    CHECK((a.gain - b.gain).norm() == 0.0);
    CHECK((a.phase_rad - b.phase_rad).norm() == 0.0);
    CHECK((a.delay_s - b.delay_s).norm() == 0.0);
  }
}

TEST_CASE("awv_impaired magnitudes and architecture phases") {
  const SystemConfig cfg = reference_config();
  const TapDesign taps = design_taps(cfg);

  SUBCASE("entry magnitudes equal the gain draw") {
    Rng rng(53);
    const ImpairmentDraw imp =
        sample_impairments(rng, taps, 2.0, 0.3, 10e-12, Architecture::rf);
    const Eigen::VectorXcd w = awv_impaired(imp, 100, cfg);
    for (int n = 0; n < 16; ++n)
      CHECK(std::abs(w(n)) == doctest::Approx(imp.gain(n)).epsilon(1e-14));
  }

  SUBCASE("zero impairments: both architectures equal the ideal weights") {
    Rng rng(59);
    for (Architecture arch : {Architecture::rf, Architecture::bb}) {
      const ImpairmentDraw imp =
          sample_impairments(rng, taps, 0.0, 0.0, 0.0, arch);
      for (int m : {1, 1025, 3073}) {
        const Eigen::VectorXcd w = awv_impaired(imp, m, cfg);
        const Eigen::VectorXcd ideal = awv_ideal(taps, m, cfg);
        CHECK((w - ideal).cwiseAbs().maxCoeff() < 1e-15);
      }
    }
  }

  SUBCASE("delay-error-free BB weights match RF bit for bit") {
    Rng r1(61), r2(61);
    const ImpairmentDraw rf =
        sample_impairments(r1, taps, 1.0, 0.3, 0.0, Architecture::rf);
    const ImpairmentDraw bb =
        sample_impairments(r2, taps, 1.0, 0.3, 0.0, Architecture::bb);
    for (int m : {1, 512, 2049, 4096}) {
      const Eigen::VectorXcd w_rf = awv_impaired(rf, m, cfg);
      const Eigen::VectorXcd w_bb = awv_impaired(bb, m, cfg);
      CHECK((w_rf - w_bb).norm() == 0.0);
    }
  }

  SUBCASE("RF delay error propagates at the carrier scale") {
    // Per-branch phase error std ≈ 2π f_m σ_T ≈ 0.565 rad at σ_T = 1.5 ps.
    Rng rng(67);
    const int draws = 3000;
    const int m_mid = 2049;  // f_m = 60 GHz exactly in exact spacing mode
    const Eigen::VectorXcd ideal = awv_ideal(taps, m_mid, cfg);
    double sum_sq = 0.0;
    int count = 0;
    for (int i = 0; i < draws; ++i) {
      const ImpairmentDraw imp = sample_impairments(rng, taps, 0.0, 0.0,
                                                    1.5e-12, Architecture::rf);
      const Eigen::VectorXcd w = awv_impaired(imp, m_mid, cfg);
      for (int n = 0; n < 16; ++n) {
        const double err = std::arg(w(n) / ideal(n));
        sum_sq += err * err;
        ++count;
      }
    }
    const double expected = 2.0 * kPi * 60e9 * 1.5e-12;
    CHECK(std::sqrt(sum_sq / count) ==
          doctest::Approx(expected).epsilon(0.05));
  }

  SUBCASE("BB delay error propagates at the baseband scale") {
    // At the band edge the error std is 2π(BW/2)σ_T ≈ 0.785 rad at 125 ps.
    Rng rng(71);
    const int draws = 3000;
    const int m_edge = 1;  // f_m - fc = -1 GHz
    const Eigen::VectorXcd ideal = awv_ideal(taps, m_edge, cfg);
    double sum_sq = 0.0;
    int count = 0;
    for (int i = 0; i < draws; ++i) {
      const ImpairmentDraw imp = sample_impairments(
          rng, taps, 0.0, 0.0, 125e-12, Architecture::bb);
      const Eigen::VectorXcd w = awv_impaired(imp, m_edge, cfg);
      for (int n = 0; n < 16; ++n) {
        const double err = std::arg(w(n) / ideal(n));
        sum_sq += err * err;
        ++count;
      }
    }
    const double expected = 2.0 * kPi * 1e9 * 125e-12;
    CHECK(std::sqrt(sum_sq / count) ==
          doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("beam_pointing inverts the DFT beam directions") {
  CHECK(beam_pointing(17, 32) == 0.0);
  CHECK(beam_pointing(1, 32) == doctest::Approx(-kPi / 2));
  CHECK(beam_pointing(25, 32) == doctest::Approx(kPi / 6));

  double prev = beam_pointing(1, 32);
  for (int d = 2; d <= 32; ++d) {
    const double cur = beam_pointing(d, 32);
    CHECK(cur > prev);
    prev = cur;
  }

  CHECK_THROWS_AS(beam_pointing(0, 32), std::invalid_argument);
  CHECK_THROWS_AS(beam_pointing(33, 32), std::invalid_argument);
}

TEST_CASE("tap table lists branch, delay in ps, phase in rad") {
  const SystemConfig cfg = reference_config();
  const TapDesign taps = design_taps(cfg);
  std::ostringstream os;
  write_tap_table(os, taps);
  const std::string text = os.str();
  CHECK(text.find("branch") != std::string::npos);
  CHECK(text.find("delay_ps") != std::string::npos);
  CHECK(text.find("phase_rad") != std::string::npos);
  CHECK(text.find("30000.000") != std::string::npos);  // tau_16 = 30 ns
  // 17 lines: header plus one row per branch.
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}
