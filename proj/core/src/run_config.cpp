#include "ttdbt/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ttdbt {

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "' " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(const std::string& key, std::string_view value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    key_error(key, "expects a number, got '" + std::string(value) + "'");
  return out;
}

int parse_int(const std::string& key, std::string_view value) {
  int out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    key_error(key, "expects an integer, got '" + std::string(value) + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, std::string_view value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    key_error(key,
              "expects an unsigned integer, got '" + std::string(value) + "'");
  return out;
}

bool parse_bool(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  key_error(key, "expects true/false, got '" + std::string(value) + "'");
}

std::vector<double> parse_double_list(const std::string& key,
                                      std::string_view value) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= value.size()) {
    const size_t comma = value.find(',', start);
    const std::string_view item = trim(
        value.substr(start, comma == std::string_view::npos ? comma
                                                            : comma - start));
    if (item.empty()) key_error(key, "has an empty list entry");
    out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SweepParam parse_sweep(const std::string& key, std::string_view value) {
  if (value == "r") return SweepParam::diversity_r;
  if (value == "snr") return SweepParam::snr_db;
  if (value == "sigma_a") return SweepParam::gain_sigma_db;
  if (value == "sigma_p") return SweepParam::phase_sigma_rad;
  if (value == "sigma_t") return SweepParam::delay_sigma_s;
  key_error(key, "expects one of r, snr, sigma_a, sigma_p, sigma_t; got '" +
                     std::string(value) + "'");
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  RunConfig rc;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  std::vector<double> raw_values;  // converted once the sweep param is known

  while (std::getline(is, line)) {
    ++lineno;
    std::string_view sv(line);
    const size_t comment = sv.find_first_of("#;");
    if (comment != std::string_view::npos) sv = sv.substr(0, comment);
    sv = trim(sv);
    if (sv.empty()) continue;

    const size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key(trim(sv.substr(0, eq)));
    const std::string value(trim(sv.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": missing key before '='");
    if (value.empty()) key_error(key, "has an empty value");
    if (!seen.insert(key).second) key_error(key, "appears more than once");

    constexpr double kDegToRad = std::numbers::pi / 180.0;
    if (key == "fc_ghz") {
      rc.system.fc_hz = parse_double(key, value) * 1e9;
    } else if (key == "bw_ghz") {
      rc.system.bw_hz = parse_double(key, value) * 1e9;
    } else if (key == "m_tot") {
      rc.system.m_tot = parse_int(key, value);
    } else if (key == "n_t") {
      rc.system.n_t = parse_int(key, value);
    } else if (key == "n_r") {
      rc.system.n_r = parse_int(key, value);
    } else if (key == "directions") {
      rc.system.directions = parse_int(key, value);
    } else if (key == "grid_q") {
      rc.system.grid_q = parse_int(key, value);
    } else if (key == "diversity_r") {
      rc.system.diversity_r = parse_int(key, value);
    } else if (key == "adc_bits") {
      rc.system.adc_bits = parse_int(key, value);
    } else if (key == "adc_freq_shortcut") {
      rc.system.adc_freq_shortcut = parse_bool(key, value);
    } else if (key == "spacing_mode") {
      if (value == "exact")
        rc.system.spacing = SpacingMode::exact;
      else if (value == "endpoint")
        rc.system.spacing = SpacingMode::endpoint;
      else
        key_error(key, "expects exact or endpoint, got '" + value + "'");
    } else if (key == "channel_mode") {
      if (value == "ray")
        rc.system.channel_mode = ChannelMode::ray_based;
      else if (value == "iid")
        rc.system.channel_mode = ChannelMode::iid_subband;
      else
        key_error(key, "expects ray or iid, got '" + value + "'");
    } else if (key == "cluster_powers_db") {
      rc.system.cluster_powers_db = parse_double_list(key, value);
    } else if (key == "rays_per_cluster") {
      rc.system.rays_per_cluster = parse_int(key, value);
    } else if (key == "delay_spread_ns") {
      rc.system.delay_spread_s = parse_double(key, value) * 1e-9;
    } else if (key == "coherence_subbands") {
      rc.system.coherence_subbands = parse_int(key, value);
    } else if (key == "angle_range_deg") {
      rc.system.angle_range_rad = parse_double(key, value) * kDegToRad;
    } else if (key == "arch") {
      if (value == "rf")
        rc.arch = Architecture::rf;
      else if (value == "bb")
        rc.arch = Architecture::bb;
      else
        key_error(key, "expects rf or bb, got '" + value + "'");
    } else if (key == "snr_db") {
      rc.snr_db = parse_double(key, value);
    } else if (key == "sigma_a_db") {
      rc.sigma_a_db = parse_double(key, value);
      if (rc.sigma_a_db < 0.0) key_error(key, "must be >= 0");
    } else if (key == "sigma_p_rad") {
      rc.sigma_p_rad = parse_double(key, value);
      if (rc.sigma_p_rad < 0.0) key_error(key, "must be >= 0");
    } else if (key == "sigma_t_ps") {
      rc.sigma_t_s = parse_double(key, value) * 1e-12;
      if (rc.sigma_t_s < 0.0) key_error(key, "must be >= 0");
    } else if (key == "trials") {
      rc.trials = parse_int(key, value);
      if (rc.trials < 1) key_error(key, "must be >= 1");
    } else if (key == "seed") {
      rc.seed = parse_u64(key, value);
    } else if (key == "threads") {
      rc.threads = parse_int(key, value);
      if (rc.threads < 1) key_error(key, "must be >= 1");
    } else if (key == "sweep") {
      rc.sweep = parse_sweep(key, value);
    } else if (key == "values") {
      raw_values = parse_double_list(key, value);
    } else if (key == "output") {
      rc.output = value;
    } else if (key == "f_clk_ghz") {
      rc.f_clk_hz = parse_double(key, value) * 1e9;
      if (!(rc.f_clk_hz > 0.0)) key_error(key, "must be positive");
    } else if (key == "hw_max_range_ns") {
      rc.hw.max_range_s = parse_double(key, value) * 1e-9;
    } else if (key == "hw_min_resolution_ps") {
      rc.hw.min_resolution_s = parse_double(key, value) * 1e-12;
    } else {
      key_error(key, "is not a recognized key");
    }
  }

  if (!raw_values.empty()) {
    rc.sweep_values = raw_values;
    // 'values' entries use the sweep parameter's reported unit; the delay
    // sigma is entered in picoseconds and carried internally in seconds.
    if (rc.sweep && *rc.sweep == SweepParam::delay_sigma_s)
      for (double& v : rc.sweep_values) v *= 1e-12;
  }

  rc.system.validate();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open config file: " + path);
  try {
    return parse_config(file);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace ttdbt
