#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttdbt/channel.hpp"
#include "ttdbt/codebook.hpp"
#include "ttdbt/experiments.hpp"
#include "ttdbt/hwspec.hpp"

namespace ttdbt {

// A full run description parsed from a `key = value` config file. Key names
// carry their units (fc_ghz, sigma_t_ps, ...) so a file never needs a
// comment to be unambiguous. See configs/schema.cfg for the commented list
// of every key, its type, unit and default.
struct RunConfig {
  SystemConfig system;

  Architecture arch = Architecture::rf;
  double snr_db = 20.0;
  double sigma_a_db = 0.0;
  double sigma_p_rad = 0.0;
  double sigma_t_s = 0.0;

  int trials = 2000;
  std::uint64_t seed = 0;
  int threads = 1;

  std::optional<SweepParam> sweep;
  std::vector<double> sweep_values;  // in the sweep parameter's native unit
  std::string output;                // CSV path; empty = stdout

  double f_clk_hz = 4e9;
  HwCapability hw;
};

// Parses `key = value` lines ('#' or ';' start a comment, blank lines
// ignored). Unknown keys, duplicate keys, malformed values, and values that
// violate SystemConfig::validate() all throw std::invalid_argument with the
// offending key named in the message.
RunConfig parse_config(std::istream& is);

// File wrapper: throws std::runtime_error when the file cannot be opened,
// std::invalid_argument (from parse_config) on bad content.
RunConfig load_config(const std::string& path);

}  // namespace ttdbt
