// SPDX-License-Identifier: Apache-2.0
//
// Flat `section.key = value` experiment files. `#` starts a comment; lists
// are comma separated. Unknown keys are rejected.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wetsim/simulator.hpp"

namespace wetsim {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

/// Every accepted key with its default, in help order.
const std::vector<ConfigKey>& config_keys();

/// Parses and validates. Errors are ConfigError naming the source, line and key.
ExperimentConfig parse_config_text(std::string_view text, std::string_view source = "<config>");

/// Throws IoError if the file cannot be read.
ExperimentConfig parse_config_file(const std::string& path);

/// Key reference table for --help.
std::string config_help();

double dbm_to_watts(double dbm);

}  // namespace wetsim
