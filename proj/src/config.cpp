// SPDX-License-Identifier: Apache-2.0

#include "wetsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "wetsim/errors.hpp"

namespace wetsim {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace {

struct ParseState {
  bool angles_set = false;
  bool power_watts_set = false;
  bool power_dbm_set = false;
  bool grid_set = false;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  if (!v.empty() && v.front() == '[' && v.back() == ']') {
    v = v.substr(1, v.size() - 2);
  }
  while (!v.empty()) {
    const auto comma = v.find(',');
    const std::string_view item = trim(v.substr(0, comma));
    if (!item.empty()) {
      out.push_back(item);
    }
    if (comma == std::string_view::npos) {
      break;
    }
    v.remove_prefix(comma + 1);
  }
  return out;
}

// Thrown by value parsers; the caller adds source, line and key.
struct BadValue {
  std::string what;
};

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw BadValue{"expected a finite number, got '" + std::string(v) + "'"};
  }
  return out;
}

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw BadValue{"expected a nonnegative integer, got '" + std::string(v) + "'"};
  }
  return out;
}

std::size_t to_size(std::string_view v) { return static_cast<std::size_t>(to_u64(v)); }

int to_int(std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw BadValue{"expected an integer, got '" + std::string(v) + "'"};
  }
  return out;
}

Algorithm to_algorithm(std::string_view v) {
  const auto a = parse_algorithm(v);
  if (!a) {
    throw BadValue{"unknown algorithm '" + std::string(v) +
                   "' (expected accpm, cjt, gradient_sign, dist_bf, isotropic or perfect_csi)"};
  }
  return *a;
}

using Setter = std::function<void(ExperimentConfig&, ParseState&, std::string_view)>;

struct Entry {
  ConfigKey key;
  Setter set;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"scenario.m_t", "4", "transmit antennas (>= 2)"},
       [](auto& c, auto&, auto v) { c.scenario.m_t = to_size(v); }},
      {{"scenario.m_r", "2", "receive antennas per receiver"},
       [](auto& c, auto&, auto v) { c.scenario.m_r = to_size(v); }},
      {{"scenario.k_users", "1", "number of energy receivers"},
       [](auto& c, auto&, auto v) { c.scenario.k_users = to_size(v); }},
      {{"scenario.rician_factor_db", "5", "Rician factor in dB"},
       [](auto& c, auto&, auto v) { c.scenario.rician_factor_db = to_double(v); }},
      {{"scenario.pathloss_db", "40", "average path loss in dB"},
       [](auto& c, auto&, auto v) { c.scenario.pathloss_db = to_double(v); }},
      {{"scenario.spacing_ratio", "0.5", "antenna spacing over carrier wavelength"},
       [](auto& c, auto&, auto v) { c.scenario.spacing_ratio = to_double(v); }},
      {{"scenario.user_angles_deg", "-75 + 30(k-1)", "receiver directions in degrees, one per receiver"},
       [](auto& c, auto& st, auto v) {
         c.scenario.user_angles_deg.clear();
         for (auto item : split_list(v)) {
           c.scenario.user_angles_deg.push_back(to_double(item));
         }
         st.angles_set = true;
       }},
      {{"scenario.efficiency", "0.5", "energy harvesting efficiency in (0, 1]"},
       [](auto& c, auto&, auto v) { c.scenario.efficiency = to_double(v); }},
      {{"scenario.power_watts", "1", "transmit power in watts (exclusive with power_dbm)"},
       [](auto& c, auto& st, auto v) {
         c.scenario.power_watts = to_double(v);
         st.power_watts_set = true;
       }},
      {{"scenario.power_dbm", "30", "transmit power in dBm (exclusive with power_watts)"},
       [](auto& c, auto& st, auto v) {
         c.scenario.power_watts = dbm_to_watts(to_double(v));
         st.power_dbm_set = true;
       }},
      {{"schedule.n_total", "200", "block length N in intervals"},
       [](auto& c, auto&, auto v) { c.schedule.n_total = to_size(v); }},
      {{"schedule.n_learn", "60", "learning intervals N_L"},
       [](auto& c, auto&, auto v) { c.schedule.n_learn = to_size(v); }},
      {{"schedule.interval_duration", "1", "interval length T_s"},
       [](auto& c, auto&, auto v) { c.schedule.interval_duration = to_double(v); }},
      {{"algorithm.name", "accpm", "accpm | cjt | gradient_sign | dist_bf | isotropic | perfect_csi"},
       [](auto& c, auto&, auto v) { c.schedule.algorithm = to_algorithm(v); }},
      {{"algorithm.cjt_eta", "0.05", "CJT line-search accuracy"},
       [](auto& c, auto&, auto v) { c.algo.baselines.cjt.eta = to_double(v); }},
      {{"algorithm.cjt_sweeps", "1", "CJT sweeps per receiver"},
       [](auto& c, auto&, auto v) { c.algo.baselines.cjt.sweeps = to_int(v); }},
      {{"algorithm.gs_step", "0.05", "gradient-sign perturbation norm, relative to sqrt(P)"},
       [](auto& c, auto&, auto v) { c.algo.baselines.gradient_sign.step = to_double(v); }},
      {{"algorithm.dbf_chi_over_pi", "0.1", "distributed beamforming phase range, in units of pi"},
       [](auto& c, auto&, auto v) { c.algo.baselines.dist_bf.chi = to_double(v) * std::numbers::pi; }},
      {{"accpm.probe_norm_ratio", "0.1", "probe norm relative to P"},
       [](auto& c, auto&, auto v) { c.algo.accpm.probe_norm_ratio = to_double(v); }},
      {{"accpm.max_trials", "50", "probe draws before halving the probe norm"},
       [](auto& c, auto&, auto v) { c.algo.accpm.max_trials = to_int(v); }},
      {{"accpm.max_halvings", "6", "probe norm halvings before giving up"},
       [](auto& c, auto&, auto v) { c.algo.accpm.max_halvings = to_int(v); }},
      {{"newton.grad_tol", "1e-8", "gradient norm at which a center is accepted"},
       [](auto& c, auto&, auto v) { c.algo.accpm.newton.grad_tol = to_double(v); }},
      {{"newton.max_iters", "200", "Newton iteration cap"},
       [](auto& c, auto&, auto v) { c.algo.accpm.newton.max_iters = to_int(v); }},
      {{"newton.alpha", "0.25", "backtracking sufficient-decrease factor"},
       [](auto& c, auto&, auto v) { c.algo.accpm.newton.alpha = to_double(v); }},
      {{"newton.beta", "0.5", "backtracking step shrink factor"},
       [](auto& c, auto&, auto v) { c.algo.accpm.newton.beta = to_double(v); }},
      {{"newton.feasibility_push", "1e-3", "initial push off a new cut when warm starting"},
       [](auto& c, auto&, auto v) { c.algo.accpm.newton.feasibility_push = to_double(v); }},
      {{"run.trials", "50", "Monte Carlo trials"}, [](auto& c, auto&, auto v) { c.trials = to_size(v); }},
      {{"run.base_seed", "1", "seed of trial 0; trial i uses base_seed + i"},
       [](auto& c, auto&, auto v) { c.base_seed = to_u64(v); }},
      {{"run.output_path", "", "CSV destination (empty: standard output)"},
       [](auto& c, auto&, auto v) { c.output_path = std::string(v); }},
      {{"sweep.grid", "2, 4, ..., n_total", "learning budgets for the sweep command"},
       [](auto& c, auto& st, auto v) {
         c.sweep_grid.clear();
         for (auto item : split_list(v)) {
           c.sweep_grid.push_back(to_size(item));
         }
         st.grid_set = true;
       }},
      {{"compare.algorithms", "accpm, cjt, gradient_sign, dist_bf", "algorithms for compare and sweep"},
       [](auto& c, auto&, auto v) {
         c.compare_algorithms.clear();
         for (auto item : split_list(v)) {
           c.compare_algorithms.push_back(to_algorithm(item));
         }
       }},
  };
  return entries;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& e : registry()) {
      k.push_back(e.key);
    }
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source) {
  ExperimentConfig cfg;
  ParseState st;
  std::set<std::string_view> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Entry* entry = nullptr;
    for (const auto& e : registry()) {
      if (e.key.name == key) {
        entry = &e;
        break;
      }
    }
    if (entry == nullptr) {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(entry->key.name).second) {
      throw ConfigError(where + ": " + std::string(key) + ": key given more than once");
    }
    try {
      entry->set(cfg, st, value);
    } catch (const BadValue& bad) {
      throw ConfigError(where + ": " + std::string(key) + ": " + bad.what);
    }
  }
  if (st.power_watts_set && st.power_dbm_set) {
    throw ConfigError(std::string(source) + ": scenario.power_watts and scenario.power_dbm are mutually exclusive");
  }
  if (!st.angles_set) {
    cfg.scenario.user_angles_deg = default_user_angles(cfg.scenario.k_users);
  }
  if (cfg.compare_algorithms.empty()) {
    cfg.compare_algorithms = {Algorithm::accpm, Algorithm::cjt, Algorithm::gradient_sign, Algorithm::dist_bf};
  }
  if (!st.grid_set) {
    cfg.sweep_grid = default_sweep_grid(cfg.schedule.n_total);
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_help() {
  std::string out = "Config keys (key = value, '#' comments):\n";
  for (const auto& k : config_keys()) {
    std::string line = "  " + std::string(k.name);
    line.resize(std::max<std::size_t>(line.size() + 1, 30), ' ');
    std::string def = "[" + std::string(k.default_value) + "]";
    def.resize(std::max<std::size_t>(def.size() + 1, 24), ' ');
    out += line + def + std::string(k.help) + "\n";
  }
  return out;
}

}  // namespace wetsim
