#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fowt/distributions.hpp"
#include "fowt/fatigue.hpp"
#include "fowt/simulator.hpp"
#include "fowt/stress.hpp"

namespace fowt {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Sectioned key=value text. '#' and ';' start comments.
inline std::map<std::string, std::map<std::string, std::string>> parse_ini(
    std::istream& in, const std::string& origin) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error(origin + ":" + std::to_string(lineno) + ": malformed section");
      }
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    sections[current][key] = value;
  }
  return sections;
}

class IniReader {
 public:
  IniReader(std::map<std::string, std::map<std::string, std::string>> sections,
            std::string origin)
      : sections_(std::move(sections)), origin_(std::move(origin)) {}

  bool fetch(const std::string& section, const std::string& key, std::string& out) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return false;
    auto k = s->second.find(key);
    if (k == s->second.end()) return false;
    out = k->second;
    s->second.erase(k);
    return true;
  }

  void get(const std::string& section, const std::string& key, double& value) {
    std::string raw;
    if (!fetch(section, key, raw)) return;
    try {
      std::size_t pos = 0;
      value = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw config_error(origin_ + ": [" + section + "] " + key + ": not a number: " + raw);
    }
  }

  template <std::unsigned_integral T>
  void get(const std::string& section, const std::string& key, T& value) {
    std::string raw;
    if (!fetch(section, key, raw)) return;
    try {
      if (raw.find('-') != std::string::npos) throw std::invalid_argument(raw);
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      value = static_cast<T>(v);
    } catch (const std::exception&) {
      throw config_error(origin_ + ": [" + section + "] " + key + ": not an integer: " + raw);
    }
  }

  void get(const std::string& section, const std::string& key, bool& value) {
    std::string raw;
    if (!fetch(section, key, raw)) return;
    if (raw == "true" || raw == "1" || raw == "on") {
      value = true;
    } else if (raw == "false" || raw == "0" || raw == "off") {
      value = false;
    } else {
      throw config_error(origin_ + ": [" + section + "] " + key + ": not a boolean: " + raw);
    }
  }

  void get(const std::string& section, const std::string& key, std::string& value) {
    std::string raw;
    if (fetch(section, key, raw)) value = raw;
  }

  void get(const std::string& section, const std::string& key, std::vector<double>& value) {
    std::string raw;
    if (!fetch(section, key, raw)) return;
    std::vector<double> items;
    std::stringstream ss(raw);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) continue;
      try {
        items.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw config_error(origin_ + ": [" + section + "] " + key + ": not a number: " + cell);
      }
    }
    if (items.empty()) {
      throw config_error(origin_ + ": [" + section + "] " + key + ": empty list");
    }
    value = items;
  }

  // Any key nobody consumed is a typo; fail loudly.
  void finish() const {
    for (const auto& [section, keys] : sections_) {
      if (!keys.empty()) {
        throw config_error(origin_ + ": unknown key [" + section + "] " +
                           keys.begin()->first);
      }
    }
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

}  // namespace detail

struct FatigueSettings {
  SNCurve tower = tower_sn_curve();
  SNCurve blade = blade_sn_curve();
  double sigma_mf = 0.0;       // Pa
  double goodman_epsilon = 1.0;
};

// Full run configuration. Defaults reproduce the study protocol: 1000
// representative points, 10,000 Monte Carlo samples, four wave headings,
// 600 s simulations, reporting at 5..25 operating years.
struct RunConfig {
  EnvironmentSpecs env;

  std::size_t n_points = 1000;
  std::size_t m_mc_factor = 100;
  bool rearrange = false;

  std::size_t n_mcs = 10000;

  std::uint64_t master_seed = 2024;
  std::string out_dir = "out";

  double duration = 600.0;
  double dt = 0.05;
  double transient = 60.0;
  std::vector<double> headings_deg = {0.0, 30.0, 60.0, 90.0};
  std::size_t realizations_per_point = 1;

  TurbineParams turbine;
  RomParams rom;
  FilterParams tower_fa{0.45, 0.5};
  FilterParams tower_ss{0.45, 0.5};
  FilterParams heave{0.2, 0.3};
  FilterParams blade_flap{0.6, 0.2};

  double blade_root_diameter = 3.542;   // m
  double blade_root_thickness = 0.06;   // m

  FatigueSettings fatigue;

  std::vector<double> times_years = {5.0, 10.0, 15.0, 20.0, 25.0};
  double threshold = 1.0;
  double bandwidth = 0.0;  // 0 = Silverman rule
  std::size_t pdf_grid_points = 1024;
  double seconds_per_year = kSecondsPerYear;

  SimulationConfig simulation_config(double heading_deg, std::uint64_t seed) const {
    SimulationConfig c;
    c.duration = duration;
    c.dt = dt;
    c.transient = transient;
    c.wave_heading_deg = heading_deg;
    c.seed = seed;
    c.tower_fore_aft = tower_fa;
    c.tower_side_side = tower_ss;
    c.heave = heave;
    c.blade_flap = blade_flap;
    return c;
  }

  SectionGeometry tower_geometry() const {
    return SectionGeometry::annulus(turbine.tower_base_outer_diameter,
                                    turbine.tower_base_wall_thickness);
  }

  SectionGeometry blade_geometry() const {
    return SectionGeometry::annulus(blade_root_diameter, blade_root_thickness);
  }

  void validate() const {
    env.validate();
    turbine.validate();
    rom.validate();
    if (n_points < 1 || n_mcs < 1 || realizations_per_point < 1) {
      throw config_error("config: sizes must be >= 1");
    }
    if (m_mc_factor < 10) throw config_error("config: m_mc_factor must be >= 10");
    if (headings_deg.empty()) throw config_error("config: empty heading list");
    for (double b : headings_deg) {
      if (!(b >= 0.0 && b <= 90.0)) {
        throw config_error("config: headings must lie in [0, 90] degrees");
      }
    }
    if (times_years.empty()) throw config_error("config: empty reporting times");
    for (std::size_t i = 0; i < times_years.size(); ++i) {
      if (!(times_years[i] > 0.0)) throw config_error("config: reporting times must be > 0");
      if (i > 0 && !(times_years[i] > times_years[i - 1])) {
        throw config_error("config: reporting times must be ascending");
      }
    }
    if (bandwidth < 0.0) throw config_error("config: negative bandwidth");
    if (pdf_grid_points < 2) throw config_error("config: pdf_grid_points must be >= 2");
    if (!(threshold > 0.0)) throw config_error("config: threshold must be > 0");
    if (!(seconds_per_year > 0.0)) throw config_error("config: seconds_per_year must be > 0");
    fatigue.tower.validate();
    fatigue.blade.validate();
    // A full consistency pass: building the per-run structures validates the
    // remaining fields.
    simulation_config(headings_deg.front(), master_seed).validate();
    tower_geometry();
    blade_geometry();
  }
};

inline RunConfig load_config(std::istream& in, const std::string& origin) {
  detail::IniReader r(detail::parse_ini(in, origin), origin);
  RunConfig c;

  auto get_dist = [&r](const std::string& prefix, DistributionSpec& spec,
                       const std::string& section = "distributions") {
    if (auto* w = std::get_if<TruncatedWeibull>(&spec)) {
      r.get(section, prefix + "_scale", w->scale);
      r.get(section, prefix + "_shape", w->shape);
      r.get(section, prefix + "_lower", w->lower);
      r.get(section, prefix + "_upper", w->upper);
    } else if (auto* ln = std::get_if<Lognormal>(&spec)) {
      r.get(section, prefix + "_mu", ln->mu);
      r.get(section, prefix + "_sigma", ln->sigma);
    }
  };
  get_dist("wind", c.env.wind_speed);
  get_dist("hs", c.env.wave_height);
  get_dist("tp", c.env.peak_period);

  r.get("points", "n", c.n_points);
  r.get("points", "m_mc_factor", c.m_mc_factor);
  r.get("points", "rearrange", c.rearrange);

  r.get("mcs", "n", c.n_mcs);

  r.get("run", "seed", c.master_seed);
  r.get("run", "out_dir", c.out_dir);

  r.get("simulation", "duration_s", c.duration);
  r.get("simulation", "dt_s", c.dt);
  r.get("simulation", "transient_s", c.transient);
  r.get("simulation", "headings_deg", c.headings_deg);
  r.get("simulation", "realizations_per_point", c.realizations_per_point);
  r.get("simulation", "tower_fa_freq_hz", c.tower_fa.natural_freq_hz);
  r.get("simulation", "tower_fa_damping", c.tower_fa.damping_ratio);
  r.get("simulation", "tower_ss_freq_hz", c.tower_ss.natural_freq_hz);
  r.get("simulation", "tower_ss_damping", c.tower_ss.damping_ratio);
  r.get("simulation", "heave_freq_hz", c.heave.natural_freq_hz);
  r.get("simulation", "heave_damping", c.heave.damping_ratio);
  r.get("simulation", "blade_flap_freq_hz", c.blade_flap.natural_freq_hz);
  r.get("simulation", "blade_flap_damping", c.blade_flap.damping_ratio);

  r.get("turbine", "hub_height_m", c.turbine.hub_height);
  r.get("turbine", "tower_base_elev_m", c.turbine.tower_base_elev);
  r.get("turbine", "tower_base_outer_diameter_m", c.turbine.tower_base_outer_diameter);
  r.get("turbine", "tower_base_wall_thickness_m", c.turbine.tower_base_wall_thickness);
  r.get("turbine", "rotor_diameter_m", c.turbine.rotor_diameter);
  r.get("turbine", "rated_wind_ms", c.turbine.rated_wind);
  r.get("turbine", "cut_in_ms", c.turbine.cut_in);
  r.get("turbine", "cut_out_ms", c.turbine.cut_out);
  r.get("turbine", "rotor_speed_min_rpm", c.turbine.rotor_speed_min_rpm);
  r.get("turbine", "rotor_speed_max_rpm", c.turbine.rotor_speed_max_rpm);
  r.get("turbine", "spar_draft_m", c.turbine.spar_draft);

  r.get("model", "air_density", c.rom.air_density);
  r.get("model", "water_density", c.rom.water_density);
  r.get("model", "gravity", c.rom.gravity);
  r.get("model", "turbulence_intensity", c.rom.turbulence_intensity);
  r.get("model", "turbulence_length_m", c.rom.turbulence_length);
  r.get("model", "thrust_coefficient", c.rom.thrust_coefficient);
  r.get("model", "jonswap_gamma", c.rom.jonswap_gamma);
  r.get("model", "spar_diameter_m", c.rom.spar_diameter);
  r.get("model", "inertia_coefficient", c.rom.inertia_coefficient);
  r.get("model", "wave_moment_arm_m", c.rom.wave_moment_arm);
  r.get("model", "thrust_moment_arm_m", c.rom.thrust_moment_arm);
  r.get("model", "topside_weight_n", c.rom.topside_weight);
  r.get("model", "vertical_force_gain", c.rom.vertical_force_gain);
  r.get("model", "blade_count", c.rom.blade_count);
  r.get("model", "blade_mass_kg", c.rom.blade_mass);
  r.get("model", "blade_cg_radius_m", c.rom.blade_cg_radius);
  r.get("model", "blade_flap_arm_m", c.rom.blade_flap_arm);
  r.get("model", "blade_edge_torque_arm_m", c.rom.blade_edge_torque_arm);
  r.get("model", "blade_torsion_arm_m", c.rom.blade_torsion_arm);
  r.get("model", "blade_wave_coupling_m", c.rom.blade_wave_coupling);

  r.get("stress", "blade_root_diameter_m", c.blade_root_diameter);
  r.get("stress", "blade_root_thickness_m", c.blade_root_thickness);

  double tower_ult_mpa = c.fatigue.tower.sigma_ult / 1e6;
  double blade_ult_mpa = c.fatigue.blade.sigma_ult / 1e6;
  double sigma_mf_mpa = c.fatigue.sigma_mf / 1e6;
  r.get("fatigue", "tower_lg_a", c.fatigue.tower.lg_a);
  r.get("fatigue", "tower_m", c.fatigue.tower.m);
  r.get("fatigue", "tower_sigma_ult_mpa", tower_ult_mpa);
  r.get("fatigue", "blade_lg_a", c.fatigue.blade.lg_a);
  r.get("fatigue", "blade_m", c.fatigue.blade.m);
  r.get("fatigue", "blade_sigma_ult_mpa", blade_ult_mpa);
  r.get("fatigue", "sigma_mf_mpa", sigma_mf_mpa);
  r.get("fatigue", "goodman_epsilon", c.fatigue.goodman_epsilon);
  c.fatigue.tower.sigma_ult = tower_ult_mpa * 1e6;
  c.fatigue.blade.sigma_ult = blade_ult_mpa * 1e6;
  c.fatigue.sigma_mf = sigma_mf_mpa * 1e6;

  r.get("reliability", "times_years", c.times_years);
  r.get("reliability", "threshold", c.threshold);
  r.get("reliability", "bandwidth", c.bandwidth);
  r.get("reliability", "pdf_grid_points", c.pdf_grid_points);
  r.get("reliability", "seconds_per_year", c.seconds_per_year);

  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(origin + ": " + e.what());
  }
  return c;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return load_config(in, path);
}

}  // namespace fowt
