#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fowt/fft.hpp"
#include "fowt/math.hpp"
#include "fowt/pointset.hpp"

namespace fowt {

class simulation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NREL 5MW spar turbine geometry and operating envelope.
struct TurbineParams {
  double hub_height = 90.0;                  // m above SWL
  double tower_base_elev = 10.0;             // m above SWL
  double tower_base_outer_diameter = 6.5;    // m
  double tower_base_wall_thickness = 0.027;  // m
  double rotor_diameter = 126.0;             // m
  double rated_wind = 11.4;                  // m/s
  double cut_in = 3.0;                       // m/s
  double cut_out = 25.0;                     // m/s
  double rotor_speed_min_rpm = 6.9;
  double rotor_speed_max_rpm = 12.1;
  double spar_draft = 120.0;                 // m below SWL

  void validate() const {
    const double lengths[] = {hub_height, tower_base_elev, tower_base_outer_diameter,
                              tower_base_wall_thickness, rotor_diameter, spar_draft,
                              rated_wind, cut_in, cut_out, rotor_speed_min_rpm,
                              rotor_speed_max_rpm};
    for (double v : lengths) {
      if (!(v > 0.0)) throw std::invalid_argument("TurbineParams: all entries must be > 0");
    }
    if (!(cut_in < rated_wind && rated_wind < cut_out)) {
      throw std::invalid_argument("TurbineParams: requires cut_in < rated < cut_out");
    }
    if (!(tower_base_wall_thickness < tower_base_outer_diameter / 2.0)) {
      throw std::invalid_argument("TurbineParams: wall thickness >= radius");
    }
  }

  double rotor_speed_rad(double v_w) const {
    const double lo = rotor_speed_min_rpm, hi = rotor_speed_max_rpm;
    double rpm;
    if (v_w <= cut_in) {
      rpm = lo;
    } else if (v_w >= rated_wind) {
      rpm = hi;
    } else {
      rpm = lo + (hi - lo) * (v_w - cut_in) / (rated_wind - cut_in);
    }
    return rpm * kTwoPi / 60.0;
  }
};

// Single-mode structural filter: unit-DC-gain second-order system.
struct FilterParams {
  double natural_freq_hz = 0.45;
  double damping_ratio = 0.5;

  void validate() const {
    if (!(natural_freq_hz > 0.0) || !(damping_ratio > 0.0) || !(damping_ratio < 1.0)) {
      throw std::invalid_argument("FilterParams: need f_n > 0 and damping in (0,1)");
    }
  }
};

// Reduced-order model constants. These are documented surrogate values, not
// measured turbine data; fidelity upgrades only touch this struct.
struct RomParams {
  double air_density = 1.225;        // kg/m^3
  double water_density = 1025.0;     // kg/m^3
  double gravity = 9.81;             // m/s^2
  double turbulence_intensity = 0.14;
  double turbulence_length = 340.2;  // m (8.1 * 42 m)
  double thrust_coefficient = 0.70;  // below rated; scaled by (v_rated/v)^2 above
  double jonswap_gamma = 3.3;
  double spar_diameter = 9.4;        // m, submerged column
  double inertia_coefficient = 2.0;  // C_m for the wave inertia force
  double wave_moment_arm = 2.5;      // m, effective wave-force lever after
                                     // platform compliance
  double thrust_moment_arm = 80.0;   // m, hub height above tower base
  double topside_weight = 6.9e6;     // N, rotor-nacelle assembly + tower
  double vertical_force_gain = 1.0;  // scales keel pressure force
  double blade_count = 3.0;
  double blade_mass = 17740.0;       // kg
  double blade_cg_radius = 20.475;   // m
  double blade_flap_arm = 25.0;      // m, thrust share -> root flap moment
  double blade_edge_torque_arm = 5.3;   // m, thrust share -> edgewise moment
  double blade_torsion_arm = 0.9;    // m, thrust share -> root torsion
  double blade_wave_coupling = 4.0;  // m, fore-aft wave force -> flap moment

  void validate() const {
    if (!(air_density > 0.0) || !(water_density > 0.0) || !(gravity > 0.0)) {
      throw std::invalid_argument("RomParams: densities and gravity must be > 0");
    }
    if (turbulence_intensity < 0.0) {
      throw std::invalid_argument("RomParams: turbulence intensity must be >= 0");
    }
    if (!(blade_count >= 1.0) || !(blade_mass > 0.0) || !(blade_cg_radius > 0.0)) {
      throw std::invalid_argument("RomParams: blade constants must be positive");
    }
  }
};

struct SimulationConfig {
  double duration = 600.0;       // analysis window, s
  double dt = 0.05;              // s
  double transient = 60.0;       // simulated then discarded, s
  double wave_heading_deg = 0.0; // beta in [0, 90]
  std::uint64_t seed = 1;
  FilterParams tower_fore_aft{0.45, 0.5};
  FilterParams tower_side_side{0.45, 0.5};
  FilterParams heave{0.2, 0.3};
  FilterParams blade_flap{0.6, 0.2};

  void validate() const {
    if (!(duration > 0.0) || !(dt > 0.0) || transient < 0.0) {
      throw std::invalid_argument("SimulationConfig: nonpositive duration or dt");
    }
    const double steps = duration / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
      throw std::invalid_argument("SimulationConfig: duration/dt must be an integer");
    }
    const double tsteps = transient / dt;
    if (std::abs(tsteps - std::round(tsteps)) > 1e-9) {
      throw std::invalid_argument("SimulationConfig: transient/dt must be an integer");
    }
    if (!(wave_heading_deg >= 0.0 && wave_heading_deg <= 90.0)) {
      throw std::invalid_argument("SimulationConfig: heading must be in [0, 90] deg");
    }
    tower_fore_aft.validate();
    tower_side_side.validate();
    heave.validate();
    blade_flap.validate();
  }
};

// Tower-base and blade-root section load channels on a fixed time step.
struct LoadTimeSeries {
  double dt = 0.05;
  std::vector<double> tower_nz;   // axial force, N (compression negative)
  std::vector<double> tower_mx;   // roll moment, N*m
  std::vector<double> tower_my;   // pitch moment, N*m
  std::vector<double> blade_fx;   // out-of-plane shear, N
  std::vector<double> blade_fy;   // in-plane shear, N
  std::vector<double> blade_fz;   // axial force, N
  std::vector<double> blade_mx;   // in-plane (edgewise) moment, N*m
  std::vector<double> blade_my;   // out-of-plane (flapwise) moment, N*m
  std::vector<double> blade_mz;   // pitching (torsion) moment, N*m

  std::size_t size() const { return tower_nz.size(); }

  const std::vector<double>& channel(std::size_t i) const {
    const std::vector<double>* chans[] = {&tower_nz, &tower_mx, &tower_my,
                                          &blade_fx, &blade_fy, &blade_fz,
                                          &blade_mx, &blade_my, &blade_mz};
    if (i >= 9) throw std::out_of_range("LoadTimeSeries: channel index");
    return *chans[i];
  }

  static const char* channel_name(std::size_t i) {
    static const char* names[] = {"Nz", "Mx_t", "My_t", "Fx_b", "Fy_b",
                                  "Fz_b", "Mx_b", "My_b", "Mz_b"};
    if (i >= 9) throw std::out_of_range("LoadTimeSeries: channel index");
    return names[i];
  }
};

namespace detail {

// Ramp-invariant discretization of y'' + 2*zeta*w*y' + w^2*y = w^2*u(t):
// exact for piecewise-linear input, unconditionally stable.
class SecondOrderFilter {
 public:
  SecondOrderFilter(const FilterParams& p, double dt)
      : omega_(kTwoPi * p.natural_freq_hz), zeta_(p.damping_ratio) {
    const double wd = omega_ * std::sqrt(1.0 - zeta_ * zeta_);
    decay_ = std::exp(-zeta_ * omega_ * dt);
    cos_ = std::cos(wd * dt);
    sin_over_wd_ = std::sin(wd * dt) / wd;
    dt_ = dt;
  }

  // Filters the whole series; state starts at static equilibrium of u[0].
  std::vector<double> apply(const std::vector<double>& u) const {
    std::vector<double> out(u.size());
    if (u.empty()) return out;
    double y = u[0];
    double v = 0.0;
    out[0] = y;
    const double zw = zeta_ * omega_;
    const double w2 = omega_ * omega_;
    for (std::size_t k = 1; k < u.size(); ++k) {
      const double r = (u[k] - u[k - 1]) / dt_;
      const double yp0 = u[k - 1] - 2.0 * zeta_ / omega_ * r;
      const double dy0 = y - yp0;
      const double dv0 = v - r;
      const double dy1 = decay_ * (dy0 * cos_ + (dv0 + zw * dy0) * sin_over_wd_);
      const double dv1 = decay_ * (dv0 * cos_ - (w2 * dy0 + zw * dv0) * sin_over_wd_);
      y = yp0 + r * dt_ + dy1;
      v = r + dv1;
      out[k] = y;
    }
    return out;
  }

 private:
  double omega_, zeta_, decay_, cos_, sin_over_wd_, dt_;
};

struct SpectralGrid {
  std::size_t nfft = 0;
  double df = 0.0;
  std::size_t k_min = 0;  // first synthesized bin
  std::size_t k_max = 0;  // one past the last synthesized bin
};

// Synthesis bins: multiples of 1/(nfft*dt), excluding content below the
// low cutoff (1/analysis-duration) and at/above Nyquist.
inline SpectralGrid make_grid(std::size_t n_samples, double dt, double f_low) {
  SpectralGrid g;
  g.nfft = next_pow2(n_samples);
  g.df = 1.0 / (static_cast<double>(g.nfft) * dt);
  g.k_min = static_cast<std::size_t>(std::ceil(f_low / g.df - 1e-9));
  if (g.k_min < 1) g.k_min = 1;
  g.k_max = g.nfft / 2;
  return g;
}

}  // namespace detail

inline double kaimal_psd(double f, double v_w, double sigma_u, double length_scale) {
  const double lv = length_scale / v_w;
  return 4.0 * sigma_u * sigma_u * lv / std::pow(1.0 + 6.0 * f * lv, 5.0 / 3.0);
}

// IEC normal turbulence model: standard deviation of the longitudinal
// component for reference intensity I_ref.
inline double ntm_sigma(double v_w, double i_ref) {
  return i_ref * (0.75 * v_w + 5.6);
}

// Turbulent longitudinal wind speed: sum of cosines with Kaimal amplitudes and
// seeded i.i.d. phases, recentred so the returned window has mean v_w exactly.
inline std::vector<double> synthesize_wind(double v_w, double duration, double dt,
                                           std::uint64_t seed,
                                           double turbulence_intensity = 0.14,
                                           double length_scale = 340.2,
                                           double lowcut_hz = 0.0) {
  if (!(v_w >= 3.0 && v_w <= 25.0)) {
    throw std::domain_error("synthesize_wind: wind speed outside operating band");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  if (turbulence_intensity == 0.0) {
    return std::vector<double>(n, v_w);
  }
  const auto grid =
      detail::make_grid(n, dt, lowcut_hz > 0.0 ? lowcut_hz : 1.0 / duration);
  const double sigma_u = ntm_sigma(v_w, turbulence_intensity);

  std::vector<double> amp(grid.k_max, 0.0);
  std::vector<double> phase(grid.k_max, 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t k = grid.k_min; k < grid.k_max; ++k) {
    const double f = static_cast<double>(k) * grid.df;
    amp[k] = std::sqrt(2.0 * kaimal_psd(f, v_w, sigma_u, length_scale) * grid.df);
    phase[k] = kTwoPi * uniform01(rng);
  }
  auto series = synthesize_harmonics(grid.nfft, amp, phase);
  series.resize(n);
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  for (double& x : series) x += v_w - mean;
  return series;
}

struct WaveHarmonic {
  double amplitude = 0.0;  // m
  double frequency_hz = 0.0;
  double phase = 0.0;      // rad
};

struct WaveField {
  double dt = 0.05;
  double heading_deg = 0.0;
  std::vector<double> elevation;        // m, zero mean
  std::vector<WaveHarmonic> harmonics;  // synthesized components
};

inline double jonswap_shape(double f, double f_p, double gamma) {
  if (f <= 0.0) return 0.0;
  const double tau = f <= f_p ? 0.07 : 0.09;
  const double arg = (f - f_p) / (tau * f_p);
  const double peak = std::pow(gamma, std::exp(-0.5 * arg * arg));
  return std::pow(f, -5.0) * std::exp(-1.25 * std::pow(f_p / f, 4.0)) * peak;
}

// JONSWAP irregular sea surface. The discrete spectrum is scaled so the
// zeroth moment equals (h_s/4)^2 on the synthesis grid exactly.
inline WaveField synthesize_waves(double h_s, double t_p, double heading_deg,
                                  double duration, double dt, std::uint64_t seed,
                                  double gamma = 3.3, double lowcut_hz = 0.0) {
  if (h_s < 0.0 || !(t_p > 0.0)) {
    throw std::invalid_argument("synthesize_waves: requires h_s >= 0 and t_p > 0");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  WaveField field;
  field.dt = dt;
  field.heading_deg = heading_deg;
  if (h_s == 0.0) {
    field.elevation.assign(n, 0.0);
    return field;
  }

  const auto grid =
      detail::make_grid(n, dt, lowcut_hz > 0.0 ? lowcut_hz : 1.0 / duration);
  const double f_p = 1.0 / t_p;

  std::vector<double> shape(grid.k_max, 0.0);
  double m0_shape = 0.0;
  for (std::size_t k = grid.k_min; k < grid.k_max; ++k) {
    shape[k] = jonswap_shape(static_cast<double>(k) * grid.df, f_p, gamma);
    m0_shape += shape[k] * grid.df;
  }
  if (!(m0_shape > 0.0)) {
    throw std::invalid_argument("synthesize_waves: spectrum has no energy on grid");
  }
  const double target_m0 = (h_s / 4.0) * (h_s / 4.0);
  const double scale = target_m0 / m0_shape;

  std::vector<double> amp(grid.k_max, 0.0);
  std::vector<double> phase(grid.k_max, 0.0);
  std::mt19937_64 rng(seed);
  field.harmonics.reserve(grid.k_max - grid.k_min);
  for (std::size_t k = grid.k_min; k < grid.k_max; ++k) {
    amp[k] = std::sqrt(2.0 * scale * shape[k] * grid.df);
    phase[k] = kTwoPi * uniform01(rng);
    field.harmonics.push_back({amp[k], static_cast<double>(k) * grid.df, phase[k]});
  }
  field.elevation = synthesize_harmonics(grid.nfft, amp, phase);
  field.elevation.resize(n);
  return field;
}

namespace detail {

// Inline (along-heading) inertia force on the spar column and the vertical
// keel pressure force, both synthesized per harmonic. Deep-water dispersion.
struct WaveForces {
  std::vector<double> inline_force;    // N
  std::vector<double> vertical_force;  // N
};

inline WaveForces wave_forces(const WaveField& field, std::size_t n_samples,
                              double duration, const RomParams& rom,
                              const TurbineParams& params) {
  WaveForces out;
  if (field.harmonics.empty()) {
    out.inline_force.assign(n_samples, 0.0);
    out.vertical_force.assign(n_samples, 0.0);
    return out;
  }
  const auto grid = detail::make_grid(n_samples, field.dt, 1.0 / duration);
  const double column_area = kPi * rom.spar_diameter * rom.spar_diameter / 4.0;
  const double draft = params.spar_draft;

  std::vector<double> amp_in(grid.k_max, 0.0), ph_in(grid.k_max, 0.0);
  std::vector<double> amp_up(grid.k_max, 0.0), ph_up(grid.k_max, 0.0);
  for (const auto& h : field.harmonics) {
    const auto k_bin = static_cast<std::size_t>(std::llround(h.frequency_hz / grid.df));
    const double omega = kTwoPi * h.frequency_hz;
    const double wavenumber = omega * omega / rom.gravity;
    const double decay = -std::expm1(-wavenumber * draft) / wavenumber;
    // Acceleration leads elevation by pi/2.
    amp_in[k_bin] = rom.inertia_coefficient * rom.water_density * column_area *
                    omega * omega * decay * h.amplitude;
    ph_in[k_bin] = h.phase + 0.5 * kPi;
    // Keel dynamic pressure is in phase with elevation.
    amp_up[k_bin] = rom.vertical_force_gain * rom.water_density * rom.gravity *
                    column_area * std::exp(-wavenumber * draft) * h.amplitude;
    ph_up[k_bin] = h.phase;
  }
  out.inline_force = synthesize_harmonics(grid.nfft, amp_in, ph_in);
  out.inline_force.resize(n_samples);
  out.vertical_force = synthesize_harmonics(grid.nfft, amp_up, ph_up);
  out.vertical_force.resize(n_samples);
  return out;
}

}  // namespace detail

inline double thrust_coefficient_at(double v, const TurbineParams& params,
                                    const RomParams& rom) {
  if (v <= params.rated_wind) return rom.thrust_coefficient;
  const double ratio = params.rated_wind / v;
  return rom.thrust_coefficient * ratio * ratio;
}

// Deterministic mapping from an environmental point to section load series.
// Randomness enters only through config.seed (wind phases, wave phases, rotor
// azimuth are independent substreams).
inline LoadTimeSeries simulate(const EnvironmentalPoint& theta,
                               const SimulationConfig& config,
                               const TurbineParams& params = {},
                               const RomParams& rom = {}) {
  config.validate();
  params.validate();
  rom.validate();
  if (!(theta.v_w >= params.cut_in && theta.v_w <= params.cut_out)) {
    throw std::domain_error("simulate: wind speed outside operating band");
  }
  if (theta.h_s < 0.0 || !(theta.t_p > 0.0)) {
    throw std::domain_error("simulate: invalid sea state");
  }

  const double total = config.duration + config.transient;
  const auto n_total = static_cast<std::size_t>(std::llround(total / config.dt)) + 1;
  const auto n_skip = static_cast<std::size_t>(std::llround(config.transient / config.dt));
  const auto n_keep = n_total - n_skip;

  const std::uint64_t wind_seed = derive_seed(config.seed, {0x77696e64ull});  // "wind"
  const std::uint64_t wave_seed = derive_seed(config.seed, {0x77617665ull});  // "wave"
  const std::uint64_t azim_seed = derive_seed(config.seed, {0x617a696dull});  // "azim"

  const double lowcut = 1.0 / config.duration;
  const auto wind = synthesize_wind(theta.v_w, total, config.dt, wind_seed,
                                    rom.turbulence_intensity, rom.turbulence_length,
                                    lowcut);
  const auto waves = synthesize_waves(theta.h_s, theta.t_p, config.wave_heading_deg,
                                      total, config.dt, wave_seed, rom.jonswap_gamma,
                                      lowcut);
  const auto forces = detail::wave_forces(waves, n_total, total, rom, params);

  const double beta = deg2rad(config.wave_heading_deg);
  const double cos_b = std::cos(beta);
  const double sin_b = config.wave_heading_deg == 0.0 ? 0.0 : std::sin(beta);

  const double rotor_area = kPi * params.rotor_diameter * params.rotor_diameter / 4.0;
  std::vector<double> thrust(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    const double v = wind[i];
    const double ct = thrust_coefficient_at(v, params, rom);
    thrust[i] = 0.5 * rom.air_density * rotor_area * ct * v * v;
  }

  // Tower-base moment inputs: thrust at hub height plus the wave force split
  // into fore-aft (X) and side-side (Y) by the heading.
  std::vector<double> my_raw(n_total), mx_raw(n_total), nz_raw(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    const double fw_x = forces.inline_force[i] * cos_b;
    const double fw_y = forces.inline_force[i] * sin_b;
    my_raw[i] = thrust[i] * rom.thrust_moment_arm + fw_x * rom.wave_moment_arm;
    mx_raw[i] = fw_y * rom.wave_moment_arm;
    nz_raw[i] = forces.vertical_force[i];
  }
  const detail::SecondOrderFilter fa(config.tower_fore_aft, config.dt);
  const detail::SecondOrderFilter ss(config.tower_side_side, config.dt);
  const detail::SecondOrderFilter hv(config.heave, config.dt);
  const detail::SecondOrderFilter bf(config.blade_flap, config.dt);
  const auto my_f = fa.apply(my_raw);
  const auto mx_f = ss.apply(mx_raw);
  const auto nz_f = hv.apply(nz_raw);

  // Blade root: thrust share plus platform-pitch wave coupling in flap,
  // gravity at 1P plus torque share in edge, centrifugal + gravity axially.
  const double omega_rotor = params.rotor_speed_rad(theta.v_w);
  std::mt19937_64 az_rng(azim_seed);
  const double azimuth0 = kTwoPi * uniform01(az_rng);
  const double gravity_moment = rom.blade_mass * rom.gravity * rom.blade_cg_radius;
  const double centrifugal = rom.blade_mass * rom.blade_cg_radius * omega_rotor * omega_rotor;

  std::vector<double> flap_raw(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    const double fw_x = forces.inline_force[i] * cos_b;
    flap_raw[i] = (thrust[i] * rom.blade_flap_arm + fw_x * rom.blade_wave_coupling) /
                  rom.blade_count;
  }
  const auto flap_f = bf.apply(flap_raw);

  LoadTimeSeries out;
  out.dt = config.dt;
  out.tower_nz.resize(n_keep);
  out.tower_mx.resize(n_keep);
  out.tower_my.resize(n_keep);
  out.blade_fx.resize(n_keep);
  out.blade_fy.resize(n_keep);
  out.blade_fz.resize(n_keep);
  out.blade_mx.resize(n_keep);
  out.blade_my.resize(n_keep);
  out.blade_mz.resize(n_keep);

  for (std::size_t i = 0; i < n_keep; ++i) {
    const std::size_t j = i + n_skip;
    const double t = static_cast<double>(j) * config.dt;
    const double az = omega_rotor * t + azimuth0;
    const double cos_az = std::cos(az);
    const double edge = gravity_moment * cos_az +
                        thrust[j] * rom.blade_edge_torque_arm / rom.blade_count;

    out.tower_nz[i] = -rom.topside_weight + nz_f[j];
    out.tower_mx[i] = mx_f[j];
    out.tower_my[i] = my_f[j];
    out.blade_my[i] = flap_f[j];
    out.blade_fx[i] = flap_f[j] / rom.blade_flap_arm;
    out.blade_mx[i] = edge;
    out.blade_fy[i] = edge / rom.blade_cg_radius;
    out.blade_fz[i] = centrifugal - rom.blade_mass * rom.gravity * cos_az;
    out.blade_mz[i] = thrust[j] * rom.blade_torsion_arm / rom.blade_count;
  }

  for (std::size_t c = 0; c < 9; ++c) {
    for (double v : out.channel(c)) {
      if (!std::isfinite(v)) {
        throw simulation_error(std::string("simulate: non-finite sample in channel ") +
                               LoadTimeSeries::channel_name(c));
      }
    }
  }
  return out;
}

}  // namespace fowt
