#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fowt/math.hpp"
#include "fowt/simulator.hpp"

namespace fowt {

struct StressTimeSeries {
  double dt = 0.05;
  std::vector<double> samples;  // Pa
};

struct SectionGeometry {
  double area = 1.0;      // m^2
  double ix = 1.0;        // m^4
  double iy = 1.0;        // m^4
  double radius = 1.0;    // m
  double w_n = 1.0;       // m^3, section modulus
  double w_p = 2.0;       // m^3, torsion modulus

  void validate() const {
    const double v[] = {area, ix, iy, radius, w_n, w_p};
    for (double x : v) {
      if (!(x > 0.0)) throw std::invalid_argument("SectionGeometry: all fields must be > 0");
    }
  }

  // Thin-walled annulus (tower base and blade-root ring alike).
  static SectionGeometry annulus(double outer_diameter, double wall_thickness) {
    if (!(outer_diameter > 0.0) || !(wall_thickness > 0.0) ||
        !(wall_thickness < outer_diameter / 2.0)) {
      throw std::invalid_argument("SectionGeometry: invalid annulus dimensions");
    }
    const double di = outer_diameter - 2.0 * wall_thickness;
    SectionGeometry g;
    g.area = kPi * (outer_diameter * outer_diameter - di * di) / 4.0;
    g.ix = kPi * (std::pow(outer_diameter, 4) - std::pow(di, 4)) / 64.0;
    g.iy = g.ix;
    g.radius = outer_diameter / 2.0;
    g.w_n = g.ix / g.radius;
    g.w_p = 2.0 * g.ix / g.radius;
    return g;
  }
};

// Nominal axial stress on the tower shell at circumferential angle alpha,
// measured counterclockwise from the negative X-axis (upwind side).
inline StressTimeSeries tower_axial_stress(const LoadTimeSeries& loads,
                                           const SectionGeometry& geom, double alpha) {
  geom.validate();
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  StressTimeSeries out;
  out.dt = loads.dt;
  out.samples.resize(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    out.samples[i] = loads.tower_nz[i] / geom.area +
                     loads.tower_my[i] / geom.iy * geom.radius * c -
                     loads.tower_mx[i] / geom.ix * geom.radius * s;
  }
  return out;
}

inline constexpr std::size_t kTowerNodeCount = 7;

inline double tower_node_angle(std::size_t node_index) {
  if (node_index >= kTowerNodeCount) throw std::out_of_range("tower node index");
  return deg2rad(30.0 * static_cast<double>(node_index));
}

// Seven points at 30 degree spacing over the half circumference; node 7
// (index 6) sits on the lee side at alpha = 180 degrees.
inline std::array<StressTimeSeries, kTowerNodeCount> tower_node_stresses(
    const LoadTimeSeries& loads, const SectionGeometry& geom) {
  std::array<StressTimeSeries, kTowerNodeCount> out;
  for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
    out[k] = tower_axial_stress(loads, geom, tower_node_angle(k));
  }
  return out;
}

inline StressTimeSeries blade_axial_stress(const LoadTimeSeries& loads,
                                           const SectionGeometry& geom) {
  geom.validate();
  StressTimeSeries out;
  out.dt = loads.dt;
  out.samples.resize(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const double mx = loads.blade_mx[i];
    const double my = loads.blade_my[i];
    out.samples[i] = std::sqrt(mx * mx + my * my) / geom.w_n +
                     loads.blade_fz[i] / geom.area;
  }
  return out;
}

inline StressTimeSeries blade_shear_stress(const LoadTimeSeries& loads,
                                           const SectionGeometry& geom) {
  geom.validate();
  StressTimeSeries out;
  out.dt = loads.dt;
  out.samples.resize(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const double fx = loads.blade_fx[i];
    const double fy = loads.blade_fy[i];
    out.samples[i] = std::sqrt(fx * fx + fy * fy) / geom.area +
                     loads.blade_mz[i] / geom.w_p;
  }
  return out;
}

// Distortion-energy combination of the blade axial and shear channels; this
// is the single fatigue channel for the blade root.
inline StressTimeSeries blade_equivalent_stress(const StressTimeSeries& sigma0,
                                                const StressTimeSeries& tau0) {
  if (sigma0.samples.size() != tau0.samples.size()) {
    throw std::invalid_argument("blade_equivalent_stress: length mismatch");
  }
  StressTimeSeries out;
  out.dt = sigma0.dt;
  out.samples.resize(sigma0.samples.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double s = sigma0.samples[i];
    const double t = tau0.samples[i];
    out.samples[i] = std::sqrt(s * s + 3.0 * t * t);
  }
  return out;
}

}  // namespace fowt
