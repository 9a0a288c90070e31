#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fowt/stress.hpp"

namespace fowt {

class overload_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StressCycle {
  double range = 0.0;  // Pa
  double mean = 0.0;   // Pa
  double count = 1.0;  // 1.0 full cycle, 0.5 half cycle
};

// Turning points of a sampled series: endpoints are kept, interior strict
// extrema are kept, plateaus are collapsed. A constant series yields only
// its first sample.
inline std::vector<double> turning_points(const std::vector<double>& samples) {
  std::vector<double> tp;
  if (samples.empty()) return tp;
  tp.push_back(samples[0]);
  int direction = 0;  // -1 falling, +1 rising
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double x = samples[i];
    if (x == tp.back()) continue;
    const int d = x > tp.back() ? 1 : -1;
    if (d == direction) {
      tp.back() = x;  // extend the current run
    } else {
      tp.push_back(x);
      direction = d;
    }
  }
  if (tp.size() == 1 && samples.size() > 1) {
    // constant series: no reversals at all
    tp.clear();
  }
  return tp;
}

// Three-point rainflow with residual half cycles. While scanning, the range
// formed by the two oldest unclassified points is counted as one half cycle
// when it can no longer participate in a full cycle; every full cycle removes
// its peak and valley. Whatever remains at the end is counted pairwise as
// half cycles. Total half-cycle count equals (turning points - 1).
inline std::vector<StressCycle> rainflow_reversals(const std::vector<double>& reversals) {
  std::vector<StressCycle> cycles;
  std::vector<double> stack;
  stack.reserve(64);
  auto emit = [&cycles](double a, double b, double count) {
    cycles.push_back({std::abs(a - b), 0.5 * (a + b), count});
  };
  for (double x : reversals) {
    stack.push_back(x);
    while (stack.size() >= 3) {
      const std::size_t m = stack.size();
      const double range_x = std::abs(stack[m - 1] - stack[m - 2]);
      const double range_y = std::abs(stack[m - 2] - stack[m - 3]);
      if (range_x < range_y) break;
      if (m == 3) {
        // Y contains the history start: half cycle, drop the start.
        emit(stack[0], stack[1], 0.5);
        stack.erase(stack.begin());
      } else {
        emit(stack[m - 3], stack[m - 2], 1.0);
        stack.erase(stack.end() - 3, stack.end() - 1);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
    emit(stack[i], stack[i + 1], 0.5);
  }
  return cycles;
}

inline std::vector<StressCycle> rainflow(const StressTimeSeries& series) {
  if (series.samples.size() < 2) {
    throw std::invalid_argument("rainflow: series must have at least 2 samples");
  }
  return rainflow_reversals(turning_points(series.samples));
}

// Log-linear S-N curve, lg N = lg_a - m * lg(delta_sigma), with the stress
// range expressed in the curve's reference unit (MPa for the defaults).
struct SNCurve {
  double lg_a = 12.164;          // intercept, log10 cycles
  double m = 3.0;                // slope exponent
  double sigma_ult = 355.0e6;    // Pa, ultimate strength for the mean correction
  double ref_stress = 1.0e6;     // Pa per curve stress unit

  void validate() const {
    if (!(m > 0.0) || !(sigma_ult > 0.0) || !(ref_stress > 0.0)) {
      throw std::invalid_argument("SNCurve: m, sigma_ult, ref_stress must be > 0");
    }
  }
};

// Tower steel: DNV curve D in air. Blade composite intercept is a documented
// surrogate (no public value); both are configurable.
inline SNCurve tower_sn_curve() { return {12.164, 3.0, 355.0e6, 1.0e6}; }
inline SNCurve blade_sn_curve() { return {16.1, 8.0, 600.0e6, 1.0e6}; }

// Goodman mean-stress correction of a cycle range toward the fixed reference
// mean sigma_mf (zero removes the mean effect entirely).
inline double goodman_correct(const StressCycle& cycle, double sigma_ult,
                              double sigma_mf = 0.0, double epsilon = 1.0) {
  if (!(sigma_ult > 0.0)) throw std::invalid_argument("goodman_correct: sigma_ult <= 0");
  const double mean_abs = std::abs(cycle.mean);
  if (mean_abs >= sigma_ult) {
    throw overload_error("goodman_correct: cycle mean at or beyond ultimate strength");
  }
  if (epsilon == 0.0) return cycle.range;
  return cycle.range *
         std::pow((sigma_ult - std::abs(sigma_mf)) / (sigma_ult - mean_abs), epsilon);
}

inline double cycles_to_failure(double delta_sigma_pa, const SNCurve& curve) {
  curve.validate();
  if (!(delta_sigma_pa > 0.0)) {
    throw std::domain_error("cycles_to_failure: stress range must be > 0");
  }
  return std::pow(10.0, curve.lg_a - curve.m * std::log10(delta_sigma_pa / curve.ref_stress));
}

struct DamageResult {
  double d_st = 0.0;    // short-term damage, dimensionless
  double dr_st = 0.0;   // damage rate, 1/s
  double t_j = 600.0;   // analysis duration, s
};

// Miner sum over Goodman-corrected rainflow cycles, plus the per-second rate.
inline DamageResult short_term_damage(const std::vector<StressCycle>& cycles,
                                      const SNCurve& curve, double t_j,
                                      double sigma_mf = 0.0, double epsilon = 1.0) {
  if (!(t_j > 0.0)) throw std::invalid_argument("short_term_damage: t_j must be > 0");
  curve.validate();
  double damage = 0.0;
  for (const auto& c : cycles) {
    if (c.range <= 0.0) continue;
    const double corrected = goodman_correct(c, curve.sigma_ult, sigma_mf, epsilon);
    damage += c.count / cycles_to_failure(corrected, curve);
  }
  return {damage, damage / t_j, t_j};
}

inline double point_cumulative_damage(double damage_rate_per_s, double t_operate_s) {
  if (t_operate_s < 0.0) {
    throw std::invalid_argument("point_cumulative_damage: negative operating time");
  }
  return damage_rate_per_s * t_operate_s;
}

// Probability-weighted cumulative damage over the representative points.
inline double expected_cumulative_damage(const std::vector<double>& rates,
                                         const std::vector<double>& probs,
                                         double t_operate_s) {
  if (rates.size() != probs.size()) {
    throw std::invalid_argument("expected_cumulative_damage: length mismatch");
  }
  double d = 0.0;
  for (std::size_t q = 0; q < rates.size(); ++q) {
    d += probs[q] * point_cumulative_damage(rates[q], t_operate_s);
  }
  return d;
}

struct CycleHistogramBin {
  double range_lo = 0.0;  // Pa
  double range_hi = 0.0;  // Pa
  double count = 0.0;
};

// Range histogram for reporting only; damage is always computed per cycle.
inline std::vector<CycleHistogramBin> cycle_histogram(const std::vector<StressCycle>& cycles,
                                                      std::size_t n_bins = 64) {
  if (n_bins == 0) throw std::invalid_argument("cycle_histogram: n_bins must be >= 1");
  std::vector<CycleHistogramBin> bins(n_bins);
  if (cycles.empty()) return bins;
  double max_range = 0.0;
  for (const auto& c : cycles) max_range = std::max(max_range, c.range);
  if (max_range == 0.0) max_range = 1.0;
  const double width = max_range / static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    bins[b].range_lo = width * static_cast<double>(b);
    bins[b].range_hi = width * static_cast<double>(b + 1);
  }
  for (const auto& c : cycles) {
    auto b = static_cast<std::size_t>(c.range / width);
    if (b >= n_bins) b = n_bins - 1;
    bins[b].count += c.count;
  }
  return bins;
}

}  // namespace fowt
