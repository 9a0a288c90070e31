#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fowt/math.hpp"

namespace fowt {

// Scalar response evaluated at every representative point, with the points'
// assigned probabilities.
struct ResponseEnsemble {
  std::vector<double> values;
  std::vector<double> probs;
  std::string label;

  void validate() const {
    if (values.size() != probs.size() || values.empty()) {
      throw std::invalid_argument("ResponseEnsemble: size mismatch or empty");
    }
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0) throw std::invalid_argument("ResponseEnsemble: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("ResponseEnsemble: probabilities do not sum to 1");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("ResponseEnsemble: non-finite value");
    }
  }

  double weighted_mean() const {
    double m = 0.0;
    for (std::size_t q = 0; q < values.size(); ++q) m += probs[q] * values[q];
    return m;
  }

  double weighted_std() const {
    const double m = weighted_mean();
    double v = 0.0;
    for (std::size_t q = 0; q < values.size(); ++q) {
      v += probs[q] * (values[q] - m) * (values[q] - m);
    }
    return std::sqrt(v);
  }
};

struct PdfEstimate {
  std::vector<double> grid;     // ascending
  std::vector<double> density;  // nonnegative
  double bandwidth = 0.0;

  double trapezoid_integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      s += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    return s;
  }
};

struct GridSpec {
  std::size_t n_points = 1024;
  double pad_sigmas = 6.0;
};

// Silverman-type rule on the probability-weighted ensemble spread.
inline double silverman_bandwidth(const ResponseEnsemble& ensemble) {
  return 1.06 * ensemble.weighted_std() *
         std::pow(static_cast<double>(ensemble.values.size()), -0.2);
}

// Gaussian-mixture reconstruction of the response PDF: each representative
// response contributes a kernel weighted by its assigned probability. An
// absent bandwidth selects the Silverman rule.
inline PdfEstimate estimate_pdf(const ResponseEnsemble& ensemble,
                                const GridSpec& grid_spec = {},
                                std::optional<double> bandwidth = std::nullopt,
                                std::ostream* warn = nullptr) {
  ensemble.validate();
  if (grid_spec.n_points < 2) throw std::invalid_argument("estimate_pdf: grid too small");
  if (bandwidth.has_value() && !(*bandwidth > 0.0)) {
    throw std::domain_error("estimate_pdf: bandwidth must be > 0");
  }
  double sigma = bandwidth.value_or(silverman_bandwidth(ensemble));
  if (!bandwidth.has_value() && sigma == 0.0) {
    // All responses identical: fall back to a sliver so the estimate stays a
    // valid (near-delta) density.
    const double scale = std::max(1.0, std::abs(ensemble.values.front()));
    sigma = 1e-9 * scale;
    if (warn != nullptr) {
      *warn << "estimate_pdf: all responses identical (" << ensemble.label
            << "); returning near-delta estimate\n";
    }
  }
  if (!(sigma > 0.0)) throw std::domain_error("estimate_pdf: zero bandwidth");

  const auto [lo_it, hi_it] = std::minmax_element(ensemble.values.begin(),
                                                  ensemble.values.end());
  const double lo = *lo_it - grid_spec.pad_sigmas * sigma;
  const double hi = *hi_it + grid_spec.pad_sigmas * sigma;

  PdfEstimate est;
  est.bandwidth = sigma;
  est.grid.resize(grid_spec.n_points);
  est.density.assign(grid_spec.n_points, 0.0);
  const double step = (hi - lo) / static_cast<double>(grid_spec.n_points - 1);
  for (std::size_t i = 0; i < grid_spec.n_points; ++i) {
    est.grid[i] = lo + step * static_cast<double>(i);
  }
  const double norm = 1.0 / (std::sqrt(kTwoPi) * sigma);
  for (std::size_t q = 0; q < ensemble.values.size(); ++q) {
    const double g = ensemble.values[q];
    const double w = ensemble.probs[q] * norm;
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      const double z = (est.grid[i] - g) / sigma;
      est.density[i] += w * std::exp(-0.5 * z * z);
    }
  }
  return est;
}

// CDF of the same Gaussian mixture, evaluated exactly.
inline double mixture_cdf(const ResponseEnsemble& ensemble, double bandwidth, double y) {
  if (!(bandwidth > 0.0)) throw std::domain_error("mixture_cdf: bandwidth must be > 0");
  double c = 0.0;
  for (std::size_t q = 0; q < ensemble.values.size(); ++q) {
    c += ensemble.probs[q] * normal_cdf((y - ensemble.values[q]) / bandwidth);
  }
  return c;
}

// Safety margin Z = B - D_q(T) per representative point; damage grows
// linearly in time, so the extreme over (0, T] is the value at T.
inline ResponseEnsemble performance_values(const std::vector<double>& damage_rates,
                                           const std::vector<double>& probs,
                                           double t_operate_s, double threshold) {
  if (damage_rates.size() != probs.size()) {
    throw std::invalid_argument("performance_values: length mismatch");
  }
  ResponseEnsemble z;
  z.label = "performance margin";
  z.probs = probs;
  z.values.resize(damage_rates.size());
  for (std::size_t q = 0; q < damage_rates.size(); ++q) {
    z.values[q] = threshold - damage_rates[q] * t_operate_s;
  }
  return z;
}

// Heaviside reliability sum; Z = 0 counts as failure (the limit state D = B
// is treated as exhausted life).
inline double reliability(const ResponseEnsemble& z) {
  z.validate();
  double r = 0.0;
  for (std::size_t q = 0; q < z.values.size(); ++q) {
    if (z.values[q] > 0.0) r += z.probs[q];
  }
  return std::min(1.0, std::max(0.0, r));
}

struct ReliabilityCurve {
  std::vector<double> times_years;
  std::vector<double> r;
  double threshold = 1.0;

  void validate() const {
    if (times_years.size() != r.size()) {
      throw std::invalid_argument("ReliabilityCurve: size mismatch");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] >= 0.0 && r[i] <= 1.0)) {
        throw std::invalid_argument("ReliabilityCurve: reliability outside [0,1]");
      }
      if (i > 0 && r[i] > r[i - 1] + 1e-15) {
        throw std::invalid_argument("ReliabilityCurve: not nonincreasing");
      }
    }
  }
};

inline ReliabilityCurve reliability_curve(const std::vector<double>& damage_rates,
                                          const std::vector<double>& probs,
                                          const std::vector<double>& times_years,
                                          double threshold = 1.0,
                                          double seconds_per_year = kSecondsPerYear) {
  for (std::size_t i = 1; i < times_years.size(); ++i) {
    if (!(times_years[i] > times_years[i - 1])) {
      throw std::invalid_argument("reliability_curve: times must be ascending");
    }
  }
  ReliabilityCurve curve;
  curve.threshold = threshold;
  curve.times_years = times_years;
  curve.r.reserve(times_years.size());
  for (double t : times_years) {
    const auto z = performance_values(damage_rates, probs, t * seconds_per_year, threshold);
    curve.r.push_back(reliability(z));
  }
  return curve;
}

struct McsReliability {
  double r_hat = 1.0;
  double standard_error = 0.0;
  std::size_t n = 0;
};

// Benchmark estimator from i.i.d. damage-rate samples. Intended for sample
// counts of 100 and up; below that the binomial error bar dominates.
inline McsReliability mcs_reliability(const std::vector<double>& damage_rates,
                                      double t_operate_s, double threshold) {
  if (damage_rates.empty()) {
    throw std::invalid_argument("mcs_reliability: empty sample list");
  }
  std::size_t safe = 0;
  for (double dr : damage_rates) {
    if (threshold - dr * t_operate_s > 0.0) ++safe;
  }
  const auto n = static_cast<double>(damage_rates.size());
  const double r = static_cast<double>(safe) / n;
  return {r, std::sqrt(r * (1.0 - r) / n), damage_rates.size()};
}

}  // namespace fowt
