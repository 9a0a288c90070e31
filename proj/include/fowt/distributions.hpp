#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <variant>

#include "fowt/math.hpp"

namespace fowt {

// Weibull restricted to [lower, upper]; the density is the Weibull kernel
// divided by F(upper) - F(lower) so it integrates to one over the window.
struct TruncatedWeibull {
  double scale = 1.0;   // a
  double shape = 1.0;   // b
  double lower = 0.0;
  double upper = 1.0;

  void validate() const {
    if (!(scale > 0.0) || !(shape > 0.0)) {
      throw std::invalid_argument("TruncatedWeibull: scale and shape must be > 0");
    }
    if (!(lower < upper) || lower < 0.0) {
      throw std::invalid_argument("TruncatedWeibull: requires 0 <= lower < upper");
    }
  }

  // Untruncated Weibull CDF.
  double kernel_cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-std::pow(x / scale, shape));
  }

  double normalization() const { return kernel_cdf(upper) - kernel_cdf(lower); }

  double pdf(double x) const {
    if (x < lower || x > upper) return 0.0;
    const double z = x / scale;
    const double kernel = shape / scale * std::pow(z, shape - 1.0) *
                          std::exp(-std::pow(z, shape));
    return kernel / normalization();
  }

  double cdf(double x) const {
    if (x <= lower) return 0.0;
    if (x >= upper) return 1.0;
    return (kernel_cdf(x) - kernel_cdf(lower)) / normalization();
  }

  double quantile(double u) const {
    if (u <= 0.0) return lower;
    if (u >= 1.0) return upper;
    const double p = kernel_cdf(lower) + u * normalization();
    return scale * std::pow(-std::log1p(-p), 1.0 / shape);
  }
};

struct Lognormal {
  double mu = 0.0;      // log-space location
  double sigma = 1.0;   // log-space scale

  void validate() const {
    if (!(sigma > 0.0)) {
      throw std::invalid_argument("Lognormal: sigma must be > 0");
    }
    if (!std::isfinite(mu)) {
      throw std::invalid_argument("Lognormal: mu must be finite");
    }
  }

  double pdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double z = (std::log(x) - mu) / sigma;
    return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(kTwoPi));
  }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return normal_cdf((std::log(x) - mu) / sigma);
  }

  double quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(mu + sigma * normal_quantile(u));
  }

  double mean() const { return std::exp(mu + 0.5 * sigma * sigma); }
  double variance() const {
    const double s2 = sigma * sigma;
    return (std::exp(s2) - 1.0) * std::exp(2.0 * mu + s2);
  }
};

using DistributionSpec = std::variant<TruncatedWeibull, Lognormal>;

inline void validate(const DistributionSpec& spec) {
  std::visit([](const auto& s) { s.validate(); }, spec);
}

inline double pdf(const DistributionSpec& spec, double x) {
  return std::visit([x](const auto& s) { return s.pdf(x); }, spec);
}

inline double cdf(const DistributionSpec& spec, double x) {
  return std::visit([x](const auto& s) { return s.cdf(x); }, spec);
}

inline double inverse_cdf(const DistributionSpec& spec, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("inverse_cdf: u outside [0,1]");
  }
  return std::visit([u](const auto& s) { return s.quantile(u); }, spec);
}

// Finite interval that carries essentially all probability mass; used for
// quadrature and for sizing nearest-point searches.
inline std::pair<double, double> support(const DistributionSpec& spec) {
  if (const auto* w = std::get_if<TruncatedWeibull>(&spec)) {
    return {w->lower, w->upper};
  }
  const auto& ln = std::get<Lognormal>(spec);
  return {ln.quantile(1e-12), ln.quantile(1.0 - 1e-12)};
}

inline double mean(const DistributionSpec& spec) {
  if (const auto* ln = std::get_if<Lognormal>(&spec)) return ln->mean();
  const auto& w = std::get<TruncatedWeibull>(spec);
  return integrate([&w](double x) { return x * w.pdf(x); }, w.lower, w.upper, 1e-12);
}

inline double variance(const DistributionSpec& spec) {
  if (const auto* ln = std::get_if<Lognormal>(&spec)) return ln->variance();
  const auto& w = std::get<TruncatedWeibull>(spec);
  const double m = mean(spec);
  return integrate([&w, m](double x) { return (x - m) * (x - m) * w.pdf(x); },
                   w.lower, w.upper, 1e-12);
}

inline double interquartile_range(const DistributionSpec& spec) {
  return inverse_cdf(spec, 0.75) - inverse_cdf(spec, 0.25);
}

// Environmental random variables: wind speed, significant wave height,
// spectral peak period. Defaults are the South China Sea site models.
struct EnvironmentSpecs {
  DistributionSpec wind_speed = TruncatedWeibull{11.9799, 2.8005, 3.0, 25.0};
  DistributionSpec wave_height = Lognormal{0.4887, 0.4489};
  DistributionSpec peak_period = Lognormal{2.0759, 0.1547};

  void validate() const {
    fowt::validate(wind_speed);
    fowt::validate(wave_height);
    fowt::validate(peak_period);
  }

  const DistributionSpec& operator[](std::size_t d) const {
    switch (d) {
      case 0: return wind_speed;
      case 1: return wave_height;
      case 2: return peak_period;
      default: throw std::out_of_range("EnvironmentSpecs: dimension");
    }
  }
};

}  // namespace fowt
