#pragma once

// Test-side oracles, deliberately independent of the library implementations
// they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Romberg integration (Richardson-extrapolated trapezoid); different
// algorithm from the library's adaptive Simpson on purpose.
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      int max_level = 22, double tol = 1e-12) {
  std::vector<std::vector<double>> r(1);
  const double h0 = b - a;
  r[0].push_back(0.5 * h0 * (f(a) + f(b)));
  for (int k = 1; k <= max_level; ++k) {
    const auto n = static_cast<std::size_t>(1) << k;
    const double h = h0 / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; i += 2) {
      sum += f(a + h * static_cast<double>(i));
    }
    r.emplace_back();
    r[k].push_back(0.5 * r[k - 1][0] + h * sum);
    double pow4 = 1.0;
    for (int j = 1; j <= k; ++j) {
      pow4 *= 4.0;
      r[k].push_back(r[k][j - 1] + (r[k][j - 1] - r[k - 1][j - 1]) / (pow4 - 1.0));
    }
    if (k > 3 && std::abs(r[k][k] - r[k - 1][k - 1]) < tol * (1.0 + std::abs(r[k][k]))) {
      return r[k][k];
    }
  }
  return r.back().back();
}

struct CycleRecord {
  double range;
  double mean;
  double count;
  bool operator==(const CycleRecord& o) const {
    return range == o.range && mean == o.mean && count == o.count;
  }
};

// Literal transcription of the three-point counting rules with an explicit
// cursor over the unclassified reversals: re-forms X and Y from the three
// most recent unclassified points at every step, counts Y as one cycle when
// it does not contain the history start, as a half cycle (discarding the
// start) when it does, and finally counts the leftover ranges as half cycles.
inline std::vector<CycleRecord> brute_force_rainflow(std::vector<double> pts) {
  std::vector<CycleRecord> out;
  bool progress = true;
  while (progress) {
    progress = false;
    std::size_t i = 2;
    while (i < pts.size()) {
      const double x = std::abs(pts[i] - pts[i - 1]);
      const double y = std::abs(pts[i - 1] - pts[i - 2]);
      if (x >= y) {
        if (i - 2 == 0) {
          out.push_back({y, 0.5 * (pts[0] + pts[1]), 0.5});
          pts.erase(pts.begin());
        } else {
          out.push_back({y, 0.5 * (pts[i - 2] + pts[i - 1]), 1.0});
          pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i) - 2,
                    pts.begin() + static_cast<std::ptrdiff_t>(i));
        }
        progress = true;
        break;  // restart the scan from the beginning
      }
      ++i;
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back({std::abs(pts[i] - pts[i + 1]), 0.5 * (pts[i] + pts[i + 1]), 0.5});
  }
  return out;
}

inline void sort_cycles(std::vector<CycleRecord>& cycles) {
  std::sort(cycles.begin(), cycles.end(), [](const CycleRecord& a, const CycleRecord& b) {
    if (a.range != b.range) return a.range < b.range;
    if (a.mean != b.mean) return a.mean < b.mean;
    return a.count < b.count;
  });
}

// Two-sided Kolmogorov-Smirnov statistic of samples against an analytic CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

// Kolmogorov distance between two CDF callables on a grid.
inline double cdf_distance(const std::function<double(double)>& f,
                           const std::function<double(double)>& g, double lo,
                           double hi, std::size_t n_grid = 2000) {
  double d = 0.0;
  for (std::size_t i = 0; i <= n_grid; ++i) {
    const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_grid);
    d = std::max(d, std::abs(f(y) - g(y)));
  }
  return d;
}

// Empirical CDF evaluator.
inline std::function<double(double)> empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  return [s = std::move(samples)](double y) {
    const auto it = std::upper_bound(s.begin(), s.end(), y);
    return static_cast<double>(it - s.begin()) / static_cast<double>(s.size());
  };
}

}  // namespace oracles
