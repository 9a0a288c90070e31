#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "fowt/distributions.hpp"
#include "fowt/math.hpp"

namespace fowt {

struct EnvironmentalPoint {
  double v_w = 0.0;  // mean wind speed, m/s
  double h_s = 0.0;  // significant wave height, m
  double t_p = 0.0;  // spectral peak period, s

  double operator[](std::size_t d) const {
    switch (d) {
      case 0: return v_w;
      case 1: return h_s;
      case 2: return t_p;
      default: throw std::out_of_range("EnvironmentalPoint: dimension");
    }
  }
  double& operator[](std::size_t d) {
    switch (d) {
      case 0: return v_w;
      case 1: return h_s;
      case 2: return t_p;
      default: throw std::out_of_range("EnvironmentalPoint: dimension");
    }
  }
};

struct RepresentativePointSet {
  std::vector<EnvironmentalPoint> points;
  std::vector<double> probabilities;

  void validate() const {
    if (points.size() != probabilities.size()) {
      throw std::invalid_argument("RepresentativePointSet: size mismatch");
    }
    double sum = 0.0;
    for (double p : probabilities) {
      if (p < 0.0) throw std::invalid_argument("RepresentativePointSet: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("RepresentativePointSet: probabilities do not sum to 1");
    }
  }
};

// Digital Sobol sequence, up to 6 dimensions, 30-bit precision. Index 0 is
// the all-zeros point; callers normally start at index 1 so every coordinate
// lies strictly inside (0,1).
class SobolSequence {
 public:
  explicit SobolSequence(std::size_t dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw std::invalid_argument("SobolSequence: dimension must be in [1,6]");
    }
    static constexpr int degree[kMaxDim] = {1, 2, 3, 3, 4, 4};
    static constexpr std::uint32_t poly[kMaxDim] = {0, 1, 1, 2, 1, 4};
    static constexpr std::uint32_t init[kMaxDim][4] = {
        {1, 0, 0, 0}, {1, 3, 0, 0}, {1, 3, 7, 0},
        {1, 3, 3, 0}, {1, 1, 3, 13}, {1, 1, 5, 9}};
    for (std::size_t d = 0; d < dim_; ++d) {
      const int s = degree[d];
      for (int j = 0; j < s; ++j) {
        v_[d][j] = init[d][j] << (kBits - 1 - j);
      }
      for (int j = s; j < kBits; ++j) {
        std::uint32_t value = v_[d][j - s] ^ (v_[d][j - s] >> s);
        for (int k = 1; k < s; ++k) {
          if ((poly[d] >> (s - 1 - k)) & 1u) value ^= v_[d][j - k];
        }
        v_[d][j] = value;
      }
    }
  }

  // Point at the given sequence index (Gray-code construction).
  std::array<double, 6> point(std::uint64_t index) const {
    std::array<double, 6> u{};
    const std::uint64_t gray = index ^ (index >> 1);
    for (std::size_t d = 0; d < dim_; ++d) {
      std::uint32_t x = 0;
      for (int j = 0; j < kBits; ++j) {
        if ((gray >> j) & 1ull) x ^= v_[d][j];
      }
      u[d] = static_cast<double>(x) / 1073741824.0;  // 2^30
    }
    return u;
  }

  std::size_t dimension() const { return dim_; }

 private:
  static constexpr int kBits = 30;
  static constexpr std::size_t kMaxDim = 6;
  std::size_t dim_;
  std::uint32_t v_[kMaxDim][kBits] = {};
};

inline EnvironmentalPoint sample_point(const EnvironmentSpecs& specs,
                                       std::mt19937_64& rng) {
  EnvironmentalPoint p;
  for (std::size_t d = 0; d < 3; ++d) {
    p[d] = inverse_cdf(specs[d], uniform01(rng));
  }
  return p;
}

// Voronoi probability assignment: P_q is the fraction of m_mc i.i.d. samples
// whose nearest representative point (IQR-standardized Euclidean distance) is
// point q. Ties go to the lowest index; duplicated points raise a warning.
inline std::vector<double> assign_probabilities(
    const std::vector<EnvironmentalPoint>& points, const EnvironmentSpecs& specs,
    std::size_t m_mc, std::uint64_t seed, std::ostream* warn = nullptr) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("assign_probabilities: empty point list");
  if (m_mc < 10 * n) {
    throw std::invalid_argument("assign_probabilities: m_mc must be >= 10*N");
  }

  std::array<double, 3> inv_scale{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double iqr = interquartile_range(specs[d]);
    if (!(iqr > 0.0)) throw std::invalid_argument("assign_probabilities: degenerate IQR");
    inv_scale[d] = 1.0 / iqr;
  }

  if (warn != nullptr) {
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (a.v_w != b.v_w) return a.v_w < b.v_w;
      if (a.h_s != b.h_s) return a.h_s < b.h_s;
      return a.t_p < b.t_p;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].v_w == sorted[i - 1].v_w && sorted[i].h_s == sorted[i - 1].h_s &&
          sorted[i].t_p == sorted[i - 1].t_p) {
        *warn << "assign_probabilities: duplicated representative points; "
                 "ties broken by lowest index\n";
        break;
      }
    }
  }

  std::vector<std::uint64_t> counts(n, 0);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < m_mc; ++s) {
    const EnvironmentalPoint x = sample_point(specs, rng);
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < n; ++q) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < 3; ++d) {
        const double delta = (x[d] - points[q][d]) * inv_scale[d];
        d2 += delta * delta;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = q;
      }
    }
    ++counts[best];
  }

  std::vector<double> probs(n);
  for (std::size_t q = 0; q < n; ++q) {
    probs[q] = static_cast<double>(counts[q]) / static_cast<double>(m_mc);
  }
  return probs;
}

struct GfPointOptions {
  std::size_t m_mc_factor = 100;  // assignment samples per representative point
  bool rearrange = false;         // marginal-quantile coordinate rearrangement
};

// Two-step representative point set: a Sobol set mapped through the marginal
// inverse CDFs, then Voronoi probability assignment by Monte Carlo counting.
inline RepresentativePointSet generate_gf_points(const EnvironmentSpecs& specs,
                                                 std::size_t n, std::uint64_t seed,
                                                 const GfPointOptions& opts = {},
                                                 std::ostream* warn = nullptr) {
  if (n == 0) throw std::invalid_argument("generate_gf_points: n must be >= 1");
  specs.validate();

  SobolSequence sobol(3);
  RepresentativePointSet set;
  set.points.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto u = sobol.point(q + 1);
    for (std::size_t d = 0; d < 3; ++d) {
      set.points[q][d] = inverse_cdf(specs[d], u[d]);
    }
  }

  if (opts.rearrange) {
    // Replace each coordinate's empirical order statistics by the marginal
    // quantiles at rank midpoints, keeping the points' rank structure.
    std::vector<std::size_t> order(n);
    for (std::size_t d = 0; d < 3; ++d) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.points[a][d] < set.points[b][d];
      });
      for (std::size_t rank = 0; rank < n; ++rank) {
        const double u = (static_cast<double>(rank) + 0.5) / static_cast<double>(n);
        set.points[order[rank]][d] = inverse_cdf(specs[d], u);
      }
    }
  }

  const std::uint64_t assign_seed = derive_seed(seed, {0x61737369676eull});  // "assign"
  set.probabilities = assign_probabilities(set.points, specs, opts.m_mc_factor * n,
                                           assign_seed, warn);
  return set;
}

// Plain i.i.d. Monte Carlo environments by inverse-transform sampling.
inline std::vector<EnvironmentalPoint> sample_mcs(const EnvironmentSpecs& specs,
                                                  std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_mcs: n must be >= 1");
  specs.validate();
  std::vector<EnvironmentalPoint> out(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_point(specs, rng);
  return out;
}

}  // namespace fowt
