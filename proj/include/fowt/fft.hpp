#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "fowt/math.hpp"

namespace fowt {

// In-place iterative radix-2 FFT. Size must be a power of two. The inverse
// transform carries the 1/n factor.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_radix2: size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

// Sum-of-cosines synthesis on a length-nfft periodic grid:
//   x[t] = sum_k amp[k] * cos(2*pi*k*t/nfft + phase[k])
// realized through one inverse FFT. Bins k=0 and k=nfft/2 are expected to be
// unused (zero amplitude).
inline std::vector<double> synthesize_harmonics(std::size_t nfft,
                                                const std::vector<double>& amp,
                                                const std::vector<double>& phase) {
  if (amp.size() != phase.size() || amp.size() > nfft / 2 + 1) {
    throw std::invalid_argument("synthesize_harmonics: bad bin table size");
  }
  std::vector<std::complex<double>> spec(nfft, {0.0, 0.0});
  const double half_n = 0.5 * static_cast<double>(nfft);
  for (std::size_t k = 1; k < amp.size() && k < nfft / 2; ++k) {
    if (amp[k] == 0.0) continue;
    const std::complex<double> c =
        std::polar(half_n * amp[k], phase[k]);
    spec[k] = c;
    spec[nfft - k] = std::conj(c);
  }
  fft_radix2(spec, true);
  std::vector<double> out(nfft);
  for (std::size_t t = 0; t < nfft; ++t) out[t] = spec[t].real();
  return out;
}

}  // namespace fowt
