#pragma once

// Brute-force references that share no code path with the FFT pipeline.

#include "fiolab/grid.hpp"
#include "fiolab/rng.hpp"

#include <cmath>
#include <vector>

namespace oracle {

using fiolab::cplx;
using fiolab::Grid;
using fiolab::kTwoPi;
using fiolab::SampledFunction;

// f^(xi_m) = sum_j f(x_j) e^{-2 pi i x_j xi_m} dx, d = 1.
inline std::vector<cplx> direct_dft(const SampledFunction& f) {
  const Grid& g = f.grid();
  const Grid dual = g.dual();
  std::vector<cplx> out(g.n);
  for (std::size_t m = 0; m < g.n; ++m) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) acc += f[j] * std::polar(1.0, -kTwoPi * g.coord(j) * dual.coord(m));
    out[m] = acc * g.spacing;
  }
  return out;
}

// V_g f(x_k, xi) by the defining sum with circular window index, d = 1.
inline cplx direct_stft(const SampledFunction& f, const SampledFunction& w, std::size_t k, double xi) {
  const Grid& g = f.grid();
  const std::size_t n = g.n;
  cplx acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t wi = (j + n - k + n / 2) % n;
    acc += f[j] * std::conj(w[wi]) * std::polar(1.0, -kTwoPi * g.coord(j) * xi);
  }
  return acc * g.spacing;
}

// Two-variable analogue for F on R^2 (d = 1 blocks): shift indices (k1,k2),
// frequency (z1, z2).
inline cplx direct_stft4(const fiolab::SampledFunction2D& F, const fiolab::SampledFunction2D& W, std::size_t k1,
                         std::size_t k2, double zeta1, double zeta2) {
  const Grid& a = F.first();
  const Grid& b = F.second();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    const std::size_t wi = (i + a.n - k1 + a.n / 2) % a.n;
    for (std::size_t j = 0; j < b.n; ++j) {
      const std::size_t wj = (j + b.n - k2 + b.n / 2) % b.n;
      acc += F.at(i, j) * std::conj(W.at(wi, wj)) *
             std::polar(1.0, -kTwoPi * (a.coord(i) * zeta1 + b.coord(j) * zeta2));
    }
  }
  return acc * a.spacing * b.spacing;
}

} // namespace oracle
