#pragma once

// Hand-rolled generators for property tests. Every generator is a pure
// function of the Rng state so failures replay from the seed.

#include "fiolab/grid.hpp"
#include "fiolab/rng.hpp"

#include <cmath>

namespace gen {

using fiolab::cplx;
using fiolab::Grid;
using fiolab::Rng;
using fiolab::SampledFunction;

// Sum of three Gaussian wave packets, centers within L/4, frequencies within a
// quarter of the Nyquist band, so the box edges and the outer band are empty
// to far below 1e-10.
inline SampledFunction band_limited(const Grid& grid, Rng& rng) {
  const double L = grid.half_width();
  const double nyquist = 0.5 / grid.spacing;
  struct Packet {
    double c, w, freq;
    cplx amp;
  };
  Packet p[3];
  for (auto& q : p) {
    q.c = rng.uniform(-L / 4, L / 4);
    q.w = rng.uniform(0.6, 1.5);
    q.freq = rng.uniform(-nyquist / 4, nyquist / 4);
    q.amp = cplx(rng.normal(), rng.normal());
  }
  return SampledFunction::from(grid, [&](std::span<const double> t) {
    cplx s = 0.0;
    for (const auto& q : p) {
      double r2 = 0.0;
      for (double v : t) r2 += (v - q.c) * (v - q.c);
      s += q.amp * std::exp(-fiolab::kPi * r2 / (q.w * q.w)) *
           std::polar(1.0, fiolab::kTwoPi * q.freq * t[0]);
    }
    return s;
  });
}

inline SampledFunction gaussian(const Grid& grid, double width = 1.0) {
  return SampledFunction::from(grid, [width](std::span<const double> t) {
    double r2 = 0.0;
    for (double v : t) r2 += v * v;
    return cplx(std::exp(-fiolab::kPi * r2 / (width * width)), 0.0);
  });
}

// Grid-aligned shift in units of spacing, within a quarter of the box.
inline double grid_shift(const Grid& grid, Rng& rng) {
  const auto quarter = static_cast<long long>(grid.n / 4);
  const long long steps = static_cast<long long>(rng.below(static_cast<std::uint64_t>(2 * quarter + 1))) - quarter;
  return static_cast<double>(steps) * grid.spacing;
}

// Smooth function on R^2: two modulated Gaussian bumps near the origin with
// frequencies below 1, well inside the band of the 2D test grids.
inline fiolab::SampledFunction2D smooth_2d(const Grid& a, const Grid& b, Rng& rng) {
  struct Bump {
    double cx, cy, w, fx, fy;
    cplx amp;
  };
  Bump bumps[2];
  for (auto& q : bumps) {
    q.cx = rng.uniform(-1.0, 1.0);
    q.cy = rng.uniform(-1.0, 1.0);
    q.w = rng.uniform(0.8, 1.2);
    q.fx = rng.uniform(-0.5, 0.5);
    q.fy = rng.uniform(-0.5, 0.5);
    q.amp = cplx(rng.normal(), rng.normal());
  }
  return fiolab::SampledFunction2D::from(a, b, [&](std::span<const double> x, std::span<const double> y) {
    cplx s = 0.0;
    for (const auto& q : bumps) {
      const double r2 = (x[0] - q.cx) * (x[0] - q.cx) + (y[0] - q.cy) * (y[0] - q.cy);
      s += q.amp * std::exp(-fiolab::kPi * r2 / (q.w * q.w)) *
           std::polar(1.0, fiolab::kTwoPi * (q.fx * x[0] + q.fy * y[0]));
    }
    return s;
  });
}

} // namespace gen
