#include <doctest.h>

#include "fiolab/errors.hpp"
#include "fiolab/tfr.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace fiolab;

namespace {

const Grid kSmall = Grid::symmetric(1, 256, 8.0);

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

} // namespace

TEST_CASE("stft of zero and the origin value") {
  const auto g = make_window(WindowId::gaussian, kSmall);
  CHECK(max_abs(stft(SampledFunction::zeros(kSmall), g).values) == 0.0);
  const auto V = stft(g, g);
  CHECK(std::abs(V.at(128, 128) - cplx(1.0, 0.0)) < 1e-8);
}

TEST_CASE("stft errors") {
  const auto g = make_window(WindowId::gaussian, kSmall);
  CHECK_THROWS_AS(stft(g, SampledFunction::zeros(kSmall)), ValidationError);
  CHECK_THROWS_AS(stft(g, make_window(WindowId::gaussian, Grid::symmetric(1, 128, 8.0))), StructuralError);
  CHECK_THROWS_AS(parse_window("hann"), ValidationError);
}

TEST_CASE("stft matches the defining sum") {
  Rng rng(21);
  const auto g = make_window(WindowId::gaussian, kSmall);
  const auto f = gen::band_limited(kSmall, rng);
  const auto V = stft(f, g);
  for (int i = 0; i < 5; ++i) {
    const std::size_t k = rng.below(kSmall.n);
    const std::size_t m = rng.below(kSmall.n);
    const cplx expected = oracle::direct_stft(f, g, k, V.xi_grid.coord(m));
    CHECK(std::abs(V.at(k, m) - expected) < 1e-10);
  }
}

TEST_CASE("covariance law") {
  Rng rng(23);
  const auto g = make_window(WindowId::gaussian, kSmall);
  const double dxi = kSmall.dual().spacing;
  const double zero[1] = {0.0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = gen::band_limited(kSmall, rng);
    const long long us = static_cast<long long>(rng.below(65)) - 32;
    const long long ws = static_cast<long long>(rng.below(33)) - 16;
    const double u[1] = {static_cast<double>(us) * kSmall.spacing};
    const double w[1] = {static_cast<double>(ws) * dxi};
    const auto V = stft(translate_modulate(f, u, w), g);
    (void)zero;
    for (int i = 0; i < 5; ++i) {
      const std::size_t k = 64 + rng.below(128);
      const std::size_t m = 64 + rng.below(128);
      const std::size_t k0 = static_cast<std::size_t>(static_cast<long long>(k) - us);
      const double xi0 = V.xi_grid.coord(m) - w[0];
      const double lhs = std::abs(V.at(k, m));
      const double rhs = std::abs(oracle::direct_stft(f, g, k0, xi0));
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("stft orthogonality") {
  Rng rng(29);
  const auto g = make_window(WindowId::gaussian, kSmall);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = gen::band_limited(kSmall, rng);
    const double lhs = stft(f, g).l2_norm();
    CHECK(std::abs(lhs - f.l2_norm() * g.l2_norm()) < 1e-6 * lhs);
  }
}

TEST_CASE("local windows and strides reproduce the full transform") {
  Rng rng(31);
  const auto g = make_window(WindowId::gaussian, kSmall);
  const auto f = gen::band_limited(kSmall, rng);
  const auto full = stft(f, g);
  StftOptions opt;
  opt.stride = 4;
  opt.window_radius = 4.0;
  const auto local = stft(f, g, opt);
  REQUIRE(local.xi_grid.n == 128);
  const std::size_t step = kSmall.n / local.xi_grid.n;
  const double scale = max_abs(full.values);
  double worst = 0.0;
  for (std::size_t k = 0; k < local.x_grid.n; ++k) {
    CHECK(local.x_grid.coord(k) == doctest::Approx(full.x_grid.coord(4 * k)));
    for (std::size_t r = 0; r < local.xi_grid.n; ++r) {
      REQUIRE(local.xi_grid.coord(r) == doctest::Approx(full.xi_grid.coord(step * r + kSmall.n / 2 - local.xi_grid.n / 2 * step)));
      worst = std::max(worst, std::abs(local.at(k, r) - full.at(4 * k, step * r + kSmall.n / 2 - local.xi_grid.n / 2 * step)));
    }
  }
  CHECK(worst < 1e-12 * scale);
}

TEST_CASE("fundamental identity") {
  const auto g = make_window(WindowId::gaussian, kSmall);
  CHECK(fundamental_identity_residual(g, g) < 1e-8);
  CHECK(fundamental_identity_residual(SampledFunction::zeros(kSmall), g) == 0.0);
  Rng rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    CHECK(fundamental_identity_residual(gen::band_limited(kSmall, rng), g) < 1e-6);
  }
}

TEST_CASE("stft4 against brute-force quadrature") {
  SUBCASE("origin value of the normalized window") {
    const Grid a = Grid::symmetric(1, 32, 4.0);
    const auto Psi = make_window_2d(WindowId::gaussian, a, a);
    const auto V = stft4(Psi, Psi);
    const std::size_t n = 32;
    const std::size_t at = ((n / 2 * n + n / 2) * n + n / 2) * n + n / 2;
    CHECK(std::abs(V.values[at] - cplx(1.0, 0.0)) < 1e-6);
    CHECK(max_abs(stft4(SampledFunction2D::zeros(a, a), Psi).values) == 0.0);
  }
  SUBCASE("every grid point at n = 16") {
    const Grid a = Grid::symmetric(1, 16, 3.0);
    const Grid b = Grid::symmetric(1, 16, 4.0);
    Rng rng(41);
    std::vector<cplx> s(a.n * b.n);
    for (auto& v : s) v = cplx(rng.normal(), rng.normal());
    const SampledFunction2D F(a, b, s);
    const auto Psi = make_window_2d(WindowId::gaussian, a, b);
    const auto V = stft4(F, Psi);
    double worst = 0.0;
    std::size_t flat = 0;
    for (std::size_t k1 = 0; k1 < 16; ++k1)
      for (std::size_t k2 = 0; k2 < 16; ++k2)
        for (std::size_t r1 = 0; r1 < 16; ++r1)
          for (std::size_t r2 = 0; r2 < 16; ++r2) {
            const cplx e = oracle::direct_stft4(F, Psi, k1, k2, V.blocks[2].coord(r1), V.blocks[3].coord(r2));
            worst = std::max(worst, std::abs(V.values[flat++] - e));
          }
    CHECK(worst < 1e-10);
  }
  SUBCASE("five random points at n = 64") {
    const Grid a = Grid::symmetric(1, 64, 4.0);
    const auto F = SampledFunction2D::from(a, a, [](std::span<const double> x, std::span<const double> y) {
      return std::exp(-kPi * (x[0] * x[0] + 0.5 * y[0] * y[0])) * std::polar(1.0, 2.0 * x[0] * y[0]);
    });
    const auto Psi = make_window_2d(WindowId::gaussian, a, a);
    const auto V = stft4(F, Psi);
    Rng rng(43);
    for (int i = 0; i < 5; ++i) {
      const std::size_t k1 = rng.below(64), k2 = rng.below(64), r1 = rng.below(64), r2 = rng.below(64);
      const cplx e = oracle::direct_stft4(F, Psi, k1, k2, V.blocks[2].coord(r1), V.blocks[3].coord(r2));
      CHECK(std::abs(V.values[((k1 * 64 + k2) * 64 + r1) * 64 + r2] - e) < 1e-6);
    }
  }
}

TEST_CASE("stft4 memory budget") {
  const Grid a = Grid::symmetric(1, 64, 4.0);
  const auto Psi = make_window_2d(WindowId::gaussian, a, a);
  try {
    (void)stft4(Psi, Psi, {}, std::size_t{1} << 20);
    FAIL("expected resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("largest admissible n per axis with full-length transforms is 32") !=
          std::string::npos);
  }
}
