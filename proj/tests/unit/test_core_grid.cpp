#include <doctest.h>

#include "fiolab/csv.hpp"
#include "fiolab/errors.hpp"
#include "fiolab/grid.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <sstream>

using namespace fiolab;

namespace {

const Grid kDefault = Grid::symmetric(1, 512, 16.0);

double rel_l2(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

} // namespace

TEST_CASE("grid geometry") {
  CHECK(kDefault.spacing == doctest::Approx(1.0 / 16.0));
  CHECK(kDefault.coord(256) == 0.0);
  CHECK(kDefault.coord(0) == -16.0);
  CHECK(kDefault.dual().spacing == doctest::Approx(1.0 / 32.0));
  CHECK_THROWS_AS(Grid::symmetric(1, 100, 4.0), ValidationError);
  CHECK_THROWS_AS(Grid::symmetric(1, 2, 4.0), ValidationError);
  CHECK_THROWS_AS((Grid{1, 64, -1.0, 0.0}.validate()), ValidationError);
}

TEST_CASE("sampled function invariants") {
  std::vector<cplx> bad(kDefault.n, 0.0);
  bad[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(SampledFunction(kDefault, bad), ValidationError);
  CHECK_THROWS_AS(SampledFunction(kDefault, std::vector<cplx>(7)), StructuralError);
}

TEST_CASE("fourier transform of zero is zero") {
  const auto fh = fourier_transform(SampledFunction::zeros(kDefault));
  CHECK(fh.sup_norm() == 0.0);
}

TEST_CASE("gaussian is its own transform") {
  const auto f = gen::gaussian(kDefault);
  const auto fh = fourier_transform(f);
  const auto exact = SampledFunction::from(fh.grid(), [](std::span<const double> xi) {
    return cplx(std::exp(-kPi * xi[0] * xi[0]), 0.0);
  });
  CHECK(rel_l2(fh.samples(), exact.samples()) < 1e-8);
  // independent quadrature oracle
  const auto direct = oracle::direct_dft(f);
  CHECK(rel_l2(fh.samples(), direct) < 1e-12);
}

TEST_CASE("two-dimensional gaussian transform") {
  const Grid g = Grid::symmetric(2, 64, 4.0);
  const auto f = gen::gaussian(g);
  const auto fh = fourier_transform(f);
  const auto exact = SampledFunction::from(fh.grid(), [](std::span<const double> xi) {
    return cplx(std::exp(-kPi * (xi[0] * xi[0] + xi[1] * xi[1])), 0.0);
  });
  CHECK(rel_l2(fh.samples(), exact.samples()) < 1e-8);
}

TEST_CASE("real even input gives real even transform") {
  const auto f = SampledFunction::from(kDefault, [](std::span<const double> t) {
    return cplx(std::exp(-kPi * t[0] * t[0]) * (1.0 + std::cos(3.0 * t[0])), 0.0);
  });
  const auto fh = fourier_transform(f);
  const std::size_t n = kDefault.n;
  for (std::size_t m = 1; m < n; ++m) {
    CHECK(std::abs(fh[m].imag()) < 1e-10);
    CHECK(std::abs(fh[m] - fh[n - m]) < 1e-10);
  }
}

TEST_CASE("round trip and Parseval on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g = trial % 5 == 0 ? Grid::symmetric(2, 32, 4.0) : Grid::symmetric(1, 256, 8.0);
    std::vector<cplx> s(g.size());
    for (auto& v : s) v = cplx(rng.normal(), rng.normal());
    const SampledFunction f(g, s);
    const auto fh = fourier_transform(f);
    const auto back = inverse_fourier_transform(fh);
    CHECK(back.grid().matches(g));
    CHECK(rel_l2(back.samples(), f.samples()) < 1e-10);
    CHECK(std::abs(fh.l2_norm() - f.l2_norm()) / f.l2_norm() < 1e-10);
  }
}

TEST_CASE("translate_modulate basics") {
  Rng rng(5);
  const auto f = gen::band_limited(kDefault, rng);
  const double zero[1] = {0.0};
  const auto same = translate_modulate(f, zero, zero);
  CHECK(rel_l2(same.samples(), f.samples()) == 0.0);

  const double u[1] = {3.0 * kDefault.spacing * 7};
  const double w[1] = {1.25};
  const auto moved = translate_modulate(f, u, w);
  CHECK(std::abs(moved.l2_norm() - f.l2_norm()) < 1e-12 * f.l2_norm());
  for (std::size_t j = 0; j < kDefault.n; ++j) {
    CHECK(std::abs(moved[(j + 21) % kDefault.n]) == doctest::Approx(std::abs(f[j])));
  }

  const double off[1] = {0.05};
  try {
    (void)translate_modulate(f, off, zero);
    FAIL("expected off-grid error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("nearest grid shift is 0.0625") != std::string::npos);
  }
}

TEST_CASE("translation-modulation commutation law") {
  Rng rng(17);
  const double zero[1] = {0.0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen::band_limited(kDefault, rng);
    const double u[1] = {gen::grid_shift(kDefault, rng)};
    const double w[1] = {rng.uniform(-2.0, 2.0)};
    // T_u M_w f
    const auto lhs = translate_modulate(translate_modulate(f, zero, w), u, zero);
    const auto rhs = translate_modulate(f, u, w);
    const cplx factor = std::polar(1.0, -kTwoPi * u[0] * w[0]);
    double worst = 0.0;
    for (std::size_t j = 0; j < kDefault.n; ++j) worst = std::max(worst, std::abs(lhs[j] - factor * rhs[j]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("dilate2") {
  const Grid g = Grid::symmetric(1, 128, 8.0);
  const auto bump = SampledFunction2D::from(g, g, [](std::span<const double> x, std::span<const double> y) {
    return cplx(std::exp(-kPi * (x[0] * x[0] + y[0] * y[0])), 0.0);
  });

  SUBCASE("identity") {
    const auto same = dilate2(bump, 1.0, 1.0);
    CHECK(rel_l2(same.samples(), bump.samples()) == 0.0);
  }
  SUBCASE("gaussian widened in x against direct resampling") {
    const auto wide = dilate2(bump, 0.5, 1.0);
    const auto direct = SampledFunction2D::from(g, g, [](std::span<const double> x, std::span<const double> y) {
      return cplx(std::exp(-kPi * (0.25 * x[0] * x[0] + y[0] * y[0])), 0.0);
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < wide.size(); ++i) worst = std::max(worst, std::abs(wide.data()[i] - direct.data()[i]));
    CHECK(worst < 1e-6);
    CHECK(wide.at(64, 64).real() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("constants are fixed") {
    const auto one = SampledFunction2D::from(g, g, [](auto, auto) { return cplx(2.5, 0.0); });
    const auto out = dilate2(one, 0.25, 0.5);
    for (const auto& v : out.samples()) CHECK(std::abs(v - cplx(2.5, 0.0)) < 1e-10);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(dilate2(bump, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(dilate2(bump, 0.5, 0.0), DomainError);
  }
}

TEST_CASE("csv round trip") {
  Rng rng(3);
  const auto f = gen::band_limited(Grid::symmetric(1, 64, 4.0), rng);
  std::stringstream ss;
  write_csv(ss, f);
  const auto back = read_sampled_function(ss);
  CHECK(back.grid().matches(f.grid()));
  CHECK(rel_l2(back.samples(), f.samples()) == 0.0);

  const Grid g = Grid::symmetric(1, 8, 2.0);
  const auto F = SampledFunction2D::from(g, g.dual(), [](std::span<const double> x, std::span<const double> y) {
    return cplx(x[0], y[0]);
  });
  std::stringstream s2;
  write_csv(s2, F);
  const auto B = read_sampled_function_2d(s2);
  CHECK(B.second().matches(g.dual()));
  CHECK(rel_l2(B.samples(), F.samples()) == 0.0);
}
