#include <doctest.h>

#include "fiolab/errors.hpp"
#include "fiolab/fio.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace fiolab;

namespace {

const Grid kLine = Grid::symmetric(1, 512, 16.0);
const Grid kSmall = Grid::symmetric(1, 256, 8.0);

double rel_l2(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

SampledFunction pointwise(const SampledFunction& f, const std::function<cplx(double)>& m) {
  std::vector<cplx> out = f.data();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= m(f.grid().coord(j));
  return SampledFunction(f.grid(), std::move(out));
}

const FioOptions kDirect{FioPath::direct};
const FioOptions kFast{FioPath::fast};

} // namespace

TEST_CASE("identity phase reduces to the identity") {
  Rng rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = gen::band_limited(kLine, rng);
    CHECK(rel_l2(apply_fio(unit_symbol(), bilinear_phase(), f, kDirect).samples(), f.samples()) < 1e-8);
    CHECK(rel_l2(apply_fio(unit_symbol(), bilinear_phase(), f, kFast).samples(), f.samples()) < 1e-12);
  }
  const Grid plane = Grid::symmetric(2, 64, 4.0);
  const auto F = gen::gaussian(plane, 1.2);
  CHECK(rel_l2(apply_fio(unit_symbol(), bilinear_phase(2), F, kDirect).samples(), F.samples()) < 1e-8);
}

TEST_CASE("multiplication phase") {
  Rng rng(62);
  const auto phase = mild_growth_phase(0.5);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = gen::band_limited(kLine, rng);
    const auto expected =
        pointwise(f, [](double x) { return std::polar(1.0, kTwoPi * std::pow(japanese(x), 1.5)); });
    CHECK(rel_l2(apply_fio(unit_symbol(), phase, f, kDirect).samples(), expected.samples()) < 1e-6);
    CHECK(rel_l2(apply_fio(unit_symbol(), phase, f).samples(), expected.samples()) < 1e-10);
  }
}

TEST_CASE("frequency-only phase gives a constant") {
  const auto phase = nonseparated_xi_phase();
  const auto g = gen::gaussian(kLine);
  // independent quadrature for the normalizing constant
  const auto gh = oracle::direct_dft(g);
  const Grid dual = kLine.dual();
  cplx c = 0.0;
  double xi[1];
  for (std::size_t m = 0; m < dual.n; ++m) {
    xi[0] = dual.coord(m);
    c += gh[m] * std::polar(1.0, kTwoPi * phase.eval(xi, xi)) * dual.spacing;
  }
  const auto f = scale(g, 1.0 / c);
  const auto out = apply_fio(unit_symbol(), phase, f);
  for (const auto& v : out.samples()) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-10);
}

TEST_CASE("space-only phase evaluates at the origin") {
  Rng rng(63);
  const auto f = gen::band_limited(kLine, rng);
  const auto out = apply_fio(unit_symbol(), nonseparated_x_phase(0.5), f);
  const cplx f0 = f.at_origin();
  const auto expected =
      SampledFunction::from(kLine, [&](std::span<const double> x) { return f0 * std::polar(1.0, kTwoPi * std::pow(japanese(x), 1.5)); });
  CHECK(rel_l2(out.samples(), expected.samples()) < 1e-8);
}

TEST_CASE("band limit is enforced") {
  const auto rough = SampledFunction::from(kSmall, [](std::span<const double> t) {
    return cplx(std::exp(-kPi * t[0] * t[0]) * std::cos(kTwoPi * 7.0 * t[0]), 0.0);
  });
  CHECK(band_leakage(rough) > 0.1);
  try {
    (void)apply_fio(unit_symbol(), bilinear_phase(), rough);
    FAIL("expected leakage error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("leakage") != std::string::npos);
  }
  FioOptions loose;
  loose.leakage_tolerance = 1.0;
  CHECK_NOTHROW(apply_fio(unit_symbol(), bilinear_phase(), rough, loose));
  CHECK(band_leakage(SampledFunction::zeros(kSmall)) == 0.0);
  CHECK_THROWS_AS(apply_fio(unit_symbol(), bilinear_phase(2), gen::gaussian(kSmall)), StructuralError);
  CHECK_THROWS_AS(apply_fio(unit_symbol(), nonseparated_x_phase(0.5), gen::gaussian(kSmall), kFast), DomainError);
}

TEST_CASE("linearity") {
  Rng rng(64);
  const auto sigma = bracket_symbol(0.5, 1.0);
  for (const auto& phase : {mild_growth_phase(0.5), high_growth_phase(1.0, 0.0), nonseparated_xi_phase()}) {
    const auto f = gen::band_limited(kSmall, rng), g = gen::band_limited(kSmall, rng);
    const cplx a(rng.normal(), rng.normal());
    const auto lhs = apply_fio(sigma, phase, add(scale(f, a), g), kDirect);
    const auto rhs = add(scale(apply_fio(sigma, phase, f, kDirect), a), apply_fio(sigma, phase, g, kDirect));
    CHECK(rel_l2(lhs.samples(), rhs.samples()) < 1e-10);
  }
}

TEST_CASE("fast and direct paths agree") {
  Rng rng(65);
  const SymbolSpec symbols[] = {unit_symbol(), bracket_symbol(1.0, 0.0), bracket_symbol(0.5, 1.5)};
  for (const auto& sigma : symbols) {
    for (const auto& phase : {bilinear_phase(), mild_growth_phase(0.25), high_growth_phase(0.5, 1.0)}) {
      CAPTURE(sigma.name);
      CAPTURE(phase.name);
      const auto f = gen::band_limited(kLine, rng);
      CHECK(rel_l2(apply_fio(sigma, phase, f, kFast).samples(), apply_fio(sigma, phase, f, kDirect).samples()) < 1e-6);
    }
  }
}

TEST_CASE("high-growth operator factors into multipliers") {
  Rng rng(66);
  const double s1 = 0.75, s2 = 1.25, t1 = 1.0, t2 = 0.5;
  const auto phase = high_growth_phase(t1, t2);
  const auto sigma = bracket_symbol(s1, s2);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = gen::band_limited(kLine, rng);
    const RadialPart mu2 = [=](std::span<const double> xi) { return std::pow(japanese(xi), 2.0 + t2); };
    const auto inner = bessel_potential(apply_multiplier(mu2, f), s2);
    const auto expected = pointwise(
        inner, [=](double x) { return std::pow(japanese(x), -s1) * std::polar(1.0, std::pow(japanese(x), 2.0 + t1)); });
    CHECK(rel_l2(apply_fio(sigma, phase, f, kDirect).samples(), expected.samples()) < 1e-6);
  }
}

TEST_CASE("fourier multipliers") {
  Rng rng(67);
  const auto f = gen::band_limited(kLine, rng);
  CHECK(rel_l2(apply_multiplier(RadialPart{}, f).samples(), f.samples()) == 0.0);
  CHECK(rel_l2(apply_multiplier([](std::span<const double>) { return 0.0; }, f).samples(), f.samples()) < 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(1, 3);
    const auto out = apply_multiplier([=](std::span<const double> xi) { return a * xi[0] * xi[0] + std::pow(japanese(xi), b); }, f);
    CHECK(std::abs(out.l2_norm() - f.l2_norm()) < 1e-10 * f.l2_norm());
  }
  const double u[1] = {gen::grid_shift(kLine, rng)};
  const double minus_u[1] = {-u[0]}, zero[1] = {0.0};
  const auto shifted = apply_multiplier([&](std::span<const double> xi) { return kTwoPi * u[0] * xi[0]; }, f);
  CHECK(rel_l2(shifted.samples(), translate_modulate(f, minus_u, zero).samples()) < 1e-8);
  CHECK(rel_l2(bessel_potential(f, 0.0).samples(), f.samples()) < 1e-12);
  CHECK(bessel_potential(f, 1.0).l2_norm() < f.l2_norm());
}

TEST_CASE("kernel") {
  SUBCASE("identity kernel is a discrete delta") {
    const auto K = kernel(unit_symbol(), bilinear_phase(), kSmall);
    double diag = 0.0, off = 0.0;
    for (std::size_t i = 0; i < kSmall.n; ++i)
      for (std::size_t j = 0; j < kSmall.n; ++j) (i == j ? diag : off) += std::abs(K.at(i, j));
    CHECK(off < 1e-6 * (diag + off));
    CHECK(std::abs(K.at(5, 5) - cplx(1.0 / kSmall.spacing, 0.0)) < 1e-9);
  }
  SUBCASE("multiplication kernel") {
    const auto K = kernel(unit_symbol(), mild_growth_phase(0.5), kSmall);
    double worst = 0.0;
    for (std::size_t i = 0; i < kSmall.n; ++i)
      for (std::size_t j = 0; j < kSmall.n; ++j) {
        const cplx expected =
            i == j ? std::polar(1.0 / kSmall.spacing, kTwoPi * std::pow(japanese(kSmall.coord(i)), 1.5)) : cplx(0.0);
        worst = std::max(worst, std::abs(K.at(i, j) - expected));
      }
    CHECK(worst < 1e-9);
  }
  SUBCASE("kernel against direct application") {
    Rng rng(68);
    const auto sigma = bracket_symbol(0.5, 0.5);
    for (const auto& phase : {mild_growth_phase(0.5), high_growth_phase(1.0, 0.0), nonseparated_xi_phase()}) {
      const auto K = kernel(sigma, phase, kLine);
      for (int trial = 0; trial < 5; ++trial) {
        const auto f = gen::band_limited(kLine, rng);
        CHECK(rel_l2(kernel_apply(K, f).samples(), apply_fio(sigma, phase, f, kDirect).samples()) < 1e-6);
      }
    }
  }
  CHECK_THROWS_AS(kernel(unit_symbol(), bilinear_phase(), kLine, 1000), ResourceError);
}

TEST_CASE("weak pairing") {
  Rng rng(69);
  const auto f = gen::band_limited(kSmall, rng);
  CHECK(weak_pairing(unit_symbol(), bilinear_phase(), SampledFunction::zeros(kSmall), f) == cplx(0.0));
  CHECK(weak_pairing(unit_symbol(), bilinear_phase(), f, SampledFunction::zeros(kSmall)) == cplx(0.0));
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = gen::band_limited(kSmall, rng), b = gen::band_limited(kSmall, rng);
    const cplx expected = inner_product(a, b);
    CHECK(std::abs(weak_pairing(unit_symbol(), bilinear_phase(), a, b) - expected) < 1e-8 * std::abs(expected));
    const auto sigma = bracket_symbol(0.25, 0.75);
    const auto phase = trial % 2 == 0 ? mild_growth_phase(0.5) : high_growth_phase(0.5, 0.5);
    const cplx strong = inner_product(apply_fio(sigma, phase, a, kDirect), b);
    CHECK(std::abs(weak_pairing(sigma, phase, a, b) - strong) < 1e-8 * std::abs(strong));
  }
}

TEST_CASE("symbols") {
  const double x[1] = {2.0}, xi[1] = {-1.0};
  CHECK(bracket_symbol(1.0, 2.0).eval(x, xi).real() == doctest::Approx(1.0 / (std::sqrt(5.0) * 2.0)));
  CHECK(make_symbol("bracket", {{"s1", 1.0}}).s1 == 1.0);
  CHECK(make_symbol("unit", {}).eval(x, xi) == cplx(1.0));
  CHECK_THROWS_AS(make_symbol("hat", {}), ValidationError);
}
