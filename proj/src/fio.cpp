#include "fiolab/fio.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/fft.hpp"

#include <fmt/format.h>

namespace fiolab {

namespace {

void require_centered(const Grid& g, const char* what) {
  if (g.offset != 0.0) throw StructuralError(fmt::format("{}: grid must be symmetric about 0", what));
}

void require_phase_dim(const PhaseSpec& phase, const Grid& g, const char* what) {
  if (phase.d != g.dim)
    throw StructuralError(fmt::format("{}: phase dimension {} does not match grid dimension {}", what, phase.d, g.dim));
}

void check_band_limit(const SampledFunction& f, double tolerance) {
  const double leak = band_leakage(f);
  if (leak > tolerance)
    throw ValidationError(
        fmt::format("input is not band-limited: leakage {:.3e} exceeds {:.3e}", leak, tolerance));
}

// All points of a grid, flattened, d coordinates each.
Vec grid_points(const Grid& g) {
  const std::size_t d = static_cast<std::size_t>(g.dim);
  Vec pts(g.size() * d);
  for (std::size_t i = 0; i < g.size(); ++i) g.point(i, std::span<double>(pts.data() + i * d, d));
  return pts;
}

std::vector<std::size_t> all_axes(int dim) {
  std::vector<std::size_t> axes(static_cast<std::size_t>(dim));
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  return axes;
}

double factor(const RadialPart& part, std::span<const double> z) { return part ? part(z) : 1.0; }
double phase_part(const RadialPart& part, std::span<const double> z) { return part ? part(z) : 0.0; }

SampledFunction apply_direct(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f) {
  const auto fh = fourier_transform(f);
  const Grid& g = f.grid();
  const std::size_t d = static_cast<std::size_t>(g.dim);
  const Vec xs = grid_points(g);
  const Vec xis = grid_points(fh.grid());
  const double dxi = fh.grid().cell_volume();
  const std::size_t n = g.size();
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::span<const double> x(xs.data() + j * d, d);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (fh[m] == cplx(0.0)) continue;
      const std::span<const double> xi(xis.data() + m * d, d);
      acc += sigma.eval(x, xi) * fh[m] * std::polar(1.0, kTwoPi * phase.eval(x, xi));
    }
    out[j] = acc * dxi;
  }
  return SampledFunction(g, std::move(out));
}

SampledFunction apply_fast(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f) {
  auto fh = fourier_transform(f);
  const std::size_t d = static_cast<std::size_t>(f.grid().dim);
  std::vector<cplx> spec = fh.data();
  Vec z(d);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    fh.grid().point(m, z);
    spec[m] *= factor(sigma.xi_factor, z) * std::polar(1.0, kTwoPi * phase_part(phase.nu, z));
  }
  auto u = inverse_fourier_transform(SampledFunction(fh.grid(), std::move(spec)));
  std::vector<cplx> out = u.data();
  for (std::size_t j = 0; j < out.size(); ++j) {
    f.grid().point(j, z);
    out[j] *= factor(sigma.x_factor, z) * std::polar(1.0, kTwoPi * phase_part(phase.mu, z));
  }
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction multiply_spectrum(const SampledFunction& f, const std::function<cplx(std::span<const double>)>& m) {
  require_centered(f.grid(), "fourier multiplier");
  const auto fh = fourier_transform(f);
  std::vector<cplx> spec = fh.data();
  Vec z(static_cast<std::size_t>(f.grid().dim));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    fh.grid().point(i, z);
    spec[i] *= m(z);
  }
  return inverse_fourier_transform(SampledFunction(fh.grid(), std::move(spec)));
}

} // namespace

SymbolSpec unit_symbol() {
  SymbolSpec s;
  s.name = "unit";
  s.eval = [](std::span<const double>, std::span<const double>) { return cplx(1.0, 0.0); };
  s.product = true;
  return s;
}

SymbolSpec bracket_symbol(double s1, double s2) {
  if (!std::isfinite(s1) || !std::isfinite(s2)) throw DomainError("symbol exponents must be finite");
  SymbolSpec s;
  s.name = fmt::format("bracket(s1={:g},s2={:g})", s1, s2);
  s.s1 = s1;
  s.s2 = s2;
  s.eval = [=](std::span<const double> x, std::span<const double> xi) {
    return cplx(std::pow(japanese(x), -s1) * std::pow(japanese(xi), -s2), 0.0);
  };
  s.product = true;
  if (s1 != 0.0) s.x_factor = [=](std::span<const double> x) { return std::pow(japanese(x), -s1); };
  if (s2 != 0.0) s.xi_factor = [=](std::span<const double> xi) { return std::pow(japanese(xi), -s2); };
  return s;
}

SymbolSpec make_symbol(const std::string& kind, const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    const auto it = params.find(key);
    return it == params.end() ? 0.0 : it->second;
  };
  if (kind == "unit") return unit_symbol();
  if (kind == "bracket") return bracket_symbol(get("s1"), get("s2"));
  throw ValidationError(fmt::format("unknown symbol '{}' (expected unit or bracket)", kind));
}

double band_leakage(const SampledFunction& f) {
  const auto fh = fourier_transform(f);
  const Grid& g = fh.grid();
  const std::size_t n = g.n, edge = n / 8;
  const std::size_t d = static_cast<std::size_t>(g.dim);
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double e = std::norm(fh[i]);
    total += e;
    std::size_t rest = i;
    bool out = false;
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t j = rest % n;
      rest /= n;
      out = out || j < edge || j >= n - edge;
    }
    if (out) outer += e;
  }
  return total > 0.0 ? std::sqrt(outer / total) : 0.0;
}

bool fast_path_available(const SymbolSpec& sigma, const PhaseSpec& phase) { return sigma.product && phase.separable; }

SampledFunction apply_fio(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f,
                          const FioOptions& options) {
  require_centered(f.grid(), "apply_fio");
  require_phase_dim(phase, f.grid(), "apply_fio");
  check_band_limit(f, options.leakage_tolerance);
  switch (options.path) {
  case FioPath::direct: return apply_direct(sigma, phase, f);
  case FioPath::fast:
    if (!fast_path_available(sigma, phase))
      throw DomainError(fmt::format("no fast path for symbol {} with phase {}", sigma.name, phase.name));
    return apply_fast(sigma, phase, f);
  case FioPath::automatic: break;
  }
  return fast_path_available(sigma, phase) ? apply_fast(sigma, phase, f) : apply_direct(sigma, phase, f);
}

SampledFunction2D kernel(const SymbolSpec& sigma, const PhaseSpec& phase, const Grid& grid, std::size_t value_cap) {
  grid.validate();
  require_centered(grid, "kernel");
  require_phase_dim(phase, grid, "kernel");
  const std::size_t n = grid.size();
  if (n > value_cap / n) throw ResourceError(fmt::format("kernel needs {} values, cap is {}", n * n, value_cap));
  const Grid dual = grid.dual();
  const std::size_t d = static_cast<std::size_t>(grid.dim);
  const Vec xs = grid_points(grid);
  const Vec xis = grid_points(dual);
  const std::vector<std::size_t> shape(d, grid.n);
  const auto axes = all_axes(grid.dim);
  const double dxi = dual.cell_volume();
  std::vector<cplx> values(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::span<const double> x(xs.data() + j * d, d);
    const std::span<cplx> row(values.data() + j * n, n);
    for (std::size_t m = 0; m < n; ++m) {
      const std::span<const double> xi(xis.data() + m * d, d);
      row[m] = sigma.eval(x, xi) * std::polar(1.0, kTwoPi * phase.eval(x, xi));
    }
    centered_dft(row, shape, axes, FftDirection::forward);
    for (auto& v : row) v *= dxi;
  }
  return SampledFunction2D(grid, grid, std::move(values));
}

SampledFunction kernel_apply(const SampledFunction2D& K, const SampledFunction& f) {
  require_same_grid(K.second(), f.grid(), "kernel_apply");
  const std::size_t rows = K.first().size(), cols = f.size();
  const double dy = f.grid().cell_volume();
  std::vector<cplx> out(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < cols; ++m) acc += K.data()[j * cols + m] * f[m];
    out[j] = acc * dy;
  }
  return SampledFunction(K.first(), std::move(out));
}

cplx weak_pairing(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f,
                  const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid(), "weak_pairing");
  require_centered(f.grid(), "weak_pairing");
  require_phase_dim(phase, f.grid(), "weak_pairing");
  const auto fh = fourier_transform(f);
  const std::size_t d = static_cast<std::size_t>(f.grid().dim);
  const Vec xs = grid_points(f.grid());
  const Vec xis = grid_points(fh.grid());
  const std::size_t n = f.size();
  cplx total = 0.0;
  // Frequency outer, space inner: the opposite order to the strong form.
  for (std::size_t m = 0; m < n; ++m) {
    if (fh[m] == cplx(0.0)) continue;
    const std::span<const double> xi(xis.data() + m * d, d);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g[j] == cplx(0.0)) continue;
      const std::span<const double> x(xs.data() + j * d, d);
      acc += sigma.eval(x, xi) * std::polar(1.0, kTwoPi * phase.eval(x, xi)) * std::conj(g[j]);
    }
    total += acc * fh[m];
  }
  return total * f.grid().cell_volume() * fh.grid().cell_volume();
}

SampledFunction apply_fourier_multiplier(const std::function<cplx(std::span<const double>)>& m,
                                         const SampledFunction& f) {
  return multiply_spectrum(f, m);
}

SampledFunction apply_multiplier(const RadialPart& mu, const SampledFunction& f) {
  if (!mu) return f;
  return multiply_spectrum(f, [&](std::span<const double> xi) { return std::polar(1.0, mu(xi)); });
}

SampledFunction bessel_potential(const SampledFunction& f, double s) {
  if (!std::isfinite(s)) throw DomainError("bessel_potential: s must be finite");
  return multiply_spectrum(f, [&](std::span<const double> xi) { return cplx(std::pow(japanese(xi), -s), 0.0); });
}

} // namespace fiolab
