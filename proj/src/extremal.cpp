#include "fiolab/extremal.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/phase.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace fiolab {

namespace {

double pow2_at_least(double v) {
  double p = 1.0;
  while (p < v) p *= 2.0;
  return p;
}

double smooth_step(double u) {
  const auto H = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = H(u), b = H(1.0 - u);
  return a / (a + b);
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

Vec as_real(std::span<const long long> k) { return Vec(k.begin(), k.end()); }

void require_alpha_range(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in [0,1), got {}", alpha));
}

void require_grid_dim(const Grid& grid, int d, const char* what) {
  grid.validate();
  if (grid.offset != 0.0) throw StructuralError(fmt::format("{}: grid must be symmetric about 0", what));
  if (grid.dim != d) throw StructuralError(fmt::format("{}: sequence dimension {} differs from grid dimension {}", what, d, grid.dim));
}

double nyquist(const Grid& grid) { return 0.5 / grid.spacing; }

// Visits the grid points within sup-distance `radius` of `center`.
void for_each_near(const Grid& grid, std::span<const double> center, double radius,
                   const std::function<void(std::size_t, std::span<const double>)>& visit) {
  const std::size_t d = static_cast<std::size_t>(grid.dim);
  std::vector<std::size_t> lo(d), hi(d), idx(d);
  const double h = grid.spacing, c0 = static_cast<double>(grid.n / 2);
  for (std::size_t a = 0; a < d; ++a) {
    const double first = std::ceil((center[a] - radius) / h + c0);
    const double last = std::floor((center[a] + radius) / h + c0);
    if (last < 0.0 || first > static_cast<double>(grid.n) - 1.0) return;
    lo[a] = static_cast<std::size_t>(std::max(first, 0.0));
    hi[a] = static_cast<std::size_t>(std::min(last, static_cast<double>(grid.n) - 1.0));
    if (lo[a] > hi[a]) return;
  }
  idx = lo;
  Vec x(d);
  while (true) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < d; ++a) {
      flat = flat * grid.n + idx[a];
      x[a] = grid.coord(idx[a]);
    }
    visit(flat, x);
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (idx[a] < hi[a]) {
        ++idx[a];
        break;
      }
      idx[a] = lo[a];
      if (a == 0) return;
    }
  }
}

struct Placement {
  Vec center;
  double radius = 0.0; // support radius of the placed profile
  double scale = 1.0;  // argument dilation
  Vec frequency;       // empty: no modulation
  double weight = 1.0;
};

void check_placements(const std::vector<Placement>& items, const Grid& grid, double separation_factor,
                      const char* what) {
  const double L = grid.half_width();
  for (const auto& it : items) {
    if (norm_inf(it.center) + it.radius >= L)
      throw ValidationError(fmt::format("{}: support around {:g} leaves the box [-{:g},{:g})", what, it.center[0], L, L));
    if (!it.frequency.empty() && norm_inf(it.frequency) >= nyquist(grid))
      throw ValidationError(fmt::format("{}: modulation frequency {:g} exceeds the Nyquist frequency {:g}", what,
                                        norm_inf(it.frequency), nyquist(grid)));
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      Vec diff(items[i].center.size());
      for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = items[i].center[a] - items[j].center[a];
      if (norm2(diff) < separation_factor * (items[i].radius + items[j].radius))
        throw ValidationError(fmt::format("{}: translated supports around {:g} and {:g} overlap", what,
                                          items[i].center[0], items[j].center[0]));
    }
  }
}

SampledFunction place(const std::vector<Placement>& items, const Bump& h, const Grid& grid) {
  std::vector<cplx> out(grid.size(), cplx(0.0));
  const std::size_t d = static_cast<std::size_t>(grid.dim);
  Vec y(d);
  for (const auto& it : items) {
    if (it.weight == 0.0) continue;
    for_each_near(grid, it.center, it.radius, [&](std::size_t flat, std::span<const double> x) {
      for (std::size_t a = 0; a < d; ++a) y[a] = (x[a] - it.center[a]) / it.scale;
      const double v = h(y);
      if (v == 0.0) return;
      cplx term(it.weight * v, 0.0);
      if (!it.frequency.empty()) {
        double ph = 0.0;
        for (std::size_t a = 0; a < d; ++a) ph += it.frequency[a] * x[a];
        term *= std::polar(1.0, kTwoPi * ph);
      }
      out[flat] += term;
    });
  }
  return SampledFunction(grid, std::move(out));
}

std::vector<Placement> lattice_placements(const CoefficientSeq& a, double alpha, const Bump& h, bool modulated) {
  std::vector<Placement> items;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec k = as_real(a.seq.point(i));
    Placement p;
    p.center = k_alpha(k, alpha);
    p.radius = h.support_radius();
    if (modulated) p.frequency = grad_mu(p.center, alpha);
    p.weight = a.seq.values[i];
    items.push_back(std::move(p));
  }
  return items;
}

std::vector<Placement> chirp_placements(double alpha, const Bump& g, long long lo, long long hi) {
  require_alpha_range(alpha);
  if (lo > hi) throw ValidationError(fmt::format("chirp train: empty range {}..{}", lo, hi));
  std::vector<Placement> items;
  for (long long k = lo; k <= hi; ++k) {
    const double kk[1] = {static_cast<double>(k)};
    Placement p;
    p.center = k_alpha(kk, alpha);
    p.scale = std::pow(japanese(kk[0]), alpha / (1.0 - alpha));
    p.radius = g.support_radius() * p.scale;
    p.frequency = grad_mu(p.center, alpha);
    items.push_back(std::move(p));
  }
  return items;
}

double determinant(Vec m, std::size_t d) {
  double det = 1.0;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < d; ++r)
      if (std::abs(m[r * d + c]) > std::abs(m[piv * d + c])) piv = r;
    if (m[piv * d + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < d; ++j) std::swap(m[c * d + j], m[piv * d + j]);
      det = -det;
    }
    det *= m[c * d + c];
    for (std::size_t r = c + 1; r < d; ++r) {
      const double f = m[r * d + c] / m[c * d + c];
      for (std::size_t j = c; j < d; ++j) m[r * d + j] -= f * m[c * d + j];
    }
  }
  return det;
}

double power_size(double base, int d) { return std::pow(base, static_cast<double>(d)); }

} // namespace

void CoefficientSeq::validate() const {
  seq.validate();
  for (double v : seq.values) {
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError(fmt::format("coefficients must be finite and nonnegative, got {}", v));
  }
}

double CoefficientSeq::total() const { return std::accumulate(seq.values.begin(), seq.values.end(), 0.0); }

CoefficientSeq CoefficientSeq::delta(int d) { return CoefficientSeq{LatticeSequence::delta(d)}; }

CoefficientSeq CoefficientSeq::range(long long lo, long long hi, double value) {
  CoefficientSeq a{LatticeSequence::range(lo, hi, value)};
  a.validate();
  return a;
}

CoefficientSeq CoefficientSeq::zero(int d) {
  CoefficientSeq a;
  a.seq.d = d;
  return a;
}

double Bump::operator()(std::span<const double> x) const {
  const double r = norm2(x);
  if (kind == ProfileKind::plateau) return amplitude * (1.0 - smooth_step((r - radius) / radius));
  const double u = r / radius;
  const double v = 1.0 - u * u;
  return v > 0.0 ? amplitude * std::exp(-1.0 / v) : 0.0;
}

double Bump::support_radius() const { return kind == ProfileKind::plateau ? 2.0 * radius : radius; }

void Bump::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError(fmt::format("bump radius must be positive, got {}", radius));
  if (!std::isfinite(amplitude)) throw ValidationError("bump amplitude must be finite");
}

Bump plateau(double radius, double amplitude) { return Bump{ProfileKind::plateau, radius, amplitude}; }

Grid fit_grid(int d, double x_extent, double freq_extent, double margin, double band) {
  if (d < 1) throw StructuralError("fit_grid: dimension must be positive");
  const double L = pow2_at_least(x_extent + margin);
  const double rate = pow2_at_least(2.0 * (freq_extent + band));
  const double n = 2.0 * L * rate;
  if (power_size(n, d) > static_cast<double>(std::size_t{1} << 28))
    throw ResourceError(fmt::format("fit_grid: {:g}^{} samples exceed the limit", n, d));
  return Grid::symmetric(d, static_cast<std::size_t>(n), L);
}

double support_extent(const CoefficientSeq& a, double alpha, const Bump& h) {
  double e = 0.0;
  for (const auto& p : lattice_placements(a, alpha, h, false)) e = std::max(e, norm_inf(p.center) + p.radius);
  return e;
}

double frequency_extent(const CoefficientSeq& a, double alpha) {
  double e = 0.0;
  for (const auto& p : lattice_placements(a, alpha, Bump{}, true)) e = std::max(e, norm_inf(p.frequency));
  return e;
}

double frequency_separation(const CoefficientSeq& a, double alpha) {
  const auto items = lattice_placements(a, alpha, Bump{}, true);
  double best = kInf;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      Vec diff(items[i].frequency.size());
      for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = items[i].frequency[c] - items[j].frequency[c];
      best = std::min(best, norm2(diff));
    }
  }
  return best;
}

SampledFunction build_F(const CoefficientSeq& a, double alpha, const Bump& h, const Grid& grid) {
  a.validate();
  h.validate();
  require_alpha_range(alpha);
  require_grid_dim(grid, a.d(), "build_F");
  const auto items = lattice_placements(a, alpha, h, false);
  // B(k_alpha, 2 delta) pairwise disjoint
  check_placements(items, grid, 2.0, "build_F");
  return place(items, h, grid);
}

SampledFunction build_G(const CoefficientSeq& a, double alpha, const Bump& h, const Grid& grid) {
  a.validate();
  h.validate();
  require_alpha_range(alpha);
  require_grid_dim(grid, a.d(), "build_G");
  const auto items = lattice_placements(a, alpha, h, true);
  check_placements(items, grid, 2.0, "build_G");
  return place(items, h, grid);
}

SampledFunction build_modulated_train(const CoefficientSeq& a, const Bump& phi, const Grid& grid) {
  a.validate();
  phi.validate();
  require_grid_dim(grid, a.d(), "build_modulated_train");
  if (phi.support_radius() >= 0.5)
    throw ValidationError(fmt::format("modulated train: frequency bump radius {:g} must be below 1/2",
                                      phi.support_radius()));
  const Grid dual = grid.dual();
  if (phi.support_radius() < 4.0 * dual.spacing)
    throw ValidationError(fmt::format("modulated train: the box is too small to resolve a frequency bump of radius {:g}",
                                      phi.support_radius()));
  const std::size_t d = static_cast<std::size_t>(grid.dim);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (norm_inf(as_real(a.seq.point(i))) + phi.support_radius() >= nyquist(grid))
      throw ValidationError("modulated train: a modulation exceeds the Nyquist frequency");
  }
  std::vector<cplx> spec(dual.size());
  Vec z(d);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    dual.point(m, z);
    spec[m] = phi(z);
  }
  // the inverse transform at the origin is the Riemann sum of phi, so the
  // normalization makes psi(0) = 1 exactly
  const auto psi = inverse_fourier_transform(SampledFunction(dual, std::move(spec)));
  const cplx c0 = psi.at_origin();
  std::vector<cplx> out(grid.size(), cplx(0.0));
  Vec x(d);
  for (std::size_t j = 0; j < out.size(); ++j) {
    grid.point(j, x);
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.seq.values[i] == 0.0) continue;
      const auto k = a.seq.point(i);
      double ph = 0.0;
      for (std::size_t c = 0; c < d; ++c) ph += static_cast<double>(k[c]) * x[c];
      s += a.seq.values[i] * std::polar(1.0, kTwoPi * ph);
    }
    out[j] = s * psi[j] / c0;
  }
  return SampledFunction(grid, std::move(out));
}

SampledFunction build_chirp_train(double alpha, const Bump& g, long long lo, long long hi, const Grid& grid) {
  g.validate();
  require_grid_dim(grid, 1, "build_chirp_train");
  const auto items = chirp_placements(alpha, g, lo, hi);
  check_placements(items, grid, 1.0, "build_chirp_train");
  return place(items, g, grid);
}

SampledFunction modulate_growth(const SampledFunction& f, double alpha, bool conjugate) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError(fmt::format("modulate_growth: alpha must lie in [0,2], got {}", alpha));
  const Grid& grid = f.grid();
  std::vector<cplx> out = f.data();
  Vec x(static_cast<std::size_t>(grid.dim));
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] == cplx(0.0)) continue;
    grid.point(j, x);
    const double ph = kTwoPi * std::pow(japanese(x), 2.0 - alpha);
    out[j] *= std::polar(1.0, conjugate ? -ph : ph);
  }
  return SampledFunction(grid, std::move(out));
}

double chirp_extent(double alpha, const Bump& g, long long lo, long long hi) {
  double e = 0.0;
  for (const auto& p : chirp_placements(alpha, g, lo, hi)) e = std::max(e, std::abs(p.center[0]) + p.radius);
  return e;
}

bool chirp_windows_disjoint(double alpha, const Bump& g, long long lo, long long hi) {
  const auto items = chirp_placements(alpha, g, lo, hi);
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    if (items[i + 1].center[0] - items[i].center[0] < items[i].radius + items[i + 1].radius) return false;
  }
  return true;
}

StftOptions family_resolution(const Grid& grid) {
  StftOptions o;
  o.window_radius = 4.0;
  std::size_t stride = 1;
  while (static_cast<double>(2 * stride) * grid.spacing <= 0.125 && 2 * stride * 4 <= grid.n) stride *= 2;
  o.stride = stride;
  return o;
}

RealPhase quadratic_phase(int d) {
  if (d < 1) throw StructuralError("quadratic_phase: dimension must be positive");
  RealPhase p;
  p.name = "quadratic";
  p.d = d;
  p.eval = [](std::span<const double> xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return s;
  };
  p.grad = [](std::span<const double> xi, std::span<double> out) {
    for (std::size_t a = 0; a < xi.size(); ++a) out[a] = 2.0 * xi[a];
  };
  p.hessian = [](std::span<const double> xi, std::span<double> out) {
    const std::size_t d = xi.size();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) out[a * d + b] = a == b ? 2.0 : 0.0;
  };
  return p;
}

double dispersive_sup(const RealPhase& phi, const Bump& g, double lambda, const DispersiveOptions& options) {
  g.validate();
  if (!std::isfinite(lambda)) throw DomainError("dispersive_sup: lambda must be finite");
  if (!(options.A > 0.0)) throw DomainError("dispersive_sup: A must be positive");
  const int d = phi.d;
  const std::size_t du = static_cast<std::size_t>(d);
  const double R = g.support_radius();

  Grid grid;
  if (options.grid) {
    grid = *options.grid;
    require_grid_dim(grid, d, "dispersive_sup");
    if (grid.half_width() <= R) throw ValidationError("dispersive_sup: supp g leaves the frequency box");
  } else {
    // largest |grad phi| on supp g, from a coarse scan
    const Grid scan = Grid::symmetric(d, d == 1 ? 256 : 64, R);
    double G = 0.0;
    Vec z(du), gr(du);
    for (std::size_t i = 0; i < scan.size(); ++i) {
      scan.point(i, z);
      if (norm2(z) > R) continue;
      phi.grad(z, gr);
      G = std::max(G, norm2(gr));
    }
    const double X = std::abs(lambda) * G / kTwoPi + 16.0;
    const double L = pow2_at_least(2.0 * R);
    const double rate = pow2_at_least(2.5 * X);
    const double n = 2.0 * L * rate;
    if (power_size(n, d) > static_cast<double>(options.sample_cap))
      throw ResourceError(fmt::format("dispersive_sup: lambda = {:g} needs {:g}^{} samples", lambda, n, d));
    grid = Grid::symmetric(d, static_cast<std::size_t>(n), L);
  }
  if (grid.size() > options.sample_cap) throw ResourceError("dispersive_sup: grid exceeds the sample cap");

  std::vector<cplx> v(grid.size(), cplx(0.0));
  Vec z(du), hess(du * du);
  for (std::size_t i = 0; i < v.size(); ++i) {
    grid.point(i, z);
    const double gv = g(z);
    if (gv == 0.0) continue;
    phi.hessian(z, hess);
    const double det = determinant(hess, du);
    if (!(std::abs(det) >= 1.0 / options.A))
      throw ValidationError(fmt::format("dispersive_sup: |det Hess phi| = {:.3e} below 1/A at xi = {:g}",
                                        std::abs(det), z[0]));
    v[i] = gv * std::polar(1.0, lambda * phi.eval(z));
  }
  return inverse_fourier_transform(SampledFunction(grid, std::move(v))).sup_norm();
}

double annulus_cutoff(double r) {
  return smooth_step((r - 0.25) / 0.25) * (1.0 - smooth_step((r - 2.0) / 2.0));
}

double high_growth_decay(std::span<const double> k, double t2, double p, const DecayOptions& options) {
  require_exponent(p, "p");
  if (!(t2 >= 0.0) || !std::isfinite(t2)) throw DomainError("high_growth_decay: t2 must be finite and nonnegative");
  if (!std::isfinite(options.amplitude)) throw ValidationError("high_growth_decay: amplitude must be finite");
  const int d = static_cast<int>(k.size());
  if (d < 1) throw StructuralError("high_growth_decay: k must have at least one coordinate");
  const double kn = norm2(k);
  if (!(kn > 0.0)) throw ValidationError("high_growth_decay: k must be nonzero");
  const double R = 4.0 * kn;
  // largest local frequency of e^{-i <x>^{2+t2}} on the annulus, in cycles
  const double fmax = (2.0 + t2) * std::pow(japanese(R), 1.0 + t2) / kTwoPi;

  Grid grid;
  if (options.grid) {
    grid = *options.grid;
    require_grid_dim(grid, d, "high_growth_decay");
    if (grid.half_width() < R)
      throw ValidationError(fmt::format("high_growth_decay: annulus radius {:g} leaves the box of half-width {:g}", R,
                                        grid.half_width()));
    if (nyquist(grid) < fmax)
      throw ValidationError(fmt::format("high_growth_decay: grid Nyquist {:g} below the chirp frequency {:g}",
                                        nyquist(grid), fmax));
  } else {
    const double L = pow2_at_least(R);
    const std::size_t n = static_cast<std::size_t>(pow2_at_least(2.0 * L * 2.0 * (1.1 * fmax + 16.0)));
    if (power_size(static_cast<double>(n), d) > static_cast<double>(options.sample_cap))
      throw ResourceError(fmt::format("high_growth_decay: |k| = {:g}, t2 = {:g} needs {}^{} samples", kn, t2, n, d));
    grid = Grid::symmetric(d, n, L);
  }
  if (grid.size() > options.sample_cap) throw ResourceError("high_growth_decay: grid exceeds the sample cap");

  std::vector<cplx> u(grid.size(), cplx(0.0));
  Vec x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < u.size(); ++i) {
    grid.point(i, x);
    const double r = norm2(x);
    const double rho = annulus_cutoff(r / kn);
    if (rho == 0.0) continue;
    u[i] = options.amplitude * rho * std::polar(1.0, -std::pow(1.0 + r * r, 0.5 * (2.0 + t2)));
  }
  return fourier_lebesgue_norm(SampledFunction(grid, std::move(u)), p, 0.0);
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StructuralError("loglog_slope: x and y sizes differ");
  if (xs.size() < 3) throw ValidationError(fmt::format("loglog_slope: needs at least 3 points, got {}", xs.size()));
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw ValidationError(fmt::format("loglog_slope: point ({}, {}) is not positive and finite", xs[i], ys[i]));
    mx += std::log(xs[i]) / n;
    my += std::log(ys[i]) / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  if (sxx == 0.0) throw ValidationError("loglog_slope: x values must not all coincide");
  return sxy / sxx;
}

} // namespace fiolab
