#include "fiolab/grid.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace fiolab {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_finite(std::span<const cplx> samples, const char* what) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].real()) || !std::isfinite(samples[i].imag())) {
      throw ValidationError(fmt::format("{}: non-finite sample at index {}", what, i));
    }
  }
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Replace every line along `axis` by its trigonometric interpolant evaluated at
// lambda * t. The Nyquist coefficient is split symmetrically so real data stays real.
void resample_axis(std::vector<cplx>& data, const std::vector<std::size_t>& shape, std::size_t axis, double spacing,
                   double lambda) {
  const std::size_t n = shape[axis];
  std::size_t stride = 1;
  for (std::size_t b = axis + 1; b < shape.size(); ++b) stride *= shape[b];
  const std::size_t outer = data.size() / (n * stride);
  const double dxi = 1.0 / (static_cast<double>(n) * spacing);
  const auto half = static_cast<double>(n / 2);

  std::vector<cplx> basis(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = lambda * (static_cast<double>(j) - half) * spacing;
    for (std::size_t m = 0; m < n; ++m) {
      const double xi = (static_cast<double>(m) - half) * dxi;
      basis[j * n + m] = m == 0 ? cplx(std::cos(kTwoPi * y * xi) * dxi, 0.0)
                                : std::polar(dxi, kTwoPi * y * xi);
    }
  }

  std::vector<cplx> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      cplx* base = data.data() + o * n * stride + s;
      for (std::size_t j = 0; j < n; ++j) line[j] = base[j * stride] * spacing;
      centered_dft(line, FftDirection::forward);
      for (std::size_t j = 0; j < n; ++j) {
        cplx acc = 0.0;
        const cplx* row = basis.data() + j * n;
        for (std::size_t m = 0; m < n; ++m) acc += row[m] * line[m];
        base[j * stride] = acc;
      }
    }
  }
}

} // namespace

double japanese(std::span<const double> x) {
  double s = 1.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Grid Grid::symmetric(int dim, std::size_t n, double half_width) {
  Grid g{dim, n, 2.0 * half_width / static_cast<double>(n), 0.0};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim < 1) throw ValidationError(fmt::format("grid dimension must be positive, got {}", dim));
  if (n < 4 || !is_power_of_two(n)) {
    throw ValidationError(fmt::format("samples per axis must be a power of two >= 4, got {}", n));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ValidationError(fmt::format("grid spacing must be positive and finite, got {}", spacing));
  }
  if (!std::isfinite(offset)) throw ValidationError("grid offset must be finite");
}

std::size_t Grid::size() const { return ipow(n, dim); }

Vec Grid::point(std::size_t flat) const {
  Vec out(static_cast<std::size_t>(dim));
  point(flat, out);
  return out;
}

void Grid::point(std::size_t flat, std::span<double> out) const {
  for (int a = dim - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = coord(flat % n);
    flat /= n;
  }
}

double Grid::cell_volume() const { return std::pow(spacing, dim); }

Grid Grid::dual() const { return Grid{dim, n, 1.0 / (static_cast<double>(n) * spacing), 0.0}; }

bool Grid::matches(const Grid& other) const {
  return dim == other.dim && n == other.n && std::abs(spacing - other.spacing) <= 1e-12 * spacing &&
         std::abs(offset - other.offset) <= 1e-12 * (1.0 + std::abs(offset));
}

std::string Grid::describe() const {
  return fmt::format("dim={} n={} spacing={:.17g} offset={:.17g}", dim, n, spacing, offset);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!a.matches(b)) throw StructuralError(fmt::format("{}: grid mismatch ({} vs {})", what, a.describe(), b.describe()));
}

SampledFunction::SampledFunction(Grid grid, std::vector<cplx> samples) : grid_(grid), samples_(std::move(samples)) {
  grid_.validate();
  if (samples_.size() != grid_.size()) {
    throw StructuralError(
        fmt::format("sample count {} does not match grid size {}", samples_.size(), grid_.size()));
  }
  require_finite(samples_, "SampledFunction");
}

SampledFunction SampledFunction::zeros(const Grid& grid) {
  return SampledFunction(grid, std::vector<cplx>(grid.size(), 0.0));
}

SampledFunction SampledFunction::from(const Grid& grid, const std::function<cplx(std::span<const double>)>& f) {
  grid.validate();
  std::vector<cplx> s(grid.size());
  Vec x(static_cast<std::size_t>(grid.dim));
  for (std::size_t i = 0; i < s.size(); ++i) {
    grid.point(i, x);
    s[i] = f(x);
  }
  return SampledFunction(grid, std::move(s));
}

cplx SampledFunction::at_origin() const {
  std::size_t flat = 0;
  for (int a = 0; a < grid_.dim; ++a) flat = flat * grid_.n + grid_.n / 2;
  return samples_[flat];
}

double SampledFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return std::sqrt(s * grid_.cell_volume());
}

double SampledFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

SampledFunction2D::SampledFunction2D(Grid first, Grid second, std::vector<cplx> samples)
    : first_(first), second_(second), samples_(std::move(samples)) {
  first_.validate();
  second_.validate();
  if (first_.dim != second_.dim) throw StructuralError("SampledFunction2D: blocks must have equal dimension");
  if (samples_.size() != first_.size() * second_.size()) {
    throw StructuralError(fmt::format("sample count {} does not match grid size {}", samples_.size(),
                                      first_.size() * second_.size()));
  }
  require_finite(samples_, "SampledFunction2D");
}

SampledFunction2D SampledFunction2D::zeros(const Grid& first, const Grid& second) {
  return SampledFunction2D(first, second, std::vector<cplx>(first.size() * second.size(), 0.0));
}

SampledFunction2D SampledFunction2D::from(
    const Grid& first, const Grid& second,
    const std::function<cplx(std::span<const double>, std::span<const double>)>& f) {
  first.validate();
  second.validate();
  std::vector<cplx> s(first.size() * second.size());
  Vec x(static_cast<std::size_t>(first.dim));
  Vec y(static_cast<std::size_t>(second.dim));
  for (std::size_t i = 0; i < first.size(); ++i) {
    first.point(i, x);
    for (std::size_t j = 0; j < second.size(); ++j) {
      second.point(j, y);
      s[i * second.size() + j] = f(x, y);
    }
  }
  return SampledFunction2D(first, second, std::move(s));
}

std::vector<std::size_t> SampledFunction2D::shape() const {
  std::vector<std::size_t> s;
  for (int a = 0; a < first_.dim; ++a) s.push_back(first_.n);
  for (int a = 0; a < second_.dim; ++a) s.push_back(second_.n);
  return s;
}

Vec SampledFunction2D::spacings() const {
  Vec s;
  for (int a = 0; a < first_.dim; ++a) s.push_back(first_.spacing);
  for (int a = 0; a < second_.dim; ++a) s.push_back(second_.spacing);
  return s;
}

double SampledFunction2D::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return std::sqrt(s * first_.cell_volume() * second_.cell_volume());
}

double SampledFunction2D::sup_norm() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

SampledFunction2D SampledFunction2D::transposed() const {
  require_same_grid(first_, second_, "transposed");
  const std::size_t m = first_.size();
  std::vector<cplx> out(samples_.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[j * m + i] = samples_[i * m + j];
  }
  return SampledFunction2D(second_, first_, std::move(out));
}

SampledFunction fourier_transform(const SampledFunction& f) {
  const Grid& g = f.grid();
  if (g.offset != 0.0) throw StructuralError("fourier_transform: grid must be symmetric about 0");
  std::vector<cplx> data = f.data();
  const std::vector<std::size_t> shape(static_cast<std::size_t>(g.dim), g.n);
  std::vector<std::size_t> axes(shape.size());
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  centered_dft(data, shape, axes, FftDirection::forward);
  const double w = g.cell_volume();
  for (auto& v : data) v *= w;
  return SampledFunction(g.dual(), std::move(data));
}

SampledFunction inverse_fourier_transform(const SampledFunction& fhat) {
  const Grid& g = fhat.grid();
  if (g.offset != 0.0) throw StructuralError("inverse_fourier_transform: grid must be symmetric about 0");
  std::vector<cplx> data = fhat.data();
  const std::vector<std::size_t> shape(static_cast<std::size_t>(g.dim), g.n);
  std::vector<std::size_t> axes(shape.size());
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  centered_dft(data, shape, axes, FftDirection::backward);
  const double w = g.cell_volume();
  for (auto& v : data) v *= w;
  return SampledFunction(g.dual(), std::move(data));
}

SampledFunction translate_modulate(const SampledFunction& f, std::span<const double> u, std::span<const double> omega) {
  const Grid& g = f.grid();
  const auto d = static_cast<std::size_t>(g.dim);
  if (u.size() != d || omega.size() != d) throw StructuralError("translate_modulate: vector length must equal dim");
  std::vector<long long> shift(d);
  for (std::size_t a = 0; a < d; ++a) {
    const double steps = u[a] / g.spacing;
    const double nearest = std::round(steps);
    if (std::abs(steps - nearest) > 1e-9 * std::max(1.0, std::abs(steps))) {
      throw ValidationError(fmt::format("translate_modulate: shift {} is off-grid; nearest grid shift is {}", u[a],
                                        nearest * g.spacing));
    }
    shift[a] = static_cast<long long>(nearest);
  }
  const auto n = static_cast<long long>(g.n);
  std::vector<cplx> out(f.size());
  std::vector<std::size_t> idx(d, 0);
  Vec t(d);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = d; a-- > 0;) {
      idx[a] = rem % g.n;
      rem /= g.n;
    }
    std::size_t src = 0;
    double phase = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      long long j = (static_cast<long long>(idx[a]) - shift[a]) % n;
      if (j < 0) j += n;
      src = src * g.n + static_cast<std::size_t>(j);
      phase += g.coord(idx[a]) * omega[a];
    }
    out[flat] = std::polar(1.0, kTwoPi * phase) * f[src];
  }
  return SampledFunction(g, std::move(out));
}

SampledFunction2D dilate2(const SampledFunction2D& F, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0 && lambda1 <= 1.0) || !(lambda2 > 0.0 && lambda2 <= 1.0)) {
    throw DomainError(fmt::format("dilate2: dilation factors must lie in (0,1], got ({}, {})", lambda1, lambda2));
  }
  if (F.first().offset != 0.0 || F.second().offset != 0.0) {
    throw StructuralError("dilate2: grids must be symmetric about 0");
  }
  std::vector<cplx> data = F.data();
  const auto shape = F.shape();
  const auto d = static_cast<std::size_t>(F.block_dim());
  for (std::size_t a = 0; a < d; ++a) {
    if (lambda1 != 1.0) resample_axis(data, shape, a, F.first().spacing, lambda1);
    if (lambda2 != 1.0) resample_axis(data, shape, d + a, F.second().spacing, lambda2);
  }
  return SampledFunction2D(F.first(), F.second(), std::move(data));
}

SampledFunction multiply(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid(), "multiply");
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction add(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid(), "add");
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] + g[i];
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction scale(const SampledFunction& f, cplx c) {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction conjugate(const SampledFunction& f) {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(f[i]);
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction2D multiply(const SampledFunction2D& F, const SampledFunction2D& G) {
  require_same_grid(F.first(), G.first(), "multiply");
  require_same_grid(F.second(), G.second(), "multiply");
  std::vector<cplx> out(F.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.data()[i] * G.data()[i];
  return SampledFunction2D(F.first(), F.second(), std::move(out));
}

SampledFunction2D add(const SampledFunction2D& F, const SampledFunction2D& G) {
  require_same_grid(F.first(), G.first(), "add");
  require_same_grid(F.second(), G.second(), "add");
  std::vector<cplx> out(F.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.data()[i] + G.data()[i];
  return SampledFunction2D(F.first(), F.second(), std::move(out));
}

SampledFunction2D scale(const SampledFunction2D& F, cplx c) {
  std::vector<cplx> out(F.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * F.data()[i];
  return SampledFunction2D(F.first(), F.second(), std::move(out));
}

cplx inner_product(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * f.grid().cell_volume();
}

} // namespace fiolab
