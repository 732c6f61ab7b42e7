#include "fiolab/tfr.hpp"

#include "fiolab/csv.hpp"
#include "fiolab/errors.hpp"
#include "fiolab/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fiolab {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (auto x : v) p *= x;
  return p;
}

// Increment a row-major multi-index; returns false after the last one.
bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& shape) {
  for (std::size_t a = shape.size(); a-- > 0;) {
    if (++idx[a] < shape[a]) return true;
    idx[a] = 0;
  }
  return false;
}

std::size_t local_length(std::size_t n, double spacing, double radius) {
  if (radius <= 0.0) return n;
  std::size_t m = 4;
  while (m < n && static_cast<double>(m) * spacing < 2.0 * radius) m *= 2;
  return std::min(m, n);
}

void check_window_nonzero(std::span<const cplx> g) {
  double s = 0.0;
  for (const auto& v : g) s += std::norm(v);
  if (!(s > 0.0)) throw ValidationError("stft: window has zero L2 norm");
}

} // namespace

std::string window_name(WindowId id) {
  switch (id) {
  case WindowId::gaussian:
    return "gaussian";
  }
  return "unknown";
}

WindowId parse_window(const std::string& name) {
  if (name == "gaussian") return WindowId::gaussian;
  throw ValidationError(fmt::format("unknown window '{}'", name));
}

double window_support_radius(WindowId id) {
  switch (id) {
  case WindowId::gaussian:
    return 4.0; // exp(-16 pi) ~ 1.5e-22
  }
  return 0.0;
}

SampledFunction make_window(WindowId id, const Grid& grid) {
  (void)id;
  const double c = std::pow(2.0, grid.dim / 4.0);
  return SampledFunction::from(grid, [c](std::span<const double> t) {
    double r2 = 0.0;
    for (double v : t) r2 += v * v;
    return cplx(c * std::exp(-kPi * r2), 0.0);
  });
}

SampledFunction2D make_window_2d(WindowId id, const Grid& first, const Grid& second) {
  (void)id;
  const double c = std::pow(2.0, 2.0 * first.dim / 4.0);
  return SampledFunction2D::from(first, second, [c](std::span<const double> x, std::span<const double> y) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    for (double v : y) r2 += v * v;
    return cplx(c * std::exp(-kPi * r2), 0.0);
  });
}

double TFMatrix::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * x_grid.cell_volume() * xi_grid.cell_volume());
}

std::vector<std::size_t> TFMatrix4::shape() const {
  std::vector<std::size_t> s;
  for (const auto& b : blocks) {
    for (int a = 0; a < b.dim; ++a) s.push_back(b.n);
  }
  return s;
}

Vec TFMatrix4::spacings() const {
  Vec s;
  for (const auto& b : blocks) {
    for (int a = 0; a < b.dim; ++a) s.push_back(b.spacing);
  }
  return s;
}

std::size_t TfLayout::shift_count() const {
  std::size_t p = 1;
  for (const auto& g : shift_axes) p *= g.n;
  return p;
}

std::size_t TfLayout::freq_count() const {
  std::size_t p = 1;
  for (const auto& g : freq_axes) p *= g.n;
  return p;
}

TfLayout stft_layout(const std::vector<std::size_t>& shape, const Vec& spacing, const StftOptions& options) {
  if (!is_power_of_two(options.stride)) {
    throw ValidationError(fmt::format("stft: stride must be a power of two, got {}", options.stride));
  }
  TfLayout layout;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    const std::size_t n = shape[a];
    if (options.stride * 4 > n) throw ValidationError(fmt::format("stft: stride {} too large for n={}", options.stride, n));
    layout.shift_axes.push_back(Grid{1, n / options.stride, spacing[a] * static_cast<double>(options.stride), 0.0});
    const std::size_t m = local_length(n, spacing[a], options.window_radius);
    layout.freq_axes.push_back(Grid{1, m, 1.0 / (static_cast<double>(m) * spacing[a]), 0.0});
  }
  return layout;
}

void stft_rows(std::span<const cplx> f, std::span<const cplx> g, const std::vector<std::size_t>& shape,
               const Vec& spacing, const StftOptions& options,
               const std::function<void(std::size_t, std::span<const cplx>)>& visit) {
  const std::size_t D = shape.size();
  if (f.size() != product(shape) || g.size() != f.size()) throw StructuralError("stft: array sizes do not match");
  check_window_nonzero(g);
  const TfLayout layout = stft_layout(shape, spacing, options);

  std::vector<std::size_t> m(D), shifts(D);
  std::vector<std::size_t> strides(D, 1);
  double cell = 1.0;
  for (std::size_t a = 0; a < D; ++a) {
    m[a] = layout.freq_axes[a].n;
    shifts[a] = layout.shift_axes[a].n;
    cell *= spacing[a];
  }
  for (std::size_t a = D - 1; a-- > 0;) strides[a] = strides[a + 1] * shape[a + 1];
  const std::size_t block = product(m);
  std::vector<std::size_t> all_axes(D);
  for (std::size_t a = 0; a < D; ++a) all_axes[a] = a;

  // conj(g(t - x)) on the local block does not depend on the shift.
  std::vector<cplx> window(block);
  {
    std::vector<std::size_t> l(D, 0);
    std::size_t k = 0;
    do {
      std::size_t src = 0;
      for (std::size_t a = 0; a < D; ++a) src += ((l[a] + shape[a] - m[a] / 2 + shape[a] / 2) % shape[a]) * strides[a];
      window[k++] = std::conj(g[src]);
    } while (next_index(l, m));
  }

  // Per-axis phase tables exp(-2 pi i x_s xi_r) factor across axes.
  std::vector<std::vector<cplx>> phase(D);
  if (options.with_phase) {
    for (std::size_t a = 0; a < D; ++a) {
      phase[a].resize(shifts[a] * m[a]);
      for (std::size_t s = 0; s < shifts[a]; ++s) {
        const double x = layout.shift_axes[a].coord(s);
        for (std::size_t r = 0; r < m[a]; ++r) {
          phase[a][s * m[a] + r] = std::polar(1.0, -kTwoPi * x * layout.freq_axes[a].coord(r));
        }
      }
    }
  }

  std::vector<cplx> row(block);
  std::vector<std::size_t> s(D, 0);
  std::vector<std::size_t> l(D, 0);
  std::size_t shift_flat = 0;
  do {
    bool any = false;
    std::fill(l.begin(), l.end(), 0);
    std::size_t k = 0;
    do {
      std::size_t src = 0;
      for (std::size_t a = 0; a < D; ++a) {
        src += ((s[a] * options.stride + l[a] + shape[a] - m[a] / 2) % shape[a]) * strides[a];
      }
      const cplx v = f[src];
      if (v != cplx(0.0, 0.0)) any = true;
      row[k] = v * window[k];
      ++k;
    } while (next_index(l, m));

    if (!any) {
      std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
    } else {
      centered_dft(row, m, all_axes, FftDirection::forward);
      if (options.with_phase) {
        std::fill(l.begin(), l.end(), 0);
        k = 0;
        do {
          cplx ph(cell, 0.0);
          for (std::size_t a = 0; a < D; ++a) ph *= phase[a][s[a] * m[a] + l[a]];
          row[k++] *= ph;
        } while (next_index(l, m));
      } else {
        for (auto& v : row) v *= cell;
      }
    }
    visit(shift_flat++, row);
  } while (next_index(s, shifts));
}

TFMatrix stft(const SampledFunction& f, const SampledFunction& g, const StftOptions& options) {
  require_same_grid(f.grid(), g.grid(), "stft");
  if (f.grid().offset != 0.0) throw StructuralError("stft: grid must be symmetric about 0");
  const Grid& grid = f.grid();
  const std::vector<std::size_t> shape(static_cast<std::size_t>(grid.dim), grid.n);
  const Vec spacing(shape.size(), grid.spacing);
  const TfLayout layout = stft_layout(shape, spacing, options);
  TFMatrix out{Grid{grid.dim, layout.shift_axes[0].n, layout.shift_axes[0].spacing, 0.0},
               Grid{grid.dim, layout.freq_axes[0].n, layout.freq_axes[0].spacing, 0.0},
               {}};
  const std::size_t cols = layout.freq_count();
  out.values.resize(layout.shift_count() * cols);
  stft_rows(f.samples(), g.samples(), shape, spacing, options, [&](std::size_t i, std::span<const cplx> row) {
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * cols));
  });
  return out;
}

TFMatrix4 stft4(const SampledFunction2D& F, const SampledFunction2D& Psi, const StftOptions& options,
                std::size_t value_cap) {
  require_same_grid(F.first(), Psi.first(), "stft4");
  require_same_grid(F.second(), Psi.second(), "stft4");
  const auto shape = F.shape();
  const auto spacing = F.spacings();
  const TfLayout layout = stft_layout(shape, spacing, options);
  const double total = static_cast<double>(layout.shift_count()) * static_cast<double>(layout.freq_count());
  if (total > static_cast<double>(value_cap)) {
    // largest power-of-two n with the same options that fits the cap
    std::size_t n_ok = 4;
    for (std::size_t n = 4; n <= (std::size_t{1} << 20); n *= 2) {
      std::vector<std::size_t> trial(shape.size(), n);
      Vec trial_spacing(shape.size(), 1.0);
      if (options.stride * 4 > n) continue;
      const TfLayout tl = stft_layout(trial, trial_spacing, StftOptions{options.stride, 0.0, true});
      if (static_cast<double>(tl.shift_count()) * static_cast<double>(tl.freq_count()) <=
          static_cast<double>(value_cap)) {
        n_ok = n;
      }
    }
    throw ResourceError(fmt::format("stft4: {:.0f} values exceed the cap of {}; the largest admissible n per axis "
                                    "with full-length transforms is {}",
                                    total, value_cap, n_ok));
  }
  const int d = F.block_dim();
  const auto du = static_cast<std::size_t>(d);
  TFMatrix4 out;
  out.blocks[0] = Grid{d, layout.shift_axes[0].n, layout.shift_axes[0].spacing, 0.0};
  out.blocks[1] = Grid{d, layout.shift_axes[du].n, layout.shift_axes[du].spacing, 0.0};
  out.blocks[2] = Grid{d, layout.freq_axes[0].n, layout.freq_axes[0].spacing, 0.0};
  out.blocks[3] = Grid{d, layout.freq_axes[du].n, layout.freq_axes[du].spacing, 0.0};
  const std::size_t cols = layout.freq_count();
  out.values.resize(layout.shift_count() * cols);
  stft_rows(F.samples(), Psi.samples(), shape, spacing, options, [&](std::size_t i, std::span<const cplx> row) {
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * cols));
  });
  return out;
}

double fundamental_identity_residual(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid(), "fundamental_identity_residual");
  const Grid& grid = f.grid();
  const TFMatrix lhs = stft(f, g);
  const TFMatrix rhs = stft(fourier_transform(f), fourier_transform(g));
  const auto d = static_cast<std::size_t>(grid.dim);
  const std::size_t n = grid.n;
  const std::size_t total = grid.size();
  const Grid xi_grid = grid.dual();

  std::vector<std::size_t> k(d), m(d);
  Vec x(d), xi(d);
  double worst = 0.0;
  for (std::size_t ix = 0; ix < total; ++ix) {
    std::size_t rem = ix;
    for (std::size_t a = d; a-- > 0;) {
      k[a] = rem % n;
      rem /= n;
    }
    grid.point(ix, x);
    std::size_t neg = 0; // flat index of -x on the frequency grid of rhs
    for (std::size_t a = 0; a < d; ++a) neg = neg * n + (n - k[a]) % n;
    for (std::size_t ixi = 0; ixi < total; ++ixi) {
      xi_grid.point(ixi, xi);
      double dot = 0.0;
      for (std::size_t a = 0; a < d; ++a) dot += x[a] * xi[a];
      const cplx expected = std::polar(1.0, -kTwoPi * dot) * rhs.at(ixi, neg);
      worst = std::max(worst, std::abs(lhs.at(ix, ixi) - expected));
    }
  }
  return worst;
}

void write_csv(std::ostream& out, const TFMatrix& V) {
  out << "# " << grid_header(V.x_grid) << ';' << grid_header(V.xi_grid) << '\n' << "x_index,xi_index,re,im\n";
  const std::size_t cols = V.xi_grid.size();
  for (std::size_t i = 0; i < V.x_grid.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const cplx v = V.values[i * cols + j];
      out << fmt::format("{},{},{:.17g},{:.17g}\n", i, j, v.real(), v.imag());
    }
  }
}

void write_csv(std::ostream& out, const TFMatrix4& V) {
  out << "# " << grid_header(V.blocks[0]) << ';' << grid_header(V.blocks[1]) << ';' << grid_header(V.blocks[2])
      << ';' << grid_header(V.blocks[3]) << '\n';
  const auto shape = V.shape();
  for (std::size_t a = 0; a < shape.size(); ++a) out << 'i' << a << ',';
  out << "re,im\n";
  std::vector<std::size_t> idx(shape.size(), 0);
  std::string chunk;
  std::size_t flat = 0;
  do {
    for (auto i : idx) chunk += fmt::format("{},", i);
    const cplx v = V.values[flat++];
    chunk += fmt::format("{:.17g},{:.17g}\n", v.real(), v.imag());
    if (chunk.size() > (1U << 16)) {
      out << chunk;
      chunk.clear();
    }
  } while (next_index(idx, shape));
  out << chunk;
}

} // namespace fiolab
