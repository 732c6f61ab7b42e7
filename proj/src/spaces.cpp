#include "fiolab/spaces.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace fiolab {
namespace {

bool is_inf(double p) { return std::isinf(p); }

double inv(double p) { return is_inf(p) ? 0.0 : 1.0 / p; }

// pow with the common exponents short-circuited; the reductions are pow-bound.
double pw(double v, double p) {
  if (p == 1.0) return v;
  if (p == 2.0) return v * v;
  return std::pow(v, p);
}

double root(double v, double p) {
  if (p == 1.0) return v;
  if (p == 2.0) return std::sqrt(v);
  return std::pow(v, 1.0 / p);
}

// Running sum of v^p, or running max at p = inf.
struct Accumulator {
  double p;
  double value = 0.0;

  void add(double v, double measure) {
    if (is_inf(p)) {
      value = std::max(value, v);
    } else if (v > 0.0) {
      value += pw(v, p) * measure;
    }
  }
  double result() const { return is_inf(p) ? value : root(value, p); }
};

double power_or_max_measure(double p, double cell, Measure measure) {
  if (is_inf(p) || measure == Measure::counting) return 1.0;
  return cell;
}

std::vector<double> block_weights(const Grid& block, double exponent) {
  std::vector<double> w(block.size(), 1.0);
  if (exponent == 0.0) return w;
  Vec pt(static_cast<std::size_t>(block.dim));
  for (std::size_t i = 0; i < w.size(); ++i) {
    block.point(i, pt);
    w[i] = std::pow(japanese(pt), exponent);
  }
  return w;
}

// Streaming nested norm of V_g f over the STFT layout. Shifts form the x block,
// frequencies the xi block; weights are per-shift and per-frequency factors.
double stream_norm(std::span<const cplx> f, std::span<const cplx> g, const std::vector<std::size_t>& shape,
                   const Vec& spacing, StftOptions options, double p, double q, bool x_inner,
                   const std::vector<double>& wx, const std::vector<double>& wxi, Measure measure) {
  options.with_phase = false;
  const TfLayout layout = stft_layout(shape, spacing, options);
  double dx = 1.0, dxi = 1.0;
  for (const auto& a : layout.shift_axes) dx *= a.spacing;
  for (const auto& a : layout.freq_axes) dxi *= a.spacing;
  const std::size_t cols = layout.freq_count();

  if (x_inner) {
    // acc[xi] collects sum_x |V m|^p dx
    std::vector<double> acc(cols, 0.0);
    const double mx = power_or_max_measure(p, dx, measure);
    stft_rows(f, g, shape, spacing, options, [&](std::size_t s, std::span<const cplx> row) {
      for (std::size_t r = 0; r < cols; ++r) {
        const double v = std::sqrt(std::norm(row[r])) * wx[s] * wxi[r];
        if (is_inf(p)) {
          acc[r] = std::max(acc[r], v);
        } else if (v > 0.0) {
          acc[r] += pw(v, p) * mx;
        }
      }
    });
    Accumulator outer{q};
    const double mxi = power_or_max_measure(q, dxi, measure);
    for (double a : acc) outer.add(is_inf(p) ? a : root(a, p), mxi);
    return outer.result();
  }

  Accumulator outer{p};
  const double mx = power_or_max_measure(p, dx, measure);
  const double mxi = power_or_max_measure(q, dxi, measure);
  stft_rows(f, g, shape, spacing, options, [&](std::size_t s, std::span<const cplx> row) {
    Accumulator inner{q};
    for (std::size_t r = 0; r < cols; ++r) inner.add(std::sqrt(std::norm(row[r])) * wx[s] * wxi[r], mxi);
    outer.add(inner.result(), mx);
  });
  return outer.result();
}

// Reduce axes [first, last) of a row-major array jointly with exponent p.
std::vector<double> reduce_axes(const std::vector<double>& in, std::vector<std::size_t>& shape, std::size_t first,
                                std::size_t last, double p, double measure) {
  std::size_t outer = 1, mid = 1, inner = 1;
  for (std::size_t a = 0; a < first; ++a) outer *= shape[a];
  for (std::size_t a = first; a < last; ++a) mid *= shape[a];
  for (std::size_t a = last; a < shape.size(); ++a) inner *= shape[a];
  std::vector<double> out(outer * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t m = 0; m < mid; ++m) {
      const double* src = in.data() + (o * mid + m) * inner;
      double* dst = out.data() + o * inner;
      if (is_inf(p)) {
        for (std::size_t i = 0; i < inner; ++i) dst[i] = std::max(dst[i], src[i]);
      } else {
        for (std::size_t i = 0; i < inner; ++i) {
          dst[i] += pw(src[i], p) * measure;
        }
      }
    }
  }
  if (!is_inf(p)) {
    for (auto& v : out) v = root(v, p);
  }
  for (std::size_t a = first; a < last; ++a) shape[a] = 1;
  return out;
}

// Centered transform of all axes of a 2-block function, times the cell volume.
std::vector<cplx> full_transform(const SampledFunction2D& F) {
  if (F.first().offset != 0.0 || F.second().offset != 0.0) {
    throw StructuralError("fourier_lebesgue_norm: grids must be symmetric about 0");
  }
  std::vector<cplx> data(F.samples().begin(), F.samples().end());
  const auto shape = F.shape();
  std::vector<std::size_t> axes(shape.size());
  std::iota(axes.begin(), axes.end(), std::size_t{0});
  centered_dft(data, shape, axes, FftDirection::forward);
  const double cell = F.first().cell_volume() * F.second().cell_volume();
  for (auto& v : data) v *= cell;
  return data;
}

double nested_two_block(std::span<const cplx> values, const Grid& a, const Grid& b, double p, double q,
                        const std::vector<double>& wa, const std::vector<double>& wb) {
  // inner over block a, outer over block b; values laid out (a slowest)
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> acc(nb, 0.0);
  const double ma = is_inf(p) ? 1.0 : a.cell_volume();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double v = std::abs(values[i * nb + j]) * wa[i] * wb[j];
      if (is_inf(p)) {
        acc[j] = std::max(acc[j], v);
      } else if (v > 0.0) {
        acc[j] += pw(v, p) * ma;
      }
    }
  }
  Accumulator outer{q};
  const double mb = is_inf(q) ? 1.0 : b.cell_volume();
  for (double v : acc) outer.add(is_inf(p) ? v : root(v, p), mb);
  return outer.result();
}

bool strictly_greater(double lhs, double rhs) { return lhs > rhs + 1e-12; }
bool at_least(double lhs, double rhs) { return lhs >= rhs - 1e-12; }

} // namespace

double weight_eval(const Weight& w, std::span<const double> z) {
  const auto d = static_cast<std::size_t>(w.d);
  if (z.size() != 2 * d) throw StructuralError(fmt::format("weight_eval: expected {} coordinates", 2 * d));
  double out = 1.0;
  if (w.s != 0.0) out *= std::pow(japanese(z.subspan(0, d)), w.s);
  if (w.t != 0.0) out *= std::pow(japanese(z.subspan(d, d)), w.t);
  return out;
}

std::string format_exponent(double p) {
  if (is_inf(p)) return "inf";
  return fmt::format("{}", p);
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ValidationError(fmt::format("cannot parse exponent '{}'", text));
  require_exponent(v, "exponent");
  return v;
}

void require_exponent(double p, const char* what) {
  if (std::isnan(p) || p < 1.0) {
    throw DomainError(fmt::format("{} must lie in [1, inf], got {}", what, format_exponent(p)));
  }
}

void SpaceSpec::validate() const {
  require_exponent(p, "p");
  require_exponent(q, "q");
  if (weight.d < 1) throw ValidationError("weight dimension must be positive");
  if (!std::isfinite(weight.s) || !std::isfinite(weight.t)) throw ValidationError("weight exponents must be finite");
}

std::string SpaceSpec::describe() const {
  const char* name = kind == SpaceKind::modulation ? "M" : kind == SpaceKind::amalgam ? "W" : "L";
  std::string out = fmt::format("{}^{{{},{}}}", name, format_exponent(p), format_exponent(q));
  if (weight.s != 0.0 || weight.t != 0.0) out += fmt::format("_v({},{})", weight.s, weight.t);
  if (measure == Measure::counting) out += "[counting]";
  return out;
}

std::string perm_name(Perm perm) {
  switch (perm) {
  case Perm::identity:
    return "identity";
  case Perm::c1:
    return "c1";
  case Perm::c2:
    return "c2";
  case Perm::c3:
    return "c3";
  case Perm::c4:
    return "c4";
  }
  return "unknown";
}

Perm parse_perm(const std::string& name) {
  for (Perm p : {Perm::identity, Perm::c1, Perm::c2, Perm::c3, Perm::c4}) {
    if (perm_name(p) == name) return p;
  }
  throw ValidationError(fmt::format("unknown permutation '{}'", name));
}

// Blocks: 0 = z1, 1 = z2, 2 = zeta1, 3 = zeta2. V o c(w) reads V at c(w), so
// slot i feeds whichever block c places w_i into.
std::array<int, 4> slot_blocks(Perm perm) {
  switch (perm) {
  case Perm::identity:
    return {0, 1, 2, 3};
  case Perm::c1: // (z2, zeta2, z1, zeta1)
    return {2, 0, 3, 1};
  case Perm::c2: // (zeta2, z2, zeta1, z1)
    return {3, 1, 2, 0};
  case Perm::c3: // (z2, zeta2, zeta1, z1)
    return {3, 0, 2, 1};
  case Perm::c4: // (z1, zeta1, zeta2, z2)
    return {0, 3, 1, 2};
  }
  return {0, 1, 2, 3};
}

MixedSpec MixedSpec::weighted_c1(int d, double eps) {
  MixedSpec spec;
  spec.perm = Perm::c1;
  spec.exponents = {1.0, kInf, kInf, kInf};
  spec.weight = Weight{d + eps, 0.0, d};
  spec.eps = eps;
  return spec;
}

void MixedSpec::validate() const {
  for (double e : exponents) require_exponent(e, "mixed exponent");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
}

std::string MixedSpec::describe() const {
  std::string out = fmt::format("M^{{{},{},{},{}}}({})", format_exponent(exponents[0]), format_exponent(exponents[1]),
                                format_exponent(exponents[2]), format_exponent(exponents[3]), perm_name(perm));
  if (weight.s != 0.0 || weight.t != 0.0) out += fmt::format("_1xv({},{})", weight.s, weight.t);
  return out;
}

double mixed_norm(const TFMatrix& V, double p, double q, const Weight& w, Measure measure) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  if (V.values.size() != V.x_grid.size() * V.xi_grid.size()) throw StructuralError("mixed_norm: shape mismatch");
  const auto wx = block_weights(V.x_grid, w.s);
  const auto wxi = block_weights(V.xi_grid, w.t);
  if (measure == Measure::riemann) return nested_two_block(V.values, V.x_grid, V.xi_grid, p, q, wx, wxi);
  Grid a = V.x_grid, b = V.xi_grid;
  a.spacing = 1.0;
  b.spacing = 1.0;
  return nested_two_block(V.values, a, b, p, q, wx, wxi);
}

double mixed_norm4(const TFMatrix4& V, Perm perm, const std::array<double, 4>& exponents, const Weight& w) {
  for (double e : exponents) require_exponent(e, "mixed exponent");
  const auto slots = slot_blocks(perm);

  // Magnitudes times the slot weight, reordered so slot 0 is the fastest block.
  std::array<std::size_t, 4> bsize{};
  for (int b = 0; b < 4; ++b) bsize[b] = V.blocks[b].size();
  if (V.values.size() != bsize[0] * bsize[1] * bsize[2] * bsize[3]) throw StructuralError("mixed_norm4: shape mismatch");
  const auto w2 = block_weights(V.blocks[slots[2]], w.s);
  const auto w3 = block_weights(V.blocks[slots[3]], w.t);

  // permuted layout: slot 3 slowest ... slot 0 fastest
  std::array<std::size_t, 4> pstride{};
  pstride[0] = 1;
  for (int i = 1; i < 4; ++i) pstride[i] = pstride[i - 1] * bsize[slots[i - 1]];
  std::vector<double> mags(V.values.size());
  std::array<std::size_t, 4> idx{};
  std::size_t flat = 0;
  for (idx[0] = 0; idx[0] < bsize[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < bsize[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < bsize[2]; ++idx[2])
        for (idx[3] = 0; idx[3] < bsize[3]; ++idx[3]) {
          std::size_t dst = 0;
          for (int i = 0; i < 4; ++i) dst += idx[slots[i]] * pstride[i];
          mags[dst] = std::sqrt(std::norm(V.values[flat++])) * w2[idx[slots[2]]] * w3[idx[slots[3]]];
        }

  // Row-major shape of the permuted array, slowest first: slot3, slot2, slot1, slot0.
  std::vector<std::size_t> shape;
  for (int i = 3; i >= 0; --i) shape.push_back(bsize[slots[i]]);
  for (int i = 0; i < 4; ++i) {
    const std::size_t axis = static_cast<std::size_t>(3 - i);
    const double measure = is_inf(exponents[i]) ? 1.0 : V.blocks[slots[i]].cell_volume();
    mags = reduce_axes(mags, shape, axis, axis + 1, exponents[i], measure);
  }
  return mags.at(0);
}

double modulation_norm(const SampledFunction& f, const SpaceSpec& spec) {
  spec.validate();
  const Grid& grid = f.grid();
  if (grid.offset != 0.0) throw StructuralError("modulation_norm: grid must be symmetric about 0");
  if (spec.weight.d != grid.dim) throw StructuralError("modulation_norm: weight dimension differs from the grid");
  const auto g = make_window(spec.window, grid);
  const std::vector<std::size_t> shape(static_cast<std::size_t>(grid.dim), grid.n);
  const Vec spacing(shape.size(), grid.spacing);
  const TfLayout layout = stft_layout(shape, spacing, spec.resolution);
  const Grid xg{grid.dim, layout.shift_axes[0].n, layout.shift_axes[0].spacing, 0.0};
  const Grid fg{grid.dim, layout.freq_axes[0].n, layout.freq_axes[0].spacing, 0.0};
  const bool x_inner = spec.kind != SpaceKind::amalgam;
  return stream_norm(f.samples(), g.samples(), shape, spacing, spec.resolution, spec.p, spec.q, x_inner,
                     block_weights(xg, spec.weight.s), block_weights(fg, spec.weight.t), spec.measure);
}

StftMagnitudes stft_magnitudes(const SampledFunction& f, WindowId window, const StftOptions& resolution) {
  const Grid& grid = f.grid();
  if (grid.offset != 0.0) throw StructuralError("stft_magnitudes: grid must be symmetric about 0");
  const auto g = make_window(window, grid);
  const std::vector<std::size_t> shape(static_cast<std::size_t>(grid.dim), grid.n);
  const Vec spacing(shape.size(), grid.spacing);
  StftOptions options = resolution;
  options.with_phase = false;
  const TfLayout layout = stft_layout(shape, spacing, options);
  StftMagnitudes out;
  out.x_grid = Grid{grid.dim, layout.shift_axes[0].n, layout.shift_axes[0].spacing, 0.0};
  out.xi_grid = Grid{grid.dim, layout.freq_axes[0].n, layout.freq_axes[0].spacing, 0.0};
  stft_rows(f.samples(), g.samples(), shape, spacing, options, [&](std::size_t s, std::span<const cplx> row) {
    if (std::all_of(row.begin(), row.end(), [](const cplx& v) { return v == cplx(0.0); })) return;
    out.rows.push_back(s);
    for (const auto& v : row) out.values.push_back(std::sqrt(std::norm(v)));
  });
  return out;
}

double space_norm(const StftMagnitudes& V, const SpaceSpec& spec) {
  spec.validate();
  if (spec.kind == SpaceKind::mixed_lebesgue) throw DomainError("stft magnitudes carry no mixed Lebesgue norm");
  if (spec.weight.d != V.x_grid.dim) throw StructuralError("space_norm: weight dimension differs from the grid");
  const auto wx = block_weights(V.x_grid, spec.weight.s);
  const auto wxi = block_weights(V.xi_grid, spec.weight.t);
  const double p = spec.p, q = spec.q;
  const std::size_t cols = V.xi_grid.size();
  const double dx = V.x_grid.cell_volume(), dxi = V.xi_grid.cell_volume();
  // Same accumulation order as stream_norm, so the results agree bit for bit.
  if (spec.kind == SpaceKind::modulation) {
    std::vector<double> acc(cols, 0.0);
    const double mx = power_or_max_measure(p, dx, spec.measure);
    for (std::size_t i = 0; i < V.rows.size(); ++i) {
      const double* row = V.values.data() + i * cols;
      for (std::size_t r = 0; r < cols; ++r) {
        const double v = row[r] * wx[V.rows[i]] * wxi[r];
        if (is_inf(p)) {
          acc[r] = std::max(acc[r], v);
        } else if (v > 0.0) {
          acc[r] += pw(v, p) * mx;
        }
      }
    }
    Accumulator outer{q};
    const double mxi = power_or_max_measure(q, dxi, spec.measure);
    for (double a : acc) outer.add(is_inf(p) ? a : root(a, p), mxi);
    return outer.result();
  }
  Accumulator outer{p};
  const double mx = power_or_max_measure(p, dx, spec.measure);
  const double mxi = power_or_max_measure(q, dxi, spec.measure);
  for (std::size_t i = 0; i < V.rows.size(); ++i) {
    const double* row = V.values.data() + i * cols;
    Accumulator inner{q};
    for (std::size_t r = 0; r < cols; ++r) inner.add(row[r] * wx[V.rows[i]] * wxi[r], mxi);
    outer.add(inner.result(), mx);
  }
  return outer.result();
}

double amalgam_norm(const SampledFunction& f, const SpaceSpec& spec) {
  SpaceSpec s = spec;
  s.kind = SpaceKind::amalgam;
  return modulation_norm(f, s);
}

double space_norm(const SampledFunction& f, const SpaceSpec& spec) {
  switch (spec.kind) {
  case SpaceKind::modulation:
    return modulation_norm(f, spec);
  case SpaceKind::amalgam:
    return amalgam_norm(f, spec);
  case SpaceKind::mixed_lebesgue: {
    spec.validate();
    const auto w = block_weights(f.grid(), spec.weight.s);
    Accumulator acc{spec.p};
    const double m = power_or_max_measure(spec.p, f.grid().cell_volume(), spec.measure);
    for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::abs(f[i]) * w[i], m);
    return acc.result();
  }
  }
  return 0.0;
}

double space_norm(const SampledFunction2D& F, const SpaceSpec& spec) {
  spec.validate();
  if (spec.kind == SpaceKind::mixed_lebesgue) {
    return lebesgue_norm(F, spec.p, spec.q, spec.weight);
  }
  if (F.first().offset != 0.0 || F.second().offset != 0.0) {
    throw StructuralError("space_norm: grids must be symmetric about 0");
  }
  const int D = 2 * F.block_dim();
  if (spec.weight.d != D) throw StructuralError("space_norm: weight dimension must be twice the block dimension");
  const auto Psi = make_window_2d(spec.window, F.first(), F.second());
  const auto shape = F.shape();
  const auto spacing = F.spacings();
  const TfLayout layout = stft_layout(shape, spacing, spec.resolution);
  // Shift and frequency points are D-dimensional; evaluate weights per flat index.
  auto weights = [&](const std::vector<Grid>& axes, double exponent) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.n;
    std::vector<double> w(total, 1.0);
    if (exponent == 0.0) return w;
    Vec pt(axes.size());
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rem = i;
      for (std::size_t a = axes.size(); a-- > 0;) {
        pt[a] = axes[a].coord(rem % axes[a].n);
        rem /= axes[a].n;
      }
      w[i] = std::pow(japanese(pt), exponent);
    }
    return w;
  };
  return stream_norm(F.samples(), Psi.samples(), shape, spacing, spec.resolution, spec.p, spec.q,
                     spec.kind == SpaceKind::modulation, weights(layout.shift_axes, spec.weight.s),
                     weights(layout.freq_axes, spec.weight.t), spec.measure);
}

double special_amalgam_norm(const SampledFunction2D& F, double eps, WindowId window, const StftOptions& resolution) {
  if (!(eps > 0.0)) throw DomainError("special_amalgam_norm: eps must be positive");
  const auto Psi = make_window_2d(window, F.first(), F.second());
  const auto shape = F.shape();
  const auto spacing = F.spacings();
  const TfLayout layout = stft_layout(shape, spacing, resolution);
  const std::size_t d = static_cast<std::size_t>(F.block_dim());
  const double e = static_cast<double>(d) + eps;
  // frequency weight <zeta1>^{d+eps} <zeta2>^{d+eps}
  std::vector<double> wxi(layout.freq_count());
  Vec z1(d), z2(d);
  for (std::size_t i = 0; i < wxi.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t a = 2 * d; a-- > 0;) {
      const double c = layout.freq_axes[a].coord(rem % layout.freq_axes[a].n);
      rem /= layout.freq_axes[a].n;
      (a < d ? z1[a] : z2[a - d]) = c;
    }
    wxi[i] = std::pow(japanese(z1), e) * std::pow(japanese(z2), e);
  }
  const std::vector<double> wx(layout.shift_count(), 1.0);
  return stream_norm(F.samples(), Psi.samples(), shape, spacing, resolution, kInf, kInf, true, wx, wxi,
                     Measure::riemann);
}

double mixed_modulation_norm(const SampledFunction2D& F, const MixedSpec& spec) {
  spec.validate();
  const auto Psi = make_window_2d(spec.window, F.first(), F.second());
  StftOptions opts = spec.resolution;
  opts.with_phase = false;
  return mixed_norm4(stft4(F, Psi, opts), spec.perm, spec.exponents, spec.weight);
}

double fourier_lebesgue_norm(const SampledFunction& f, double p, double s) {
  require_exponent(p, "p");
  const auto fh = fourier_transform(f);
  const auto w = block_weights(fh.grid(), s);
  Accumulator acc{p};
  const double m = is_inf(p) ? 1.0 : fh.grid().cell_volume();
  for (std::size_t i = 0; i < fh.size(); ++i) acc.add(std::abs(fh[i]) * w[i], m);
  return acc.result();
}

double fourier_lebesgue_norm(const SampledFunction2D& F, double p, double q, double s, double t) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  const auto data = full_transform(F);
  const Grid a = F.first().dual(), b = F.second().dual();
  return nested_two_block(data, a, b, p, q, block_weights(a, s), block_weights(b, t));
}

double lebesgue_norm(const SampledFunction2D& F, double p, double q, const Weight& w) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  return nested_two_block(F.samples(), F.first(), F.second(), p, q, block_weights(F.first(), w.s),
                          block_weights(F.second(), w.t));
}

void LatticeSequence::push(std::span<const long long> k, double value) {
  if (k.size() != static_cast<std::size_t>(d)) throw StructuralError("LatticeSequence: point has wrong dimension");
  points.insert(points.end(), k.begin(), k.end());
  values.push_back(value);
}

void LatticeSequence::validate() const {
  if (d < 1) throw ValidationError("LatticeSequence: dimension must be positive");
  if (points.size() != values.size() * static_cast<std::size_t>(d)) {
    throw StructuralError("LatticeSequence: point and value counts disagree");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("LatticeSequence: non-finite value");
  }
}

LatticeSequence LatticeSequence::delta(int d) {
  LatticeSequence a;
  a.d = d;
  a.points.assign(static_cast<std::size_t>(d), 0);
  a.values = {1.0};
  return a;
}

LatticeSequence LatticeSequence::range(long long lo, long long hi, double value) {
  LatticeSequence a;
  for (long long k = lo; k <= hi; ++k) {
    a.points.push_back(k);
    a.values.push_back(value);
  }
  return a;
}

double lattice_bracket(std::span<const long long> k) {
  double r2 = 1.0;
  for (long long v : k) r2 += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(r2);
}

double sequence_norm(const LatticeSequence& a, double p, double s) {
  require_exponent(p, "p");
  a.validate();
  Accumulator acc{p};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::pow(lattice_bracket(a.point(i)), s);
    acc.add(std::abs(a.values[i]) * w, 1.0);
  }
  return acc.result();
}

double embedding_threshold(double q1, double q2, int d) { return d * std::max(inv(q2) - inv(q1), 0.0); }

bool embedding_holds(double q1, double s1, double q2, double s2, int d) {
  require_exponent(q1, "q1");
  require_exponent(q2, "q2");
  const double gap = s1 - s2;
  const double th = embedding_threshold(q1, q2, d);
  if (inv(q2) > inv(q1)) return strictly_greater(gap, th);
  return at_least(gap, th);
}

EmbeddingWitness embedding_witness(double q1, double s1, double q2, double s2, long long N, double bound) {
  require_exponent(q1, "q1");
  require_exponent(q2, "q2");
  if (N < 1) throw ValidationError("embedding_witness: N must be positive");
  // Per-radius terms; radius r > 0 appears on one side (x1) or both (x2).
  const auto R = static_cast<std::size_t>(N);
  std::vector<double> a(R + 1), b(R + 1), wa(R + 1), wb(R + 1);
  for (std::size_t r = 0; r <= R; ++r) {
    const double br = japanese(static_cast<double>(r));
    wa[r] = std::pow(br, s2);
    wb[r] = std::pow(br, s1);
    a[r] = is_inf(q2) ? 0.0 : std::pow(br, s2 * q2);
    b[r] = is_inf(q1) ? 0.0 : std::pow(br, s1 * q1);
  }
  double best = 0.0;
  for (int sides = 1; sides <= 2; ++sides) {
    for (std::size_t r1 = 0; r1 <= R; ++r1) {
      double A = 0.0, B = 0.0, maxa = 0.0, maxb = 0.0;
      for (std::size_t r2 = r1; r2 <= R; ++r2) {
        const double mult = (r2 == 0 ? 1.0 : static_cast<double>(sides));
        A += mult * a[r2];
        B += mult * b[r2];
        maxa = std::max(maxa, wa[r2]);
        maxb = std::max(maxb, wb[r2]);
        const double num = is_inf(q2) ? maxa : std::pow(A, 1.0 / q2);
        const double den = is_inf(q1) ? maxb : std::pow(B, 1.0 / q1);
        best = std::max(best, num / den);
      }
    }
  }
  return {best, best <= bound};
}

namespace {

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError(fmt::format("alpha must lie in [0,1], got {}", alpha));
}

} // namespace

bool thm1_predicate(double p, double q, double s1, double s2, double alpha, int d) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  require_alpha(alpha);
  if (s1 < 0.0 || s2 < 0.0) return false;
  if (alpha == 1.0) return true;
  const double ip = inv(p), iq = inv(q), c = d * (1.0 - alpha);
  if (iq > ip) return strictly_greater(s1, c * (iq - ip));
  if (ip > iq) return strictly_greater(s1 + (1.0 - alpha) * s2, c * (ip - iq));
  return true;
}

bool thm2_predicate(double p, double q, double s1, double s2, double alpha, int d) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  require_alpha(alpha);
  const double ip = inv(p), iq = inv(q);
  const bool c1 = is_inf(p) ? at_least(s1, 0.0) : strictly_greater(s1, d * ip);
  const bool c2 = q > 1.0 ? strictly_greater(s2, d * (1.0 - iq)) : at_least(s2, 0.0);
  if (!(c1 && c2)) return false;
  if (alpha == 1.0) return true;
  const double th = alpha * d * ip + (1.0 - alpha) * d * iq;
  return is_inf(q) ? at_least(s1, th) : strictly_greater(s1, th);
}

bool thm3_predicate(double p, double s1, double s2, double t1, double t2, int d) {
  require_exponent(p, "p");
  if (t1 < 0.0 || t2 < 0.0) throw DomainError("thm3_predicate: t1 and t2 must be nonnegative");
  const double gap = std::abs(inv(p) - 0.5);
  return at_least(s1, d * t1 * gap) && at_least(s2, d * t2 * gap);
}

} // namespace fiolab
