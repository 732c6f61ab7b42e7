#pragma once

#include "fiolab/grid.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace fiolab {

enum class WindowId { gaussian };

std::string window_name(WindowId id);
WindowId parse_window(const std::string& name);

// L^2-normalized window 2^{d/4} exp(-pi |t|^2) sampled on the grid.
SampledFunction make_window(WindowId id, const Grid& grid);
SampledFunction2D make_window_2d(WindowId id, const Grid& first, const Grid& second);
// Radius beyond which the window is below 1e-20 of its peak.
double window_support_radius(WindowId id);

struct StftOptions {
  // Shift sub-lattice step in samples (power of two).
  std::size_t stride = 1;
  // 0 keeps one full-length FFT per shift. A positive radius restricts each
  // shift to the samples within that distance, which is exact for windows
  // negligible outside it and gives a coarser frequency grid.
  double window_radius = 0.0;
  // Skip the exp(-2 pi i x.xi) factor when only magnitudes are consumed.
  bool with_phase = true;
};

struct TFMatrix {
  Grid x_grid;
  Grid xi_grid;
  std::vector<cplx> values;

  cplx at(std::size_t ix, std::size_t ixi) const { return values[ix * xi_grid.size() + ixi]; }
  // L^2 norm on R^{2d} with both cell measures.
  double l2_norm() const;
};

// Four blocks z1, z2, zeta1, zeta2 of dimension d each, recorded separately so
// the permutations c1..c4 can rebind them.
struct TFMatrix4 {
  std::array<Grid, 4> blocks;
  std::vector<cplx> values;

  std::vector<std::size_t> shape() const;
  Vec spacings() const;
};

inline constexpr std::size_t kStft4ValueCap = std::size_t{1} << 28;

// values[x, xi] = sum_t f(t) conj(g(t - x)) e^{-2 pi i t.xi} dt
TFMatrix stft(const SampledFunction& f, const SampledFunction& g, const StftOptions& options = {});
TFMatrix4 stft4(const SampledFunction2D& F, const SampledFunction2D& Psi, const StftOptions& options = {},
                std::size_t value_cap = kStft4ValueCap);

// max |V_g f(x,xi) - e^{-2 pi i x.xi} V_{g^} f^(xi, -x)| over the full grid.
double fundamental_identity_residual(const SampledFunction& f, const SampledFunction& g);

// Streaming access for reductions that never need the whole matrix. `visit`
// receives the flat shift index and that shift's frequency row.
struct TfLayout {
  std::vector<Grid> shift_axes; // one 1D grid per array axis
  std::vector<Grid> freq_axes;
  std::size_t shift_count() const;
  std::size_t freq_count() const;
};

TfLayout stft_layout(const std::vector<std::size_t>& shape, const Vec& spacing, const StftOptions& options);
void stft_rows(std::span<const cplx> f, std::span<const cplx> g, const std::vector<std::size_t>& shape,
               const Vec& spacing, const StftOptions& options,
               const std::function<void(std::size_t, std::span<const cplx>)>& visit);

void write_csv(std::ostream& out, const TFMatrix& V);
void write_csv(std::ostream& out, const TFMatrix4& V);

} // namespace fiolab
