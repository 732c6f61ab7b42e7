#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fiolab {

using cplx = std::complex<double>;
using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// <x> = (1 + |x|^2)^{1/2}
double japanese(std::span<const double> x);
inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

// Uniform grid on [offset - L, offset + L)^dim, L = n * spacing / 2.
// Point j along an axis sits at offset + (j - n/2) * spacing, so index n/2 is
// the center and the grid is symmetric up to the single extra point at -L.
struct Grid {
  int dim = 1;
  std::size_t n = 512;
  double spacing = 1.0 / 16.0;
  double offset = 0.0;

  static Grid symmetric(int dim, std::size_t n, double half_width);

  void validate() const;
  double half_width() const { return 0.5 * static_cast<double>(n) * spacing; }
  std::size_t size() const;
  double coord(std::size_t j) const {
    return offset + (static_cast<double>(j) - static_cast<double>(n / 2)) * spacing;
  }
  // Coordinates of a flat (row-major, axis 0 slowest) index.
  Vec point(std::size_t flat) const;
  void point(std::size_t flat, std::span<double> out) const;
  double cell_volume() const;
  // Spacing 1/(n*spacing), same n, centered at 0.
  Grid dual() const;
  // Equality up to round-off in the spacing.
  bool matches(const Grid& other) const;
  std::string describe() const;
};

class SampledFunction {
public:
  SampledFunction(Grid grid, std::vector<cplx> samples);

  static SampledFunction zeros(const Grid& grid);
  static SampledFunction from(const Grid& grid, const std::function<cplx(std::span<const double>)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> samples() const { return samples_; }
  const std::vector<cplx>& data() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  cplx operator[](std::size_t i) const { return samples_[i]; }
  // Value at the grid center (index n/2 on every axis).
  cplx at_origin() const;

  // L^2 norm with the cell measure.
  double l2_norm() const;
  double sup_norm() const;

private:
  Grid grid_;
  std::vector<cplx> samples_;
};

// Samples of F(x, y) with x on `first` and y on `second`; both blocks have the
// same dimension d. Row-major with the first block slowest.
class SampledFunction2D {
public:
  SampledFunction2D(Grid first, Grid second, std::vector<cplx> samples);

  static SampledFunction2D zeros(const Grid& first, const Grid& second);
  static SampledFunction2D from(const Grid& first, const Grid& second,
                                const std::function<cplx(std::span<const double>, std::span<const double>)>& f);

  const Grid& first() const { return first_; }
  const Grid& second() const { return second_; }
  int block_dim() const { return first_.dim; }
  std::span<const cplx> samples() const { return samples_; }
  const std::vector<cplx>& data() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  cplx at(std::size_t i_first, std::size_t i_second) const { return samples_[i_first * second_.size() + i_second]; }

  // Shape and spacing of all 2d axes, first block first.
  std::vector<std::size_t> shape() const;
  Vec spacings() const;
  double l2_norm() const;
  double sup_norm() const;
  // F(y, x); requires both blocks on matching grids.
  SampledFunction2D transposed() const;

private:
  Grid first_;
  Grid second_;
  std::vector<cplx> samples_;
};

// Riemann-sum transform f^(xi) = sum_x f(x) e^{-2 pi i x.xi} dx onto the dual grid.
SampledFunction fourier_transform(const SampledFunction& f);
SampledFunction inverse_fourier_transform(const SampledFunction& fhat);

// (M_omega T_u f)(t) = e^{2 pi i t.omega} f(t - u), circular in t.
SampledFunction translate_modulate(const SampledFunction& f, std::span<const double> u, std::span<const double> omega);

// F(lambda1 x, lambda2 y) by band-limited (trigonometric) interpolation.
SampledFunction2D dilate2(const SampledFunction2D& F, double lambda1, double lambda2);

SampledFunction multiply(const SampledFunction& f, const SampledFunction& g);
SampledFunction add(const SampledFunction& f, const SampledFunction& g);
SampledFunction scale(const SampledFunction& f, cplx c);
SampledFunction conjugate(const SampledFunction& f);
SampledFunction2D multiply(const SampledFunction2D& F, const SampledFunction2D& G);
SampledFunction2D add(const SampledFunction2D& F, const SampledFunction2D& G);
SampledFunction2D scale(const SampledFunction2D& F, cplx c);

// <f, g> = sum f conj(g) dx
cplx inner_product(const SampledFunction& f, const SampledFunction& g);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

} // namespace fiolab
