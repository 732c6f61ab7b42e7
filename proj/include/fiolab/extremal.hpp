#pragma once

#include "fiolab/grid.hpp"
#include "fiolab/spaces.hpp"
#include "fiolab/tfr.hpp"

#include <functional>
#include <optional>
#include <string>

namespace fiolab {

// Nonnegative, finitely supported coefficients on Z^d.
struct CoefficientSeq {
  LatticeSequence seq;

  int d() const { return seq.d; }
  std::size_t size() const { return seq.size(); }
  void validate() const;
  double total() const;

  static CoefficientSeq delta(int d = 1);
  static CoefficientSeq range(long long lo, long long hi, double value = 1.0);
  static CoefficientSeq zero(int d = 1);
};

enum class ProfileKind {
  mollifier, // amplitude * exp(-1 / (1 - |x/radius|^2))
  plateau    // amplitude on |x| <= radius, 0 beyond 2 radius, smooth between
};

struct Bump {
  ProfileKind kind = ProfileKind::mollifier;
  double radius = 0.2;
  double amplitude = 1.0;

  double operator()(std::span<const double> x) const;
  double support_radius() const;
  void validate() const;
};

Bump plateau(double radius, double amplitude = 1.0);

// Minimal symmetric box: half-width a power of two >= x_extent + margin, and a
// power-of-two sampling rate whose Nyquist frequency is >= freq_extent + band.
Grid fit_grid(int d, double x_extent, double freq_extent, double margin = 8.0, double band = 64.0);

// Largest |k_alpha|_inf + supp h over the support of a.
double support_extent(const CoefficientSeq& a, double alpha, const Bump& h);
// Largest |grad mu(k_alpha)|_inf over the support of a.
double frequency_extent(const CoefficientSeq& a, double alpha);
// Smallest pairwise distance between the frequencies grad mu(k_alpha).
double frequency_separation(const CoefficientSeq& a, double alpha);

// sum_k a_k h(x - k_alpha)
SampledFunction build_F(const CoefficientSeq& a, double alpha, const Bump& h, const Grid& grid);
// sum_k a_k h(x - k_alpha) e^{2 pi i grad mu(k_alpha) x}
SampledFunction build_G(const CoefficientSeq& a, double alpha, const Bump& h, const Grid& grid);
// psi(x) sum_k a_k e^{2 pi i k x}, where psi = F^{-1} phi / (F^{-1} phi)(0).
SampledFunction build_modulated_train(const CoefficientSeq& a, const Bump& phi, const Grid& grid);
// sum_k g((x - k_alpha) / <k>^{alpha/(1-alpha)}) e^{2 pi i grad mu(k_alpha) x} over lo..hi.
SampledFunction build_chirp_train(double alpha, const Bump& g, long long lo, long long hi, const Grid& grid);
// e^{+-2 pi i <x>^{2-alpha}} f, sampled pointwise; the sign is negative when
// `conjugate` is set.
SampledFunction modulate_growth(const SampledFunction& f, double alpha, bool conjugate = false);

// Largest |x - k_alpha| reached by a chirp window over lo..hi.
double chirp_extent(double alpha, const Bump& g, long long lo, long long hi);
// True when the chirp windows over lo..hi have pairwise disjoint supports.
bool chirp_windows_disjoint(double alpha, const Bump& g, long long lo, long long hi);

// Local resolution for the family norms: window radius 4 and shifts about
// 1/8 apart.
StftOptions family_resolution(const Grid& grid);

// Phase on R^d with exact derivatives.
struct RealPhase {
  std::string name;
  int d = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  // row-major d x d
  std::function<void(std::span<const double>, std::span<double>)> hessian;
};

// |xi|^2
RealPhase quadratic_phase(int d = 1);

struct DispersiveOptions {
  double A = 1e3;                  // |det Hess phi| >= 1/A required on supp g
  std::optional<Grid> grid;        // frequency grid; fitted to lambda when empty
  std::size_t sample_cap = std::size_t{1} << 24;
};

// sup_x |F^{-1}[g e^{i lambda phi}](x)|
double dispersive_sup(const RealPhase& phi, const Bump& g, double lambda, const DispersiveOptions& options = {});

struct DecayOptions {
  double amplitude = 1.0;          // scales the annulus cutoff
  std::optional<Grid> grid;        // fitted to k and t2 when empty
  std::size_t sample_cap = std::size_t{1} << 24;
};

// ||e^{-i <x>^{2+t2}} rho(x/|k|)||_{FL^p}, rho a smooth cutoff equal to 1 on
// 1/2 <= |x| <= 2 and supported in 1/4 <= |x| <= 4.
double high_growth_decay(std::span<const double> k, double t2, double p = std::numeric_limits<double>::infinity(),
                         const DecayOptions& options = {});
double annulus_cutoff(double r);

// Least-squares slope of log y against log x; needs >= 3 positive points.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

} // namespace fiolab
