#pragma once

#include "fiolab/grid.hpp"
#include "fiolab/phase.hpp"

#include <functional>
#include <map>
#include <string>

namespace fiolab {

using SymbolEval = std::function<cplx(std::span<const double>, std::span<const double>)>;

struct SymbolSpec {
  std::string name;
  SymbolEval eval;
  // Reporting tag: the symbol is claimed to satisfy v_{s1,s2} sigma bounded.
  double s1 = 0.0;
  double s2 = 0.0;
  // sigma = a(x) b(xi) when set; empty factors are 1.
  bool product = false;
  RadialPart x_factor;
  RadialPart xi_factor;
};

SymbolSpec unit_symbol();
// <x>^{-s1} <xi>^{-s2}
SymbolSpec bracket_symbol(double s1, double s2);
SymbolSpec make_symbol(const std::string& kind, const std::map<std::string, double>& params);

enum class FioPath { automatic, direct, fast };

struct FioOptions {
  FioPath path = FioPath::automatic;
  // Largest tolerated L^2 fraction of f^ in the outer eighth of the dual box
  // on either side of each axis.
  double leakage_tolerance = 1e-8;
};

double band_leakage(const SampledFunction& f);

// Tf(x) = sum_xi sigma(x, xi) f^(xi) e^{2 pi i Phi(x, xi)} dxi on the grid of f.
// The fast path needs a separable phase and a product symbol.
SampledFunction apply_fio(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f,
                          const FioOptions& options = {});
bool fast_path_available(const SymbolSpec& sigma, const PhaseSpec& phase);

inline constexpr std::size_t kKernelValueCap = std::size_t{1} << 24;

// K(x, y) = sum_xi sigma(x, xi) e^{2 pi i Phi(x, xi)} e^{-2 pi i y.xi} dxi with
// x and y both on `grid`.
SampledFunction2D kernel(const SymbolSpec& sigma, const PhaseSpec& phase, const Grid& grid,
                         std::size_t value_cap = kKernelValueCap);
// sum_y K(x, y) f(y) dy
SampledFunction kernel_apply(const SampledFunction2D& K, const SampledFunction& f);

// <Tf, g> evaluated as the double sum of sigma e^{2 pi i Phi} against
// conj(g) (x) f^, never forming Tf.
cplx weak_pairing(const SymbolSpec& sigma, const PhaseSpec& phase, const SampledFunction& f,
                  const SampledFunction& g);

// F^{-1}(m f^)
SampledFunction apply_fourier_multiplier(const std::function<cplx(std::span<const double>)>& m,
                                         const SampledFunction& f);
// e^{i mu(D)} f
SampledFunction apply_multiplier(const RadialPart& mu, const SampledFunction& f);
// <D>^{-s} f
SampledFunction bessel_potential(const SampledFunction& f, double s);

} // namespace fiolab
