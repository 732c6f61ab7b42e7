#pragma once

#include "fiolab/grid.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fiolab {

enum class Regime { low, mild, critical, high, other };

std::string regime_name(Regime r);

struct GrowthParams {
  double alpha = 1.0;
  // The (-inf, t1, t2) form: no first-order growth clause at all.
  bool alpha_minus_infinity = false;
  double t1 = 0.0;
  double t2 = 0.0;

  static GrowthParams high(double t1, double t2) { return {0.0, true, t1, t2}; }
  void validate() const;
  Regime regime() const;
  std::string describe() const;
};

using PhaseEval = std::function<double(std::span<const double>, std::span<const double>)>;
// (x, xi, grad_x out, grad_xi out)
using PhaseGrad = std::function<void(std::span<const double>, std::span<const double>, std::span<double>, std::span<double>)>;
// (x, xi, xx out, x-xi out, xi-xi out); blocks are row-major d x d, the mixed
// block indexed [x_j][xi_l].
using PhaseHessian = std::function<void(std::span<const double>, std::span<const double>, std::span<double>,
                                        std::span<double>, std::span<double>)>;
using RadialPart = std::function<double(std::span<const double>)>;

struct PhaseSpec {
  std::string name;
  int d = 1;
  PhaseEval eval;
  PhaseGrad grad;
  PhaseHessian hessian;
  GrowthParams declared;
  bool declared_separated_x = true;
  bool declared_separated_xi = true;
  // Phi = mu(x) + nu(xi) + x.xi when `separable`; empty parts are zero.
  bool separable = false;
  RadialPart mu;
  RadialPart nu;

  Vec grad_x(std::span<const double> x, std::span<const double> xi) const;
  Vec grad_xi(std::span<const double> x, std::span<const double> xi) const;
};

PhaseSpec bilinear_phase(int d = 1);
// <x>^{2-alpha} + x.xi
PhaseSpec mild_growth_phase(double alpha, int d = 1);
// <x>^{2-alpha}
PhaseSpec nonseparated_x_phase(double alpha, int d = 1);
// amplitude * exp(-1/(1-|xi|^2)) on |xi| < 1
PhaseSpec nonseparated_xi_phase(int d = 1, double amplitude = 0.25);
// (<x>^{2+t1} + <xi>^{2+t2}) / (2 pi) + x.xi
PhaseSpec high_growth_phase(double t1, double t2, int d = 1);
// Same phase, different claim; used to build mismatch detectors.
PhaseSpec with_declared(PhaseSpec phase, const GrowthParams& declared);

// Name plus numeric parameters, e.g. ("mild_growth", {{"alpha", 0.5}}).
PhaseSpec make_phase(const std::string& kind, const std::map<std::string, double>& params);

// Sample box [-L, L]^d in each variable.
struct Box {
  double L = 16.0;
  std::size_t x_samples = 257;
  std::size_t xi_samples = 33;
};

double growth_ratio_x(const PhaseSpec& phase, const GrowthParams& claim, const Box& box);

struct SecondDerivativeBounds {
  double A = 0.0; // <x>^{-t1} d_xx Phi
  double B = 0.0; // <xi>^{-t2} d_xixi Phi
  double C = 0.0; // d_xxi Phi
};

// Each entry is the sup over unit lattice cells (k, l) in the box of the
// weighted Fourier-Lebesgue norm of eta_{k,l} times the Hessian block, summed
// over |gamma| = 2. d = 1 only.
SecondDerivativeBounds second_derivative_bounds(const PhaseSpec& phase, double t1, double t2, double eps, double L);

enum class SeparationType { x, xi };
double separation_margin(const PhaseSpec& phase, SeparationType type, const Box& box);

// tau_{k,l}(x, xi) = Phi(x+k, xi+l) - Phi(k,l) - grad_x Phi(k,l).x - grad_xi Phi(k,l).xi on [-1,1)^{2d}
SampledFunction2D taylor_remainder(const PhaseSpec& phase, std::span<const double> k, std::span<const double> l,
                                   std::size_t n = 32);

Vec k_alpha(std::span<const double> k, double alpha);
double sep_deviation(std::span<const double> k, double alpha);
// grad <x>^{2-alpha} = (2-alpha) <x>^{-alpha} x
Vec grad_mu(std::span<const double> x, double alpha);

// Smooth partition of unity on Z^d built from the mollifier of radius `radius`.
struct PartitionSpec {
  double radius = 0.75;
  int d = 1;

  double raw(double t) const;
  double eta1(double t) const;
  double eta(std::span<const double> x) const;
  double eta_k(std::span<const double> x, std::span<const double> k) const;
  // Sum of eta_n over the neighbours n whose support meets supp eta_k.
  double star(std::span<const double> x, std::span<const double> k) const;
};

struct VerdictRow {
  std::string condition;
  double threshold = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::vector<double> boxes{8.0, 16.0, 32.0};
  double growth_limit = 1.15;
  double eps = 0.5;
  double separation_threshold = 0.5;
  double separation_box = 16.0;
};

// Checks the declared (alpha, t1, t2) and separation claims: every bounded
// quantity must grow by less than growth_limit between consecutive boxes.
std::vector<VerdictRow> verify_declared(const PhaseSpec& phase, const VerifyOptions& options = {});
bool all_pass(const std::vector<VerdictRow>& rows);
void write_csv(std::ostream& out, const std::vector<VerdictRow>& rows);

} // namespace fiolab
