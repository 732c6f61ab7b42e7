#pragma once

#include "fiolab/grid.hpp"
#include "fiolab/tfr.hpp"

#include <array>
#include <string>
#include <vector>

namespace fiolab {

// v_{s,t}(z1, z2) = <z1>^s <z2>^t with z1, z2 in R^d.
struct Weight {
  double s = 0.0;
  double t = 0.0;
  int d = 1;
};

double weight_eval(const Weight& w, std::span<const double> z);

// Riemann sums carry the cell measure; counting drops it so that l^p
// monotonicity in p holds on a finite grid.
enum class Measure { riemann, counting };

enum class SpaceKind { modulation, amalgam, mixed_lebesgue };

struct SpaceSpec {
  double p = 2.0;
  double q = 2.0;
  Weight weight{};
  SpaceKind kind = SpaceKind::modulation;
  WindowId window = WindowId::gaussian;
  StftOptions resolution{};
  Measure measure = Measure::riemann;

  void validate() const;
  std::string describe() const;
};

// "inf" for infinity, shortest round-trip form otherwise.
std::string format_exponent(double p);
double parse_exponent(const std::string& text);
void require_exponent(double p, const char* what);

// identity keeps (z1, z2, zeta1, zeta2) in place; c1..c4 are the four
// rearrangements used by the kernel-side working spaces.
enum class Perm { identity, c1, c2, c3, c4 };

std::string perm_name(Perm perm);
Perm parse_perm(const std::string& name);
// Entry i is the STFT block read by slot i of the nested norm (slot 0 innermost).
std::array<int, 4> slot_blocks(Perm perm);

struct MixedSpec {
  Perm perm = Perm::c1;
  std::array<double, 4> exponents{2.0, 2.0, 2.0, 2.0};
  // Applied as <w2>^s <w3>^t on the two outer slots, the 1 (x) v form.
  Weight weight{};
  double eps = 0.5;
  WindowId window = WindowId::gaussian;
  StftOptions resolution{};

  // M^{1,inf,inf,inf} with weight 1 (x) v_{d+eps,0} under c1.
  static MixedSpec weighted_c1(int d, double eps);
  void validate() const;
  std::string describe() const;
};

// (sum_xi (sum_x |V|^p m^p dx)^{q/p} dxi)^{1/q}
double mixed_norm(const TFMatrix& V, double p, double q, const Weight& w, Measure measure = Measure::riemann);
// Nested norm of a sampled 4D transform with slot i reading block slot_blocks(perm)[i].
double mixed_norm4(const TFMatrix4& V, Perm perm, const std::array<double, 4>& exponents, const Weight& w);

double modulation_norm(const SampledFunction& f, const SpaceSpec& spec);
double amalgam_norm(const SampledFunction& f, const SpaceSpec& spec);
// Dispatches on spec.kind; mixed_lebesgue reads the samples directly as L^p_{v_s}.
double space_norm(const SampledFunction& f, const SpaceSpec& spec);

// |V_g f| restricted to the shifts whose windowed segment is not identically
// zero. Norms computed from it equal the streaming ones: dropped rows are 0.
struct StftMagnitudes {
  Grid x_grid;
  Grid xi_grid;
  std::vector<std::size_t> rows; // flat shift indices, ascending
  std::vector<double> values;    // rows.size() x xi_grid.size()
};

StftMagnitudes stft_magnitudes(const SampledFunction& f, WindowId window = WindowId::gaussian,
                               const StftOptions& resolution = {});
// Modulation (x inner) or amalgam (xi inner) norm; mixed_lebesgue is rejected.
double space_norm(const StftMagnitudes& V, const SpaceSpec& spec);

// F on R^{2d} as a single function: M^{p,q} or W^{p,q} over R^{4d} by streaming.
double space_norm(const SampledFunction2D& F, const SpaceSpec& spec);

double special_amalgam_norm(const SampledFunction2D& F, double eps, WindowId window = WindowId::gaussian,
                            const StftOptions& resolution = {});
double mixed_modulation_norm(const SampledFunction2D& F, const MixedSpec& spec);

// ||f^ <xi>^s||_{L^p}
double fourier_lebesgue_norm(const SampledFunction& f, double p, double s);
// ||F^(zeta1, zeta2) <zeta1>^s <zeta2>^t||_{L^{p,q}}, inner over zeta1.
double fourier_lebesgue_norm(const SampledFunction2D& F, double p, double q, double s, double t);
// ||F <x>^s <y>^t||_{L^{p,q}}, inner over x.
double lebesgue_norm(const SampledFunction2D& F, double p, double q, const Weight& w);

// Finitely supported sequence on Z^d; points stored as d consecutive entries.
struct LatticeSequence {
  int d = 1;
  std::vector<long long> points;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::span<const long long> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  void push(std::span<const long long> k, double value);
  void validate() const;

  static LatticeSequence delta(int d);
  // 1-d sequence equal to `value` on lo..hi inclusive.
  static LatticeSequence range(long long lo, long long hi, double value = 1.0);
};

double lattice_bracket(std::span<const long long> k);
// (sum_k |a_k|^p <k>^{sp})^{1/p}
double sequence_norm(const LatticeSequence& a, double p, double s);

// l^{q1}_{s1} inside l^{q2}_{s2}: s1 - s2 >= d (1/q2 - 1/q1) v 0, strict when 1/q2 > 1/q1.
bool embedding_holds(double q1, double s1, double q2, double s2, int d);
double embedding_threshold(double q1, double q2, int d);

struct EmbeddingWitness {
  double constant = 0.0; // best ||a||_{q2,s2} / ||a||_{q1,s1} found
  bool witnessed = false; // constant <= the allowed bound
};

// Finite-section search on Z (d = 1) over 0/1 sequences supported in [-N, N].
// The searched family is every set {k : r1 <= |k| <= r2} taken on one or both
// sides of the origin; it contains all singletons and all greedy level sets
// of the ratio <k>^{s2 q2} / <k>^{s1 q1}, which is monotone in |k|.
EmbeddingWitness embedding_witness(double q1, double s1, double q2, double s2, long long N, double bound);

bool thm1_predicate(double p, double q, double s1, double s2, double alpha, int d);
bool thm2_predicate(double p, double q, double s1, double s2, double alpha, int d);
bool thm3_predicate(double p, double s1, double s2, double t1, double t2, int d);

} // namespace fiolab
