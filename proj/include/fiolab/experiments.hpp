#pragma once

#include "fiolab/extremal.hpp"
#include "fiolab/fio.hpp"
#include "fiolab/spaces.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fiolab {

struct OperatorHandle {
  std::string name;
  std::function<SampledFunction(const SampledFunction&)> apply;
};

OperatorHandle identity_operator();
// f -> e^{2 pi i <x>^{2-alpha}} f
OperatorHandle growth_multiplication(double alpha);
// f -> e^{i mu(D)} f
OperatorHandle unimodular_multiplier(std::string name, RadialPart mu);
// f -> T_{sigma,Phi} f through apply_fio
OperatorHandle fio_operator(SymbolSpec sigma, PhaseSpec phase, FioOptions options = {});

// Named input families at size N:
//   bump              the mollifier h at the origin (ignores N)
//   lattice-F          F_N with a = 1 on 4..N+3
//   lattice            F_N, e^{-2 pi i mu} F_N, M_{N+3} h, h(. - (N+3)_alpha)
//   modulated-train   psi sum_{k=4}^{N+3} e^{2 pi i k x}
//   random            N seeded random sums of modulated Gaussians
struct FamilySpec {
  std::string name = "lattice";
  double alpha = 0.5;
  std::uint64_t seed = 1;
  Bump h{};
};

struct Family {
  Grid grid;
  std::vector<SampledFunction> members;
};

Family make_family(const FamilySpec& spec, std::size_t N);
std::vector<std::string> family_names();

// max over the family of ||T f||_out / ||f||_in. Zero inputs are skipped.
double estimate_operator_ratio(const OperatorHandle& T, const SpaceSpec& in_space, const SpaceSpec& out_space,
                               const std::vector<SampledFunction>& family);
// Builds the family at size N; the resolutions of both spaces are replaced
// by family_resolution of its grid.
double estimate_operator_ratio(const OperatorHandle& T, const SpaceSpec& in_space, const SpaceSpec& out_space,
                               const FamilySpec& family, std::size_t N);

// thm3 tuples use p for the space M^p and keep q = p.
struct ExponentTuple {
  double p = 2.0;
  double q = 2.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double alpha = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  int d = 1;

  bool operator==(const ExponentTuple&) const = default;
};

enum class Verdict { bounded, unbounded };
// Growth exponent >= 0.15 reads as unbounded, < 0.1 as bounded.
enum class Observed { bounded, unbounded, inconclusive };

std::string verdict_name(Verdict v);
Verdict parse_verdict(const std::string& text);
std::string observed_name(Observed o);
Observed parse_observed(const std::string& text);
Observed classify_growth(double exponent);

struct ExperimentRow {
  std::string experiment;
  ExponentTuple tuple;
  std::size_t N = 0;
  double ratio = 0.0;
  Verdict verdict = Verdict::bounded;
  double growth_exponent = 0.0; // NaN when not applicable
  Observed observed = Observed::inconclusive;
  std::string grid;
  std::string window = "gaussian";

  bool operator==(const ExperimentRow& other) const;
};

bool predicted_bounded(int theorem, const ExponentTuple& t);
// Smallest distance, in the exponents' own units, from t to a boundary of
// the theorem's predicate.
double threshold_distance(int theorem, const ExponentTuple& t);
std::vector<ExponentTuple> default_tuples(int theorem);
std::vector<std::size_t> default_sizes();

struct SweepOptions {
  Bump h{};
  WindowId window = WindowId::gaussian;
  std::uint64_t seed = 1;
  // Rows at every size in Ns; the growth exponent is the largest fitted
  // log-log slope among the theorem's probes.
  std::vector<std::size_t> sizes = default_sizes();
};

std::vector<ExperimentRow> threshold_sweep(int theorem, const std::vector<ExponentTuple>& tuples,
                                           const SweepOptions& options = {});

struct SeparationSummary {
  std::size_t bounded = 0;
  std::size_t unbounded = 0;
  std::size_t excluded = 0;
  double median_bounded = 0.0;
  double median_unbounded = 0.0;
  double gap = 0.0;
  double bounded_fit_fraction = 0.0; // share of predicted-bounded tuples fitting < 0.1
};

// One exponent per tuple; tuples within `band` of a threshold are excluded.
SeparationSummary summarize(int theorem, const std::vector<ExperimentRow>& rows, double band = 0.1);

enum class ReportFormat { csv, svg };

std::string emit_report(const std::vector<ExperimentRow>& rows, ReportFormat format);
std::vector<ExperimentRow> parse_report_csv(const std::string& text);
std::string report_header();

} // namespace fiolab
