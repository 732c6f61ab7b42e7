// Acceptance criteria 1-9. Run with criterion numbers to select, or none for
// all. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "fiolab/experiments.hpp"
#include "fiolab/extremal.hpp"
#include "fiolab/fio.hpp"
#include "fiolab/phase.hpp"
#include "fiolab/spaces.hpp"
#include "fiolab/tfr.hpp"

#include "generators.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>

using namespace fiolab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_l2(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

double mnorm(const SampledFunction& f, double p, double q, double s1, double s2) {
  SpaceSpec s;
  s.p = p;
  s.q = q;
  s.weight = Weight{s1, s2, 1};
  s.resolution = family_resolution(f.grid());
  return modulation_norm(f, s);
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

Outcome stft_identities() {
  const Grid grid = Grid::symmetric(1, 256, 8.0);
  const auto g = make_window(WindowId::gaussian, grid);
  Rng rng(1001);
  double worst_identity = 0.0, worst_orth = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto f = gen::band_limited(grid, rng);
    worst_identity = std::max(worst_identity, fundamental_identity_residual(f, g));
    const double lhs = stft(f, g).l2_norm(), rhs = f.l2_norm() * g.l2_norm();
    worst_orth = std::max(worst_orth, std::abs(lhs - rhs) / rhs);
  }
  return {worst_identity < 1e-6 && worst_orth < 1e-3,
          fmt::format("20 functions, n=256: identity residual {:.2e}, orthogonality error {:.2e}", worst_identity, worst_orth)};
}

Outcome operator_triangle() {
  const Grid grid = Grid::symmetric(1, 512, 16.0);
  Rng rng(1002);
  const FioOptions direct{FioPath::direct};
  const auto sigma = bracket_symbol(0.5, 0.5);
  double worst_kernel = 0.0, worst_weak = 0.0, worst_identity = 0.0;
  for (const auto& phase : {bilinear_phase(), mild_growth_phase(0.5)}) {
    const auto K = kernel(sigma, phase, grid);
    for (int i = 0; i < 10; ++i) {
      const auto f = gen::band_limited(grid, rng), h = gen::band_limited(grid, rng);
      const auto Tf = apply_fio(sigma, phase, f, direct);
      worst_kernel = std::max(worst_kernel, rel_l2(kernel_apply(K, f).samples(), Tf.samples()));
      const cplx strong = inner_product(Tf, h);
      worst_weak = std::max(worst_weak, std::abs(weak_pairing(sigma, phase, f, h) - strong) / std::abs(strong));
    }
  }
  for (int i = 0; i < 10; ++i) {
    const auto f = gen::band_limited(grid, rng);
    worst_identity = std::max(worst_identity, rel_l2(apply_fio(unit_symbol(), bilinear_phase(), f).samples(), f.samples()));
  }
  return {worst_kernel < 1e-6 && worst_weak < 1e-6 && worst_identity < 1e-8,
          fmt::format("kernel {:.2e}, weak pairing {:.2e}, identity {:.2e}", worst_kernel, worst_weak, worst_identity)};
}

Outcome lemma_equivalences() {
  const Bump h;
  double worst = 0.0;
  std::string where;
  for (double alpha : {0.0, 0.5})
    for (auto [p, q] : {std::pair{1.0, kInf}, std::pair{2.0, 2.0}, std::pair{kInf, 1.0}})
      for (double s1 : {0.0, 0.6})
        for (double s2 : {0.0, 0.6}) {
          std::vector<double> rf, rg;
          for (long long N : {4, 8, 16}) {
            const auto a = CoefficientSeq::range(4, 3 + N);
            const Grid grid = fit_grid(1, support_extent(a, alpha, h), frequency_extent(a, alpha) + 4.0);
            const auto F = build_F(a, alpha, h, grid);
            rf.push_back(mnorm(F, p, q, s1, s2) / sequence_norm(a.seq, p, s1 / (1.0 - alpha)));
            rg.push_back(mnorm(modulate_growth(F, alpha), p, q, s1, s2) / sequence_norm(a.seq, q, s1 / (1.0 - alpha) + s2));
          }
          for (double s : {spread(rf), spread(rg)}) {
            if (s > worst) {
              worst = s;
              where = fmt::format("alpha={} p={} q={} s1={} s2={}", alpha, format_exponent(p), format_exponent(q), s1, s2);
            }
          }
        }
  return {worst < 4.0, fmt::format("48 ratio series over N=4,8,16: largest spread {:.3f} at {}", worst, where)};
}

Outcome embedding_sharpness() {
  Rng rng(1004);
  const double qs[6] = {1.0, 1.5, 2.0, 3.0, 4.0, kInf};
  int agree = 0, total = 0;
  std::vector<std::string> misses;
  while (total < 200) {
    const double q1 = qs[rng.below(6)], q2 = qs[rng.below(6)];
    const double s1 = rng.uniform(-1.5, 1.5), s2 = rng.uniform(-1.5, 1.5);
    if (std::abs(s1 - s2 - embedding_threshold(q1, q2, 1)) <= 0.1) continue;
    ++total;
    const bool holds = embedding_holds(q1, s1, q2, s2, 1);
    const bool witnessed = embedding_witness(q1, s1, q2, s2, 64, 10.0).witnessed;
    if (holds == witnessed) {
      ++agree;
    } else if (misses.size() < 3) {
      misses.push_back(fmt::format("(q1={} s1={:.2f} q2={} s2={:.2f} holds={})", format_exponent(q1), s1,
                                   format_exponent(q2), s2, holds));
    }
  }
  return {agree == total, fmt::format("{}/{} agree ({:.1f}%); e.g. {}", agree, total, 100.0 * agree / total,
                                      fmt::join(misses, " "))};
}

Outcome dispersive_decay() {
  const std::vector<double> lambdas{10.0, 100.0, 1000.0};
  const Bump g{ProfileKind::mollifier, 1.0};
  std::vector<double> sups;
  for (double l : lambdas) sups.push_back(dispersive_sup(quadratic_phase(1), g, l));
  const double slope = loglog_slope(lambdas, sups);
  return {slope >= -0.6 && slope <= -0.4, fmt::format("slope {:.4f} from sups {:.4e}", slope, fmt::join(sups, " "))};
}

Outcome threshold_separation() {
  bool pass = true;
  std::string detail;
  for (int th : {1, 2}) {
    const auto tuples = default_tuples(th);
    const auto s = summarize(th, threshold_sweep(th, tuples));
    const bool ok = s.bounded + s.unbounded >= 40 && s.gap >= 0.1 && s.bounded_fit_fraction >= 0.8;
    pass = pass && ok;
    detail += fmt::format("{}thm{}: {} tuples, {} excluded, medians {:.3f}/{:.3f} gap {:.3f}, bounded fits < 0.1 {:.1f}%",
                          detail.empty() ? "" : "; ", th, tuples.size(), s.excluded, s.median_bounded,
                          s.median_unbounded, s.gap, 100.0 * s.bounded_fit_fraction);
  }
  return {pass, detail};
}

Outcome high_growth_scaling() {
  const std::vector<double> ks{8.0, 16.0, 32.0};
  bool pass = true;
  std::string detail;
  for (double t2 : {0.0, 1.0}) {
    std::vector<double> v;
    for (double k : ks) {
      const double kk[1] = {k};
      v.push_back(high_growth_decay(kk, t2));
    }
    const double slope = loglog_slope(ks, v);
    pass = pass && std::abs(slope + 0.5 * t2) <= 0.15;
    detail += fmt::format("t2={} slope {:.4f} (target {}); ", t2, slope, -0.5 * t2);
  }
  const bool table = thm3_predicate(2.0, 0.0, 0.0, 3.0, 1.5, 1) && thm3_predicate(1.0, 1.0, 0.0, 2.0, 0.0, 1) &&
                     !thm3_predicate(1.0, 0.9, 0.0, 2.0, 0.0, 1);
  return {pass && table, detail + fmt::format("predicate table {}", table ? "matches" : "differs")};
}

Outcome condition_verifiers() {
  const std::vector<PhaseSpec> shipped{bilinear_phase(),          mild_growth_phase(0.5),  mild_growth_phase(0.0),
                                       nonseparated_x_phase(0.5), nonseparated_xi_phase(), high_growth_phase(1.0, 0.0),
                                       high_growth_phase(0.5, 1.0)};
  const std::vector<PhaseSpec> detectors{
      with_declared(mild_growth_phase(0.0), {0.5, false, 0.0, 0.0}),
      with_declared(high_growth_phase(1.0, 0.0), GrowthParams::high(0.0, 0.0)),
      with_declared(high_growth_phase(0.5, 1.0), GrowthParams::high(0.5, 0.0)),
  };
  int passed = 0, caught = 0;
  std::vector<std::string> wrong;
  for (const auto& p : shipped) {
    if (all_pass(verify_declared(p))) {
      ++passed;
    } else {
      wrong.push_back(p.name);
    }
  }
  for (const auto& p : detectors) {
    if (!all_pass(verify_declared(p))) {
      ++caught;
    } else {
      wrong.push_back(p.name + " (detector)");
    }
  }
  return {wrong.empty(), fmt::format("{}/{} built-in phases verified, {}/{} detectors fail{}", passed, shipped.size(), caught,
                                     detectors.size(), wrong.empty() ? "" : fmt::format("; wrong: {}", fmt::join(wrong, ", ")))};
}

Outcome sweep_determinism() {
  SweepOptions o;
  o.seed = 7;
  const auto first = emit_report(threshold_sweep(1, default_tuples(1), o), ReportFormat::csv);
  const auto second = emit_report(threshold_sweep(1, default_tuples(1), o), ReportFormat::csv);
  return {first == second, fmt::format("default thm1 sweep, {} bytes, {}", first.size(),
                                       first == second ? "identical" : "different")};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"STFT identities", stft_identities},
      {"operator sanity triangle", operator_triangle},
      {"extremal family equivalences", lemma_equivalences},
      {"embedding sharpness", embedding_sharpness},
      {"dispersive decay", dispersive_decay},
      {"threshold separation", threshold_separation},
      {"high-growth scaling", high_growth_scaling},
      {"condition verifiers", condition_verifiers},
      {"sweep determinism", sweep_determinism},
  };
  std::vector<std::size_t> chosen;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << "\n";
      return 2;
    }
    chosen.push_back(static_cast<std::size_t>(c));
  }
  if (chosen.empty())
    for (std::size_t c = 1; c <= criteria.size(); ++c) chosen.push_back(c);

  bool all = true;
  for (auto c : chosen) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c - 1].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("criterion {} ({}): {} [{:.1f}s] {}\n", c, criteria[c - 1].first, o.pass ? "PASS" : "FAIL", secs,
                             o.detail)
              << std::flush;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
