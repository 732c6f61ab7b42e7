#include "fiolab/experiments.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/phase.hpp"
#include "fiolab/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace fiolab {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::string grid_tag(const Grid& g) { return fmt::format("n={};L={:g};h={:.17g}", g.n, g.half_width(), g.spacing); }

CoefficientSeq single(long long k) {
  CoefficientSeq a;
  const long long p[1] = {k};
  a.seq.push(p, 1.0);
  return a;
}

SampledFunction modulate(const SampledFunction& f, double freq) {
  std::vector<cplx> out = f.data();
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] != cplx(0.0)) out[j] *= std::polar(1.0, kTwoPi * freq * f.grid().coord(j));
  }
  return SampledFunction(f.grid(), std::move(out));
}

// (p, q, weight s on x, weight t on xi)
using NormKey = std::tuple<double, double, double, double>;
using NormMap = std::map<NormKey, double>;

// One STFT, then every requested modulation norm from the cached magnitudes.
NormMap norms_of(const SampledFunction& f, const std::set<NormKey>& keys, WindowId window) {
  const StftOptions res = family_resolution(f.grid());
  const auto V = stft_magnitudes(f, window, res);
  NormMap out;
  for (const auto& key : keys) {
    SpaceSpec s;
    s.p = std::get<0>(key);
    s.q = std::get<1>(key);
    s.weight = Weight{std::get<2>(key), std::get<3>(key), 1};
    s.window = window;
    s.resolution = res;
    out[key] = space_norm(V, s);
  }
  return out;
}

// series[tuple][probe][size]
using Series = std::vector<std::vector<std::vector<double>>>;

Series make_series(std::size_t tuples, std::size_t probes, std::size_t sizes) {
  return Series(tuples, std::vector<std::vector<double>>(probes, std::vector<double>(sizes, 0.0)));
}

// Log-log slope of the ratios. When they increase throughout, the slope of
// the successive increments is fitted too and the smaller one kept: a power
// law gives the same exponent both ways, while a convergent partial sum
// C - c N^{-b} shows its -b only in the increments.
double probe_exponent(const Vec& xs, const Vec& ratios) {
  const double plain = loglog_slope(xs, ratios);
  if (xs.size() < 4) return plain;
  Vec dx, dr;
  for (std::size_t n = 1; n < ratios.size(); ++n) {
    if (!(ratios[n] > ratios[n - 1])) return plain;
    dx.push_back(xs[n]);
    dr.push_back(ratios[n] - ratios[n - 1]);
  }
  return std::min(plain, loglog_slope(dx, dr));
}

std::vector<ExperimentRow> assemble(const std::string& experiment, const std::vector<ExponentTuple>& tuples,
                                    const Series& series, const std::vector<std::size_t>& sizes,
                                    const std::vector<std::string>& grids, int theorem, WindowId window) {
  Vec xs(sizes.begin(), sizes.end());
  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    double growth = std::numeric_limits<double>::quiet_NaN();
    if (sizes.size() >= 3) {
      for (const auto& probe : series[i]) {
        if (std::any_of(probe.begin(), probe.end(), [](double r) { return !(r > 0.0) || !std::isfinite(r); })) continue;
        const double slope = probe_exponent(xs, probe);
        growth = std::isnan(growth) ? slope : std::max(growth, slope);
      }
    }
    const Verdict verdict = predicted_bounded(theorem, tuples[i]) ? Verdict::bounded : Verdict::unbounded;
    for (std::size_t n = 0; n < sizes.size(); ++n) {
      ExperimentRow row;
      row.experiment = experiment;
      row.tuple = tuples[i];
      row.N = sizes[n];
      for (const auto& probe : series[i]) row.ratio = std::max(row.ratio, probe[n]);
      row.verdict = verdict;
      row.growth_exponent = growth;
      row.observed = std::isnan(growth) ? Observed::inconclusive : classify_growth(growth);
      row.grid = grids[n];
      row.window = window_name(window);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Groups tuple indices by a key, keeping first-seen order.
template <class Key, class F>
std::vector<std::pair<Key, std::vector<std::size_t>>> group_by(const std::vector<ExponentTuple>& tuples, F key) {
  std::vector<std::pair<Key, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const Key k = key(tuples[i]);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == k; });
    if (it == groups.end()) {
      groups.push_back({k, {i}});
    } else {
      it->second.push_back(i);
    }
  }
  return groups;
}

void check_tuples(int theorem, const std::vector<ExponentTuple>& tuples) {
  for (const auto& t : tuples) {
    if (t.d != 1) throw DomainError(fmt::format("threshold_sweep runs at d = 1, got d = {}", t.d));
    predicted_bounded(theorem, t); // domain checks
    if (theorem != 3 && !(t.alpha >= 0.0 && t.alpha < 1.0))
      throw DomainError(fmt::format("sweep families need alpha in [0,1), got {}", t.alpha));
  }
}

// thm1 sweep: T = <x>^{-s1} e^{2 pi i mu} <D>^{-s2}, read as the ratio
// ||e^{2 pi i mu} g||_{M^{p,q}_{v_{-s1,0}}} / ||g||_{M^{p,q}_{v_{0,s2}}}.
// Probes: F, e^{-2 pi i mu} F, M_K h and h(. - K_alpha) with K = N + 3.
std::vector<ExperimentRow> sweep_thm1(const std::vector<ExponentTuple>& tuples, const SweepOptions& o) {
  const auto& sizes = o.sizes;
  Series series = make_series(tuples.size(), 4, sizes.size());
  std::vector<std::string> grids(sizes.size());
  const auto groups = group_by<double>(tuples, [](const ExponentTuple& t) { return t.alpha; });
  for (const auto& [alpha, members] : groups) {
    std::set<NormKey> in_keys, out_keys;
    for (auto i : members) {
      in_keys.insert({tuples[i].p, tuples[i].q, 0.0, tuples[i].s2});
      out_keys.insert({tuples[i].p, tuples[i].q, -tuples[i].s1, 0.0});
    }
    for (std::size_t n = 0; n < sizes.size(); ++n) {
      const long long K = static_cast<long long>(sizes[n]) + 3;
      const auto a = CoefficientSeq::range(4, K);
      const Grid grid = fit_grid(1, support_extent(a, alpha, o.h),
                                 std::max(frequency_extent(a, alpha), static_cast<double>(K)));
      grids[n] = grid_tag(grid);
      const auto F = build_F(a, alpha, o.h, grid);
      const auto h = build_F(CoefficientSeq::delta(), alpha, o.h, grid);
      const SampledFunction inputs[4] = {F, modulate_growth(F, alpha, true), modulate(h, static_cast<double>(K)),
                                         build_F(single(K), alpha, o.h, grid)};
      for (std::size_t j = 0; j < 4; ++j) {
        const auto nin = norms_of(inputs[j], in_keys, o.window);
        const auto nout = norms_of(modulate_growth(inputs[j], alpha), out_keys, o.window);
        for (auto i : members) {
          const auto& t = tuples[i];
          series[i][j][n] = nout.at({t.p, t.q, -t.s1, 0.0}) / nin.at({t.p, t.q, 0.0, t.s2});
        }
      }
    }
  }
  return assemble("thm1", tuples, series, sizes, grids, 1, o.window);
}

// sum_xi <xi>^{-s2} e^{2 pi i phi(xi)} f^(xi) dxi for every requested s2.
std::map<double, double> frequency_pairings(const SampledFunction& f, const std::set<double>& s2s,
                                            const std::function<double(double)>& phi) {
  const auto fh = fourier_transform(f);
  std::map<double, double> out;
  for (double s2 : s2s) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < fh.size(); ++m) {
      if (fh[m] == cplx(0.0)) continue;
      const double xi = fh.grid().coord(m);
      acc += std::pow(japanese(xi), -s2) * std::polar(1.0, kTwoPi * phi(xi)) * fh[m];
    }
    out[s2] = std::abs(acc * fh.grid().spacing);
  }
  return out;
}

// thm2 sweep probes, outputs localized by bounded cutoffs:
//   A1  Phi = phi(xi), input M_4 psi, output <x>^{-s1} on the plateau of radius N
//   A2  Phi = phi(xi), input the modulated train over 4..N+3, output on radius 1
//   B   Phi = <x>^{2-alpha}, input M_4 psi, output the chirp train over 4..N+3
std::vector<ExperimentRow> sweep_thm2(const std::vector<ExponentTuple>& tuples, const SweepOptions& o) {
  const auto& sizes = o.sizes;
  Series series = make_series(tuples.size(), 3, sizes.size());
  std::vector<std::string> grids(sizes.size());
  const PhaseSpec nsp = nonseparated_xi_phase(1);
  const auto phi = [&](double xi) {
    const double x[1] = {0.0}, z[1] = {xi};
    return nsp.eval(x, z);
  };
  const auto none = [](double) { return 0.0; };

  std::set<NormKey> plain, out_keys;
  std::set<double> s2s;
  for (const auto& t : tuples) {
    plain.insert({t.p, t.q, 0.0, 0.0});
    out_keys.insert({t.p, t.q, -t.s1, 0.0});
    s2s.insert(t.s2);
  }
  // the fixed input M_4 psi and the fixed output cutoff of radius 1
  const Bump fb = o.h;
  const Grid train_grid = fit_grid(1, 56.0, 4.0 + fb.radius, 8.0, 16.0);
  const auto psi4 = build_modulated_train(single(4), fb, train_grid);
  const auto psi_norm = norms_of(psi4, plain, o.window);
  const auto c_phi = frequency_pairings(psi4, s2s, phi);
  const auto c_zero = frequency_pairings(psi4, s2s, none);
  const Grid unit_grid = fit_grid(1, 2.0, 0.0, 8.0, 16.0);
  const auto cut1 = SampledFunction::from(unit_grid, [](std::span<const double> x) { return cplx(plateau(1.0)(x)); });
  const auto cut1_norm = norms_of(cut1, out_keys, o.window);

  for (std::size_t n = 0; n < sizes.size(); ++n) {
    const double N = static_cast<double>(sizes[n]);
    const long long K = static_cast<long long>(sizes[n]) + 3;
    const Grid cut_grid = fit_grid(1, 2.0 * N, 0.0, 8.0, 16.0);
    const auto cutN = SampledFunction::from(cut_grid, [&](std::span<const double> x) { return cplx(plateau(N)(x)); });
    const auto cutN_norm = norms_of(cutN, out_keys, o.window);

    const auto a = CoefficientSeq::range(4, K);
    const Grid tg = fit_grid(1, 56.0, static_cast<double>(K) + fb.radius, 8.0, 16.0);
    const auto train = build_modulated_train(a, fb, tg);
    const auto train_norm = norms_of(train, plain, o.window);
    const auto c_train = frequency_pairings(train, s2s, phi);

    std::string widest;
    std::size_t widest_size = 0;
    for (const auto& [alpha, members] : group_by<double>(tuples, [](const ExponentTuple& t) { return t.alpha; })) {
      const Bump g = plateau(0.25);
      const double kk[1] = {static_cast<double>(K)};
      const double fmax = std::abs(grad_mu(k_alpha(kk, alpha), alpha)[0]);
      const Grid cg = fit_grid(1, chirp_extent(alpha, g, 4, K), fmax, 8.0, 16.0);
      if (cg.size() > widest_size) {
        widest_size = cg.size();
        widest = grid_tag(cg);
      }
      std::set<NormKey> keys;
      for (auto i : members) keys.insert({tuples[i].p, tuples[i].q, -tuples[i].s1, 0.0});
      const auto chirp_norm = norms_of(build_chirp_train(alpha, g, 4, K, cg), keys, o.window);
      for (auto i : members) {
        const auto& t = tuples[i];
        const NormKey pk{t.p, t.q, 0.0, 0.0}, ok{t.p, t.q, -t.s1, 0.0};
        series[i][0][n] = cutN_norm.at(ok) * c_phi.at(t.s2) / psi_norm.at(pk);
        series[i][1][n] = cut1_norm.at(ok) * c_train.at(t.s2) / train_norm.at(pk);
        series[i][2][n] = chirp_norm.at(ok) * c_zero.at(t.s2) / psi_norm.at(pk);
      }
    }
    grids[n] = widest;
  }
  return assemble("thm2", tuples, series, sizes, grids, 2, o.window);
}

// thm3 sweep through the unimodular pieces of a separable high-growth phase:
//   x probe   e^{i <x>^{2+t1}} on chi(. - k) and back, output weighted by <x>^{-s1}
//   xi probe  e^{i <D>^{2+t2}} on F^{-1} chi(. - k) and back, input weighted by <xi>^{s2}
// with k = N and chi the plateau of radius 1. The loss comes from the local
// chirp rate ~ k^t acting across the probe, so the probe has to be wider
// than the window.
std::vector<ExperimentRow> sweep_thm3(const std::vector<ExponentTuple>& tuples, const SweepOptions& o) {
  const auto& sizes = o.sizes;
  Series series = make_series(tuples.size(), 4, sizes.size());
  std::vector<std::string> grids(sizes.size());
  std::vector<std::size_t> widest(sizes.size(), 0);
  const Bump chi = plateau(1.0);
  const auto note_grid = [&](std::size_t n, const Grid& g) {
    if (g.size() > widest[n]) {
      widest[n] = g.size();
      grids[n] = grid_tag(g);
    }
  };

  for (const auto& [t1, members] : group_by<double>(tuples, [](const ExponentTuple& t) { return t.t1; })) {
    std::set<NormKey> in_keys, out_keys;
    for (auto i : members) {
      in_keys.insert({tuples[i].p, tuples[i].p, 0.0, 0.0});
      out_keys.insert({tuples[i].p, tuples[i].p, -tuples[i].s1, 0.0});
    }
    const auto chirp = [t1 = t1](const SampledFunction& f, double sign) {
      std::vector<cplx> out = f.data();
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (out[j] == cplx(0.0)) continue;
        const double x = f.grid().coord(j);
        out[j] *= std::polar(1.0, sign * std::pow(japanese(x), 2.0 + t1));
      }
      return SampledFunction(f.grid(), std::move(out));
    };
    for (std::size_t n = 0; n < sizes.size(); ++n) {
      const double k = static_cast<double>(sizes[n]);
      const double reach = k + chi.support_radius();
      const double fmax = (2.0 + t1) * std::pow(japanese(reach), 1.0 + t1) / kTwoPi;
      const Grid grid = fit_grid(1, reach, fmax);
      note_grid(n, grid);
      const auto hk = SampledFunction::from(grid, [&](std::span<const double> x) {
        const double u[1] = {x[0] - k};
        return cplx(chi(u));
      });
      const SampledFunction inputs[2] = {hk, chirp(hk, -1.0)};
      for (std::size_t j = 0; j < 2; ++j) {
        const auto nin = norms_of(inputs[j], in_keys, o.window);
        const auto nout = norms_of(chirp(inputs[j], 1.0), out_keys, o.window);
        for (auto i : members) {
          const auto& t = tuples[i];
          series[i][j][n] = nout.at({t.p, t.p, -t.s1, 0.0}) / nin.at({t.p, t.p, 0.0, 0.0});
        }
      }
    }
  }

  for (const auto& [t2, members] : group_by<double>(tuples, [](const ExponentTuple& t) { return t.t2; })) {
    std::set<NormKey> in_keys, out_keys;
    for (auto i : members) {
      in_keys.insert({tuples[i].p, tuples[i].p, 0.0, tuples[i].s2});
      out_keys.insert({tuples[i].p, tuples[i].p, 0.0, 0.0});
    }
    const RadialPart forward = [t2 = t2](std::span<const double> xi) { return std::pow(japanese(xi), 2.0 + t2); };
    const RadialPart backward = [t2 = t2](std::span<const double> xi) { return -std::pow(japanese(xi), 2.0 + t2); };
    for (std::size_t n = 0; n < sizes.size(); ++n) {
      const double k = static_cast<double>(sizes[n]);
      const double reach = k + chi.support_radius();
      // the output sits near x = -grad <xi>^{2+t2} / 2 pi over the support
      const double travel = (2.0 + t2) * std::pow(japanese(reach), t2) * reach / kTwoPi;
      const Grid grid = fit_grid(1, travel + 16.0, reach, 8.0, 16.0);
      note_grid(n, grid);
      const auto pk = inverse_fourier_transform(SampledFunction::from(grid.dual(), [&](std::span<const double> xi) {
        const double u[1] = {xi[0] - k};
        return cplx(chi(u));
      }));
      const SampledFunction inputs[2] = {pk, apply_multiplier(backward, pk)};
      for (std::size_t j = 0; j < 2; ++j) {
        const auto nin = norms_of(inputs[j], in_keys, o.window);
        const auto nout = norms_of(apply_multiplier(forward, inputs[j]), out_keys, o.window);
        for (auto i : members) {
          const auto& t = tuples[i];
          series[i][2 + j][n] = nout.at({t.p, t.p, 0.0, 0.0}) / nin.at({t.p, t.p, 0.0, t.s2});
        }
      }
    }
  }
  return assemble("thm3", tuples, series, sizes, grids, 3, o.window);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

OperatorHandle identity_operator() {
  return {"identity", [](const SampledFunction& f) { return f; }};
}

OperatorHandle growth_multiplication(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError(fmt::format("growth multiplication needs alpha in [0,2], got {}", alpha));
  return {fmt::format("e^(2 pi i <x>^{:g})", 2.0 - alpha),
          [alpha](const SampledFunction& f) { return modulate_growth(f, alpha); }};
}

OperatorHandle unimodular_multiplier(std::string name, RadialPart mu) {
  return {std::move(name), [mu = std::move(mu)](const SampledFunction& f) { return apply_multiplier(mu, f); }};
}

OperatorHandle fio_operator(SymbolSpec sigma, PhaseSpec phase, FioOptions options) {
  std::string name = fmt::format("T[{},{}]", sigma.name, phase.name);
  return {std::move(name), [sigma = std::move(sigma), phase = std::move(phase), options](const SampledFunction& f) {
            return apply_fio(sigma, phase, f, options);
          }};
}

std::vector<std::string> family_names() { return {"bump", "lattice-F", "lattice", "modulated-train", "random"}; }

Family make_family(const FamilySpec& spec, std::size_t N) {
  spec.h.validate();
  if (N == 0) throw ValidationError("family size must be positive");
  const long long K = static_cast<long long>(N) + 3;
  Family fam;
  if (spec.name == "bump") {
    fam.grid = fit_grid(1, spec.h.support_radius(), 0.0);
    fam.members.push_back(build_F(CoefficientSeq::delta(), 0.0, spec.h, fam.grid));
  } else if (spec.name == "lattice-F" || spec.name == "lattice") {
    const auto a = CoefficientSeq::range(4, K);
    fam.grid = fit_grid(1, support_extent(a, spec.alpha, spec.h),
                        std::max(frequency_extent(a, spec.alpha), static_cast<double>(K)));
    const auto F = build_F(a, spec.alpha, spec.h, fam.grid);
    fam.members.push_back(F);
    if (spec.name == "lattice") {
      fam.members.push_back(modulate_growth(F, spec.alpha, true));
      fam.members.push_back(modulate(build_F(CoefficientSeq::delta(), spec.alpha, spec.h, fam.grid), static_cast<double>(K)));
      fam.members.push_back(build_F(single(K), spec.alpha, spec.h, fam.grid));
    }
  } else if (spec.name == "modulated-train") {
    fam.grid = fit_grid(1, 56.0, static_cast<double>(K) + spec.h.radius, 8.0, 16.0);
    fam.members.push_back(build_modulated_train(CoefficientSeq::range(4, K), spec.h, fam.grid));
  } else if (spec.name == "random") {
    fam.grid = Grid::symmetric(1, 1024, 16.0);
    Rng rng(spec.seed);
    for (std::size_t m = 0; m < N; ++m) {
      std::vector<cplx> v(fam.grid.size(), cplx(0.0));
      for (int piece = 0; piece < 3; ++piece) {
        const double x0 = rng.uniform(-6.0, 6.0), xi0 = rng.uniform(-4.0, 4.0), w = rng.uniform(0.7, 2.0);
        const cplx c(rng.normal(), rng.normal());
        for (std::size_t j = 0; j < v.size(); ++j) {
          const double x = fam.grid.coord(j), u = (x - x0) / w;
          v[j] += c * std::exp(-kPi * u * u) * std::polar(1.0, kTwoPi * xi0 * x);
        }
      }
      fam.members.emplace_back(fam.grid, std::move(v));
    }
  } else {
    throw ValidationError(fmt::format("unknown family '{}'", spec.name));
  }
  return fam;
}

double estimate_operator_ratio(const OperatorHandle& T, const SpaceSpec& in_space, const SpaceSpec& out_space,
                               const std::vector<SampledFunction>& family) {
  if (family.empty()) throw ValidationError("estimate_operator_ratio: empty family");
  double best = 0.0;
  bool any = false;
  for (const auto& f : family) {
    const double nin = modulation_norm(f, in_space);
    if (!(nin > 0.0)) continue;
    any = true;
    best = std::max(best, modulation_norm(T.apply(f), out_space) / nin);
  }
  if (!any) throw ValidationError("estimate_operator_ratio: every family member has zero norm");
  return best;
}

double estimate_operator_ratio(const OperatorHandle& T, const SpaceSpec& in_space, const SpaceSpec& out_space,
                               const FamilySpec& family, std::size_t N) {
  const Family fam = make_family(family, N);
  SpaceSpec in = in_space, out = out_space;
  in.resolution = family_resolution(fam.grid);
  out.resolution = in.resolution;
  return estimate_operator_ratio(T, in, out, fam.members);
}

std::string verdict_name(Verdict v) { return v == Verdict::bounded ? "predicted-bounded" : "predicted-unbounded"; }

Verdict parse_verdict(const std::string& text) {
  if (text == "predicted-bounded") return Verdict::bounded;
  if (text == "predicted-unbounded") return Verdict::unbounded;
  throw ValidationError(fmt::format("unknown verdict '{}'", text));
}

std::string observed_name(Observed o) {
  switch (o) {
  case Observed::bounded: return "bounded";
  case Observed::unbounded: return "unbounded";
  case Observed::inconclusive: break;
  }
  return "inconclusive";
}

Observed parse_observed(const std::string& text) {
  if (text == "bounded") return Observed::bounded;
  if (text == "unbounded") return Observed::unbounded;
  if (text == "inconclusive") return Observed::inconclusive;
  throw ValidationError(fmt::format("unknown observation '{}'", text));
}

Observed classify_growth(double exponent) {
  if (exponent >= 0.15) return Observed::unbounded;
  if (exponent < 0.1) return Observed::bounded;
  return Observed::inconclusive;
}

bool ExperimentRow::operator==(const ExperimentRow& o) const {
  const bool growth_eq = (std::isnan(growth_exponent) && std::isnan(o.growth_exponent)) || growth_exponent == o.growth_exponent;
  return experiment == o.experiment && tuple == o.tuple && N == o.N && ratio == o.ratio && verdict == o.verdict &&
         growth_eq && observed == o.observed && grid == o.grid && window == o.window;
}

bool predicted_bounded(int theorem, const ExponentTuple& t) {
  switch (theorem) {
  case 1: return thm1_predicate(t.p, t.q, t.s1, t.s2, t.alpha, t.d);
  case 2: return thm2_predicate(t.p, t.q, t.s1, t.s2, t.alpha, t.d);
  case 3: return thm3_predicate(t.p, t.s1, t.s2, t.t1, t.t2, t.d);
  default: break;
  }
  throw ValidationError(fmt::format("theorem must be 1, 2 or 3, got {}", theorem));
}

double threshold_distance(int theorem, const ExponentTuple& t) {
  const double ip = inv(t.p), iq = inv(t.q), d = t.d, a = t.alpha;
  double dist = kInf;
  const auto near = [&](double v) { dist = std::min(dist, std::abs(v)); };
  switch (theorem) {
  case 1:
    near(t.s1);
    near(t.s2);
    if (a < 1.0) {
      if (iq > ip) near(t.s1 - d * (1.0 - a) * (iq - ip));
      if (ip > iq) near(t.s1 + (1.0 - a) * t.s2 - d * (1.0 - a) * (ip - iq));
    }
    return dist;
  case 2:
    near(t.s1 - d * ip);
    near(t.s2 - d * (1.0 - iq));
    if (a < 1.0) near(t.s1 - (a * d * ip + (1.0 - a) * d * iq));
    return dist;
  case 3:
    near(t.s1 - d * t.t1 * std::abs(ip - 0.5));
    near(t.s2 - d * t.t2 * std::abs(ip - 0.5));
    return dist;
  default: break;
  }
  throw ValidationError(fmt::format("theorem must be 1, 2 or 3, got {}", theorem));
}

std::vector<ExponentTuple> default_tuples(int theorem) {
  std::vector<ExponentTuple> out;
  const double ps[3] = {1.0, 2.0, kInf};
  switch (theorem) {
  case 1:
    for (double alpha : {0.0, 0.25, 0.5})
      for (double p : ps)
        for (double q : ps)
          for (double s1 : {0.15, 0.4, 0.8})
            for (double s2 : {0.15, 0.6}) out.push_back({p, q, s1, s2, alpha, 0.0, 0.0, 1});
    return out;
  case 2:
    for (double alpha : {0.0, 0.25, 0.5})
      for (double p : ps)
        for (double q : ps)
          for (double s1 : {0.2, 0.75, 1.3})
            for (double s2 : {0.25, 1.3}) out.push_back({p, q, s1, s2, alpha, 0.0, 0.0, 1});
    return out;
  case 3:
    for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0, kInf})
      for (auto [t1, t2] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}, std::pair{1.0, 1.0}})
        for (double s1 : {0.1, 0.375, 0.7})
          for (double s2 : {0.1, 0.375, 0.7}) out.push_back({p, p, s1, s2, 0.0, t1, t2, 1});
    return out;
  default: break;
  }
  throw ValidationError(fmt::format("theorem must be 1, 2 or 3, got {}", theorem));
}

std::vector<std::size_t> default_sizes() { return {4, 8, 16, 32}; }

std::vector<ExperimentRow> threshold_sweep(int theorem, const std::vector<ExponentTuple>& tuples,
                                           const SweepOptions& options) {
  if (tuples.empty()) throw ValidationError("threshold_sweep: no tuples");
  if (options.sizes.empty()) throw ValidationError("threshold_sweep: no family sizes");
  for (std::size_t i = 0; i < options.sizes.size(); ++i) {
    if (options.sizes[i] == 0 || (i > 0 && options.sizes[i] <= options.sizes[i - 1]))
      throw ValidationError("threshold_sweep: sizes must be positive and increasing");
  }
  options.h.validate();
  check_tuples(theorem, tuples);
  switch (theorem) {
  case 1: return sweep_thm1(tuples, options);
  case 2: return sweep_thm2(tuples, options);
  default: return sweep_thm3(tuples, options);
  }
}

SeparationSummary summarize(int theorem, const std::vector<ExperimentRow>& rows, double band) {
  SeparationSummary s;
  std::vector<double> b, u;
  std::vector<ExponentTuple> seen;
  for (const auto& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.tuple) != seen.end()) continue;
    seen.push_back(r.tuple);
    if (threshold_distance(theorem, r.tuple) < band || std::isnan(r.growth_exponent)) {
      ++s.excluded;
      continue;
    }
    (r.verdict == Verdict::bounded ? b : u).push_back(r.growth_exponent);
  }
  s.bounded = b.size();
  s.unbounded = u.size();
  s.median_bounded = median(b);
  s.median_unbounded = median(u);
  s.gap = s.median_unbounded - s.median_bounded;
  if (!b.empty())
    s.bounded_fit_fraction =
        static_cast<double>(std::count_if(b.begin(), b.end(), [](double e) { return e < 0.1; })) / static_cast<double>(b.size());
  return s;
}

} // namespace fiolab
