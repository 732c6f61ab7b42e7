#include "fiolab/phase.hpp"

#include "fiolab/errors.hpp"
#include "fiolab/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>

namespace fiolab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// c <x>^a and its derivatives.
struct Bracket {
  double a = 2.0;
  double c = 1.0;

  double value(std::span<const double> x) const { return c * std::pow(japanese(x), a); }
  void grad(std::span<const double> x, std::span<double> out) const {
    const double j = japanese(x);
    const double f = c * a * std::pow(j, a - 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
  }
  // Adds c a <x>^{a-2} (I + (a-2) x x^T / <x>^2) into a d x d block.
  void add_hessian(std::span<const double> x, std::span<double> out) const {
    const double j2 = 1.0 + dot(x, x);
    const double f = c * a * std::pow(j2, 0.5 * (a - 2.0));
    const std::size_t d = x.size();
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = 0; s < d; ++s) out[r * d + s] += f * ((r == s ? 1.0 : 0.0) + (a - 2.0) * x[r] * x[s] / j2);
  }
};

void fill_zero(std::span<double> v) { std::fill(v.begin(), v.end(), 0.0); }

void add_identity(std::span<double> block, std::size_t d) {
  for (std::size_t r = 0; r < d; ++r) block[r * d + r] += 1.0;
}

void require_dim(int d) {
  if (d < 1 || d > 2) throw DomainError(fmt::format("phase dimension must be 1 or 2, got {}", d));
}

// Phi = mu(x) + nu(xi) + x.xi with bracket powers for mu and nu; missing
// parts have c = 0.
PhaseSpec separable_phase(std::string name, int d, Bracket mu, Bracket nu, bool bilinear) {
  require_dim(d);
  PhaseSpec p;
  p.name = std::move(name);
  p.d = d;
  const double lin = bilinear ? 1.0 : 0.0;
  p.eval = [=](std::span<const double> x, std::span<const double> xi) {
    double v = lin * dot(x, xi);
    if (mu.c != 0.0) v += mu.value(x);
    if (nu.c != 0.0) v += nu.value(xi);
    return v;
  };
  p.grad = [=](std::span<const double> x, std::span<const double> xi, std::span<double> gx, std::span<double> gxi) {
    fill_zero(gx);
    fill_zero(gxi);
    if (mu.c != 0.0) mu.grad(x, gx);
    if (nu.c != 0.0) nu.grad(xi, gxi);
    for (std::size_t i = 0; i < x.size(); ++i) {
      gx[i] += lin * xi[i];
      gxi[i] += lin * x[i];
    }
  };
  p.hessian = [=](std::span<const double> x, std::span<const double> xi, std::span<double> hxx,
                  std::span<double> hxxi, std::span<double> hxixi) {
    fill_zero(hxx);
    fill_zero(hxxi);
    fill_zero(hxixi);
    if (mu.c != 0.0) mu.add_hessian(x, hxx);
    if (nu.c != 0.0) nu.add_hessian(xi, hxixi);
    if (bilinear) add_identity(hxxi, x.size());
  };
  if (bilinear) {
    p.separable = true;
    if (mu.c != 0.0) p.mu = [=](std::span<const double> x) { return mu.value(x); };
    if (nu.c != 0.0) p.nu = [=](std::span<const double> xi) { return nu.value(xi); };
  }
  return p;
}

std::string num(double v) { return fmt::format("{:g}", v); }

// Points of the sample grid linspace(-L, L, m)^d, flattened.
std::vector<Vec> box_points(double L, std::size_t m, int d) {
  if (m < 2) throw ValidationError("box needs at least 2 samples per axis");
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("box half-width must be positive and finite");
  Vec axis(m);
  for (std::size_t i = 0; i < m; ++i) axis[i] = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(m - 1);
  std::vector<Vec> out;
  if (d == 1) {
    for (double a : axis) out.push_back({a});
  } else {
    for (double a : axis)
      for (double b : axis) out.push_back({a, b});
  }
  return out;
}

double max_growth(const Vec& values) {
  constexpr double tiny = 1e-12;
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) worst = std::max(worst, (values[i] + tiny) / (values[i - 1] + tiny));
  return worst;
}

} // namespace

std::string regime_name(Regime r) {
  switch (r) {
  case Regime::low: return "low";
  case Regime::mild: return "mild";
  case Regime::critical: return "critical";
  case Regime::high: return "high";
  case Regime::other: return "other";
  }
  return "other";
}

void GrowthParams::validate() const {
  if (!alpha_minus_infinity && !(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError(fmt::format("alpha must lie in [0,1] or be -inf, got {}", alpha));
  if (!(t1 >= 0.0) || !(t2 >= 0.0) || !std::isfinite(t1) || !std::isfinite(t2))
    throw DomainError(fmt::format("t1, t2 must be finite and nonnegative, got {}, {}", t1, t2));
}

Regime GrowthParams::regime() const {
  const bool flat = t1 == 0.0 && t2 == 0.0;
  if (alpha_minus_infinity) return flat ? Regime::other : Regime::high;
  if (!flat) return Regime::other;
  if (alpha == 1.0) return Regime::low;
  if (alpha == 0.0) return Regime::critical;
  return Regime::mild;
}

std::string GrowthParams::describe() const {
  return fmt::format("alpha={},t1={},t2={}", alpha_minus_infinity ? std::string("-inf") : num(alpha), num(t1), num(t2));
}

Vec PhaseSpec::grad_x(std::span<const double> x, std::span<const double> xi) const {
  Vec gx(x.size()), gxi(x.size());
  grad(x, xi, gx, gxi);
  return gx;
}

Vec PhaseSpec::grad_xi(std::span<const double> x, std::span<const double> xi) const {
  Vec gx(x.size()), gxi(x.size());
  grad(x, xi, gx, gxi);
  return gxi;
}

PhaseSpec bilinear_phase(int d) {
  auto p = separable_phase("bilinear", d, {2.0, 0.0}, {2.0, 0.0}, true);
  p.declared = {1.0, false, 0.0, 0.0};
  return p;
}

PhaseSpec mild_growth_phase(double alpha, int d) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError(fmt::format("mild_growth needs alpha in [0,1], got {}", alpha));
  auto p = separable_phase(fmt::format("mild_growth(alpha={})", num(alpha)), d, {2.0 - alpha, 1.0}, {2.0, 0.0}, true);
  p.declared = {alpha, false, 0.0, 0.0};
  return p;
}

PhaseSpec nonseparated_x_phase(double alpha, int d) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError(fmt::format("nonseparated_x needs alpha in [0,1], got {}", alpha));
  auto p = separable_phase(fmt::format("nonseparated_x(alpha={})", num(alpha)), d, {2.0 - alpha, 1.0}, {2.0, 0.0}, false);
  p.declared = {alpha, false, 0.0, 0.0};
  p.declared_separated_x = false;
  p.declared_separated_xi = false;
  return p;
}

PhaseSpec nonseparated_xi_phase(int d, double amplitude) {
  require_dim(d);
  if (!std::isfinite(amplitude)) throw ValidationError("amplitude must be finite");
  PhaseSpec p;
  p.name = fmt::format("nonseparated_xi(amplitude={})", num(amplitude));
  p.d = d;
  // psi = exp(-1/u), u = 1 - |xi|^2; every derivative vanishes at u = 0.
  p.eval = [=](std::span<const double>, std::span<const double> xi) {
    const double u = 1.0 - dot(xi, xi);
    return u > 0.0 ? amplitude * std::exp(-1.0 / u) : 0.0;
  };
  p.grad = [=](std::span<const double>, std::span<const double> xi, std::span<double> gx, std::span<double> gxi) {
    fill_zero(gx);
    fill_zero(gxi);
    const double u = 1.0 - dot(xi, xi);
    if (u <= 0.0) return;
    const double psi = amplitude * std::exp(-1.0 / u);
    for (std::size_t i = 0; i < xi.size(); ++i) gxi[i] = -2.0 * xi[i] / (u * u) * psi;
  };
  p.hessian = [=](std::span<const double>, std::span<const double> xi, std::span<double> hxx, std::span<double> hxxi,
                  std::span<double> hxixi) {
    fill_zero(hxx);
    fill_zero(hxxi);
    fill_zero(hxixi);
    const double u = 1.0 - dot(xi, xi);
    if (u <= 0.0) return;
    const double psi = amplitude * std::exp(-1.0 / u);
    const std::size_t n = xi.size();
    const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        hxixi[r * n + s] = psi * (4.0 * xi[r] * xi[s] / u4 - (r == s ? 2.0 / u2 : 0.0) - 8.0 * xi[r] * xi[s] / u3);
  };
  // grad_x vanishes, so the first-order clause holds for every alpha.
  p.declared = {1.0, false, 0.0, 0.0};
  p.declared_separated_x = false;
  p.declared_separated_xi = false;
  return p;
}

PhaseSpec high_growth_phase(double t1, double t2, int d) {
  if (!(t1 >= 0.0) || !(t2 >= 0.0)) throw DomainError("high_growth needs t1, t2 >= 0");
  auto p = separable_phase(fmt::format("high_growth(t1={},t2={})", num(t1), num(t2)), d, {2.0 + t1, 1.0 / kTwoPi},
                           {2.0 + t2, 1.0 / kTwoPi}, true);
  p.declared = GrowthParams::high(t1, t2);
  return p;
}

PhaseSpec with_declared(PhaseSpec phase, const GrowthParams& declared) {
  declared.validate();
  phase.name += fmt::format(" declared[{}]", declared.describe());
  phase.declared = declared;
  return phase;
}

PhaseSpec make_phase(const std::string& kind, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const int d = static_cast<int>(get("d", 1.0));
  if (kind == "bilinear") return bilinear_phase(d);
  if (kind == "mild_growth") return mild_growth_phase(get("alpha", 0.5), d);
  if (kind == "nonseparated_x") return nonseparated_x_phase(get("alpha", 0.5), d);
  if (kind == "nonseparated_xi") return nonseparated_xi_phase(d, get("amplitude", 0.25));
  if (kind == "high_growth") return high_growth_phase(get("t1", 1.0), get("t2", 0.0), d);
  throw ValidationError(fmt::format(
      "unknown phase '{}' (expected bilinear, mild_growth, nonseparated_x, nonseparated_xi, high_growth)", kind));
}

double growth_ratio_x(const PhaseSpec& phase, const GrowthParams& claim, const Box& box) {
  if (claim.alpha_minus_infinity) throw DomainError("growth_ratio_x is undefined for alpha = -inf");
  claim.validate();
  const auto xs = box_points(box.L, box.x_samples, phase.d);
  const auto xis = box_points(box.L, box.xi_samples, phase.d);
  const std::size_t d = static_cast<std::size_t>(phase.d);
  const Vec origin(d, 0.0);
  Vec g0(d), gx(d), scratch(d);
  double worst = 0.0;
  for (const auto& xi : xis) {
    phase.grad(origin, xi, g0, scratch);
    for (const auto& x : xs) {
      phase.grad(x, xi, gx, scratch);
      double gap = 0.0;
      for (std::size_t i = 0; i < d; ++i) gap += (gx[i] - g0[i]) * (gx[i] - g0[i]);
      worst = std::max(worst, std::sqrt(gap) / std::pow(japanese(x), 1.0 - claim.alpha));
    }
  }
  return worst;
}

SecondDerivativeBounds second_derivative_bounds(const PhaseSpec& phase, double t1, double t2, double eps, double L) {
  if (phase.d != 1) throw StructuralError("second_derivative_bounds is implemented for d = 1 only");
  if (!(t1 >= 0.0) || !(t2 >= 0.0)) throw DomainError("t1, t2 must be nonnegative");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(L >= 1.0) || !std::isfinite(L)) throw ValidationError("box half-width must be finite and at least 1");

  // Local patch of 64 samples at spacing 1/16 around each cell center.
  constexpr std::size_t n = 64;
  constexpr double h = 1.0 / 16.0;
  const PartitionSpec part{};
  Vec offs(n), eta(n), wt(n);
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < n; ++j) {
    offs[j] = (static_cast<double>(j) - static_cast<double>(n / 2)) * h;
    eta[j] = part.eta1(offs[j]);
    if (eta[j] != 0.0) live.push_back(j);
    const double zeta = (static_cast<double>(j) - static_cast<double>(n / 2)) / (static_cast<double>(n) * h);
    wt[j] = std::pow(japanese(zeta), 1.0 + eps);
  }
  const std::size_t shape[2] = {n, n};
  const std::size_t axes[2] = {0, 1};
  std::vector<cplx> bufs[3];
  for (auto& b : bufs) b.assign(n * n, 0.0);

  const long long K = static_cast<long long>(std::floor(L));
  SecondDerivativeBounds out;
  double x[1], xi[1], hxx[1], hxxi[1], hxixi[1];
  for (long long k = -K; k <= K; ++k) {
    for (long long l = -K; l <= K; ++l) {
      bool nonzero[3] = {false, false, false};
      for (std::size_t i : live) {
        x[0] = static_cast<double>(k) + offs[i];
        const double wx = std::pow(japanese(x[0]), -t1);
        for (std::size_t j : live) {
          xi[0] = static_cast<double>(l) + offs[j];
          phase.hessian(x, xi, hxx, hxxi, hxixi);
          const double e = eta[i] * eta[j];
          const double vals[3] = {wx * hxx[0], std::pow(japanese(xi[0]), -t2) * hxixi[0], hxxi[0]};
          for (int b = 0; b < 3; ++b) {
            bufs[b][i * n + j] = e * vals[b];
            nonzero[b] = nonzero[b] || vals[b] != 0.0;
          }
        }
      }
      double* targets[3] = {&out.A, &out.B, &out.C};
      for (int b = 0; b < 3; ++b) {
        if (!nonzero[b]) continue;
        centered_dft(bufs[b], shape, axes, FftDirection::forward);
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) best = std::max(best, std::abs(bufs[b][i * n + j]) * wt[i] * wt[j]);
        *targets[b] = std::max(*targets[b], best * h * h);
        std::fill(bufs[b].begin(), bufs[b].end(), cplx(0.0));
      }
    }
  }
  return out;
}

double separation_margin(const PhaseSpec& phase, SeparationType type, const Box& box) {
  const auto xs = box_points(box.L, box.x_samples, phase.d);
  const auto shared = box_points(box.L, box.xi_samples, phase.d);
  const std::size_t d = static_cast<std::size_t>(phase.d);
  const std::size_t m = xs.size();
  std::vector<Vec> grads(m, Vec(d));
  Vec gx(d), gxi(d);
  double margin = kInf;
  for (const auto& other : shared) {
    for (std::size_t i = 0; i < m; ++i) {
      // x-type varies x with xi shared and reads grad_xi; the xi-type mirror
      // varies xi with x shared and reads grad_x.
      if (type == SeparationType::x) {
        phase.grad(xs[i], other, gx, gxi);
        grads[i] = gxi;
      } else {
        phase.grad(other, xs[i], gx, gxi);
        grads[i] = gx;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double dist = 0.0, gap = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          dist += (xs[i][a] - xs[j][a]) * (xs[i][a] - xs[j][a]);
          gap += (grads[i][a] - grads[j][a]) * (grads[i][a] - grads[j][a]);
        }
        if (dist >= 1.0 - 1e-12) margin = std::min(margin, std::sqrt(gap));
      }
    }
  }
  return margin;
}

SampledFunction2D taylor_remainder(const PhaseSpec& phase, std::span<const double> k, std::span<const double> l,
                                   std::size_t n) {
  const std::size_t d = static_cast<std::size_t>(phase.d);
  if (k.size() != d || l.size() != d) throw StructuralError("lattice point dimension does not match the phase");
  const Grid g = Grid::symmetric(phase.d, n, 1.0);
  const double base = phase.eval(k, l);
  Vec gx(d), gxi(d);
  phase.grad(k, l, gx, gxi);
  Vec xs(d), ys(d);
  return SampledFunction2D::from(g, g, [&](std::span<const double> x, std::span<const double> xi) {
    for (std::size_t i = 0; i < d; ++i) {
      xs[i] = x[i] + k[i];
      ys[i] = xi[i] + l[i];
    }
    return cplx(phase.eval(xs, ys) - base - dot(gx, x) - dot(gxi, xi), 0.0);
  });
}

Vec k_alpha(std::span<const double> k, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError(fmt::format("k_alpha needs alpha in [0,1), got {}", alpha));
  const double f = std::pow(japanese(k), alpha / (1.0 - alpha));
  Vec out(k.begin(), k.end());
  for (auto& v : out) v *= f;
  return out;
}

Vec grad_mu(std::span<const double> x, double alpha) {
  Vec out(x.size());
  Bracket{2.0 - alpha, 1.0}.grad(x, out);
  return out;
}

double sep_deviation(std::span<const double> k, double alpha) {
  if (std::all_of(k.begin(), k.end(), [](double v) { return v == 0.0; }))
    throw DomainError("sep_deviation is asymptotic and undefined at k = 0");
  const Vec ka = k_alpha(k, alpha);
  const Vec g = grad_mu(ka, alpha);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double e = g[i] - (2.0 - alpha) * k[i];
    s += e * e;
  }
  return std::sqrt(s);
}

double PartitionSpec::raw(double t) const {
  const double u = t / radius;
  const double v = 1.0 - u * u;
  return v > 0.0 ? std::exp(-1.0 / v) : 0.0;
}

double PartitionSpec::eta1(double t) const {
  if (!(radius > 0.5 && radius < 1.0)) throw DomainError("partition radius must lie in (1/2, 1)");
  const double r = raw(t);
  if (r == 0.0) return 0.0;
  double total = 0.0;
  const long long lo = static_cast<long long>(std::floor(t - radius));
  const long long hi = static_cast<long long>(std::ceil(t + radius));
  for (long long m = lo; m <= hi; ++m) total += raw(t - static_cast<double>(m));
  return r / total;
}

double PartitionSpec::eta(std::span<const double> x) const {
  double v = 1.0;
  for (double t : x) v *= eta1(t);
  return v;
}

double PartitionSpec::eta_k(std::span<const double> x, std::span<const double> k) const {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v *= eta1(x[i] - k[i]);
  return v;
}

double PartitionSpec::star(std::span<const double> x, std::span<const double> k) const {
  // Separable: the sum over the 3^d neighbour box factors per axis.
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0.0;
    for (int m = -1; m <= 1; ++m) s += eta1(x[i] - k[i] - m);
    v *= s;
  }
  return v;
}

std::vector<VerdictRow> verify_declared(const PhaseSpec& phase, const VerifyOptions& options) {
  const GrowthParams& g = phase.declared;
  g.validate();
  if (options.boxes.size() < 2) throw ValidationError("verification needs at least two nested boxes");
  const bool wide = phase.d == 1;
  std::vector<VerdictRow> rows;
  auto stability = [&](const std::string& label, const Vec& values) {
    const double growth = max_growth(values);
    rows.push_back({label, options.growth_limit, growth, growth < options.growth_limit});
  };

  if (!g.alpha_minus_infinity) {
    Vec ratios;
    for (double L : options.boxes) ratios.push_back(growth_ratio_x(phase, g, {L, wide ? 257u : 65u, wide ? 33u : 9u}));
    stability(fmt::format("growth_x[alpha={}]", num(g.alpha)), ratios);
  }

  Vec A, B, C;
  for (double L : options.boxes) {
    const auto b = second_derivative_bounds(phase, g.t1, g.t2, options.eps, L);
    A.push_back(b.A);
    B.push_back(b.B);
    C.push_back(b.C);
  }
  stability(fmt::format("hessian_xx[t1={}]", num(g.t1)), A);
  stability(fmt::format("hessian_xixi[t2={}]", num(g.t2)), B);
  stability("hessian_xxi", C);

  const Box sep{options.separation_box, wide ? 129u : 33u, wide ? 17u : 5u};
  const std::pair<SeparationType, bool> claims[2] = {{SeparationType::x, phase.declared_separated_x},
                                                     {SeparationType::xi, phase.declared_separated_xi}};
  for (const auto& [type, declared] : claims) {
    const double margin = separation_margin(phase, type, sep);
    const bool separated = margin >= options.separation_threshold;
    rows.push_back({fmt::format("separation_{}[{}]", type == SeparationType::x ? "x" : "xi",
                                declared ? "declared" : "not declared"),
                    options.separation_threshold, margin, separated == declared});
  }
  return rows;
}

bool all_pass(const std::vector<VerdictRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const VerdictRow& r) { return r.pass; });
}

void write_csv(std::ostream& out, const std::vector<VerdictRow>& rows) {
  out << "condition,threshold,measured,pass\n";
  for (const auto& r : rows)
    out << fmt::format("{},{:.17g},{:.17g},{}\n", r.condition, r.threshold, r.measured, r.pass ? "true" : "false");
}

} // namespace fiolab
