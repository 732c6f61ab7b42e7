#include "fiolab/csv.hpp"
#include "fiolab/errors.hpp"
#include "fiolab/experiments.hpp"
#include "fiolab/fio.hpp"
#include "fiolab/phase.hpp"
#include "fiolab/spaces.hpp"
#include "fiolab/tfr.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace fiolab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct Globals {
  std::size_t grid_n = 256;
  double grid_L = 8.0;
  std::string window = "gaussian";
  double eps = 0.5;
  std::uint64_t seed = 1;
  std::string out;
};

// "kind=mild_growth,alpha=0.5" -> kind and numeric parameters
std::pair<std::string, std::map<std::string, double>> parse_spec(const std::string& text, const char* what) {
  std::string kind;
  std::map<std::string, double> params;
  for (const auto& item : split_csv_line(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      if (!kind.empty()) throw ValidationError(fmt::format("{}: '{}' is not key=value", what, item));
      kind = item;
      continue;
    }
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "kind") {
      kind = value;
      continue;
    }
    try {
      std::size_t used = 0;
      params[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw ValidationError(fmt::format("{}: '{}' needs a number, got '{}'", what, key, value));
    }
  }
  if (kind.empty()) throw ValidationError(fmt::format("{}: no kind given in '{}'", what, text));
  return {kind, params};
}

std::string no_commas(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

// Input CSV when given, otherwise a unit Gaussian on the --grid-n/--grid-L box.
SampledFunction load_input(const std::string& path, const Globals& g) {
  if (path.empty()) {
    const Grid grid = Grid::symmetric(1, g.grid_n, g.grid_L);
    return SampledFunction::from(grid, [](std::span<const double> x) { return cplx(std::exp(-kPi * x[0] * x[0])); });
  }
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open input '{}'", path));
  return read_sampled_function(in);
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw ResourceError(fmt::format("cannot write '{}'", g.out));
  out << text;
  if (!out) throw ResourceError(fmt::format("write to '{}' failed", g.out));
}

template <class Writer>
std::string to_text(Writer&& write) {
  std::ostringstream s;
  s.precision(17);
  write(s);
  return s.str();
}

std::string bool_name(bool b) { return b ? "true" : "false"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency norms, Fourier integral operators and threshold sweeps"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain key=value lines; subcommand keys as <sub>.<key>");
  Globals g;
  app.add_option("--grid-n", g.grid_n, "Samples per axis for generated inputs (power of two)")->capture_default_str();
  app.add_option("--grid-L", g.grid_L, "Half-width of the generated box")->capture_default_str();
  app.add_option("--window", g.window, "Window: gaussian or bump")->capture_default_str();
  app.add_option("--eps", g.eps, "Slack exponent in the v_{d+eps} weights")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for generated families")->capture_default_str();
  app.add_option("--out", g.out, "Output file (stdout when empty)");
  app.fallthrough();

  // stft
  auto* stft_cmd = app.add_subcommand("stft", "Short-time Fourier transform of a sampled function, as CSV");
  std::string stft_input;
  StftOptions stft_opts;
  stft_cmd->add_option("--input", stft_input, "Sampled-function CSV");
  stft_cmd->add_option("--stride", stft_opts.stride, "Shift step in samples")->capture_default_str();
  stft_cmd->add_option("--radius", stft_opts.window_radius, "Window radius; 0 uses the full box")->capture_default_str();

  // norm
  auto* norm_cmd = app.add_subcommand("norm", "Weighted modulation or amalgam norm, as a CSV row");
  std::string norm_input, p_text = "2", q_text = "2", kind_text = "modulation";
  double ws = 0.0, wt = 0.0, norm_radius = 0.0;
  std::size_t norm_stride = 1;
  norm_cmd->add_option("--input", norm_input, "Sampled-function CSV");
  norm_cmd->add_option("-p,--p", p_text, "Exponent in x (number or inf)")->capture_default_str();
  norm_cmd->add_option("-q,--q", q_text, "Exponent in xi (number or inf)")->capture_default_str();
  norm_cmd->add_option("--s", ws, "Weight exponent on <x>")->capture_default_str();
  norm_cmd->add_option("--t", wt, "Weight exponent on <xi>")->capture_default_str();
  norm_cmd->add_option("--kind", kind_text, "modulation or amalgam")->capture_default_str();
  norm_cmd->add_option("--stride", norm_stride, "Shift step in samples")->capture_default_str();
  norm_cmd->add_option("--radius", norm_radius, "Window radius; 0 uses the full box")->capture_default_str();

  // apply
  auto* apply_cmd = app.add_subcommand("apply", "Apply a Fourier integral operator to a sampled function");
  std::string symbol_text = "kind=unit", phase_text = "kind=bilinear", apply_input, apply_output, path_text = "auto";
  apply_cmd->add_option("--symbol", symbol_text, "e.g. kind=bracket,s1=0.5,s2=0")->capture_default_str();
  apply_cmd->add_option("--phase", phase_text, "e.g. kind=mild_growth,alpha=0.5")->capture_default_str();
  apply_cmd->add_option("--input", apply_input, "Sampled-function CSV");
  apply_cmd->add_option("--output", apply_output, "Output CSV (overrides --out)");
  apply_cmd->add_option("--path", path_text, "auto, fast or direct")->capture_default_str();

  // check
  auto* check_cmd = app.add_subcommand("check", "Evaluate a boundedness predicate or verify a phase");
  std::string check_what = "thm1", cp_text = "2", cq_text = "2", check_phase;
  ExponentTuple ct;
  check_cmd->add_option("--predicate", check_what, "thm1, thm2, thm3 or embedding")->capture_default_str();
  check_cmd->add_option("-p,--p", cp_text, "p (embedding: q1)")->capture_default_str();
  check_cmd->add_option("-q,--q", cq_text, "q (embedding: q2)")->capture_default_str();
  check_cmd->add_option("--s1", ct.s1)->capture_default_str();
  check_cmd->add_option("--s2", ct.s2)->capture_default_str();
  check_cmd->add_option("--alpha", ct.alpha)->capture_default_str();
  check_cmd->add_option("--t1", ct.t1)->capture_default_str();
  check_cmd->add_option("--t2", ct.t2)->capture_default_str();
  check_cmd->add_option("--d", ct.d)->capture_default_str();
  check_cmd->add_option("--phase", check_phase, "Verify a phase's declared growth instead, e.g. kind=high_growth,t1=1,t2=0");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a threshold sweep and write the report CSV");
  int theorem = 1;
  std::vector<std::size_t> sizes = default_sizes();
  std::size_t limit = 0;
  sweep_cmd->add_option("--theorem", theorem, "1, 2 or 3")->capture_default_str();
  sweep_cmd->add_option("--sizes", sizes, "Family sizes N")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--limit", limit, "Keep only the first tuples of the default grid (0 keeps all)");

  // report
  auto* report_cmd = app.add_subcommand("report", "Re-emit a sweep CSV as CSV or SVG and print the separation summary");
  std::string report_input, format_text = "svg";
  report_cmd->add_option("--input", report_input, "Sweep CSV")->required();
  report_cmd->add_option("--format", format_text, "csv or svg")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const WindowId window = parse_window(g.window);
    if (!std::isfinite(g.eps) || g.eps <= 0.0) throw DomainError("--eps must be positive");

    if (*stft_cmd) {
      const auto f = load_input(stft_input, g);
      const auto V = stft(f, make_window(window, f.grid()), stft_opts);
      emit(g, to_text([&](std::ostream& s) { write_csv(s, V); }));
    } else if (*norm_cmd) {
      const auto f = load_input(norm_input, g);
      SpaceSpec spec;
      spec.p = parse_exponent(p_text);
      spec.q = parse_exponent(q_text);
      spec.weight = Weight{ws, wt, f.grid().dim};
      if (kind_text == "modulation") {
        spec.kind = SpaceKind::modulation;
      } else if (kind_text == "amalgam") {
        spec.kind = SpaceKind::amalgam;
      } else {
        throw ValidationError(fmt::format("--kind must be modulation or amalgam, got '{}'", kind_text));
      }
      spec.window = window;
      spec.resolution.stride = norm_stride;
      spec.resolution.window_radius = norm_radius;
      const double value = modulation_norm(f, spec);
      emit(g, fmt::format("space,window,grid,value\n{},{},{},{}\n", no_commas(spec.describe()), window_name(window),
                          no_commas(f.grid().describe()), value));
    } else if (*apply_cmd) {
      const auto [skind, sparams] = parse_spec(symbol_text, "--symbol");
      const auto [pkind, pparams] = parse_spec(phase_text, "--phase");
      FioOptions opts;
      if (path_text == "fast") {
        opts.path = FioPath::fast;
      } else if (path_text == "direct") {
        opts.path = FioPath::direct;
      } else if (path_text != "auto") {
        throw ValidationError(fmt::format("--path must be auto, fast or direct, got '{}'", path_text));
      }
      const auto f = load_input(apply_input, g);
      const auto u = apply_fio(make_symbol(skind, sparams), make_phase(pkind, pparams), f, opts);
      if (!apply_output.empty()) g.out = apply_output;
      emit(g, to_text([&](std::ostream& s) { write_csv(s, u); }));
    } else if (*check_cmd) {
      if (!check_phase.empty()) {
        const auto [pkind, pparams] = parse_spec(check_phase, "--phase");
        VerifyOptions opts;
        opts.eps = g.eps;
        const auto rows = verify_declared(make_phase(pkind, pparams), opts);
        emit(g, to_text([&](std::ostream& s) { write_csv(s, rows); }));
        return all_pass(rows) ? 0 : 1;
      }
      ct.p = parse_exponent(cp_text);
      ct.q = parse_exponent(cq_text);
      std::string row;
      if (check_what == "embedding") {
        row = fmt::format("predicate,q1,s1,q2,s2,d,holds\nembedding,{},{},{},{},{},{}\n", format_exponent(ct.p), ct.s1,
                          format_exponent(ct.q), ct.s2, ct.d, bool_name(embedding_holds(ct.p, ct.s1, ct.q, ct.s2, ct.d)));
      } else if (check_what.size() == 4 && check_what.rfind("thm", 0) == 0 && check_what[3] >= '1' && check_what[3] <= '3') {
        const int th = check_what[3] - '0';
        row = fmt::format("predicate,p,q,s1,s2,alpha,t1,t2,d,verdict,threshold_distance\n{},{},{},{},{},{},{},{},{},{},{}\n",
                          check_what, format_exponent(ct.p), format_exponent(ct.q), ct.s1, ct.s2, ct.alpha, ct.t1, ct.t2,
                          ct.d, verdict_name(predicted_bounded(th, ct) ? Verdict::bounded : Verdict::unbounded),
                          threshold_distance(th, ct));
      } else {
        throw ValidationError(fmt::format("--predicate must be thm1, thm2, thm3 or embedding, got '{}'", check_what));
      }
      emit(g, row);
    } else if (*sweep_cmd) {
      auto tuples = default_tuples(theorem);
      if (limit > 0 && limit < tuples.size()) tuples.resize(limit);
      SweepOptions opts;
      opts.window = window;
      opts.seed = g.seed;
      opts.sizes = sizes;
      emit(g, emit_report(threshold_sweep(theorem, tuples, opts), ReportFormat::csv));
    } else if (*report_cmd) {
      std::ifstream in(report_input, std::ios::binary);
      if (!in) throw ValidationError(fmt::format("cannot open input '{}'", report_input));
      std::ostringstream text;
      text << in.rdbuf();
      const auto rows = parse_report_csv(text.str());
      ReportFormat format;
      if (format_text == "csv") {
        format = ReportFormat::csv;
      } else if (format_text == "svg") {
        format = ReportFormat::svg;
      } else {
        throw ValidationError(fmt::format("--format must be csv or svg, got '{}'", format_text));
      }
      emit(g, emit_report(rows, format));
      for (const std::string name : {"thm1", "thm2", "thm3"}) {
        std::vector<ExperimentRow> part;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(part), [&](const auto& r) { return r.experiment == name; });
        if (part.empty()) continue;
        const auto s = summarize(name[3] - '0', part);
        std::cerr << fmt::format("{}: bounded {} unbounded {} excluded {} median gap {:.3f} bounded fits < 0.1: {:.1f}%\n",
                                 name, s.bounded, s.unbounded, s.excluded, s.gap, 100.0 * s.bounded_fit_fraction);
      }
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return kExitResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
