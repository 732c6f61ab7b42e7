#include "fiolab/csv.hpp"
#include "fiolab/errors.hpp"
#include "fiolab/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fiolab {

namespace {

constexpr std::size_t kColumns = 16;

double parse_double(const std::string& text, const char* what) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ValidationError(fmt::format("cannot parse {} '{}'", what, text));
  return v;
}

long long parse_integer(const std::string& text, const char* what) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ValidationError(fmt::format("cannot parse {} '{}'", what, text));
  return v;
}

// Shortest form that reads back to the same double.
std::string num(double v) { return std::isnan(v) ? "nan" : fmt::format("{}", v); }

std::string csv(const std::vector<ExperimentRow>& rows) {
  std::string out = report_header() + "\n";
  for (const auto& r : rows) {
    const auto& t = r.tuple;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.experiment, format_exponent(t.p),
                       format_exponent(t.q), num(t.s1), num(t.s2), num(t.alpha), num(t.t1), num(t.t2), t.d, r.N,
                       num(r.ratio), verdict_name(r.verdict), num(r.growth_exponent), observed_name(r.observed), r.grid,
                       r.window);
  }
  return out;
}

// One point per (experiment, tuple) at its fitted exponent, split into a
// series per verdict. Tuples without an exponent are left out.
std::string svg(const std::vector<ExperimentRow>& rows) {
  struct Point {
    std::size_t index;
    double y;
  };
  std::vector<Point> series[2];
  std::vector<std::pair<std::string, ExponentTuple>> seen;
  for (const auto& r : rows) {
    const std::pair key{r.experiment, r.tuple};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    if (std::isnan(r.growth_exponent)) continue;
    series[r.verdict == Verdict::bounded ? 0 : 1].push_back({seen.size() - 1, r.growth_exponent});
  }

  double lo = -0.2, hi = 0.6;
  for (const auto& s : series)
    for (const auto& p : s) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
  const double width = 640.0, height = 400.0, pad = 48.0;
  const double count = static_cast<double>(std::max<std::size_t>(seen.size(), 2) - 1);
  const auto px = [&](std::size_t i) { return pad + (width - 2.0 * pad) * static_cast<double>(i) / count; };
  const auto py = [&](double y) { return height - pad - (height - 2.0 * pad) * (y - lo) / (hi - lo); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", width, height,
      width, height);
  out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", pad, height - pad, width - pad,
                     height - pad);
  out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", pad, pad, pad, height - pad);
  for (double level : {0.1, 0.15}) {
    out += fmt::format(
        "<line class=\"threshold\" x1=\"{}\" y1=\"{:.3f}\" x2=\"{}\" y2=\"{:.3f}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
        pad, py(level), width - pad, py(level));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">fitted growth exponent per tuple</text>\n", pad, pad - 16);
  const char* names[2] = {"predicted-bounded", "predicted-unbounded"};
  const char* colors[2] = {"#1f77b4", "#d62728"};
  for (int s = 0; s < 2; ++s) {
    out += fmt::format("<g class=\"series\" id=\"{}\" fill=\"{}\">\n", names[s], colors[s]);
    for (const auto& p : series[s]) out += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\"/>\n", px(p.index), py(p.y));
    out += "</g>\n";
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{} ({})</text>\n", width - 220.0,
                       pad + 16.0 * s, colors[s], names[s], series[s].size());
  }
  out += "</svg>\n";
  return out;
}

} // namespace

std::string report_header() {
  return "experiment,p,q,s1,s2,alpha,t1,t2,d,N,ratio,verdict,growth_exponent,observed,grid,window";
}

std::string emit_report(const std::vector<ExperimentRow>& rows, ReportFormat format) {
  if (rows.empty()) throw ValidationError("emit_report: no rows");
  for (const auto& r : rows) {
    if (r.grid.find(',') != std::string::npos || r.experiment.find(',') != std::string::npos)
      throw ValidationError("emit_report: fields must not contain commas");
  }
  return format == ReportFormat::csv ? csv(rows) : svg(rows);
}

std::vector<ExperimentRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != report_header()) throw ValidationError("report: missing or wrong header");
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kColumns) throw ValidationError(fmt::format("report: expected {} fields, got {}", kColumns, f.size()));
    ExperimentRow r;
    r.experiment = f[0];
    r.tuple.p = parse_exponent(f[1]);
    r.tuple.q = parse_exponent(f[2]);
    r.tuple.s1 = parse_double(f[3], "s1");
    r.tuple.s2 = parse_double(f[4], "s2");
    r.tuple.alpha = parse_double(f[5], "alpha");
    r.tuple.t1 = parse_double(f[6], "t1");
    r.tuple.t2 = parse_double(f[7], "t2");
    r.tuple.d = static_cast<int>(parse_integer(f[8], "d"));
    const long long N = parse_integer(f[9], "N");
    if (N < 0) throw ValidationError("report: negative N");
    r.N = static_cast<std::size_t>(N);
    r.ratio = parse_double(f[10], "ratio");
    r.verdict = parse_verdict(f[11]);
    r.growth_exponent = parse_double(f[12], "growth_exponent");
    r.observed = parse_observed(f[13]);
    r.grid = f[14];
    r.window = f[15];
    rows.push_back(std::move(r));
  }
  return rows;
}

} // namespace fiolab
