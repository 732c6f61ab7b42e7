#include "fiolab/csv.hpp"

#include "fiolab/errors.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>

namespace fiolab {
namespace {

std::string header_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ValidationError("csv: missing '# ' grid header");
  return line.substr(2);
}

void skip_column_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: missing column line");
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("csv: cannot parse number '{}'", s));
  }
  if (used != s.size()) throw ValidationError(fmt::format("csv: trailing characters in '{}'", s));
  return v;
}

std::vector<cplx> read_rows(std::istream& in, std::size_t expected, std::size_t index_columns) {
  std::vector<cplx> samples;
  samples.reserve(expected);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split_csv_line(line);
    if (cols.size() != index_columns + 2) throw ValidationError(fmt::format("csv: bad row '{}'", line));
    samples.emplace_back(parse_double(cols[index_columns]), parse_double(cols[index_columns + 1]));
  }
  if (samples.size() != expected) {
    throw StructuralError(fmt::format("csv: expected {} rows, found {}", expected, samples.size()));
  }
  return samples;
}

void write_rows(std::ostream& out, std::span<const cplx> samples, const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> idx(shape.size(), 0);
  std::string row;
  for (const auto& v : samples) {
    row.clear();
    for (auto i : idx) row += fmt::format("{},", i);
    row += fmt::format("{:.17g},{:.17g}\n", v.real(), v.imag());
    out << row;
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
}

std::string column_line(std::size_t index_columns) {
  std::string s;
  for (std::size_t a = 0; a < index_columns; ++a) s += fmt::format("i{},", a);
  return s + "re,im\n";
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string grid_header(const Grid& g) {
  return fmt::format("dim={},n={},spacing={:.17g},offset={:.17g}", g.dim, g.n, g.spacing, g.offset);
}

Grid parse_grid_header(const std::string& text) {
  Grid g;
  bool seen[4] = {false, false, false, false};
  for (const auto& field : split_csv_line(text)) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("csv: bad header field '{}'", field));
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "dim") {
      g.dim = static_cast<int>(parse_double(value));
      seen[0] = true;
    } else if (key == "n") {
      g.n = static_cast<std::size_t>(parse_double(value));
      seen[1] = true;
    } else if (key == "spacing") {
      g.spacing = parse_double(value);
      seen[2] = true;
    } else if (key == "offset") {
      g.offset = parse_double(value);
      seen[3] = true;
    } else {
      throw ValidationError(fmt::format("csv: unknown header key '{}'", key));
    }
  }
  if (!(seen[0] && seen[1] && seen[2])) throw ValidationError("csv: header needs dim, n and spacing");
  g.validate();
  return g;
}

void write_csv(std::ostream& out, const SampledFunction& f) {
  const Grid& g = f.grid();
  out << "# " << grid_header(g) << '\n' << column_line(static_cast<std::size_t>(g.dim));
  write_rows(out, f.samples(), std::vector<std::size_t>(static_cast<std::size_t>(g.dim), g.n));
}

SampledFunction read_sampled_function(std::istream& in) {
  const Grid g = parse_grid_header(header_line(in));
  skip_column_line(in);
  return SampledFunction(g, read_rows(in, g.size(), static_cast<std::size_t>(g.dim)));
}

void write_csv(std::ostream& out, const SampledFunction2D& F) {
  out << "# " << grid_header(F.first()) << ';' << grid_header(F.second()) << '\n';
  const auto shape = F.shape();
  out << column_line(shape.size());
  write_rows(out, F.samples(), shape);
}

SampledFunction2D read_sampled_function_2d(std::istream& in) {
  const std::string header = header_line(in);
  const auto semi = header.find(';');
  if (semi == std::string::npos) throw ValidationError("csv: 2D header needs two grid descriptors");
  const Grid a = parse_grid_header(header.substr(0, semi));
  const Grid b = parse_grid_header(header.substr(semi + 1));
  skip_column_line(in);
  return SampledFunction2D(a, b, read_rows(in, a.size() * b.size(), static_cast<std::size_t>(a.dim + b.dim)));
}

} // namespace fiolab
