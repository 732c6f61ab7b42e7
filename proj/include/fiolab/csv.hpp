#pragma once

#include "fiolab/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fiolab {

// One-line header "# dim=<d>,n=<n>,spacing=<h>,offset=<o>" then a column line
// "i0,...,re,im" and one row per sample. Doubles use %.17g so files round-trip.
void write_csv(std::ostream& out, const SampledFunction& f);
SampledFunction read_sampled_function(std::istream& in);

// Header carries both blocks: "# dim=..,n=..,spacing=..,offset=..;dim=..,...".
void write_csv(std::ostream& out, const SampledFunction2D& F);
SampledFunction2D read_sampled_function_2d(std::istream& in);

std::string grid_header(const Grid& g);
Grid parse_grid_header(const std::string& text);

// Splits on commas; no quoting (the artifacts never contain commas in fields).
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace fiolab
