#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qew::units {

enum class Dim { Dimensionless, Length, Time, Energy, Field, Angle };

std::string_view name(Dim d);

/// Parses "<number><suffix>" (whitespace between allowed) into SI.
/// Dimensional quantities require a suffix; dimensionless ones forbid it.
/// Throws std::invalid_argument with a readable message.
///   Length: m cm mm um µm nm      Time: s ns ps fs as
///   Energy: J eV meV keV          Field: V/m kV/m MV/m GV/m V/um
///   Angle:  rad deg pi (e.g. 0.25pi)
double parse(std::string_view text, Dim dim);

/// Comma-separated list; every item carries its own suffix.
std::vector<double> parse_list(std::string_view text, Dim dim);

/// Locale-independent integer parse; rejects signs, fractions and suffixes.
unsigned long long parse_count(std::string_view text);

bool parse_bool(std::string_view text);

/// Shortest round-trip decimal representation.
std::string format(double v);

/// SI unit label used when echoing a value of this dimension.
std::string_view si_label(Dim d);

}  // namespace qew::units
