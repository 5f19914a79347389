#include "qew/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qew/constants.hpp"

namespace qew::units {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Suffix {
  std::string_view text;
  double factor;
  int exp10 = 0;

  // Shifts the decimal exponent in the text so "0.4um" rounds exactly like "0.4e-6".
  double apply(std::string_view number) const {
    std::string mant(number);
    long long e = exp10;
    if (const auto pos = mant.find_first_of("eE"); pos != std::string::npos) {
      long long given = 0;
      const char* b = mant.data() + pos + 1;
      if (*b == '+') ++b;
      std::from_chars(b, mant.data() + mant.size(), given);
      e += given;
      mant.resize(pos);
    }
    const auto text = mant + "e" + std::to_string(e);
    double v = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    return v * factor;
  }
};

std::vector<Suffix> suffixes(Dim d) {
  switch (d) {
    case Dim::Length:
      return {{"m", 1.0}, {"cm", 1.0, -2}, {"mm", 1.0, -3}, {"um", 1.0, -6},
              {"\xC2\xB5m", 1.0, -6}, {"nm", 1.0, -9}};
    case Dim::Time:
      return {{"s", 1.0}, {"ns", 1.0, -9}, {"ps", 1.0, -12}, {"fs", 1.0, -15}, {"as", 1.0, -18}};
    case Dim::Energy:
      return {{"J", 1.0}, {"eV", constants::eV}, {"meV", constants::eV, -3},
              {"keV", constants::eV, 3}};
    case Dim::Field:
      return {{"V/m", 1.0}, {"kV/m", 1.0, 3}, {"MV/m", 1.0, 6}, {"GV/m", 1.0, 9}, {"V/um", 1.0, 6}};
    case Dim::Angle:
      return {{"rad", 1.0}, {"deg", constants::pi / 180.0}, {"pi", constants::pi}};
    case Dim::Dimensionless:
      return {};
  }
  return {};
}

}  // namespace

std::string_view name(Dim d) {
  switch (d) {
    case Dim::Dimensionless: return "dimensionless";
    case Dim::Length: return "length";
    case Dim::Time: return "time";
    case Dim::Energy: return "energy";
    case Dim::Field: return "field";
    case Dim::Angle: return "angle";
  }
  return "?";
}

std::string_view si_label(Dim d) {
  switch (d) {
    case Dim::Dimensionless: return "";
    case Dim::Length: return "m";
    case Dim::Time: return "s";
    case Dim::Energy: return "J";
    case Dim::Field: return "V/m";
    case Dim::Angle: return "rad";
  }
  return "";
}

double parse(std::string_view text, Dim dim) {
  const auto s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty value");
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr == first) {
    throw std::invalid_argument("'" + std::string(s) + "' is not a number");
  }
  if (!std::isfinite(v)) throw std::invalid_argument("'" + std::string(s) + "' is not finite");
  const auto unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  if (dim == Dim::Dimensionless) {
    if (!unit.empty()) {
      throw std::invalid_argument("'" + std::string(s) + "' is dimensionless and takes no unit");
    }
    return v;
  }
  if (unit.empty()) {
    throw std::invalid_argument("'" + std::string(s) + "' needs a " + std::string(name(dim)) +
                                " unit suffix");
  }
  for (const auto& sfx : suffixes(dim)) {
    if (unit == sfx.text) return sfx.apply(std::string_view(first, static_cast<std::size_t>(ptr - first)));
  }
  std::string known;
  for (const auto& sfx : suffixes(dim)) known += (known.empty() ? "" : ", ") + std::string(sfx.text);
  throw std::invalid_argument("unknown " + std::string(name(dim)) + " unit '" + std::string(unit) +
                              "' (expected one of " + known + ")");
}

std::vector<double> parse_list(std::string_view text, Dim dim) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse(text.substr(start, comma - start), dim));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

unsigned long long parse_count(std::string_view text) {
  const auto s = trim(text);
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("'" + std::string(s) + "' is not a non-negative integer");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw std::invalid_argument("'" + std::string(s) + "' is not a boolean");
}

std::string format(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace qew::units
