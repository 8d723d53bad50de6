#include "spinsim/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "spinsim/errors.hpp"

namespace spinsim::units {
namespace {

struct Prefix {
  std::string_view symbol;
  double factor;
};

// "u" and the UTF-8 micro sign are both accepted for 1e-6.
constexpr std::array<Prefix, 11> kPrefixes{{
    {"p", 1e-12},
    {"n", 1e-9},
    {"u", 1e-6},
    {"µ", 1e-6},
    {"m", 1e-3},
    {"", 1.0},
    {"k", 1e3},
    {"K", 1e3},  // common in "KHz"; Temperature handles its own "K"
    {"M", 1e6},
    {"G", 1e9},
    {"T", 1e12},
}};

std::vector<std::string_view> base_symbols(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return {};
    case Dimension::Field: return {"T"};
    case Dimension::Time: return {"s", "sec"};
    case Dimension::Temperature: return {"K"};
    case Dimension::Frequency: return {"Hz", "hz"};
    case Dimension::Energy: return {"eV"};
    case Dimension::Current: return {"A"};
    case Dimension::Power: return {"W"};
    case Dimension::Length: return {"m"};
    case Dimension::Voltage: return {"V"};
    case Dimension::Resistance: return {"ohm", "Ohm", "Ω"};
  }
  return {};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Resolve a unit suffix ("mT", "GHz", "") to the multiplier into base units,
// or a negative value if the suffix is not valid for the dimension.
double suffix_factor(std::string_view suffix, Dimension dim) {
  if (suffix.empty()) return 1.0;
  if (dim == Dimension::Dimensionless) return -1.0;
  for (std::string_view base : base_symbols(dim)) {
    if (suffix.size() < base.size()) continue;
    if (suffix.substr(suffix.size() - base.size()) != base) continue;
    std::string_view prefix = suffix.substr(0, suffix.size() - base.size());
    // "T" alone must not match prefix "T" with empty base remainder.
    for (const Prefix& p : kPrefixes) {
      if (prefix == p.symbol) return p.factor;
    }
  }
  return -1.0;
}

}  // namespace

std::string_view base_unit(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return "";
    case Dimension::Field: return "T";
    case Dimension::Time: return "s";
    case Dimension::Temperature: return "K";
    case Dimension::Frequency: return "Hz";
    case Dimension::Energy: return "eV";
    case Dimension::Current: return "A";
    case Dimension::Power: return "W";
    case Dimension::Length: return "m";
    case Dimension::Voltage: return "V";
    case Dimension::Resistance: return "ohm";
  }
  return "";
}

double parse_quantity(std::string_view text, Dimension dim) {
  std::string_view s = trim(text);
  if (s.empty()) {
    throw ConfigError("empty quantity string");
  }

  // Split into the longest leading float and the trailing unit suffix.
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  double value = 0.0;
  auto [num_end, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || num_end == begin) {
    throw ConfigError("could not parse number in quantity '" + std::string(text) + "'");
  }

  std::string_view suffix = trim(std::string_view(num_end, static_cast<size_t>(end - num_end)));
  double factor = suffix_factor(suffix, dim);
  if (factor < 0.0) {
    std::string base(base_unit(dim));
    throw ConfigError("quantity '" + std::string(text) + "': unit '" + std::string(suffix) +
                      "' does not fit dimension [" + (base.empty() ? "dimensionless" : base) + "]");
  }
  return value * factor;
}

std::string format_quantity(double value, Dimension dim) {
  std::string_view base = base_unit(dim);
  char buf[64];
  if (dim == Dimension::Dimensionless || value == 0.0 || !std::isfinite(value)) {
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    std::string out(buf);
    if (!base.empty()) out += std::string(" ") + std::string(base);
    return out;
  }

  static constexpr std::array<std::pair<double, const char*>, 9> kScales{{
      {1e12, "T"}, {1e9, "G"}, {1e6, "M"}, {1e3, "k"}, {1.0, ""},
      {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"},
  }};
  double mag = std::fabs(value);
  for (const auto& [scale, prefix] : kScales) {
    if (mag >= scale || scale == 1e-12) {
      std::snprintf(buf, sizeof(buf), "%.6g %s%s", value / scale, prefix, std::string(base).c_str());
      return buf;
    }
  }
  return "";  // unreachable
}

}  // namespace spinsim::units
