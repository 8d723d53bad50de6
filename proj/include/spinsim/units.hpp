#pragma once

#include <string>
#include <string_view>

namespace spinsim::units {

enum class Dimension {
  Dimensionless,
  Field,        // tesla
  Time,         // seconds
  Temperature,  // kelvin
  Frequency,    // hertz
  Energy,       // electronvolt
  Current,      // ampere
  Power,        // watt
  Length,       // metre
  Voltage,      // volt
  Resistance,   // ohm
};

/// Base unit symbol for a dimension ("T", "s", ...). Dimensionless -> "".
std::string_view base_unit(Dimension dim);

/// Parse a quantity like "5T", "100us", "0.01mT", "30 GHz" into base units
/// (tesla, seconds, kelvin, hertz, eV, ...). A bare number is taken as the
/// base unit. Throws ConfigError on malformed input or a suffix that does not
/// belong to the dimension.
double parse_quantity(std::string_view text, Dimension dim);

/// Render a value with an SI prefix picked for readability, e.g.
/// format_quantity(6.158e6, Dimension::Frequency) -> "6.158 MHz".
std::string format_quantity(double value, Dimension dim);

}  // namespace spinsim::units
