#include <doctest.h>

#include <cmath>

#include "spinsim/errors.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/units.hpp"

using spinsim::ConfigError;
using spinsim::units::Dimension;
using spinsim::units::format_quantity;
using spinsim::units::parse_quantity;

TEST_CASE("bare numbers are base units") {
  CHECK(parse_quantity("5", Dimension::Field) == 5.0);
  CHECK(parse_quantity("-0.25", Dimension::Dimensionless) == -0.25);
  CHECK(parse_quantity("1e-7", Dimension::Time) == 1e-7);
  CHECK(parse_quantity("2.5e-3", Dimension::Energy) == 2.5e-3);
}

TEST_CASE("si prefixes on every dimension") {
  CHECK(parse_quantity("100 ns", Dimension::Time) == doctest::Approx(1e-7).epsilon(1e-12));
  CHECK(parse_quantity("5 T", Dimension::Field) == 5.0);
  CHECK(parse_quantity("1 mT", Dimension::Field) == doctest::Approx(1e-3));
  CHECK(parse_quantity("100 mK", Dimension::Temperature) == doctest::Approx(0.1));
  CHECK(parse_quantity("30 GHz", Dimension::Frequency) == doctest::Approx(3e10));
  CHECK(parse_quantity("25.5 ueV", Dimension::Energy) == doctest::Approx(25.5e-6));
  CHECK(parse_quantity("2.5 meV", Dimension::Energy) == doctest::Approx(2.5e-3));
  CHECK(parse_quantity("10 mA", Dimension::Current) == doctest::Approx(0.01));
  CHECK(parse_quantity("300 uW", Dimension::Power) == doctest::Approx(3e-4));
  CHECK(parse_quantity("200 nm", Dimension::Length) == doctest::Approx(2e-7));
  CHECK(parse_quantity("0.5 V", Dimension::Voltage) == doctest::Approx(0.5));
  CHECK(parse_quantity("20 ohm", Dimension::Resistance) == 20.0);
  CHECK(parse_quantity("50 kHz", Dimension::Frequency) == doctest::Approx(5e4));
}

TEST_CASE("micro accepts both u and the micro sign") {
  CHECK(parse_quantity("100 us", Dimension::Time) == doctest::Approx(1e-4));
  CHECK(parse_quantity("100 µs", Dimension::Time) == doctest::Approx(1e-4));
}

TEST_CASE("whitespace between number and suffix is optional") {
  CHECK(parse_quantity("5T", Dimension::Field) == 5.0);
  CHECK(parse_quantity("  5 T  ", Dimension::Field) == 5.0);
  CHECK(parse_quantity("10ns", Dimension::Time) == doctest::Approx(1e-8));
}

TEST_CASE("wrong or unknown suffixes are rejected") {
  CHECK_THROWS_AS(parse_quantity("5 T", Dimension::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 parsec", Dimension::Length), ConfigError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("ns", Dimension::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("1.2.3 s", Dimension::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("1 GHz", Dimension::Dimensionless), ConfigError);
}

TEST_CASE("format picks engineering prefixes") {
  CHECK(format_quantity(1e-7, Dimension::Time) == "100 ns");
  CHECK(format_quantity(5.0, Dimension::Field) == "5 T");
  CHECK(format_quantity(3.0791738866e10, Dimension::Frequency) == "30.7917 GHz");
  CHECK(format_quantity(2.5e-11, Dimension::Time) == "25 ps");
  CHECK(format_quantity(0.0, Dimension::Power) == "0 W");
}

TEST_CASE("format then parse round-trips over many magnitudes") {
  spinsim::rng::Stream stream(20240815);
  for (Dimension dim : {Dimension::Time, Dimension::Field, Dimension::Energy, Dimension::Frequency,
                        Dimension::Power, Dimension::Length}) {
    for (int i = 0; i < 40; ++i) {
      double exponent = -14.0 + 24.0 * stream.uniform();
      double value = (0.1 + 9.9 * stream.uniform()) * std::pow(10.0, exponent);
      double back = parse_quantity(format_quantity(value, dim), dim);
      CHECK(back == doctest::Approx(value).epsilon(1e-5));
    }
  }
}
