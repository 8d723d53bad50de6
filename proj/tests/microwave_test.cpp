#include <doctest.h>

#include <cmath>

#include "spinsim/errors.hpp"
#include "spinsim/microwave.hpp"
#include "spinsim/rng.hpp"

using namespace spinsim;
using microwave::ThermalBudget;
using microwave::WireGeometry;

TEST_CASE("wire field anchors") {
  WireGeometry far;
  far.distance_to_dot = 200e-6;
  CHECK(microwave::wire_field(1.0, far) == doctest::Approx(1e-3).epsilon(1e-8));

  WireGeometry near;
  near.distance_to_dot = 200e-9;
  CHECK(microwave::wire_field(1e-3, near) == doctest::Approx(1e-3).epsilon(1e-8));
  CHECK(microwave::required_current(0.01e-3, far) == doctest::Approx(0.01).epsilon(1e-8));
  CHECK(microwave::required_current(0.01e-3, near) == doctest::Approx(10e-6).epsilon(1e-8));
}

TEST_CASE("field and current are exact inverses") {
  rng::Stream stream(51);
  for (int i = 0; i < 20; ++i) {
    WireGeometry geom;
    geom.distance_to_dot = std::pow(10.0, -8.0 + 4.0 * stream.uniform());
    geom.relative_permeability = 0.5 + stream.uniform();
    double current = std::pow(10.0, -6.0 + 5.0 * stream.uniform());
    CHECK(microwave::required_current(microwave::wire_field(current, geom), geom) ==
          doctest::Approx(current).epsilon(1e-12));
  }
}

TEST_CASE("ohmic dissipation") {
  WireGeometry geom;  // 20 ohm default
  CHECK(microwave::ohmic_power(1e-3, geom) == doctest::Approx(10e-6).epsilon(1e-12));
  CHECK(microwave::total_dissipation(1e-3, geom) == doctest::Approx(20e-6).epsilon(1e-12));
  CHECK(microwave::total_dissipation(1e-3, geom, 3.0) == doctest::Approx(30e-6).epsilon(1e-12));
  CHECK_THROWS_AS(microwave::total_dissipation(1e-3, geom, 0.5), ConfigError);
  CHECK_THROWS_AS(microwave::ohmic_power(-1.0, geom), ConfigError);
}

TEST_CASE("cavity power scales with the square of the field") {
  CHECK(microwave::cavity_power_estimate(1e-3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(microwave::cavity_power_estimate(0.01e-3) == doctest::Approx(100e-6).epsilon(1e-12));
  CHECK(microwave::cavity_power_estimate(2e-3) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("near field check at the operating point") {
  WireGeometry geom;  // 200 nm
  microwave::NearFieldReport report = microwave::near_field_check(geom, 30e9);
  CHECK(report.wavelength == doctest::Approx(3.8043e-3).epsilon(1e-4));
  CHECK(report.ratio == doctest::Approx(5.257e-5).epsilon(1e-3));
  CHECK(report.pass);

  WireGeometry distant;
  distant.distance_to_dot = 200e-6;
  microwave::NearFieldReport far_report = microwave::near_field_check(distant, 30e9);
  CHECK(far_report.ratio == doctest::Approx(0.05257).epsilon(1e-3));
  CHECK_FALSE(far_report.pass);

  CHECK_THROWS_AS(microwave::near_field_check(geom, 0.0), ConfigError);
  CHECK_THROWS_AS(microwave::near_field_check(geom, 30e9, 0.5), ConfigError);
}

TEST_CASE("thermal budget") {
  ThermalBudget budget;  // 300 uW available, full duty
  microwave::BudgetReport ok = microwave::thermal_budget_check(2e-9, budget);
  CHECK(ok.pass);
  CHECK(ok.margin == doctest::Approx(1.5e5).epsilon(1e-6));

  microwave::BudgetReport over = microwave::thermal_budget_check(400e-6, budget);
  CHECK_FALSE(over.pass);

  budget.duty_cycle = 0.5;
  microwave::BudgetReport duty = microwave::thermal_budget_check(400e-6, budget);
  CHECK(duty.effective_power == doctest::Approx(200e-6));
  CHECK(duty.pass);

  microwave::BudgetReport idle = microwave::thermal_budget_check(0.0, budget);
  CHECK(idle.pass);
  CHECK(std::isinf(idle.margin));
}

TEST_CASE("geometry and budget validation") {
  WireGeometry geom;
  geom.distance_to_dot = 0.0;
  CHECK_THROWS_AS(geom.validate(), ConfigError);
  geom.distance_to_dot = 200e-9;
  geom.resistance = -1.0;
  CHECK_THROWS_AS(geom.validate(), ConfigError);

  ThermalBudget budget;
  budget.duty_cycle = 1.5;
  CHECK_THROWS_AS(budget.validate(), ConfigError);
  budget.duty_cycle = 1.0;
  budget.available_power = 0.0;
  CHECK_THROWS_AS(budget.validate(), ConfigError);
}
