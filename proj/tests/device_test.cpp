#include <doctest.h>

#include <cmath>

#include "spinsim/constants.hpp"
#include "spinsim/device.hpp"
#include "spinsim/errors.hpp"

using namespace spinsim;
using spinsim::ConfigError;

TEST_CASE("zeeman splitting scale") {
  CHECK(device::zeeman_splitting(0.44, 1.0) == doctest::Approx(25.4688799464e-6).epsilon(1e-9));
  CHECK(device::zeeman_splitting(0.44, 5.0) == doctest::Approx(127.344399732e-6).epsilon(1e-9));
  CHECK(device::zeeman_splitting(2.0, 0.0) == 0.0);
}

TEST_CASE("g-factor enters by magnitude, field must be non-negative") {
  CHECK(device::zeeman_splitting(-0.44, 5.0) == device::zeeman_splitting(0.44, 5.0));
  CHECK(device::larmor_frequency(-0.44, 5.0) == device::larmor_frequency(0.44, 5.0));
  CHECK_THROWS_AS(device::zeeman_splitting(0.44, -1.0), ConfigError);
}

TEST_CASE("larmor frequency") {
  CHECK(device::larmor_frequency(1.0, 1.0) == doctest::Approx(13.996244939e9).epsilon(1e-9));
  CHECK(device::larmor_frequency(0.44, 5.0) == doctest::Approx(30.791738866e9).epsilon(1e-9));
}

TEST_CASE("thermal occupation follows the boltzmann ratio") {
  // Pick the temperature so the splitting is exactly five thermal quanta.
  double t_star = device::zeeman_splitting(0.44, 5.0) / (5.0 * constants::k_B);
  CHECK(device::thermal_up_probability(0.44, 5.0, t_star) ==
        doctest::Approx(0.9933071490757153).epsilon(1e-12));
  CHECK(device::thermal_up_probability(0.44, 5.0, 0.3) == doctest::Approx(0.992796089665947).epsilon(1e-12));
  CHECK(device::thermal_up_probability(0.44, 5.0, 1e6) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(device::thermal_up_probability(0.44, 0.0, 0.1) == 0.5);
}

TEST_CASE("up and down probabilities are complementary") {
  for (double t : {0.02, 0.1, 0.3, 1.0, 4.2}) {
    double up = device::thermal_up_probability(0.44, 5.0, t);
    double down = device::thermal_down_probability(0.44, 5.0, t);
    CHECK(up + down == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(up > down);
  }
}

TEST_CASE("polarization condition is strict") {
  double t_star = device::zeeman_splitting(0.44, 5.0) / (5.0 * constants::k_B);
  CHECK(device::polarization_condition_met(0.44, 5.0, t_star * (1.0 - 1e-9)));
  CHECK_FALSE(device::polarization_condition_met(0.44, 5.0, t_star * (1.0 + 1e-9)));
  CHECK(device::polarization_condition_met(0.44, 5.0, 0.1));
  CHECK_FALSE(device::polarization_condition_met(0.44, 5.0, 4.2));
}

TEST_CASE("dot validation") {
  device::DotParams dot;
  CHECK_NOTHROW(dot.validate());

  device::DotParams bad = dot;
  bad.t2 = 2.0 * bad.t1;
  CHECK_NOTHROW(bad.validate());
  bad.t2 = 2.0 * bad.t1 * (1.0 + 1e-9);
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = dot;
  bad.b0_field = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = dot;
  bad.temperature = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = dot;
  bad.t1 = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("lead validation brackets the exchange enhancement") {
  device::LeadParams leads;
  leads.g_factor = 0.44;
  leads.g_factor_effective = 0.44;
  CHECK_NOTHROW(leads.validate());
  leads.g_factor_effective = 4.4;
  CHECK_NOTHROW(leads.validate());
  leads.g_factor_effective = 4.41;
  CHECK_THROWS_AS(leads.validate(), ConfigError);
  leads.g_factor_effective = 0.43;
  CHECK_THROWS_AS(leads.validate(), ConfigError);
  leads.g_factor_effective = 0.44;
  leads.filling_factor = 0;
  CHECK_THROWS_AS(leads.validate(), ConfigError);
}

TEST_CASE("reference device") {
  device::DeviceParams one = device::reference_device(1);
  CHECK(one.qubits.size() == 1);
  CHECK_NOTHROW(one.validate());
  CHECK(one.qubit(0).dot.g_factor == 0.44);
  CHECK(one.qubit(0).dot.b0_field == 5.0);
  CHECK(one.qubit(0).leads.g_factor_effective == doctest::Approx(4.4));

  device::DeviceParams two = device::reference_device(2);
  CHECK(two.qubits.size() == 2);
  CHECK_NOTHROW(two.validate());
  CHECK_THROWS_AS(device::reference_device(3), ConfigError);
  CHECK_THROWS_AS(device::reference_device(0), ConfigError);
}

TEST_CASE("regime warnings flag broken energy ordering") {
  device::DeviceParams reference = device::reference_device(1);
  CHECK(reference.regime_warnings().empty());

  device::DeviceParams inverted = reference;
  inverted.qubits[0].dot.charging_energy = 0.1e-3;  // below the level spacing
  CHECK_FALSE(inverted.regime_warnings().empty());

  device::DeviceParams hot = reference;
  hot.qubits[0].dot.temperature = 4.2;
  CHECK_FALSE(hot.regime_warnings().empty());
}
