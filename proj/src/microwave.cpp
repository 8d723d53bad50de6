#include "spinsim/microwave.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim::microwave {

using std::numbers::pi;

void WireGeometry::validate() const {
  if (!(distance_to_dot > 0.0)) throw ConfigError("wire: distance_to_dot must be > 0");
  if (!(relative_permeability > 0.0)) throw ConfigError("wire: relative_permeability must be > 0");
  if (resistance < 0.0) throw ConfigError("wire: resistance must be >= 0");
}

void ThermalBudget::validate() const {
  if (!(available_power > 0.0)) throw ConfigError("thermal budget: available_power must be > 0");
  if (duty_cycle < 0.0 || duty_cycle > 1.0) throw ConfigError("thermal budget: duty_cycle outside [0, 1]");
}

double wire_field(double current, const WireGeometry& geometry) {
  geometry.validate();
  if (current < 0.0) throw ConfigError("wire_field: current must be >= 0");
  return geometry.relative_permeability * constants::mu_0 * current / (2.0 * pi * geometry.distance_to_dot);
}

double required_current(double b1, const WireGeometry& geometry) {
  geometry.validate();
  if (b1 < 0.0) throw ConfigError("required_current: field must be >= 0");
  return b1 * 2.0 * pi * geometry.distance_to_dot / (geometry.relative_permeability * constants::mu_0);
}

double ohmic_power(double current_amplitude, const WireGeometry& geometry) {
  geometry.validate();
  if (current_amplitude < 0.0) throw ConfigError("ohmic_power: current must be >= 0");
  return 0.5 * current_amplitude * current_amplitude * geometry.resistance;
}

double total_dissipation(double current_amplitude, const WireGeometry& geometry, double loss_overhead) {
  if (loss_overhead < 1.0) throw ConfigError("total_dissipation: loss_overhead must be >= 1");
  return loss_overhead * ohmic_power(current_amplitude, geometry);
}

double cavity_power_estimate(double b1) {
  if (b1 < 0.0) throw ConfigError("cavity_power_estimate: field must be >= 0");
  double ratio = b1 / 1e-3;
  return 1.0 * ratio * ratio;
}

NearFieldReport near_field_check(const WireGeometry& geometry, double frequency,
                                 double effective_permittivity, double threshold) {
  geometry.validate();
  if (!(frequency > 0.0)) throw ConfigError("near_field_check: frequency must be > 0");
  if (effective_permittivity < 1.0) throw ConfigError("near_field_check: permittivity must be >= 1");
  if (!(threshold > 0.0)) throw ConfigError("near_field_check: threshold must be > 0");

  NearFieldReport report;
  report.wavelength = constants::c / (frequency * std::sqrt(effective_permittivity));
  report.ratio = geometry.distance_to_dot / report.wavelength;
  report.threshold = threshold;
  report.pass = report.ratio < threshold;
  return report;
}

BudgetReport thermal_budget_check(double power, const ThermalBudget& budget) {
  budget.validate();
  if (power < 0.0) throw ConfigError("thermal_budget_check: power must be >= 0");

  BudgetReport report;
  report.effective_power = power * budget.duty_cycle;
  report.margin = report.effective_power > 0.0 ? budget.available_power / report.effective_power
                                               : std::numeric_limits<double>::infinity();
  report.pass = report.effective_power < budget.available_power;
  return report;
}

}  // namespace spinsim::microwave
