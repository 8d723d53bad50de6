#include "spinsim/device.hpp"

#include <cmath>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/units.hpp"

namespace spinsim::device {

void DotParams::validate() const {
  if (!(g_factor > 0.0)) throw ConfigError("dot: g_factor must be > 0 (stored as magnitude)");
  if (!(b0_field > 0.0)) throw ConfigError("dot: b0_field must be > 0");
  if (!(temperature > 0.0)) throw ConfigError("dot: temperature must be > 0");
  if (!(t1 > 0.0)) throw ConfigError("dot: t1 must be > 0");
  if (!(t2 > 0.0)) throw ConfigError("dot: t2 must be > 0");
  if (t2 > 2.0 * t1) throw ConfigError("dot: t2 must not exceed 2*t1");
  if (!(charging_energy > 0.0)) throw ConfigError("dot: charging_energy must be > 0");
  if (!(level_spacing > 0.0)) throw ConfigError("dot: level_spacing must be > 0");
}

std::vector<std::string> DotParams::regime_warnings() const {
  std::vector<std::string> warnings;
  double dez = zeeman_splitting(g_factor, b0_field);
  if (charging_energy <= level_spacing) {
    warnings.push_back("charging energy (" + units::format_quantity(charging_energy, units::Dimension::Energy) +
                       ") does not exceed level spacing (" +
                       units::format_quantity(level_spacing, units::Dimension::Energy) + ")");
  }
  if (level_spacing <= dez) {
    warnings.push_back("level spacing (" + units::format_quantity(level_spacing, units::Dimension::Energy) +
                       ") does not exceed the Zeeman splitting (" +
                       units::format_quantity(dez, units::Dimension::Energy) + ")");
  }
  if (!polarization_condition_met(g_factor, b0_field, temperature)) {
    warnings.push_back("Zeeman splitting below 5 kT: thermal initialization will be poorly polarized");
  }
  return warnings;
}

void LeadParams::validate() const {
  if (!(g_factor > 0.0)) throw ConfigError("leads: g_factor must be > 0 (stored as magnitude)");
  if (g_factor_effective < g_factor) {
    throw ConfigError("leads: effective g-factor below the bare value");
  }
  if (g_factor_effective > 10.0 * g_factor) {
    throw ConfigError("leads: effective g-factor above 10x the bare value");
  }
  if (filling_factor < 1) throw ConfigError("leads: filling_factor must be >= 1");
}

void QubitParams::validate() const {
  dot.validate();
  leads.validate();
}

void DeviceParams::validate() const {
  if (qubits.empty()) throw ConfigError("device: needs at least one qubit");
  if (qubits.size() > 2) throw ConfigError("device: at most two qubits are supported");
  for (const QubitParams& q : qubits) q.validate();
}

const QubitParams& DeviceParams::qubit(std::size_t index) const {
  if (index >= qubits.size()) {
    throw ConfigError("device: qubit index " + std::to_string(index) + " out of range (have " +
                      std::to_string(qubits.size()) + ")");
  }
  return qubits[index];
}

std::vector<std::string> DeviceParams::regime_warnings() const {
  std::vector<std::string> all;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    for (std::string& w : qubits[i].dot.regime_warnings()) {
      all.push_back("qubit " + std::to_string(i) + ": " + std::move(w));
    }
  }
  return all;
}

double zeeman_splitting(double g, double b0) {
  if (b0 < 0.0) throw ConfigError("zeeman_splitting: negative field");
  return std::fabs(g) * constants::mu_B * b0;
}

double larmor_frequency(double g, double b0) {
  return zeeman_splitting(g, b0) / constants::h;
}

double thermal_up_probability(double g, double b0, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("thermal_up_probability: temperature must be > 0");
  double dez = zeeman_splitting(g, b0);
  return 1.0 / (1.0 + std::exp(-dez / (constants::k_B * temperature)));
}

double thermal_down_probability(double g, double b0, double temperature) {
  return 1.0 - thermal_up_probability(g, b0, temperature);
}

bool polarization_condition_met(double g, double b0, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("polarization_condition_met: temperature must be > 0");
  return zeeman_splitting(g, b0) > 5.0 * constants::k_B * temperature;
}

DotParams reference_dot() { return DotParams{}; }

LeadParams reference_leads() {
  LeadParams leads;
  leads.g_factor = 0.44;
  leads.g_factor_effective = 4.4;  // strong exchange enhancement, nu = 1
  leads.filling_factor = 1;
  leads.fermi_level_offset = 0.0;
  return leads;
}

DeviceParams reference_device(std::size_t n_qubits) {
  DeviceParams dev;
  for (std::size_t i = 0; i < n_qubits; ++i) {
    dev.qubits.push_back(QubitParams{reference_dot(), reference_leads()});
  }
  dev.validate();
  return dev;
}

}  // namespace spinsim::device
