#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spinsim::device {

/// Static parameters of one gated dot. g-factors are stored as magnitudes;
/// the spin ground state is always labeled "up". Energies in eV, times in
/// seconds, fields in tesla.
struct DotParams {
  double g_factor = 0.44;
  double b0_field = 5.0;         // T
  double temperature = 0.1;      // K
  double t1 = 100e-6;            // s, relaxation
  double t2 = 100e-9;            // s, phase randomization
  double charging_energy = 2.5e-3;  // eV
  double level_spacing = 0.3e-3;    // eV

  /// Throws ConfigError on unphysical values (non-positive fields, T2 > 2*T1).
  void validate() const;

  /// Soft checks: orderings the hardware regime expects but the math does not
  /// require (charging energy > level spacing > Zeeman splitting, thermal
  /// polarization condition). Violations are reported, never rejected.
  std::vector<std::string> regime_warnings() const;
};

/// Reservoir parameters. g_eff covers the exchange enhancement in the leads;
/// it must stay within [g, 10*g]. fermi_level_offset places E_F relative to
/// the dot's up level (signed, eV); it is carried for reporting only.
struct LeadParams {
  double g_factor = 0.44;
  double g_factor_effective = 0.44;
  int filling_factor = 1;
  double fermi_level_offset = 0.0;  // eV

  void validate() const;
};

struct QubitParams {
  DotParams dot;
  LeadParams leads;

  void validate() const;
};

struct DeviceParams {
  std::vector<QubitParams> qubits;

  void validate() const;
  const QubitParams& qubit(std::size_t index) const;
  std::vector<std::string> regime_warnings() const;
};

/// g * mu_B * B0 [eV]. The g sign is ignored.
double zeeman_splitting(double g, double b0);

/// Spin precession frequency g * mu_B * B0 / h [Hz].
double larmor_frequency(double g, double b0);

/// Boltzmann ground-state occupation 1 / (1 + exp(-dE_z / kT)).
double thermal_up_probability(double g, double b0, double temperature);
double thermal_down_probability(double g, double b0, double temperature);

/// Strict check g * mu_B * B0 > 5 kT: the regime where thermal
/// initialization gives better than 99% polarization.
bool polarization_condition_met(double g, double b0, double temperature);

/// Bundled reference device: g = 0.44, B0 = 5 T, T = 0.1 K, T1 = 100 us,
/// T2 = 100 ns, with nu = 1 strongly exchange-enhanced leads.
DotParams reference_dot();
LeadParams reference_leads();
DeviceParams reference_device(std::size_t n_qubits = 1);

}  // namespace spinsim::device
