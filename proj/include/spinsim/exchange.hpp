#pragma once

#include <Eigen/Dense>

#include "spinsim/spin_state.hpp"

namespace spinsim::exchange {

/// Piecewise-constant exchange pulse. Only the area J * duration matters for
/// the generated gate (at equal g-factors), so a rectangle loses nothing.
struct ExchangePulse {
  double j_energy = 0.0;  // eV
  double duration = 0.0;  // s

  void validate() const;

  static ExchangePulse from_frequency(double j_over_h, double duration);
  /// Full SWAP: duration h / (2 J).
  static ExchangePulse swap(double j_energy);
  /// Entangling half pulse: duration h / (4 J).
  static ExchangePulse sqrt_swap(double j_energy);
};

/// Exponential coupling-vs-gate-voltage model J(v) = J0 * exp(-(v - v_ref)/V0).
struct BarrierModel {
  double j0 = 0.0;     // eV at v_ref
  double v0 = 0.0;     // V, exponential scale
  double v_ref = 0.0;  // V

  void validate() const;
};

double j_from_voltage(const BarrierModel& model, double v);

/// Pulse length for a full SWAP at fixed coupling: h / (2 J).
double swap_duration(double j_energy);

/// H = g1 mu_B B0 Sz1 + g2 mu_B B0 Sz2 + J * S1.S2 in eV, spin operators with
/// eigenvalues +-1/2, basis |uu>, |ud>, |du>, |dd>.
Eigen::Matrix4cd two_spin_hamiltonian(double j_energy, double g1, double g2, double b0);

/// exp(-i H t / hbar) by spectral decomposition of the 4x4 Hamiltonian.
Eigen::Matrix4cd propagator(double j_energy, double g1, double g2, double b0, double duration);

/// Unitary evolution of a two-spin state under Zeeman + exchange.
spin::SpinState exchange_evolve(const spin::SpinState& state, const ExchangePulse& pulse, double g1, double g2,
                                double b0);

/// The exchange-generated gates exp(-i pi S1.S2) and exp(-i pi/2 S1.S2);
/// swap_gate() equals the textbook SWAP up to the global phase e^{-i pi/4},
/// and sqrt_swap_gate() squared reproduces swap_gate() exactly.
Eigen::Matrix4cd swap_gate();
Eigen::Matrix4cd sqrt_swap_gate();

}  // namespace spinsim::exchange
