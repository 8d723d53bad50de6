#pragma once

#include "spinsim/device.hpp"
#include "spinsim/spin_state.hpp"

namespace spinsim::esr {

/// Rectangular microwave burst. b1_amplitude is the rotating-frame (circular
/// component) drive amplitude; in lab-frame integration the physical linear
/// drive is 2*b1. phase sets the drive axis in the rotating frame's x-y plane.
struct EsrPulse {
  double carrier_frequency = 0.0;  // Hz
  double b1_amplitude = 0.0;       // T
  double duration = 0.0;           // s
  double phase = 0.0;              // rad

  void validate() const;
};

enum class Frame { Rotating, Lab };

/// Fixed-step integrator controls. The step bound (1/20 of the fastest
/// rotation) is a hard validity limit; recommended() picks a much finer step.
struct BlochSettings {
  double integrator_step = 0.0;  // s
  Frame frame = Frame::Rotating;
  bool rwa_enabled = true;  // lab frame only: drop the counter-rotating term

  void validate_for(const EsrPulse& pulse, const device::DotParams& dot) const;
  static BlochSettings recommended(const EsrPulse& pulse, const device::DotParams& dot,
                                   Frame frame = Frame::Rotating);
};

/// f1 = g * mu_B * b1 / h.
double rabi_frequency(double g, double b1);

/// Integrates the damped Bloch equations
///   dM/dt = 2pi * Omega x M - (Mx, My, 0)/T2 - (0, 0, Mz - M0)/T1
/// with M0 the thermal equilibrium magnetization. In the rotating frame
/// Omega = (f1 cos(phase), f1 sin(phase), detuning); in the lab frame the
/// full precession at the spin frequency is integrated (circular drive under
/// rwa_enabled, linear 2*b1 drive otherwise). Classical RK4, fixed step.
spin::SpinState evolve_bloch(const spin::SpinState& state, const EsrPulse& pulse, const device::DotParams& dot,
                             const BlochSettings& settings);

/// Steady-state Pr[up] under resonant continuous drive:
/// [1 + 1/(1 + (2 pi f1)^2 T1 T2)] / 2.
double cw_saturation_probability(double f1, double t1, double t2);

/// Smallest Rabi frequency that visibly disturbs the steady state,
/// 1 / (2 pi sqrt(T1 T2)).
double min_observable_f1(double t1, double t2);

enum class AddressingMode {
  SignedDifference,    // |g_a - g_b|, inputs taken as signed physical values
  MagnitudeDifference  // ||g_a| - |g_b||
};

/// Larmor shift available by moving a qubit's g-factor from g_base to
/// g_shifted at field b0: the selectivity margin for frequency addressing.
double detuning_for_addressing(double g_base, double g_shifted, double b0,
                               AddressingMode mode = AddressingMode::SignedDifference);

}  // namespace spinsim::esr
