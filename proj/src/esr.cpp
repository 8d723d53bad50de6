#include "spinsim/esr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim::esr {
namespace {

using std::numbers::pi;

double fastest_rotation_hz(const EsrPulse& pulse, const device::DotParams& dot, Frame frame) {
  double f1 = rabi_frequency(dot.g_factor, pulse.b1_amplitude);
  if (frame == Frame::Rotating) {
    double detuning = device::larmor_frequency(dot.g_factor, dot.b0_field) - pulse.carrier_frequency;
    return std::max(f1, std::fabs(detuning));
  }
  double f0 = device::larmor_frequency(dot.g_factor, dot.b0_field);
  return std::max({f0, pulse.carrier_frequency, 2.0 * f1});
}

}  // namespace

void EsrPulse::validate() const {
  if (duration < 0.0) throw ConfigError("esr pulse: duration must be >= 0");
  if (b1_amplitude < 0.0) throw ConfigError("esr pulse: b1_amplitude must be >= 0");
  if (carrier_frequency < 0.0) throw ConfigError("esr pulse: carrier_frequency must be >= 0");
}

void BlochSettings::validate_for(const EsrPulse& pulse, const device::DotParams& dot) const {
  if (!(integrator_step > 0.0)) throw ConfigError("bloch settings: integrator_step must be > 0");
  double fastest = fastest_rotation_hz(pulse, dot, frame);
  if (fastest > 0.0 && integrator_step > 1.0 / (20.0 * fastest)) {
    throw ConfigError("bloch settings: integrator_step exceeds 1/(20 * fastest rotation frequency)");
  }
}

BlochSettings BlochSettings::recommended(const EsrPulse& pulse, const device::DotParams& dot, Frame frame) {
  BlochSettings settings;
  settings.frame = frame;
  double step = pulse.duration > 0.0 ? pulse.duration : 1e-9;
  double fastest = fastest_rotation_hz(pulse, dot, settings.frame);
  if (fastest > 0.0) step = std::min(step, 1.0 / (100.0 * fastest));
  if (std::isfinite(dot.t2)) step = std::min(step, dot.t2 / 50.0);
  if (std::isfinite(dot.t1)) step = std::min(step, dot.t1 / 50.0);
  settings.integrator_step = step;
  return settings;
}

double rabi_frequency(double g, double b1) {
  if (b1 < 0.0) throw ConfigError("rabi_frequency: negative drive amplitude");
  return std::fabs(g) * constants::mu_B_over_h * b1;
}

spin::SpinState evolve_bloch(const spin::SpinState& state, const EsrPulse& pulse, const device::DotParams& dot,
                             const BlochSettings& settings) {
  if (state.num_spins() != 1) throw ConfigError("evolve_bloch: single-spin states only");
  pulse.validate();
  settings.validate_for(pulse, dot);
  if (pulse.duration == 0.0) return state;

  double f1 = rabi_frequency(dot.g_factor, pulse.b1_amplitude);
  double f0 = device::larmor_frequency(dot.g_factor, dot.b0_field);
  double detuning = f0 - pulse.carrier_frequency;
  double m_eq = 2.0 * device::thermal_up_probability(dot.g_factor, dot.b0_field, dot.temperature) - 1.0;
  double inv_t1 = std::isfinite(dot.t1) ? 1.0 / dot.t1 : 0.0;
  double inv_t2 = std::isfinite(dot.t2) ? 1.0 / dot.t2 : 0.0;

  const bool rotating = settings.frame == Frame::Rotating;
  auto drive = [&](double t) -> Eigen::Vector3d {
    if (rotating) {
      return {f1 * std::cos(pulse.phase), f1 * std::sin(pulse.phase), detuning};
    }
    double theta = 2.0 * pi * pulse.carrier_frequency * t + pulse.phase;
    if (settings.rwa_enabled) {
      return {f1 * std::cos(theta), f1 * std::sin(theta), f0};
    }
    return {2.0 * f1 * std::cos(theta), 0.0, f0};
  };

  auto deriv = [&](double t, const Eigen::Vector3d& m) -> Eigen::Vector3d {
    Eigen::Vector3d d = 2.0 * pi * drive(t).cross(m);
    d(0) -= m(0) * inv_t2;
    d(1) -= m(1) * inv_t2;
    d(2) -= (m(2) - m_eq) * inv_t1;
    return d;
  };

  spin::BlochVector b = state.to_bloch();
  Eigen::Vector3d m(b.mx, b.my, b.mz);

  auto n_steps = static_cast<long long>(std::ceil(pulse.duration / settings.integrator_step));
  double h = pulse.duration / static_cast<double>(n_steps);
  double t = 0.0;
  for (long long i = 0; i < n_steps; ++i) {
    Eigen::Vector3d k1 = deriv(t, m);
    Eigen::Vector3d k2 = deriv(t + 0.5 * h, m + 0.5 * h * k1);
    Eigen::Vector3d k3 = deriv(t + 0.5 * h, m + 0.5 * h * k2);
    Eigen::Vector3d k4 = deriv(t + h, m + h * k3);
    m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }

  if (!m.allFinite()) throw NumericError("evolve_bloch: integration diverged");
  return spin::SpinState::from_bloch(spin::BlochVector{m(0), m(1), m(2)});
}

double cw_saturation_probability(double f1, double t1, double t2) {
  if (f1 < 0.0) throw ConfigError("cw_saturation_probability: negative f1");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ConfigError("cw_saturation_probability: T1, T2 must be > 0");
  double s = (2.0 * pi * f1) * (2.0 * pi * f1) * t1 * t2;
  return 0.5 * (1.0 + 1.0 / (1.0 + s));
}

double min_observable_f1(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ConfigError("min_observable_f1: T1, T2 must be > 0");
  return 1.0 / (2.0 * pi * std::sqrt(t1 * t2));
}

double detuning_for_addressing(double g_base, double g_shifted, double b0, AddressingMode mode) {
  if (b0 < 0.0) throw ConfigError("detuning_for_addressing: negative field");
  double dg = mode == AddressingMode::SignedDifference ? std::fabs(g_base - g_shifted)
                                                       : std::fabs(std::fabs(g_base) - std::fabs(g_shifted));
  return dg * constants::mu_B_over_h * b0;
}

}  // namespace spinsim::esr
