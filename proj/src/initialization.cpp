#include "spinsim/initialization.hpp"

#include <cmath>

#include "spinsim/errors.hpp"

namespace spinsim::init {
namespace {

double flip_adjusted(double p_up, double flip_probability) {
  return p_up * (1.0 - flip_probability) + (1.0 - p_up) * flip_probability;
}

void check_tunnel(double tunnel_time, double flip_probability) {
  if (!(tunnel_time > 0.0)) throw ConfigError("init: tunnel_time must be > 0");
  if (flip_probability < 0.0 || flip_probability > 1.0) {
    throw ConfigError("init: spin_flip_probability outside [0, 1]");
  }
}

}  // namespace

void validate(const InitMethod& method) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ThermalEquilibration>) {
          if (m.wait_time < 0.0) throw ConfigError("init: wait_time must be >= 0");
        } else if constexpr (std::is_same_v<T, TunnelFromPolarizedLeads>) {
          check_tunnel(m.tunnel_time, m.spin_flip_probability);
        } else {
          check_tunnel(m.tunnel_time, m.spin_flip_probability);
          if (m.lead_polarization < 0.0 || m.lead_polarization > 1.0) {
            throw ConfigError("init: lead_polarization outside [0, 1]");
          }
        }
      },
      method);
}

std::pair<Eigen::Matrix3d, Eigen::Vector3d> relax_affine(const device::DotParams& dot, double t) {
  if (t < 0.0) throw ConfigError("relax: negative duration");
  double decay_t1 = std::exp(-t / dot.t1);
  double decay_t2 = std::exp(-t / dot.t2);
  double m_eq = 2.0 * device::thermal_up_probability(dot.g_factor, dot.b0_field, dot.temperature) - 1.0;

  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a(0, 0) = decay_t2;
  a(1, 1) = decay_t2;
  a(2, 2) = decay_t1;
  Eigen::Vector3d c(0.0, 0.0, (1.0 - decay_t1) * m_eq);
  return {a, c};
}

spin::SpinState relax(const device::DotParams& dot, const spin::SpinState& state, double t) {
  if (state.num_spins() != 1) throw ConfigError("relax: single-spin states only");
  auto [a, c] = relax_affine(dot, t);
  return spin::apply_affine_bloch_map(state, 0, a, c);
}

InitOutcome thermal_init(const device::DotParams& dot, const spin::SpinState& initial, double wait_time) {
  if (wait_time < 0.0) throw ConfigError("thermal_init: negative wait_time");
  return InitOutcome{relax(dot, initial, wait_time), wait_time};
}

InitOutcome polarized_lead_init(const device::DotParams& dot, const device::LeadParams& leads,
                                double tunnel_time, double spin_flip_probability) {
  check_tunnel(tunnel_time, spin_flip_probability);
  if (leads.filling_factor != 1) {
    throw ConfigError("polarized_lead_init: requires filling_factor = 1 leads");
  }
  if (!device::polarization_condition_met(leads.g_factor_effective, dot.b0_field, dot.temperature)) {
    throw ConfigError(
        "polarized_lead_init: leads are not polarized at these parameters "
        "(effective-g Zeeman splitting does not exceed 5 kT)");
  }
  double p_up = device::thermal_up_probability(leads.g_factor_effective, dot.b0_field, dot.temperature);
  return InitOutcome{spin::SpinState::mixed(flip_adjusted(p_up, spin_flip_probability)), tunnel_time};
}

InitOutcome mixed_lead_init([[maybe_unused]] const device::DotParams& dot,
                            [[maybe_unused]] const device::LeadParams& leads, double p_up_target,
                            double tunnel_time, double spin_flip_probability) {
  check_tunnel(tunnel_time, spin_flip_probability);
  if (p_up_target < 0.0 || p_up_target > 1.0) {
    throw ConfigError("mixed_lead_init: p_up_target outside [0, 1]");
  }
  return InitOutcome{spin::SpinState::mixed(flip_adjusted(p_up_target, spin_flip_probability)), tunnel_time};
}

InitOutcome apply(const InitMethod& method, const device::QubitParams& qubit) {
  validate(method);
  return std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ThermalEquilibration>) {
          return thermal_init(qubit.dot, spin::SpinState::mixed(0.5), m.wait_time);
        } else if constexpr (std::is_same_v<T, TunnelFromPolarizedLeads>) {
          return polarized_lead_init(qubit.dot, qubit.leads, m.tunnel_time, m.spin_flip_probability);
        } else {
          return mixed_lead_init(qubit.dot, qubit.leads, m.lead_polarization, m.tunnel_time,
                                 m.spin_flip_probability);
        }
      },
      method);
}

}  // namespace spinsim::init
