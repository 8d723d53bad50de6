#pragma once

#include <Eigen/Dense>
#include <utility>
#include <variant>

#include "spinsim/device.hpp"
#include "spinsim/spin_state.hpp"

namespace spinsim::init {

/// Load an electron, then wait for Boltzmann equilibrium (about 5*T1).
struct ThermalEquilibration {
  double wait_time = 0.0;  // s
};

/// Tunnel from nu = 1 spin-polarized reservoirs; requires the polarization
/// condition to hold for the leads' effective g-factor.
struct TunnelFromPolarizedLeads {
  double tunnel_time = 0.1e-6;        // s
  double spin_flip_probability = 0.0;  // per tunnel event
};

/// Tunnel from partially polarized reservoirs; the gate-tuned occupation is
/// the input, geometry is not modeled.
struct TunnelFromPartiallyPolarizedLeads {
  double lead_polarization = 0.5;      // resulting p_up
  double tunnel_time = 0.1e-6;         // s
  double spin_flip_probability = 0.0;  // per tunnel event
};

using InitMethod = std::variant<ThermalEquilibration, TunnelFromPolarizedLeads, TunnelFromPartiallyPolarizedLeads>;

void validate(const InitMethod& method);

struct InitOutcome {
  spin::SpinState state;
  double elapsed = 0.0;  // s
};

/// Free decay of a single spin for time t: populations relax toward the
/// thermal occupation with time constant T1, coherences decay with T2.
spin::SpinState relax(const device::DotParams& dot, const spin::SpinState& state, double t);

/// The same decay expressed as an affine Bloch map (A, c); used to act on one
/// spin of an entangled pair.
std::pair<Eigen::Matrix3d, Eigen::Vector3d> relax_affine(const device::DotParams& dot, double t);

InitOutcome thermal_init(const device::DotParams& dot, const spin::SpinState& initial, double wait_time);

InitOutcome polarized_lead_init(const device::DotParams& dot, const device::LeadParams& leads,
                                double tunnel_time = 0.1e-6, double spin_flip_probability = 0.0);

InitOutcome mixed_lead_init(const device::DotParams& dot, const device::LeadParams& leads, double p_up_target,
                            double tunnel_time = 0.1e-6, double spin_flip_probability = 0.0);

/// Dispatch over the method variant. ThermalEquilibration starts from the
/// maximally mixed state (a freshly loaded electron with no spin selection).
InitOutcome apply(const InitMethod& method, const device::QubitParams& qubit);

}  // namespace spinsim::init
