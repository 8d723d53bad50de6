#include "spinsim/exchange.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/device.hpp"
#include "spinsim/errors.hpp"

namespace spinsim::exchange {
namespace {

using cd = std::complex<double>;
using std::numbers::pi;

// exp(-i angle * S1.S2): phase -angle/4 on the triplets, +3 angle/4 on the
// singlet. Building from the projectors keeps sqrt_swap^2 == swap exact.
Eigen::Matrix4cd exchange_phase_gate(double angle) {
  cd triplet = std::polar(1.0, -0.25 * angle);
  cd singlet = std::polar(1.0, 0.75 * angle);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = triplet;
  u(3, 3) = triplet;
  u(1, 1) = u(2, 2) = 0.5 * (triplet + singlet);
  u(1, 2) = u(2, 1) = 0.5 * (triplet - singlet);
  return u;
}

}  // namespace

void ExchangePulse::validate() const {
  if (j_energy < 0.0) throw ConfigError("exchange pulse: J must be >= 0");
  if (duration < 0.0) throw ConfigError("exchange pulse: duration must be >= 0");
}

ExchangePulse ExchangePulse::from_frequency(double j_over_h, double duration) {
  if (j_over_h < 0.0) throw ConfigError("exchange pulse: J/h must be >= 0");
  return ExchangePulse{j_over_h * constants::h, duration};
}

ExchangePulse ExchangePulse::swap(double j_energy) { return ExchangePulse{j_energy, swap_duration(j_energy)}; }

ExchangePulse ExchangePulse::sqrt_swap(double j_energy) {
  return ExchangePulse{j_energy, 0.5 * swap_duration(j_energy)};
}

void BarrierModel::validate() const {
  if (!(j0 > 0.0)) throw ConfigError("barrier model: J0 must be > 0");
  if (!(v0 > 0.0)) throw ConfigError("barrier model: V0 must be > 0");
}

double j_from_voltage(const BarrierModel& model, double v) {
  model.validate();
  return model.j0 * std::exp(-(v - model.v_ref) / model.v0);
}

double swap_duration(double j_energy) {
  if (!(j_energy > 0.0)) throw ConfigError("swap_duration: J must be > 0");
  return constants::h / (2.0 * j_energy);
}

Eigen::Matrix4cd two_spin_hamiltonian(double j_energy, double g1, double g2, double b0) {
  double e1 = 0.5 * device::zeeman_splitting(g1, b0);
  double e2 = 0.5 * device::zeeman_splitting(g2, b0);

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 0) = e1 + e2;
  h(1, 1) = e1 - e2;
  h(2, 2) = -e1 + e2;
  h(3, 3) = -e1 - e2;

  // S1.S2 in the product basis: diag(1,-1,-1,1)/4 plus the flip-flop term.
  double j4 = 0.25 * j_energy;
  h(0, 0) += j4;
  h(1, 1) -= j4;
  h(2, 2) -= j4;
  h(3, 3) += j4;
  h(1, 2) += 2.0 * j4;
  h(2, 1) += 2.0 * j4;
  return h;
}

Eigen::Matrix4cd propagator(double j_energy, double g1, double g2, double b0, double duration) {
  Eigen::Matrix4cd h = two_spin_hamiltonian(j_energy, g1, g2, b0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) {
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * duration / constants::hbar);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

spin::SpinState exchange_evolve(const spin::SpinState& state, const ExchangePulse& pulse, double g1, double g2,
                                double b0) {
  if (state.num_spins() != 2) throw ConfigError("exchange_evolve: two-spin states only");
  pulse.validate();
  Eigen::Matrix4cd u = propagator(pulse.j_energy, g1, g2, b0, pulse.duration);
  return spin::SpinState::from_matrix(u * state.rho() * u.adjoint());
}

Eigen::Matrix4cd swap_gate() { return exchange_phase_gate(pi); }

Eigen::Matrix4cd sqrt_swap_gate() { return exchange_phase_gate(0.5 * pi); }

}  // namespace spinsim::exchange
