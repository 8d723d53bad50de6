#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "spinsim/constants.hpp"
#include "spinsim/device.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/exchange.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/spin_state.hpp"

using namespace spinsim;
using spinsim::spin::SpinState;

namespace {

// Wootters concurrence of a two-qubit density matrix, written out here so the
// entanglement check does not lean on the library under test.
double concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(rho * rho_tilde);
  std::array<double, 4> lambdas{};
  for (int i = 0; i < 4; ++i) {
    lambdas[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

}  // namespace

TEST_CASE("hamiltonian structure: singlet sits J below the triplet") {
  double j = 2e-6;
  Eigen::Matrix4cd h0 = exchange::two_spin_hamiltonian(j, 0.44, 0.44, 0.0);
  CHECK((h0 - h0.adjoint()).norm() < 1e-18);

  // Without a field the spectrum is the bare singlet-triplet split.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> zero_field(h0);
  CHECK(zero_field.eigenvalues()(0) == doctest::Approx(-0.75 * j).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(zero_field.eigenvalues()(i) == doctest::Approx(0.25 * j).epsilon(1e-12));
  }

  // At 5 T the Zeeman ladder dominates: the polarized states bracket the
  // spectrum and the singlet/triplet pair sits in the middle, still J apart.
  double zeeman = device::zeeman_splitting(0.44, 5.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> in_field(
      exchange::two_spin_hamiltonian(j, 0.44, 0.44, 5.0));
  CHECK(in_field.eigenvalues()(0) == doctest::Approx(-zeeman + 0.25 * j).epsilon(1e-12));
  CHECK(in_field.eigenvalues()(1) == doctest::Approx(-0.75 * j).epsilon(1e-12));
  CHECK(in_field.eigenvalues()(2) == doctest::Approx(0.25 * j).epsilon(1e-12));
  CHECK(in_field.eigenvalues()(3) == doctest::Approx(zeeman + 0.25 * j).epsilon(1e-12));
}

TEST_CASE("propagator is unitary") {
  rng::Stream stream(41);
  for (int i = 0; i < 10; ++i) {
    double j = 1e-6 * (0.1 + stream.uniform());
    double t = 1e-10 * (0.1 + stream.uniform());
    Eigen::Matrix4cd u = exchange::propagator(j, 0.44, 0.40, 5.0, t);
    CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("swap gate exchanges the middle basis states") {
  Eigen::Matrix4cd u = exchange::swap_gate();
  // |ud> -> e^{-i pi/4} |du>, corners only pick up phases.
  CHECK(std::abs(u(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u(1, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u(1, 1)) < 1e-12);
  CHECK(std::abs(u(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  std::complex<double> expected = std::polar(1.0, -M_PI / 4.0);
  CHECK(std::abs(u(2, 1) - expected) < 1e-12);
}

TEST_CASE("sqrt swap squared is swap") {
  Eigen::Matrix4cd sq = exchange::sqrt_swap_gate();
  CHECK((sq * sq - exchange::swap_gate()).norm() < 1e-12);
}

TEST_CASE("sqrt swap creates a maximally entangled pair") {
  SpinState in = SpinState::tensor(SpinState::pure_up(), SpinState::pure_down());
  Eigen::Matrix4cd u = exchange::sqrt_swap_gate();
  Eigen::Matrix4cd rho = u * in.rho() * u.adjoint();
  CHECK(concurrence(rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a full period returns to the identity up to phase") {
  double j = 2e-6;
  Eigen::Matrix4cd u = exchange::propagator(j, 0.0, 0.0, 5.0, constants::h / j);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(u(i, i)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pulse evolution swaps populations regardless of zeeman phases") {
  SpinState in = SpinState::tensor(SpinState::pure_up(), SpinState::pure_down());
  exchange::ExchangePulse pulse = exchange::ExchangePulse::swap(2e-6);
  SpinState out = exchange::exchange_evolve(in, pulse, 0.44, 0.44, 5.0);
  CHECK(out.marginal_prob_up(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(out.marginal_prob_up(1) == doctest::Approx(1.0).epsilon(1e-10));

  SpinState half = exchange::exchange_evolve(in, exchange::ExchangePulse::sqrt_swap(2e-6), 0.44, 0.44, 5.0);
  CHECK(half.marginal_prob_up(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(half.partial_trace_keep(0).purity() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("detuned dots transfer population by the two-level formula") {
  // J = 2 ueV against a 1 ueV zeeman mismatch: transfer peaks at 4/5.
  double j = 2e-6;
  double g2 = 0.44 - 1e-6 / (constants::mu_B * 5.0);
  double omega = std::hypot(j, 1e-6);
  double t_star = M_PI * constants::hbar / omega;

  exchange::ExchangePulse pulse;
  pulse.j_energy = j;
  pulse.duration = t_star;
  SpinState in = SpinState::tensor(SpinState::pure_up(), SpinState::pure_down());
  SpinState out = exchange::exchange_evolve(in, pulse, 0.44, g2, 5.0);
  CHECK(out.marginal_prob_up(1) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("swap timing") {
  CHECK(exchange::swap_duration(20e9 * constants::h) == doctest::Approx(2.5e-11).epsilon(1e-12));
  CHECK(exchange::ExchangePulse::swap(20e9 * constants::h).duration == doctest::Approx(2.5e-11));
  CHECK(exchange::ExchangePulse::sqrt_swap(20e9 * constants::h).duration == doctest::Approx(1.25e-11));
  CHECK(exchange::ExchangePulse::from_frequency(20e9, 1e-11).j_energy ==
        doctest::Approx(20e9 * constants::h));
  CHECK_THROWS_AS(exchange::swap_duration(0.0), ConfigError);
}

TEST_CASE("barrier model") {
  exchange::BarrierModel model;
  model.j0 = 10e-6;
  model.v0 = 0.1;
  model.v_ref = 0.0;
  CHECK(exchange::j_from_voltage(model, 0.0) == doctest::Approx(10e-6));
  CHECK(exchange::j_from_voltage(model, 0.1) == doctest::Approx(3.6787944117144236e-6).epsilon(1e-12));
  CHECK(exchange::j_from_voltage(model, -0.1) == doctest::Approx(10e-6 * M_E).epsilon(1e-12));

  model.v0 = 0.0;
  CHECK_THROWS_AS(model.validate(), ConfigError);
  model.v0 = 0.1;
  model.j0 = -1e-6;
  CHECK_THROWS_AS(model.validate(), ConfigError);
}

TEST_CASE("evolution rejects single-spin states and bad pulses") {
  SpinState single = SpinState::pure_up();
  exchange::ExchangePulse pulse = exchange::ExchangePulse::swap(2e-6);
  CHECK_THROWS_AS(exchange::exchange_evolve(single, pulse, 0.44, 0.44, 5.0), ConfigError);
  exchange::ExchangePulse bad;
  bad.j_energy = -1e-6;
  bad.duration = 1e-10;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
