#include "spinsim/spin_state.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>

#include "spinsim/errors.hpp"

namespace spinsim::spin {
namespace {

using std::complex;
using cd = complex<double>;

// Trace drift below kTraceQuiet is left alone, up to kDriftReject silently
// repaired, beyond that treated as an integrator bug. Same split for
// hermiticity and negative eigenvalues.
constexpr double kTraceQuiet = 1e-12;
constexpr double kDriftReject = 1e-6;
constexpr double kEigenQuiet = 1e-10;

const std::array<Eigen::Matrix2cd, 4>& pauli_basis() {
  static const std::array<Eigen::Matrix2cd, 4> basis = [] {
    std::array<Eigen::Matrix2cd, 4> b;
    b[0] << 1, 0, 0, 1;
    b[1] << 0, 1, 1, 0;
    b[2] << 0, cd(0, -1), cd(0, 1), 0;
    b[3] << 1, 0, 0, -1;
    return b;
  }();
  return basis;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }

SpinState SpinState::pure_up() {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.0;
  return SpinState(std::move(rho));
}

SpinState SpinState::pure_down() {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(1, 1) = 1.0;
  return SpinState(std::move(rho));
}

SpinState SpinState::mixed(double p_up) {
  if (p_up < 0.0 || p_up > 1.0) throw ConfigError("mixed: p_up outside [0, 1]");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = p_up;
  rho(1, 1) = 1.0 - p_up;
  return SpinState(std::move(rho));
}

SpinState SpinState::from_bloch(const BlochVector& m) {
  if (m.norm() > 1.0 + 1e-9) throw NumericError("from_bloch: vector length exceeds 1");
  Eigen::MatrixXcd rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + m.mz);
  rho(1, 1) = 0.5 * (1.0 - m.mz);
  rho(0, 1) = 0.5 * cd(m.mx, -m.my);
  rho(1, 0) = 0.5 * cd(m.mx, m.my);
  return from_matrix(rho);
}

SpinState SpinState::from_matrix(const Eigen::MatrixXcd& rho) {
  if (!((rho.rows() == 2 && rho.cols() == 2) || (rho.rows() == 4 && rho.cols() == 4))) {
    throw ConfigError("state matrix must be 2x2 or 4x4");
  }
  if (rho.hasNaN()) throw NumericError("state matrix contains NaN");

  double herm_drift = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_drift > kDriftReject) throw NumericError("state matrix not hermitian (drift " + std::to_string(herm_drift) + ")");
  Eigen::MatrixXcd fixed = 0.5 * (rho + rho.adjoint().eval());

  double trace = fixed.trace().real();
  if (std::fabs(trace - 1.0) > kDriftReject) {
    throw NumericError("state trace drifted to " + std::to_string(trace));
  }
  if (std::fabs(trace - 1.0) > kTraceQuiet) fixed /= trace;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fixed);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kDriftReject) {
    throw NumericError("state not positive (eigenvalue " + std::to_string(min_eig) + ")");
  }
  if (min_eig < -kEigenQuiet) {
    // Rounding pushed an eigenvalue slightly negative; project back.
    Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    clipped /= clipped.sum();
    fixed = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  }
  return SpinState(std::move(fixed));
}

SpinState SpinState::tensor(const SpinState& a, const SpinState& b) {
  if (a.num_spins() != 1 || b.num_spins() != 1) {
    throw ConfigError("tensor: both factors must be single-spin states");
  }
  return SpinState(kron(a.rho_, b.rho_));
}

double SpinState::prob_up() const {
  if (num_spins() != 1) throw ConfigError("prob_up: single-spin states only, use marginal_prob_up");
  return rho_(0, 0).real();
}

double SpinState::prob_down() const { return 1.0 - prob_up(); }

double SpinState::marginal_prob_up(int qubit) const {
  if (qubit < 0 || qubit >= num_spins()) throw ConfigError("marginal_prob_up: qubit index out of range");
  if (num_spins() == 1) return rho_(0, 0).real();
  if (qubit == 0) return (rho_(0, 0) + rho_(1, 1)).real();
  return (rho_(0, 0) + rho_(2, 2)).real();
}

BlochVector SpinState::to_bloch() const {
  if (num_spins() != 1) throw ConfigError("to_bloch: single-spin states only");
  BlochVector m;
  m.mx = 2.0 * rho_(0, 1).real();
  m.my = -2.0 * rho_(0, 1).imag();
  m.mz = (rho_(0, 0) - rho_(1, 1)).real();
  return m;
}

SpinState SpinState::partial_trace_keep(int keep) const {
  if (num_spins() != 2) throw ConfigError("partial_trace_keep: two-spin states only");
  if (keep != 0 && keep != 1) throw ConfigError("partial_trace_keep: index must be 0 or 1");
  Eigen::MatrixXcd out(2, 2);
  if (keep == 0) {
    out(0, 0) = rho_(0, 0) + rho_(1, 1);
    out(0, 1) = rho_(0, 2) + rho_(1, 3);
    out(1, 0) = rho_(2, 0) + rho_(3, 1);
    out(1, 1) = rho_(2, 2) + rho_(3, 3);
  } else {
    out(0, 0) = rho_(0, 0) + rho_(2, 2);
    out(0, 1) = rho_(0, 1) + rho_(2, 3);
    out(1, 0) = rho_(1, 0) + rho_(3, 2);
    out(1, 1) = rho_(1, 1) + rho_(3, 3);
  }
  return from_matrix(out);
}

double SpinState::purity() const { return (rho_ * rho_).trace().real(); }

std::string SpinState::debug_string() const {
  std::string out = "dim " + std::to_string(dim()) + "\n";
  char buf[64];
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", rho_(i, j).real(), rho_(i, j).imag());
      out += buf;
      out += (j + 1 < dim()) ? "  " : "\n";
    }
  }
  return out;
}

SpinState apply_affine_bloch_map(const SpinState& state, int qubit, const Eigen::Matrix3d& a,
                                 const Eigen::Vector3d& c) {
  if (qubit < 0 || qubit >= state.num_spins()) throw ConfigError("affine map: qubit index out of range");
  const auto& sigma = pauli_basis();

  if (state.num_spins() == 1) {
    BlochVector m = state.to_bloch();
    Eigen::Vector3d v(m.mx, m.my, m.mz);
    Eigen::Vector3d w = a * v + c;
    return SpinState::from_bloch(BlochVector{w(0), w(1), w(2)});
  }

  // Pauli components t[a][b] = tr(rho * sigma_a x sigma_b); the map acts on
  // the chosen spin's index, identity-extended over the partner.
  double t[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = (state.rho() * kron(sigma[i], sigma[j])).trace().real();

  double tn[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tn[i][j] = t[i][j];
  if (qubit == 0) {
    for (int b = 0; b < 4; ++b) {
      for (int i = 0; i < 3; ++i) {
        double acc = c(i) * t[0][b];
        for (int j = 0; j < 3; ++j) acc += a(i, j) * t[j + 1][b];
        tn[i + 1][b] = acc;
      }
    }
  } else {
    for (int r = 0; r < 4; ++r) {
      for (int i = 0; i < 3; ++i) {
        double acc = c(i) * t[r][0];
        for (int j = 0; j < 3; ++j) acc += a(i, j) * t[r][j + 1];
        tn[r][i + 1] = acc;
      }
    }
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho += 0.25 * tn[i][j] * kron(sigma[i], sigma[j]);
  return SpinState::from_matrix(rho);
}

SpinState project_spin(const SpinState& state, int qubit, bool spin_up) {
  if (qubit < 0 || qubit >= state.num_spins()) throw ConfigError("project_spin: qubit index out of range");

  if (state.num_spins() == 1) {
    double p = spin_up ? state.prob_up() : state.prob_down();
    if (p < 1e-300) throw NumericError("project_spin: branch has zero probability");
    return spin_up ? SpinState::pure_up() : SpinState::pure_down();
  }

  Eigen::MatrixXcd rho = state.rho();
  // Zero out the discarded branch of the chosen spin.
  auto keep = [&](int index) {
    int bit = (qubit == 0) ? (index >> 1) : (index & 1);
    return (bit == 0) == spin_up;
  };
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!keep(i) || !keep(j)) rho(i, j) = 0.0;
    }
  }
  double p = rho.trace().real();
  if (p < 1e-300) throw NumericError("project_spin: branch has zero probability");
  return SpinState::from_matrix(rho / p);
}

}  // namespace spinsim::spin
