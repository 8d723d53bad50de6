#pragma once

#include <Eigen/Dense>
#include <string>

namespace spinsim::spin {

struct BlochVector {
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;

  double norm() const;
};

/// Density matrix of one spin (2x2) or a pair (4x4). Basis order: |up>, |down>
/// for one spin; |uu>, |ud>, |du>, |dd> for two. Construction enforces the
/// state invariants: unit trace (drift above 1e-12 is renormalized, above
/// 1e-6 rejected as an integrator bug), hermiticity, and positivity down to
/// -1e-10 eigenvalue tolerance (small negatives from rounding are projected
/// out, anything below -1e-6 rejected).
class SpinState {
 public:
  static SpinState pure_up();
  static SpinState pure_down();

  /// diag(p_up, 1 - p_up).
  static SpinState mixed(double p_up);

  static SpinState from_bloch(const BlochVector& m);

  /// Validating constructor for externally produced matrices (dim 2 or 4).
  static SpinState from_matrix(const Eigen::MatrixXcd& rho);

  static SpinState tensor(const SpinState& a, const SpinState& b);

  int dim() const { return static_cast<int>(rho_.rows()); }
  int num_spins() const { return dim() == 2 ? 1 : 2; }
  const Eigen::MatrixXcd& rho() const { return rho_; }

  /// Single-spin population of |up>. prob_down() is exactly 1 - prob_up().
  double prob_up() const;
  double prob_down() const;

  /// Marginal p_up of one spin of a pair (index 0 or 1); works for single
  /// spins too (index 0).
  double marginal_prob_up(int qubit) const;

  BlochVector to_bloch() const;

  /// Reduced state of the kept spin (two-spin states only).
  SpinState partial_trace_keep(int keep) const;

  /// Purity tr(rho^2).
  double purity() const;

  /// Fixed-format dump (row-major, "re imag" pairs, 17 significant digits)
  /// for golden-file comparisons.
  std::string debug_string() const;

 private:
  explicit SpinState(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {}

  Eigen::MatrixXcd rho_;
};

/// Applies an affine Bloch-sphere map m -> A*m + c to one spin of a state.
/// This is how the deterministic single-spin channels (relaxation, driven
/// evolution) act on entangled pairs: the map is applied to the spin's Pauli
/// components while the partner's are carried along linearly.
SpinState apply_affine_bloch_map(const SpinState& state, int qubit, const Eigen::Matrix3d& a,
                                 const Eigen::Vector3d& c);

/// Projects one spin of a state onto |up> (spin_up = true) or |down> and
/// renormalizes; returns the conditioned joint state. Throws NumericError if
/// the projected branch has vanishing probability.
SpinState project_spin(const SpinState& state, int qubit, bool spin_up);

}  // namespace spinsim::spin
