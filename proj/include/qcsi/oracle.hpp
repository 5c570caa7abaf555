#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qcsi/pauli.hpp"
#include "qcsi/rng.hpp"

namespace qcsi {

// Exact dense reference states. Pure vectors up to 14 qubits, density
// matrices up to 7; amplitude index has qubit 0 in the least significant bit.
class DenseState {
 public:
  static constexpr size_t kMaxPureQubits = 14;
  static constexpr size_t kMaxDensityQubits = 7;

  static DenseState zeros(size_t num_qubits);
  static DenseState plus_states(size_t num_qubits);
  static DenseState maximally_mixed(size_t num_qubits);
  static DenseState from_amplitudes(size_t num_qubits, Eigen::VectorXcd amplitudes);
  // Joint +1 eigenstate of the listed commuting signed Paulis; the list must
  // pin down a one-dimensional subspace.
  static DenseState ghz_from_stabilizers(const std::vector<PauliObservable>& stabilizers);

  size_t num_qubits() const { return n_; }
  bool is_density() const { return density_.size() > 0; }

  const Eigen::VectorXcd& amplitudes() const;
  const Eigen::MatrixXcd& density() const;
  DenseState as_density() const;

  void apply(const Gate& gate);

  // tr(P rho); asserts the imaginary part is negligible.
  double expectation(const PauliObservable& p) const;

  struct Projection {
    double probability;
    DenseState state;  // meaningful only when probability > 0
  };
  Projection project(const PauliObservable& p, int outcome) const;

  // Projective measurement of the axis cos(theta) X + sin(theta) Y on one
  // qubit; used to compare rotated-site statistics against tilted axes.
  Projection project_xy(size_t qubit, double theta, int outcome) const;

  struct MeasureResult {
    int outcome;
    double probability;
    DenseState state;
  };
  MeasureResult measure(const PauliObservable& p, RngStream& rng) const;

  // (1 - eps) rho + eps I/2^n, as a density matrix.
  DenseState depolarized(double eps) const;

  // Partial trace down to one qubit.
  Eigen::Matrix2cd reduced_qubit(size_t qubit) const;
  // As above but requires the reduced state to be pure; returns a 1-qubit
  // pure state.
  DenseState reduced_pure_qubit(size_t qubit, double tol = 1e-9) const;

 private:
  DenseState() = default;

  size_t n_ = 0;
  Eigen::VectorXcd amps_;    // pure representation
  Eigen::MatrixXcd density_;  // density representation (exclusive)
};

// State fidelity: |<a|b>|^2 for pure states, tr(sqrt(sqrt(a) b sqrt(a)))^2 in
// general. Symmetric, in [0, 1].
double fidelity(const DenseState& a, const DenseState& b);

// Dense matrix of a phased Pauli (small n only; used by tests and the
// stabilizer-state constructor).
Eigen::MatrixXcd pauli_matrix(const PauliObservable& p);

}  // namespace qcsi
