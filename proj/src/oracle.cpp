#include "qcsi/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace qcsi {

namespace {

using cd = std::complex<double>;

constexpr cd kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct PauliAction {
  uint64_t z_mask;
  uint64_t x_mask;
  cd prefactor;  // i^{phase + default}
};

PauliAction action_of(const PauliObservable& p) {
  if (p.num_qubits() > 32) {
    throw std::invalid_argument("dense Pauli action limited to 32 qubits");
  }
  PauliAction a;
  a.z_mask = p.label().z_words()[0];
  a.x_mask = p.label().x_words()[0];
  a.prefactor = kPhases[(p.phase_exp() + default_phase_exponent(p.label())) & 3];
  return a;
}

int parity_sign(uint64_t bits) { return (std::popcount(bits) & 1) ? -1 : +1; }

// phi = P psi
Eigen::VectorXcd apply_pauli(const PauliAction& a, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    uint64_t uk = static_cast<uint64_t>(k);
    out[k] = a.prefactor * static_cast<double>(parity_sign(a.z_mask & uk)) *
             psi[static_cast<Eigen::Index>(uk ^ a.x_mask)];
  }
  return out;
}

Eigen::Matrix2cd gate_matrix(GateKind kind) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::I:
      m << 1, 0, 0, 1;
      return m;
    case GateKind::H:
      m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
      return m;
    case GateKind::S:
      m << 1, 0, 0, cd(0, 1);
      return m;
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::Y:
      m << 0, cd(0, -1), cd(0, 1), 0;
      return m;
    case GateKind::Z:
      m << 1, 0, 0, -1;
      return m;
    case GateKind::T:
      // e^{-i pi/8 Z}
      m << std::polar(1.0, -std::numbers::pi / 8), 0, 0, std::polar(1.0, std::numbers::pi / 8);
      return m;
    case GateKind::CZ:
      break;
  }
  throw std::logic_error("no single-qubit matrix for CZ");
}

void apply_gate_to_vector(Eigen::VectorXcd& psi, const Gate& gate) {
  if (gate.kind == GateKind::CZ) {
    uint64_t m0 = 1ull << gate.q0, m1 = 1ull << gate.q1;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      uint64_t uk = static_cast<uint64_t>(k);
      if ((uk & m0) && (uk & m1)) psi[k] = -psi[k];
    }
    return;
  }
  Eigen::Matrix2cd u = gate_matrix(gate.kind);
  uint64_t qm = 1ull << gate.q0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    uint64_t uk = static_cast<uint64_t>(k);
    if (uk & qm) continue;
    Eigen::Index k1 = static_cast<Eigen::Index>(uk | qm);
    cd a = psi[k], b = psi[k1];
    psi[k] = u(0, 0) * a + u(0, 1) * b;
    psi[k1] = u(1, 0) * a + u(1, 1) * b;
  }
}

}  // namespace

DenseState DenseState::zeros(size_t num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxPureQubits) {
    throw std::invalid_argument(
        fmt::format("pure states support 1..{} qubits, got {}", kMaxPureQubits, num_qubits));
  }
  DenseState s;
  s.n_ = num_qubits;
  s.amps_ = Eigen::VectorXcd::Zero(1ll << num_qubits);
  s.amps_[0] = 1.0;
  return s;
}

DenseState DenseState::plus_states(size_t num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxPureQubits) {
    throw std::invalid_argument(
        fmt::format("pure states support 1..{} qubits, got {}", kMaxPureQubits, num_qubits));
  }
  DenseState s;
  s.n_ = num_qubits;
  Eigen::Index dim = 1ll << num_qubits;
  s.amps_ = Eigen::VectorXcd::Constant(dim, cd(1.0 / std::sqrt(static_cast<double>(dim)), 0));
  return s;
}

DenseState DenseState::maximally_mixed(size_t num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxDensityQubits) {
    throw std::invalid_argument(
        fmt::format("density matrices support 1..{} qubits, got {}", kMaxDensityQubits, num_qubits));
  }
  DenseState s;
  s.n_ = num_qubits;
  Eigen::Index dim = 1ll << num_qubits;
  s.density_ = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return s;
}

DenseState DenseState::from_amplitudes(size_t num_qubits, Eigen::VectorXcd amplitudes) {
  if (num_qubits == 0 || num_qubits > kMaxPureQubits) {
    throw std::invalid_argument(
        fmt::format("pure states support 1..{} qubits, got {}", kMaxPureQubits, num_qubits));
  }
  if (amplitudes.size() != (1ll << num_qubits)) {
    throw std::invalid_argument(fmt::format("expected {} amplitudes, got {}", 1ll << num_qubits,
                                            amplitudes.size()));
  }
  double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument(fmt::format("state vector norm {} is not 1", norm));
  }
  DenseState s;
  s.n_ = num_qubits;
  s.amps_ = amplitudes / norm;
  return s;
}

DenseState DenseState::ghz_from_stabilizers(const std::vector<PauliObservable>& stabilizers) {
  if (stabilizers.empty()) {
    throw std::invalid_argument("stabilizer list is empty");
  }
  size_t n = stabilizers[0].num_qubits();
  if (n > kMaxDensityQubits) {
    throw std::invalid_argument("stabilizer preparation limited to density-size systems");
  }
  for (const auto& g : stabilizers) {
    if (!g.is_observable()) {
      throw std::invalid_argument(fmt::format("{} is not a Hermitian observable", g.str()));
    }
    if (g.num_qubits() != n) {
      throw std::invalid_argument("stabilizers act on mismatched qubit counts");
    }
    for (const auto& h : stabilizers) {
      if (!commutes(g, h)) {
        throw std::invalid_argument(
            fmt::format("stabilizers {} and {} anticommute", g.str(), h.str()));
      }
    }
  }
  Eigen::Index dim = 1ll << n;
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : stabilizers) {
    proj = 0.5 * (proj + pauli_matrix(g) * proj);
  }
  double rank = proj.trace().real();
  if (rank < 0.5) {
    throw std::invalid_argument("stabilizer set is inconsistent (empty joint eigenspace)");
  }
  if (rank > 1.5) {
    throw std::invalid_argument(
        fmt::format("stabilizer set does not pin a unique state (subspace dimension {:.1f})", rank));
  }
  Eigen::Index best = 0;
  proj.colwise().norm().maxCoeff(&best);
  Eigen::VectorXcd psi = proj.col(best);
  psi.normalize();
  DenseState s;
  s.n_ = n;
  s.amps_ = psi;
  for (const auto& g : stabilizers) {
    if ((apply_pauli(action_of(g), psi) - psi).norm() > 1e-10) {
      throw std::logic_error(fmt::format("prepared state not stabilized by {}", g.str()));
    }
  }
  return s;
}

const Eigen::VectorXcd& DenseState::amplitudes() const {
  if (is_density()) {
    throw std::logic_error("state is a density matrix, not a pure vector");
  }
  return amps_;
}

const Eigen::MatrixXcd& DenseState::density() const {
  if (!is_density()) {
    throw std::logic_error("state is a pure vector; use as_density()");
  }
  return density_;
}

DenseState DenseState::as_density() const {
  if (is_density()) return *this;
  if (n_ > kMaxDensityQubits) {
    throw std::invalid_argument(
        fmt::format("density matrices support up to {} qubits", kMaxDensityQubits));
  }
  DenseState s;
  s.n_ = n_;
  s.density_ = amps_ * amps_.adjoint();
  return s;
}

void DenseState::apply(const Gate& gate) {
  if (gate.q0 >= n_ || (gate.is_two_qubit() && gate.q1 >= n_)) {
    throw std::out_of_range(fmt::format("gate {} out of range for n={}", gate.str(), n_));
  }
  if (!is_density()) {
    apply_gate_to_vector(amps_, gate);
    return;
  }
  // rho -> U rho U^dag: act on columns, conjugate, act on columns again.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < density_.cols(); ++c) {
      Eigen::VectorXcd col = density_.col(c);
      apply_gate_to_vector(col, gate);
      density_.col(c) = col;
    }
    density_.adjointInPlace();
  }
}

double DenseState::expectation(const PauliObservable& p) const {
  if (p.num_qubits() != n_) {
    throw std::invalid_argument(
        fmt::format("observable on {} qubits applied to {}-qubit state", p.num_qubits(), n_));
  }
  PauliAction a = action_of(p);
  cd acc(0, 0);
  if (!is_density()) {
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
      uint64_t uk = static_cast<uint64_t>(k);
      acc += std::conj(amps_[k]) * a.prefactor *
             static_cast<double>(parity_sign(a.z_mask & uk)) *
             amps_[static_cast<Eigen::Index>(uk ^ a.x_mask)];
    }
  } else {
    for (Eigen::Index k = 0; k < density_.rows(); ++k) {
      uint64_t uk = static_cast<uint64_t>(k);
      acc += a.prefactor * static_cast<double>(parity_sign(a.z_mask & uk)) *
             density_(static_cast<Eigen::Index>(uk ^ a.x_mask), k);
    }
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw std::logic_error(
        fmt::format("expectation of {} has imaginary part {}", p.str(), acc.imag()));
  }
  return acc.real();
}

DenseState::Projection DenseState::project(const PauliObservable& p, int outcome) const {
  if (outcome != 1 && outcome != -1) {
    throw std::invalid_argument("outcome must be +1 or -1");
  }
  if (p.num_qubits() != n_) {
    throw std::invalid_argument(
        fmt::format("observable on {} qubits applied to {}-qubit state", p.num_qubits(), n_));
  }
  double s = static_cast<double>(outcome);
  Projection result;
  if (!is_density()) {
    Eigen::VectorXcd phi = 0.5 * (amps_ + s * apply_pauli(action_of(p), amps_));
    result.probability = phi.squaredNorm();
    if (result.probability > 0) {
      result.state.n_ = n_;
      result.state.amps_ = phi / std::sqrt(result.probability);
    }
  } else {
    Eigen::Index dim = density_.rows();
    Eigen::MatrixXcd proj =
        0.5 * (Eigen::MatrixXcd::Identity(dim, dim) + s * pauli_matrix(p));
    Eigen::MatrixXcd num = proj * density_ * proj;
    result.probability = num.trace().real();
    if (result.probability > 0) {
      result.state.n_ = n_;
      result.state.density_ = num / result.probability;
    }
  }
  return result;
}

DenseState::Projection DenseState::project_xy(size_t qubit, double theta, int outcome) const {
  if (qubit >= n_) {
    throw std::out_of_range(fmt::format("qubit {} out of range for n={}", qubit, n_));
  }
  if (is_density()) {
    throw std::logic_error("project_xy implemented for pure states only");
  }
  double s = static_cast<double>(outcome);
  PauliAction ax = action_of(PauliObservable::single(n_, qubit, 'X'));
  PauliAction ay = action_of(PauliObservable::single(n_, qubit, 'Y'));
  Eigen::VectorXcd phi = 0.5 * (amps_ + s * std::cos(theta) * apply_pauli(ax, amps_) +
                                s * std::sin(theta) * apply_pauli(ay, amps_));
  Projection result;
  result.probability = phi.squaredNorm();
  if (result.probability > 0) {
    result.state.n_ = n_;
    result.state.amps_ = phi / std::sqrt(result.probability);
  }
  return result;
}

DenseState::MeasureResult DenseState::measure(const PauliObservable& p, RngStream& rng) const {
  double p_plus = 0.5 * (1.0 + expectation(p));
  p_plus = std::clamp(p_plus, 0.0, 1.0);
  int outcome = rng.next_double() < p_plus ? +1 : -1;
  Projection proj = project(p, outcome);
  return MeasureResult{outcome, proj.probability, std::move(proj.state)};
}

DenseState DenseState::depolarized(double eps) const {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument(fmt::format("mixing strength {} outside [0,1]", eps));
  }
  DenseState rho = as_density();
  Eigen::Index dim = rho.density_.rows();
  rho.density_ = (1.0 - eps) * rho.density_ +
                 eps * Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return rho;
}

Eigen::Matrix2cd DenseState::reduced_qubit(size_t qubit) const {
  if (qubit >= n_) {
    throw std::out_of_range(fmt::format("qubit {} out of range for n={}", qubit, n_));
  }
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  uint64_t qm = 1ull << qubit;
  if (!is_density()) {
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
      uint64_t uk = static_cast<uint64_t>(k);
      if (uk & qm) continue;
      Eigen::Index k1 = static_cast<Eigen::Index>(uk | qm);
      rho(0, 0) += amps_[k] * std::conj(amps_[k]);
      rho(0, 1) += amps_[k] * std::conj(amps_[k1]);
      rho(1, 0) += amps_[k1] * std::conj(amps_[k]);
      rho(1, 1) += amps_[k1] * std::conj(amps_[k1]);
    }
  } else {
    for (Eigen::Index k = 0; k < density_.rows(); ++k) {
      uint64_t uk = static_cast<uint64_t>(k);
      if (uk & qm) continue;
      Eigen::Index k1 = static_cast<Eigen::Index>(uk | qm);
      rho(0, 0) += density_(k, k);
      rho(0, 1) += density_(k, k1);
      rho(1, 0) += density_(k1, k);
      rho(1, 1) += density_(k1, k1);
    }
  }
  return rho;
}

DenseState DenseState::reduced_pure_qubit(size_t qubit, double tol) const {
  Eigen::Matrix2cd rho = reduced_qubit(qubit);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  double top = es.eigenvalues()(1);
  if (std::abs(top - 1.0) > tol) {
    throw std::runtime_error(
        fmt::format("reduced state of qubit {} is not pure (top eigenvalue {})", qubit, top));
  }
  Eigen::VectorXcd psi = es.eigenvectors().col(1);
  DenseState s;
  s.n_ = 1;
  s.amps_ = psi;
  return s;
}

double fidelity(const DenseState& a, const DenseState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("fidelity of states on different qubit counts");
  }
  if (!a.is_density() && !b.is_density()) {
    cd inner = a.amplitudes().adjoint() * b.amplitudes();
    return std::norm(inner);
  }
  if (!a.is_density()) {
    cd val = (a.amplitudes().adjoint() * b.density() * a.amplitudes())(0);
    return val.real();
  }
  if (!b.is_density()) {
    return fidelity(b, a);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.density());
  Eigen::VectorXd ev = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXcd sqrt_a =
      ea.eigenvectors() * ev.asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(sqrt_a * b.density() * sqrt_a);
  double root_sum = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

Eigen::MatrixXcd pauli_matrix(const PauliObservable& p) {
  if (p.num_qubits() > 10) {
    throw std::invalid_argument("dense Pauli matrices limited to 10 qubits");
  }
  PauliAction a = action_of(p);
  Eigen::Index dim = 1ll << p.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    uint64_t uj = static_cast<uint64_t>(j);
    m(static_cast<Eigen::Index>(uj ^ a.x_mask), j) =
        a.prefactor * static_cast<double>(parity_sign(a.z_mask & (uj ^ a.x_mask)));
  }
  return m;
}

}  // namespace qcsi
