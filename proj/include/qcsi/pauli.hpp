#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qcsi/bitstring.hpp"

namespace qcsi {

// Exponent k such that i^k * Z(a_z)X(a_x) is the Hermitian representative of
// the label: k = -|a_z & a_x| mod 4, i.e. the phase (-i)^{a_z . a_x}. With
// this choice representatives of disjoint-support labels multiply with no
// extra sign.
int default_phase_exponent(const BitString2n& label);

// A phased n-qubit Pauli operator: i^{phase_exp} times the Hermitian default
// representative of `label`. Hermitian observables carry phase_exp in {0, 2}
// (sign +1 / -1); odd exponents arise transiently from products and are
// rejected wherever an observable is required.
class PauliObservable {
 public:
  PauliObservable() = default;

  static PauliObservable identity(size_t num_qubits);
  // sign must be +1 or -1.
  static PauliObservable observable(const BitString2n& label, int sign);
  // Arbitrary phase exponent mod 4; products and conjugations use this.
  static PauliObservable phased(const BitString2n& label, int phase_exp);
  // axis is one of 'X', 'Y', 'Z'.
  static PauliObservable single(size_t num_qubits, size_t qubit, char axis, int sign = +1);

  // Text form: optional sign ('+', '-', or U+2212), then one of {I,X,Y,Z} per
  // qubit, leftmost character = qubit 0. Only Hermitian observables parse.
  static PauliObservable parse(std::string_view text);
  std::string str() const;

  const BitString2n& label() const { return label_; }
  size_t num_qubits() const { return label_.num_qubits(); }
  int phase_exp() const { return phase_; }

  bool is_observable() const { return (phase_ & 1) == 0; }
  // +1 or -1; throws if the phase is imaginary.
  int sign() const;
  bool is_identity_label() const { return label_.is_zero(); }

  PauliObservable negated() const;

  bool operator==(const PauliObservable& other) const {
    return phase_ == other.phase_ && label_ == other.label_;
  }
  bool operator!=(const PauliObservable& other) const { return !(*this == other); }

  friend PauliObservable multiply(const PauliObservable& p, const PauliObservable& q);
  PauliObservable operator*(const PauliObservable& other) const {
    return multiply(*this, other);
  }

 private:
  PauliObservable(BitString2n label, int phase) : label_(std::move(label)), phase_(phase & 3) {}

  BitString2n label_;
  int phase_ = 0;  // mod 4
};

// Exact operator product; multiply(P,Q) and multiply(Q,P) differ by
// (-1)^{[a,b]}.
PauliObservable multiply(const PauliObservable& p, const PauliObservable& q);

bool commutes(const PauliObservable& p, const PauliObservable& q);

// Named gates. All but T are Clifford; T appears only on the dense-oracle
// side (cluster-state site rotations) and cannot be conjugated symbolically.
enum class GateKind { I, H, S, X, Y, Z, CZ, T };

struct Gate {
  GateKind kind;
  size_t q0 = 0;
  size_t q1 = 0;  // CZ only

  bool is_two_qubit() const { return kind == GateKind::CZ; }
  bool is_clifford() const { return kind != GateKind::T; }
  std::string str() const;

  static Gate parse(std::string_view name, size_t q0, size_t q1 = 0);
};

// U P U^dagger for a Clifford gate, phase-exact. Throws on T.
PauliObservable conjugate(const Gate& gate, const PauliObservable& p);

// U^dagger P U; same as conjugate for the self-inverse gates, S is cubed.
PauliObservable conjugate_by_inverse(const Gate& gate, const PauliObservable& p);

}  // namespace qcsi
