#include "qcsi/pauli.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace qcsi {

int default_phase_exponent(const BitString2n& label) {
  size_t w = overlap_weight(label.z_words(), label.x_words());
  return static_cast<int>((4 - (w & 3)) & 3);
}

PauliObservable PauliObservable::identity(size_t num_qubits) {
  return PauliObservable(BitString2n(num_qubits), 0);
}

PauliObservable PauliObservable::observable(const BitString2n& label, int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument(fmt::format("observable sign must be +1 or -1, got {}", sign));
  }
  return PauliObservable(label, sign == 1 ? 0 : 2);
}

PauliObservable PauliObservable::phased(const BitString2n& label, int phase_exp) {
  return PauliObservable(label, ((phase_exp % 4) + 4) % 4);
}

PauliObservable PauliObservable::single(size_t num_qubits, size_t qubit, char axis, int sign) {
  BitString2n label(num_qubits);
  switch (axis) {
    case 'X':
      label.set_x(qubit, true);
      break;
    case 'Y':
      label.set_x(qubit, true);
      label.set_z(qubit, true);
      break;
    case 'Z':
      label.set_z(qubit, true);
      break;
    default:
      throw std::invalid_argument(fmt::format("axis must be X, Y or Z, got '{}'", axis));
  }
  return observable(label, sign);
}

PauliObservable PauliObservable::parse(std::string_view text) {
  std::string_view rest = text;
  int sign = +1;
  if (!rest.empty() && rest.front() == '+') {
    rest.remove_prefix(1);
  } else if (!rest.empty() && rest.front() == '-') {
    sign = -1;
    rest.remove_prefix(1);
  } else if (rest.size() >= 3 && static_cast<unsigned char>(rest[0]) == 0xE2 &&
             static_cast<unsigned char>(rest[1]) == 0x88 &&
             static_cast<unsigned char>(rest[2]) == 0x92) {
    // UTF-8 minus sign U+2212
    sign = -1;
    rest.remove_prefix(3);
  }
  if (rest.empty()) {
    throw std::invalid_argument(fmt::format("empty Pauli string '{}'", text));
  }
  BitString2n label(rest.size());
  for (size_t i = 0; i < rest.size(); ++i) {
    switch (rest[i]) {
      case 'I':
        break;
      case 'X':
        label.set_x(i, true);
        break;
      case 'Y':
        label.set_x(i, true);
        label.set_z(i, true);
        break;
      case 'Z':
        label.set_z(i, true);
        break;
      default:
        throw std::invalid_argument(
            fmt::format("invalid Pauli character '{}' at position {} in '{}'", rest[i], i, text));
    }
  }
  return observable(label, sign);
}

std::string PauliObservable::str() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string s = prefix[phase_ & 3];
  for (size_t i = 0; i < num_qubits(); ++i) {
    bool zi = label_.z(i), xi = label_.x(i);
    s += zi ? (xi ? 'Y' : 'Z') : (xi ? 'X' : 'I');
  }
  return s;
}

int PauliObservable::sign() const {
  if (!is_observable()) {
    throw std::domain_error(fmt::format("{} carries an imaginary phase, not an observable", str()));
  }
  return phase_ == 0 ? +1 : -1;
}

PauliObservable PauliObservable::negated() const {
  return PauliObservable(label_, phase_ + 2);
}

PauliObservable multiply(const PauliObservable& p, const PauliObservable& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw std::invalid_argument(
        fmt::format("qubit count mismatch: {} vs {}", p.num_qubits(), q.num_qubits()));
  }
  const BitString2n& a = p.label();
  const BitString2n& b = q.label();
  BitString2n c = a ^ b;
  // i^tau relates the product of Hermitian representatives to the
  // representative of the sum: T_a T_b = i^tau T_{a+b}.
  size_t wa = overlap_weight(a.z_words(), a.x_words());
  size_t wb = overlap_weight(b.z_words(), b.x_words());
  size_t wc = overlap_weight(c.z_words(), c.x_words());
  size_t cross = overlap_weight(a.x_words(), b.z_words());
  int tau = static_cast<int>((2 * cross + wc + 4 * (wa + wb) - wa - wb) & 3);
  return PauliObservable(std::move(c), p.phase_exp() + q.phase_exp() + tau);
}

bool commutes(const PauliObservable& p, const PauliObservable& q) {
  return symplectic_form(p.label(), q.label()) == 0;
}

std::string Gate::str() const {
  switch (kind) {
    case GateKind::I:
      return fmt::format("I {}", q0);
    case GateKind::H:
      return fmt::format("H {}", q0);
    case GateKind::S:
      return fmt::format("S {}", q0);
    case GateKind::X:
      return fmt::format("X {}", q0);
    case GateKind::Y:
      return fmt::format("Y {}", q0);
    case GateKind::Z:
      return fmt::format("Z {}", q0);
    case GateKind::T:
      return fmt::format("T {}", q0);
    case GateKind::CZ:
      return fmt::format("CZ {} {}", q0, q1);
  }
  return "?";
}

Gate Gate::parse(std::string_view name, size_t q0, size_t q1) {
  Gate g;
  if (name == "I") {
    g.kind = GateKind::I;
  } else if (name == "H") {
    g.kind = GateKind::H;
  } else if (name == "S") {
    g.kind = GateKind::S;
  } else if (name == "X") {
    g.kind = GateKind::X;
  } else if (name == "Y") {
    g.kind = GateKind::Y;
  } else if (name == "Z") {
    g.kind = GateKind::Z;
  } else if (name == "T") {
    g.kind = GateKind::T;
  } else if (name == "CZ") {
    g.kind = GateKind::CZ;
  } else {
    throw std::invalid_argument(fmt::format("unknown gate name '{}'", name));
  }
  g.q0 = q0;
  g.q1 = q1;
  if (g.is_two_qubit() && q0 == q1) {
    throw std::invalid_argument("CZ targets must be distinct");
  }
  return g;
}

namespace {

// Image of a single Z_i or X_i generator under conjugation by `gate`.
PauliObservable conjugate_generator(const Gate& gate, size_t n, size_t qubit, bool is_x) {
  auto plain = [n](size_t q, char axis, int sign = +1) {
    return PauliObservable::single(n, q, axis, sign);
  };
  bool on_target = qubit == gate.q0 || (gate.is_two_qubit() && qubit == gate.q1);
  if (!on_target) {
    return plain(qubit, is_x ? 'X' : 'Z');
  }
  switch (gate.kind) {
    case GateKind::I:
      return plain(qubit, is_x ? 'X' : 'Z');
    case GateKind::H:
      return plain(qubit, is_x ? 'Z' : 'X');
    case GateKind::S:
      // S X S^dag = Y, S Z S^dag = Z
      return is_x ? plain(qubit, 'Y') : plain(qubit, 'Z');
    case GateKind::X:
      return is_x ? plain(qubit, 'X') : plain(qubit, 'Z', -1);
    case GateKind::Y:
      return plain(qubit, is_x ? 'X' : 'Z', -1);
    case GateKind::Z:
      return is_x ? plain(qubit, 'X', -1) : plain(qubit, 'Z');
    case GateKind::CZ: {
      if (!is_x) {
        return plain(qubit, 'Z');
      }
      // CZ X_a CZ = X_a Z_b
      size_t other = qubit == gate.q0 ? gate.q1 : gate.q0;
      return multiply(plain(qubit, 'X'), plain(other, 'Z'));
    }
    case GateKind::T:
      break;
  }
  throw std::invalid_argument("T is not a Clifford gate; cannot conjugate symbolically");
}

}  // namespace

PauliObservable conjugate(const Gate& gate, const PauliObservable& p) {
  size_t n = p.num_qubits();
  if (gate.q0 >= n || (gate.is_two_qubit() && gate.q1 >= n)) {
    throw std::out_of_range(fmt::format("gate {} out of range for n={}", gate.str(), n));
  }
  // Decompose P into its plain ordered product Z(a_z) X(a_x), conjugate each
  // generator, and multiply the images back in the same order. The plain
  // product equals i^{phase + default} times the stored form, so that factor
  // rides along unchanged.
  PauliObservable acc = PauliObservable::identity(n);
  for (size_t i = 0; i < n; ++i) {
    if (p.label().z(i)) {
      acc = multiply(acc, conjugate_generator(gate, n, i, false));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (p.label().x(i)) {
      acc = multiply(acc, conjugate_generator(gate, n, i, true));
    }
  }
  int phase = p.phase_exp() + default_phase_exponent(p.label()) + acc.phase_exp();
  return PauliObservable::phased(acc.label(), phase);
}

PauliObservable conjugate_by_inverse(const Gate& gate, const PauliObservable& p) {
  if (gate.kind == GateKind::S) {
    return conjugate(gate, conjugate(gate, conjugate(gate, p)));
  }
  return conjugate(gate, p);
}

}  // namespace qcsi
