#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcsi {

// A pair of n-bit strings (z, x) labeling an n-qubit Pauli operator, or
// equally a point of the 2n-bit translation group acting on value
// assignments. Addition is bitwise XOR on both halves.
class BitString2n {
 public:
  BitString2n() = default;
  explicit BitString2n(size_t num_qubits);

  // Convenience constructor for n <= 64: bit i of z_bits / x_bits is qubit i.
  static BitString2n from_bits(size_t num_qubits, uint64_t z_bits, uint64_t x_bits);

  // Inverse of packed(): index = z | (x << n), n <= 32.
  static BitString2n from_packed(size_t num_qubits, uint64_t zx);

  size_t num_qubits() const { return n_; }

  bool z(size_t i) const;
  bool x(size_t i) const;
  void set_z(size_t i, bool v);
  void set_x(size_t i, bool v);

  bool is_zero() const;

  // Number of qubits with a nonidentity factor.
  size_t support_weight() const;

  // Dense-table index with z in the low n bits and x in the high n bits.
  uint64_t packed() const;

  BitString2n& operator^=(const BitString2n& other);
  friend BitString2n operator^(BitString2n a, const BitString2n& b) {
    a ^= b;
    return a;
  }

  bool operator==(const BitString2n& other) const;
  bool operator!=(const BitString2n& other) const { return !(*this == other); }

  // Deterministic total order (z words, then x words); used for canonical
  // label orderings in reports and solver variable indexing.
  bool operator<(const BitString2n& other) const;

  // "z:0110 x:1000" style rendering for diagnostics.
  std::string bits_string() const;

  friend int symplectic_form(const BitString2n& a, const BitString2n& b);
  friend size_t overlap_weight(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

  const std::vector<uint64_t>& z_words() const { return z_; }
  const std::vector<uint64_t>& x_words() const { return x_; }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> z_, x_;
};

// Symplectic form [a,b] = a_x . b_z + a_z . b_x mod 2. Zero iff the labeled
// Pauli operators commute. Throws on mismatched qubit counts.
int symplectic_form(const BitString2n& a, const BitString2n& b);

struct BitString2nHash {
  size_t operator()(const BitString2n& s) const;
};

}  // namespace qcsi
