#include "qcsi/bitstring.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace qcsi {

namespace {

constexpr size_t kWordBits = 64;

size_t word_count(size_t n) { return (n + kWordBits - 1) / kWordBits; }

void check_index(size_t i, size_t n) {
  if (i >= n) {
    throw std::out_of_range(fmt::format("qubit index {} out of range for n={}", i, n));
  }
}

}  // namespace

BitString2n::BitString2n(size_t num_qubits) : n_(num_qubits) {
  if (num_qubits == 0) {
    throw std::invalid_argument("qubit count must be at least 1");
  }
  z_.assign(word_count(num_qubits), 0);
  x_.assign(word_count(num_qubits), 0);
}

BitString2n BitString2n::from_bits(size_t num_qubits, uint64_t z_bits, uint64_t x_bits) {
  if (num_qubits > kWordBits) {
    throw std::invalid_argument("from_bits supports at most 64 qubits");
  }
  BitString2n s(num_qubits);
  uint64_t mask = num_qubits == kWordBits ? ~0ull : ((1ull << num_qubits) - 1);
  if ((z_bits & ~mask) || (x_bits & ~mask)) {
    throw std::invalid_argument(fmt::format("bits beyond qubit count n={}", num_qubits));
  }
  s.z_[0] = z_bits;
  s.x_[0] = x_bits;
  return s;
}

BitString2n BitString2n::from_packed(size_t num_qubits, uint64_t zx) {
  if (num_qubits > 32) {
    throw std::invalid_argument("packed indices support at most 32 qubits");
  }
  uint64_t mask = (1ull << num_qubits) - 1;
  return from_bits(num_qubits, zx & mask, (zx >> num_qubits) & mask);
}

bool BitString2n::z(size_t i) const {
  check_index(i, n_);
  return (z_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

bool BitString2n::x(size_t i) const {
  check_index(i, n_);
  return (x_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void BitString2n::set_z(size_t i, bool v) {
  check_index(i, n_);
  uint64_t bit = 1ull << (i % kWordBits);
  if (v) {
    z_[i / kWordBits] |= bit;
  } else {
    z_[i / kWordBits] &= ~bit;
  }
}

void BitString2n::set_x(size_t i, bool v) {
  check_index(i, n_);
  uint64_t bit = 1ull << (i % kWordBits);
  if (v) {
    x_[i / kWordBits] |= bit;
  } else {
    x_[i / kWordBits] &= ~bit;
  }
}

bool BitString2n::is_zero() const {
  for (uint64_t w : z_) {
    if (w) return false;
  }
  for (uint64_t w : x_) {
    if (w) return false;
  }
  return true;
}

size_t BitString2n::support_weight() const {
  size_t total = 0;
  for (size_t w = 0; w < z_.size(); ++w) {
    total += std::popcount(z_[w] | x_[w]);
  }
  return total;
}

uint64_t BitString2n::packed() const {
  if (n_ > 32) {
    throw std::invalid_argument("packed indices support at most 32 qubits");
  }
  return z_[0] | (x_[0] << n_);
}

BitString2n& BitString2n::operator^=(const BitString2n& other) {
  if (n_ != other.n_) {
    throw std::invalid_argument(
        fmt::format("qubit count mismatch: {} vs {}", n_, other.n_));
  }
  for (size_t w = 0; w < z_.size(); ++w) {
    z_[w] ^= other.z_[w];
    x_[w] ^= other.x_[w];
  }
  return *this;
}

bool BitString2n::operator==(const BitString2n& other) const {
  return n_ == other.n_ && z_ == other.z_ && x_ == other.x_;
}

bool BitString2n::operator<(const BitString2n& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  if (z_ != other.z_) return z_ < other.z_;
  return x_ < other.x_;
}

std::string BitString2n::bits_string() const {
  std::string zs, xs;
  for (size_t i = 0; i < n_; ++i) {
    zs += z(i) ? '1' : '0';
    xs += x(i) ? '1' : '0';
  }
  return fmt::format("z:{} x:{}", zs, xs);
}

size_t overlap_weight(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  size_t total = 0;
  for (size_t w = 0; w < a.size(); ++w) {
    total += std::popcount(a[w] & b[w]);
  }
  return total;
}

int symplectic_form(const BitString2n& a, const BitString2n& b) {
  if (a.n_ != b.n_) {
    throw std::invalid_argument(
        fmt::format("qubit count mismatch: {} vs {}", a.n_, b.n_));
  }
  size_t s = overlap_weight(a.x_, b.z_) + overlap_weight(a.z_, b.x_);
  return static_cast<int>(s & 1u);
}

size_t BitString2nHash::operator()(const BitString2n& s) const {
  // FNV-1a over the words; qubit count folded in last.
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (uint64_t w : s.z_words()) mix(w);
  for (uint64_t w : s.x_words()) mix(w);
  mix(static_cast<uint64_t>(s.num_qubits()));
  return static_cast<size_t>(h);
}

}  // namespace qcsi
