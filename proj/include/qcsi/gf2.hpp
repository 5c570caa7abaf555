#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qcsi::gf2 {

// A linear system over GF(2). Equations are XOR constraints on boolean
// variables; each carries a caller-supplied tag used in infeasibility
// certificates. Solving is deterministic: rows are processed in insertion
// order and free variables are fixed to 0.
class LinearSystem {
 public:
  explicit LinearSystem(size_t num_vars);

  // Variables listed an even number of times cancel.
  void add_equation(std::span<const size_t> vars, int rhs, size_t tag);

  size_t num_vars() const { return num_vars_; }
  size_t num_equations() const { return rows_.size(); }

  struct Result {
    bool feasible;
    // Variable values when feasible.
    std::vector<uint8_t> solution;
    // Tags of an irredundant equation subset XOR-summing to 0 = 1 when
    // infeasible, in ascending insertion order.
    std::vector<size_t> certificate_tags;
  };

  Result solve() const;

  // True iff the tagged equations XOR to the contradiction 0 = 1.
  bool certificate_is_valid(const std::vector<size_t>& tags) const;

 private:
  struct Row {
    std::vector<uint64_t> coeffs;  // num_vars bits
    uint8_t rhs;
    size_t tag;
  };

  // Runs elimination over the given row indices; returns the indices (into
  // rows_) of a conflicting combination if one exists.
  std::optional<std::vector<size_t>> find_conflict(const std::vector<size_t>& row_indices) const;

  size_t num_vars_;
  size_t words_;
  std::vector<Row> rows_;
};

}  // namespace qcsi::gf2
