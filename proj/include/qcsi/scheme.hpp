#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qcsi/gf2.hpp"
#include "qcsi/pauli.hpp"

namespace qcsi {

// A computation scheme: the directly measurable observables O and the free
// gate generators G (each of which must map O into +-O under conjugation).
struct SchemeSpec {
  size_t n = 0;
  std::vector<PauliObservable> observables;
  std::vector<Gate> gates;

  std::unordered_set<BitString2n, BitString2nHash> measurable_labels() const;
  bool measures_label(const BitString2n& label) const;
};

// All single-qubit Paulis measurable, generated single-qubit Cliffords free.
SchemeSpec make_local_scheme(size_t n);
bool is_local_scheme(const SchemeSpec& spec);

struct SchemeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format, line oriented with '#' comments:
//   n 2
//   observable +XI
//   gate H 0
//   gate CZ 0 1
SchemeSpec parse_scheme(std::istream& in, const std::string& source_name);
SchemeSpec parse_scheme_file(const std::string& path);

// Throws if O contains mismatched sizes or a declared gate fails to
// preserve O; parse_scheme calls this.
void validate_scheme(const SchemeSpec& spec);

// True iff conjugating every element of O by the gate lands in +-O.
bool check_free_gate(const SchemeSpec& spec, const Gate& gate);

// All maximal pairwise-commuting subsets, as sorted index lists in
// deterministic order. Bounded to 24 observables.
std::vector<std::vector<size_t>> maximal_commuting_subsets(
    const std::vector<PauliObservable>& observables);

struct ContextMember {
  BitString2n label;
  int sign;                        // realized sign of the generating product
  std::vector<size_t> provenance;  // indices into O, ascending
};

// A maximal jointly-measurable family: a commuting generator set and the
// product closure it spans.
struct Context {
  std::vector<size_t> generators;
  std::vector<ContextMember> members;  // deduped by label, identity included
};

struct InferableEntry {
  BitString2n label;
  int sign;
  std::vector<size_t> provenance;
};

// Enumeration bounds for the generic closure; the local scheme has an
// analytic path beyond them.
constexpr size_t kMaxEnumeratedObservables = 24;
constexpr size_t kMaxEnumeratedQubits = 5;
constexpr size_t kMaxLocalAnalyticQubits = 16;

struct InferabilityClosure {
  SchemeSpec spec;
  bool analytic_local = false;

  // Materialized form (empty when analytic_local).
  std::vector<Context> contexts;
  std::vector<InferableEntry> inferable;  // sorted by label

  uint64_t inferable_count = 0;
  uint64_t context_count = 0;
  // Every qubit is measurable in at least two complementary Pauli bases.
  bool star_assumption = false;

  bool contains_label(const BitString2n& label) const;
  const InferableEntry* find(const BitString2n& label) const;
};

InferabilityClosure closure(const SchemeSpec& spec);

// Condition C2: every one of the 4^n Pauli labels is inferable.
bool check_tomographic_completeness(const InferabilityClosure& closure);

// Sign table over inferable labels: +1/-1 per label.
using AssignmentTable = std::unordered_map<BitString2n, int, BitString2nHash>;

struct EquationRef {
  size_t context_index;
  BitString2n a, b;
  int rhs;
  std::string str() const;
};

struct SicCheckResult {
  bool feasible = false;
  // Uniform +1 assignment over all labels (analytic local path); the table
  // is empty in that case.
  bool analytic_uniform = false;
  AssignmentTable assignment;
  std::vector<EquationRef> certificate;
};

// Condition C1: consistency of a global value assignment across all context
// triples, decided by a GF(2) solve. Feasible instances return the base
// assignment; infeasible ones return an irredundant conflicting equation
// subset.
SicCheckResult check_absence_of_sic(const InferabilityClosure& closure);

struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks that redefining T'_a := base(a) T_a makes representatives multiply
// exactly (no residual sign) on every context triple, and returns the sign
// table. Throws NormalizationError naming the first violated triple.
AssignmentTable normalize_convention(const InferabilityClosure& closure,
                                     const AssignmentTable& base);

}  // namespace qcsi
