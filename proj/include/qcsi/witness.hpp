#pragma once

#include <array>

#include "qcsi/oracle.hpp"
#include "qcsi/scheme.hpp"

namespace qcsi {

// The four signed three-qubit correlators XXX, -XZZ, -ZXZ, -ZZX whose summed
// expectation separates quantum mechanics (4 on the GHZ state) from every
// consistent sign assignment (at most 2).
std::array<PauliObservable, 4> mermin_terms();

// The GHZ state as the joint +1 eigenstate of XXX, -XZZ, -ZXZ, -ZZX.
DenseState ghz_state();

double mermin_quantum_value(const DenseState& state);

struct MerminBound {
  int max_value;                     // exhaustive maximum, integer arithmetic
  std::array<int, 6> assignment;     // x1,x2,x3,z1,z2,z3 achieving it
  int maximizer_count;               // how many of the 64 assignments reach it
};

// Exhaustive search over the 2^6 sign assignments to {X_i, Z_i} with
// correlator values forced by the product rule.
MerminBound mermin_hvm_bound();

struct MerminReport {
  double quantum_value;
  double hvm_max;
  double gap;  // quantum_value - hvm_max
  struct Term {
    PauliObservable observable;
    double expectation;
  };
  std::array<Term, 4> terms;
  MerminBound bound;
};

// Requires every single-qubit X_i / Z_i factor to be directly measurable in
// the scheme; a positive gap certifies the state as contextual for it.
MerminReport contextuality_gap(const SchemeSpec& scheme, const DenseState& state);

}  // namespace qcsi
