#include "qcsi/witness.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace qcsi {

std::array<PauliObservable, 4> mermin_terms() {
  return {PauliObservable::parse("+XXX"), PauliObservable::parse("-XZZ"),
          PauliObservable::parse("-ZXZ"), PauliObservable::parse("-ZZX")};
}

DenseState ghz_state() {
  auto terms = mermin_terms();
  return DenseState::ghz_from_stabilizers({terms.begin(), terms.end()});
}

double mermin_quantum_value(const DenseState& state) {
  if (state.num_qubits() != 3) {
    throw std::invalid_argument(
        fmt::format("the witness is a 3-qubit expression; state has {} qubits", state.num_qubits()));
  }
  double value = 0.0;
  for (const auto& term : mermin_terms()) {
    value += state.expectation(term);
  }
  return value;
}

MerminBound mermin_hvm_bound() {
  MerminBound bound{-4, {}, 0};
  for (int mask = 0; mask < 64; ++mask) {
    int v[6];  // x1,x2,x3,z1,z2,z3
    for (int i = 0; i < 6; ++i) v[i] = (mask >> i) & 1 ? -1 : +1;
    int value = v[0] * v[1] * v[2] - v[0] * v[4] * v[5] - v[3] * v[1] * v[5] - v[3] * v[4] * v[2];
    if (value > bound.max_value) {
      bound.max_value = value;
      for (int i = 0; i < 6; ++i) bound.assignment[i] = v[i];
      bound.maximizer_count = 1;
    } else if (value == bound.max_value) {
      ++bound.maximizer_count;
    }
  }
  return bound;
}

MerminReport contextuality_gap(const SchemeSpec& scheme, const DenseState& state) {
  if (scheme.n != 3) {
    throw std::invalid_argument("the witness needs a 3-qubit scheme");
  }
  for (size_t q = 0; q < 3; ++q) {
    for (char axis : {'X', 'Z'}) {
      PauliObservable factor = PauliObservable::single(3, q, axis);
      if (!scheme.measures_label(factor.label())) {
        throw std::domain_error(fmt::format(
            "correlator factor {} is not directly measurable in this scheme", factor.str()));
      }
    }
  }
  MerminReport report;
  report.bound = mermin_hvm_bound();
  report.hvm_max = static_cast<double>(report.bound.max_value);
  double total = 0.0;
  auto terms = mermin_terms();
  for (size_t i = 0; i < terms.size(); ++i) {
    double e = state.expectation(terms[i]);
    report.terms[i] = MerminReport::Term{terms[i], e};
    total += e;
  }
  report.quantum_value = total;
  report.gap = report.quantum_value - report.hvm_max;
  return report;
}

}  // namespace qcsi
