#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcsi/circuit.hpp"
#include "qcsi/rng.hpp"
#include "qcsi/scheme.hpp"

namespace qcsi {

// Base sign function lambda_0 over inferable labels, with the translation
// action lambda_nu(a) = lambda_0(a) (-1)^[nu,a] giving one value assignment
// per internal state nu.
class ValueAssignment {
 public:
  // lambda_0 identically +1 on all 4^n labels (the all-single-qubit scheme's
  // model for the maximally mixed state).
  static ValueAssignment local_uniform(size_t n);
  static ValueAssignment from_table(size_t n, AssignmentTable table);
  static ValueAssignment from_sic_check(const InferabilityClosure& closure,
                                        const SicCheckResult& result);

  size_t num_qubits() const { return n_; }
  bool covers_all_labels() const { return all_; }
  bool contains(const BitString2n& a) const;

  // lambda_0(a); domain error if a is not inferable.
  int base_sign(const BitString2n& a) const;
  // lambda_nu(a).
  int value(const BitString2n& nu, const BitString2n& a) const;

 private:
  size_t n_ = 0;
  bool all_ = false;
  AssignmentTable table_;
};

inline int assignment_value(const ValueAssignment& lambda, const BitString2n& nu,
                            const BitString2n& a) {
  return lambda.value(nu, a);
}

// Dense probability table over internal states nu in Z_2^{2n}, indexed by
// nu.packed() (z bits low, x bits high).
class HVMDistribution {
 public:
  static constexpr size_t kMaxQubits = 8;

  static HVMDistribution uniform(size_t n);
  static HVMDistribution point_mass(const BitString2n& nu);
  static HVMDistribution from_probabilities(size_t n, std::vector<double> q);

  size_t num_qubits() const { return n_; }
  size_t size() const { return q_.size(); }
  double at(uint64_t index) const { return q_[index]; }
  const std::vector<double>& probabilities() const { return q_; }
  double total() const;

  // q'(nu) = q(nu + u).
  HVMDistribution translated(const BitString2n& u) const;
  BitString2n sample(RngStream& rng) const;

 private:
  HVMDistribution(size_t n, std::vector<double> q) : n_(n), q_(std::move(q)) {}
  size_t n_;
  std::vector<double> q_;
};

// alpha * sum_nu q(nu) lambda_nu(a). Accumulation is per-sign with sorted
// summands, so distributions symmetric under nu -> nu + u cancel to an exact
// zero against characters odd under the same shift.
double hvm_expectation(const HVMDistribution& q, const ValueAssignment& lambda,
                       const BitString2n& a, double alpha = 1.0);

struct ImpossibleOutcomeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeasurementUpdate {
  double probability;
  HVMDistribution posterior;
};

// Conditioned-and-averaged update of q on measuring a directly measurable
// observable with the given outcome. Outcomes with probability below 1e-12
// raise ImpossibleOutcomeError.
MeasurementUpdate exact_measure_update(const HVMDistribution& q, const ValueAssignment& lambda,
                                       const SchemeSpec& spec, const PauliObservable& obs,
                                       int outcome);

// Single-trajectory random walk: emits lambda_nu(a_t) and translates nu by
// a_t with probability 1/2.
class HVMSampler {
 public:
  HVMSampler(const SchemeSpec& spec, ValueAssignment lambda, BitString2n nu0, RngStream rng);

  int step(const PauliObservable& obs);
  const BitString2n& internal_state() const { return nu_; }

 private:
  std::unordered_set<BitString2n, BitString2nHash> measurable_;
  ValueAssignment lambda_;
  BitString2n nu_;
  RngStream rng_;
};

// Initial internal-state law for trajectory simulation; uniform has no qubit
// bound, a table is bounded like HVMDistribution.
class InitialDistribution {
 public:
  static InitialDistribution uniform(size_t n);
  static InitialDistribution table(HVMDistribution q);
  size_t num_qubits() const { return n_; }
  BitString2n sample(RngStream& rng) const;

 private:
  size_t n_ = 0;
  std::optional<HVMDistribution> q_;
};

struct SimulationSummary {
  uint64_t shots = 0;
  uint64_t seed = 0;
  std::vector<PauliObservable> declared_measurements;
  // After propagating the circuit's free gates out through conjugation.
  std::vector<PauliObservable> effective_measurements;
  std::map<std::string, uint64_t> joint_counts;  // "+-+" style keys
  std::vector<double> step_means;
};

// Runs `shots` independent trajectories of the circuit; deterministic for a
// fixed seed regardless of thread count (per-shot counter streams).
SimulationSummary simulate_circuit_hvm(const SchemeSpec& spec, const ValueAssignment& lambda,
                                       const InitialDistribution& initial, const Circuit& circuit,
                                       uint64_t shots, uint64_t seed, unsigned threads = 0);

// Gate-free equivalent measurement list for a circuit (each gate must pass
// check_free_gate).
std::vector<PauliObservable> propagate_measurements(const SchemeSpec& spec,
                                                    const Circuit& circuit);

struct ChainStep {
  PauliObservable observable;  // effective
  int outcome;
  double probability;  // conditional on the prefix
};

struct ChainResult {
  double probability = 0.0;  // joint probability of the outcome string
  std::vector<ChainStep> steps;
  std::optional<HVMDistribution> final_q;  // absent when the chain hit p = 0
};

// Chained exact updates along a fixed outcome string; a zero-probability
// step terminates the chain with joint probability 0 instead of erroring.
ChainResult hvm_exact_chain(const SchemeSpec& spec, const ValueAssignment& lambda,
                            const HVMDistribution& q0, const Circuit& circuit,
                            const std::vector<int>& outcomes);

// Worker count: `requested` if nonzero, else QCSI_LAB_THREADS, else hardware
// concurrency.
unsigned resolve_thread_count(unsigned requested);

}  // namespace qcsi
