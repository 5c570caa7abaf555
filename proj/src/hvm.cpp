#include "qcsi/hvm.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>

namespace qcsi {

namespace {

// [nu, a] = parity(nu.packed() & mask) with z/x swapped relative to packed().
uint64_t symplectic_mask(const BitString2n& a) {
  return a.x_words()[0] | (a.z_words()[0] << a.num_qubits());
}

int parity(uint64_t bits) { return std::popcount(bits) & 1; }

double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

}  // namespace

ValueAssignment ValueAssignment::local_uniform(size_t n) {
  ValueAssignment va;
  va.n_ = n;
  va.all_ = true;
  return va;
}

ValueAssignment ValueAssignment::from_table(size_t n, AssignmentTable table) {
  ValueAssignment va;
  va.n_ = n;
  va.table_ = std::move(table);
  return va;
}

ValueAssignment ValueAssignment::from_sic_check(const InferabilityClosure& closure,
                                                const SicCheckResult& result) {
  if (!result.feasible) {
    throw std::invalid_argument("scheme admits no consistent value assignment");
  }
  if (result.analytic_uniform) {
    return local_uniform(closure.spec.n);
  }
  return from_table(closure.spec.n, result.assignment);
}

bool ValueAssignment::contains(const BitString2n& a) const {
  if (a.num_qubits() != n_) return false;
  return all_ || table_.contains(a);
}

int ValueAssignment::base_sign(const BitString2n& a) const {
  if (a.num_qubits() != n_) {
    throw std::domain_error(
        fmt::format("label on {} qubits queried against an {}-qubit assignment", a.num_qubits(), n_));
  }
  if (all_) return +1;
  auto it = table_.find(a);
  if (it == table_.end()) {
    throw std::domain_error(fmt::format("label {} is not inferable in this scheme",
                                        PauliObservable::observable(a, +1).str()));
  }
  return it->second;
}

int ValueAssignment::value(const BitString2n& nu, const BitString2n& a) const {
  int base = base_sign(a);
  return symplectic_form(nu, a) ? -base : base;
}

HVMDistribution HVMDistribution::uniform(size_t n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument(
        fmt::format("dense distributions support 1..{} qubits, got {}", kMaxQubits, n));
  }
  size_t dim = 1ull << (2 * n);
  return HVMDistribution(n, std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

HVMDistribution HVMDistribution::point_mass(const BitString2n& nu) {
  size_t n = nu.num_qubits();
  if (n > kMaxQubits) {
    throw std::invalid_argument(
        fmt::format("dense distributions support 1..{} qubits, got {}", kMaxQubits, n));
  }
  std::vector<double> q(1ull << (2 * n), 0.0);
  q[nu.packed()] = 1.0;
  return HVMDistribution(n, std::move(q));
}

HVMDistribution HVMDistribution::from_probabilities(size_t n, std::vector<double> q) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument(
        fmt::format("dense distributions support 1..{} qubits, got {}", kMaxQubits, n));
  }
  if (q.size() != (1ull << (2 * n))) {
    throw std::invalid_argument(
        fmt::format("expected {} entries, got {}", 1ull << (2 * n), q.size()));
  }
  double total = 0.0;
  for (double v : q) {
    if (v < 0.0) throw std::invalid_argument("negative probability entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(fmt::format("probabilities sum to {}, not 1", total));
  }
  return HVMDistribution(n, std::move(q));
}

double HVMDistribution::total() const {
  std::vector<double> values = q_;
  return sorted_sum(values);
}

HVMDistribution HVMDistribution::translated(const BitString2n& u) const {
  if (u.num_qubits() != n_) {
    throw std::invalid_argument("translation on mismatched qubit count");
  }
  uint64_t mask = u.packed();
  std::vector<double> shifted(q_.size());
  for (uint64_t idx = 0; idx < q_.size(); ++idx) {
    shifted[idx] = q_[idx ^ mask];
  }
  return HVMDistribution(n_, std::move(shifted));
}

BitString2n HVMDistribution::sample(RngStream& rng) const {
  double u = rng.next_double();
  double acc = 0.0;
  for (uint64_t idx = 0; idx < q_.size(); ++idx) {
    acc += q_[idx];
    if (u < acc) return BitString2n::from_packed(n_, idx);
  }
  return BitString2n::from_packed(n_, q_.size() - 1);
}

double hvm_expectation(const HVMDistribution& q, const ValueAssignment& lambda,
                       const BitString2n& a, double alpha) {
  if (!lambda.contains(a)) {
    throw std::domain_error(fmt::format("label {} is not inferable in this scheme",
                                        PauliObservable::observable(a, +1).str()));
  }
  int base = lambda.base_sign(a);
  uint64_t mask = symplectic_mask(a);
  std::vector<double> plus, minus;
  plus.reserve(q.size());
  minus.reserve(q.size());
  for (uint64_t idx = 0; idx < q.size(); ++idx) {
    (parity(idx & mask) ? minus : plus).push_back(q.at(idx));
  }
  double value = sorted_sum(plus) - sorted_sum(minus);
  return alpha * static_cast<double>(base) * value;
}

MeasurementUpdate exact_measure_update(const HVMDistribution& q, const ValueAssignment& lambda,
                                       const SchemeSpec& spec, const PauliObservable& obs,
                                       int outcome) {
  if (outcome != 1 && outcome != -1) {
    throw std::invalid_argument("outcome must be +1 or -1");
  }
  const BitString2n& a = obs.label();
  if (!spec.measures_label(a)) {
    throw std::domain_error(
        fmt::format("{} is not directly measurable in this scheme", obs.str()));
  }
  int rep_outcome = outcome * obs.sign();  // outcome relative to the +1 representative
  double expect = hvm_expectation(q, lambda, a);
  double p = 0.5 * (1.0 + static_cast<double>(rep_outcome) * expect);
  if (p < 1e-12) {
    throw ImpossibleOutcomeError(
        fmt::format("outcome {} of {} has probability {}", outcome, obs.str(), p));
  }
  int base = lambda.base_sign(a);
  uint64_t mask = symplectic_mask(a);
  uint64_t shift = a.packed();
  std::vector<double> next(q.size(), 0.0);
  for (uint64_t idx = 0; idx < q.size(); ++idx) {
    int val = parity(idx & mask) ? -base : base;
    if (val == rep_outcome) {
      next[idx] = (q.at(idx) + q.at(idx ^ shift)) / (2.0 * p);
    }
  }
  return MeasurementUpdate{p, HVMDistribution::from_probabilities(q.num_qubits(), std::move(next))};
}

HVMSampler::HVMSampler(const SchemeSpec& spec, ValueAssignment lambda, BitString2n nu0,
                       RngStream rng)
    : measurable_(spec.measurable_labels()),
      lambda_(std::move(lambda)),
      nu_(std::move(nu0)),
      rng_(rng) {
  if (nu_.num_qubits() != lambda_.num_qubits()) {
    throw std::invalid_argument("internal state and assignment disagree on qubit count");
  }
}

int HVMSampler::step(const PauliObservable& obs) {
  if (!measurable_.contains(obs.label())) {
    throw std::domain_error(
        fmt::format("{} is not directly measurable in this scheme", obs.str()));
  }
  int outcome = obs.sign() * lambda_.value(nu_, obs.label());
  if (rng_.next_bool()) {
    nu_ ^= obs.label();
  }
  return outcome;
}

InitialDistribution InitialDistribution::uniform(size_t n) {
  InitialDistribution init;
  init.n_ = n;
  return init;
}

InitialDistribution InitialDistribution::table(HVMDistribution q) {
  InitialDistribution init;
  init.n_ = q.num_qubits();
  init.q_ = std::move(q);
  return init;
}

BitString2n InitialDistribution::sample(RngStream& rng) const {
  if (q_) return q_->sample(rng);
  BitString2n nu(n_);
  for (size_t i = 0; i < n_; ++i) {
    uint64_t bits = rng.next_u64();
    nu.set_z(i, bits & 1);
    nu.set_x(i, bits & 2);
  }
  return nu;
}

std::vector<PauliObservable> propagate_measurements(const SchemeSpec& spec,
                                                    const Circuit& circuit) {
  if (circuit.n != spec.n) {
    throw std::invalid_argument(
        fmt::format("circuit acts on {} qubits, scheme on {}", circuit.n, spec.n));
  }
  std::vector<Gate> pending;
  std::vector<PauliObservable> effective;
  for (const auto& op : circuit.ops) {
    if (const Gate* gate = std::get_if<Gate>(&op)) {
      if (!check_free_gate(spec, *gate)) {
        throw std::invalid_argument(
            fmt::format("gate {} is not free for this scheme", gate->str()));
      }
      pending.push_back(*gate);
      continue;
    }
    const auto& obs = std::get<PauliObservable>(op);
    if (!spec.measures_label(obs.label())) {
      throw std::domain_error(
          fmt::format("{} is not directly measurable in this scheme", obs.str()));
    }
    PauliObservable eff = obs;
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
      eff = conjugate_by_inverse(*it, eff);
    }
    if (!spec.measures_label(eff.label())) {
      throw std::logic_error(fmt::format(
          "free-gate propagation left {} outside the measurable set", eff.str()));
    }
    effective.push_back(eff);
  }
  return effective;
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("QCSI_LAB_THREADS")) {
    unsigned parsed = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (parsed != 0) return parsed;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

SimulationSummary simulate_circuit_hvm(const SchemeSpec& spec, const ValueAssignment& lambda,
                                       const InitialDistribution& initial, const Circuit& circuit,
                                       uint64_t shots, uint64_t seed, unsigned threads) {
  if (shots == 0) {
    throw std::invalid_argument("shot count must be at least 1");
  }
  SimulationSummary summary;
  summary.shots = shots;
  summary.seed = seed;
  for (const auto& op : circuit.ops) {
    if (const auto* obs = std::get_if<PauliObservable>(&op)) {
      summary.declared_measurements.push_back(*obs);
    }
  }
  summary.effective_measurements = propagate_measurements(spec, circuit);
  const auto& measurements = summary.effective_measurements;
  size_t steps = measurements.size();
  summary.step_means.assign(steps, 0.0);
  if (steps == 0) {
    return summary;
  }

  // Per-step hot-loop data; labels were validated by the propagation pass.
  struct StepData {
    BitString2n label;
    int sign;  // observable sign times lambda_0
  };
  std::vector<StepData> step_data;
  for (const auto& m : measurements) {
    step_data.push_back(StepData{m.label(), m.sign() * lambda.base_sign(m.label())});
  }

  unsigned workers = resolve_thread_count(threads);
  workers = static_cast<unsigned>(
      std::min<uint64_t>(workers, std::max<uint64_t>(1, shots / 1024 + 1)));

  struct ChunkResult {
    std::map<std::string, uint64_t> counts;
    std::vector<int64_t> sums;
  };
  std::vector<ChunkResult> chunks(workers);

  auto run_range = [&](uint64_t begin, uint64_t end, ChunkResult& out) {
    out.sums.assign(steps, 0);
    std::string key(steps, '+');
    for (uint64_t shot = begin; shot < end; ++shot) {
      RngStream stream(seed, shot);
      BitString2n nu = initial.sample(stream);
      for (size_t t = 0; t < steps; ++t) {
        const StepData& sd = step_data[t];
        int outcome = symplectic_form(nu, sd.label) ? -sd.sign : sd.sign;
        key[t] = outcome == 1 ? '+' : '-';
        out.sums[t] += outcome;
        if (stream.next_bool()) {
          nu ^= sd.label;
        }
      }
      ++out.counts[key];
    }
  };

  if (workers <= 1) {
    run_range(0, shots, chunks[0]);
  } else {
    std::vector<std::thread> pool;
    uint64_t per = (shots + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      uint64_t begin = static_cast<uint64_t>(w) * per;
      uint64_t end = std::min<uint64_t>(begin + per, shots);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end, std::ref(chunks[w]));
    }
    for (auto& t : pool) t.join();
  }

  std::vector<int64_t> sums(steps, 0);
  for (const auto& chunk : chunks) {
    for (const auto& [key, count] : chunk.counts) {
      summary.joint_counts[key] += count;
    }
    for (size_t t = 0; t < chunk.sums.size(); ++t) {
      sums[t] += chunk.sums[t];
    }
  }
  for (size_t t = 0; t < steps; ++t) {
    summary.step_means[t] = static_cast<double>(sums[t]) / static_cast<double>(shots);
  }
  return summary;
}

ChainResult hvm_exact_chain(const SchemeSpec& spec, const ValueAssignment& lambda,
                            const HVMDistribution& q0, const Circuit& circuit,
                            const std::vector<int>& outcomes) {
  auto measurements = propagate_measurements(spec, circuit);
  if (outcomes.size() != measurements.size()) {
    throw std::invalid_argument(fmt::format("{} outcomes supplied for {} measurements",
                                            outcomes.size(), measurements.size()));
  }
  ChainResult result;
  result.probability = 1.0;
  HVMDistribution q = q0;
  for (size_t t = 0; t < measurements.size(); ++t) {
    const PauliObservable& obs = measurements[t];
    int rep_outcome = outcomes[t] * obs.sign();
    double p =
        0.5 * (1.0 + static_cast<double>(rep_outcome) * hvm_expectation(q, lambda, obs.label()));
    if (p < 1e-12) {
      result.steps.push_back(ChainStep{obs, outcomes[t], 0.0});
      result.probability = 0.0;
      result.final_q.reset();
      return result;
    }
    auto update = exact_measure_update(q, lambda, spec, obs, outcomes[t]);
    result.steps.push_back(ChainStep{obs, outcomes[t], update.probability});
    result.probability *= update.probability;
    q = std::move(update.posterior);
  }
  result.final_q = std::move(q);
  return result;
}

}  // namespace qcsi
