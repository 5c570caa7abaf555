#include "qcsi/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace qcsi {

std::unordered_set<BitString2n, BitString2nHash> SchemeSpec::measurable_labels() const {
  std::unordered_set<BitString2n, BitString2nHash> labels;
  for (const auto& o : observables) labels.insert(o.label());
  return labels;
}

bool SchemeSpec::measures_label(const BitString2n& label) const {
  for (const auto& o : observables) {
    if (o.label() == label) return true;
  }
  return false;
}

SchemeSpec make_local_scheme(size_t n) {
  SchemeSpec spec;
  spec.n = n;
  for (size_t q = 0; q < n; ++q) {
    for (char axis : {'X', 'Z', 'Y'}) {
      spec.observables.push_back(PauliObservable::single(n, q, axis));
    }
  }
  for (size_t q = 0; q < n; ++q) {
    spec.gates.push_back(Gate{GateKind::H, q});
    spec.gates.push_back(Gate{GateKind::S, q});
  }
  return spec;
}

bool is_local_scheme(const SchemeSpec& spec) {
  if (spec.observables.size() != 3 * spec.n) return false;
  std::unordered_set<BitString2n, BitString2nHash> seen;
  for (const auto& o : spec.observables) {
    if (o.sign() != +1) return false;
    if (o.label().support_weight() != 1) return false;
    if (!seen.insert(o.label()).second) return false;
  }
  return seen.size() == 3 * spec.n;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

size_t parse_index(const std::string& tok, const std::string& source, size_t line_no) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return static_cast<size_t>(v);
  } catch (const std::exception&) {
    throw SchemeParseError(fmt::format("{}:{}: expected an index, got '{}'", source, line_no, tok));
  }
}

}  // namespace

SchemeSpec parse_scheme(std::istream& in, const std::string& source_name) {
  SchemeSpec spec;
  bool have_n = false;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "n") {
      if (tokens.size() != 2) {
        throw SchemeParseError(fmt::format("{}:{}: expected 'n <count>'", source_name, line_no));
      }
      spec.n = parse_index(tokens[1], source_name, line_no);
      if (spec.n == 0) {
        throw SchemeParseError(fmt::format("{}:{}: qubit count must be positive", source_name, line_no));
      }
      have_n = true;
    } else if (key == "observable") {
      if (!have_n) {
        throw SchemeParseError(
            fmt::format("{}:{}: 'n' must be declared before observables", source_name, line_no));
      }
      if (tokens.size() != 2) {
        throw SchemeParseError(
            fmt::format("{}:{}: expected 'observable <pauli string>'", source_name, line_no));
      }
      PauliObservable obs = [&] {
        try {
          return PauliObservable::parse(tokens[1]);
        } catch (const std::exception& e) {
          throw SchemeParseError(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
        }
      }();
      if (obs.num_qubits() != spec.n) {
        throw SchemeParseError(fmt::format("{}:{}: observable '{}' has {} qubits, scheme has {}",
                                           source_name, line_no, tokens[1], obs.num_qubits(),
                                           spec.n));
      }
      spec.observables.push_back(obs);
    } else if (key == "gate") {
      if (!have_n) {
        throw SchemeParseError(
            fmt::format("{}:{}: 'n' must be declared before gates", source_name, line_no));
      }
      if (tokens.size() < 3 || tokens.size() > 4) {
        throw SchemeParseError(
            fmt::format("{}:{}: expected 'gate <name> <q> [q2]'", source_name, line_no));
      }
      size_t q0 = parse_index(tokens[2], source_name, line_no);
      size_t q1 = tokens.size() == 4 ? parse_index(tokens[3], source_name, line_no) : 0;
      Gate gate = [&] {
        try {
          return Gate::parse(tokens[1], q0, q1);
        } catch (const std::exception& e) {
          throw SchemeParseError(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
        }
      }();
      if (gate.is_two_qubit() && tokens.size() != 4) {
        throw SchemeParseError(fmt::format("{}:{}: CZ needs two targets", source_name, line_no));
      }
      if (!gate.is_two_qubit() && tokens.size() != 3) {
        throw SchemeParseError(
            fmt::format("{}:{}: gate {} takes one target", source_name, line_no, tokens[1]));
      }
      if (gate.q0 >= spec.n || (gate.is_two_qubit() && gate.q1 >= spec.n)) {
        throw SchemeParseError(
            fmt::format("{}:{}: gate target out of range for n={}", source_name, line_no, spec.n));
      }
      spec.gates.push_back(gate);
    } else {
      throw SchemeParseError(
          fmt::format("{}:{}: unknown keyword '{}'", source_name, line_no, key));
    }
  }
  if (!have_n) {
    throw SchemeParseError(fmt::format("{}: missing 'n' declaration", source_name));
  }
  validate_scheme(spec);
  return spec;
}

SchemeSpec parse_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemeParseError(fmt::format("cannot open scheme file '{}'", path));
  }
  return parse_scheme(in, path);
}

void validate_scheme(const SchemeSpec& spec) {
  if (spec.n == 0) {
    throw std::invalid_argument("scheme qubit count must be positive");
  }
  for (const auto& o : spec.observables) {
    if (o.num_qubits() != spec.n) {
      throw std::invalid_argument(
          fmt::format("observable {} does not act on {} qubits", o.str(), spec.n));
    }
    if (!o.is_observable()) {
      throw std::invalid_argument(fmt::format("{} is not Hermitian", o.str()));
    }
  }
  for (const auto& g : spec.gates) {
    if (g.q0 >= spec.n || (g.is_two_qubit() && g.q1 >= spec.n)) {
      throw std::invalid_argument(fmt::format("gate {} out of range for n={}", g.str(), spec.n));
    }
    if (!check_free_gate(spec, g)) {
      for (const auto& o : spec.observables) {
        PauliObservable image = conjugate(g, o);
        if (!spec.measures_label(image.label())) {
          throw std::invalid_argument(fmt::format(
              "gate {} is not free: it maps {} to {} outside O", g.str(), o.str(), image.str()));
        }
      }
    }
  }
}

bool check_free_gate(const SchemeSpec& spec, const Gate& gate) {
  if (!gate.is_clifford()) return false;
  if (gate.q0 >= spec.n || (gate.is_two_qubit() && gate.q1 >= spec.n)) {
    throw std::out_of_range(fmt::format("gate {} out of range for n={}", gate.str(), spec.n));
  }
  auto labels = spec.measurable_labels();
  for (const auto& o : spec.observables) {
    if (!labels.contains(conjugate(gate, o).label())) return false;
  }
  return true;
}

std::vector<std::vector<size_t>> maximal_commuting_subsets(
    const std::vector<PauliObservable>& observables) {
  size_t m = observables.size();
  if (m > kMaxEnumeratedObservables) {
    throw std::length_error(fmt::format(
        "maximal-set enumeration bounded to {} observables (got {}); "
        "the all-single-qubit scheme has an analytic path",
        kMaxEnumeratedObservables, m));
  }
  if (m == 0) return {};

  std::vector<uint32_t> adj(m, 0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (commutes(observables[i], observables[j])) {
        adj[i] |= 1u << j;
        adj[j] |= 1u << i;
      }
    }
  }

  std::vector<uint32_t> cliques;
  // Bron-Kerbosch with pivoting on bitmask vertex sets.
  std::function<void(uint32_t, uint32_t, uint32_t)> expand = [&](uint32_t r, uint32_t p,
                                                                 uint32_t x) {
    if (p == 0 && x == 0) {
      cliques.push_back(r);
      return;
    }
    uint32_t pivot_pool = p | x;
    size_t pivot = 0;
    int best = -1;
    for (uint32_t pool = pivot_pool; pool;) {
      size_t u = static_cast<size_t>(std::countr_zero(pool));
      pool &= pool - 1;
      int deg = std::popcount(p & adj[u]);
      if (deg > best) {
        best = deg;
        pivot = u;
      }
    }
    uint32_t candidates = p & ~adj[pivot];
    while (candidates) {
      size_t v = static_cast<size_t>(std::countr_zero(candidates));
      uint32_t vbit = 1u << v;
      candidates &= candidates - 1;
      expand(r | vbit, p & adj[v], x & adj[v]);
      p &= ~vbit;
      x |= vbit;
    }
  };
  expand(0, m == 32 ? ~0u : ((1u << m) - 1), 0);

  std::vector<std::vector<size_t>> result;
  result.reserve(cliques.size());
  for (uint32_t mask : cliques) {
    std::vector<size_t> subset;
    for (uint32_t rest = mask; rest;) {
      subset.push_back(static_cast<size_t>(std::countr_zero(rest)));
      rest &= rest - 1;
    }
    result.push_back(std::move(subset));
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

std::vector<size_t> mask_to_indices(uint32_t mask) {
  std::vector<size_t> indices;
  for (uint32_t rest = mask; rest;) {
    indices.push_back(static_cast<size_t>(std::countr_zero(rest)));
    rest &= rest - 1;
  }
  return indices;
}

// Signed product of the listed O elements (pairwise commuting, so order is
// immaterial; ascending for determinism).
PauliObservable provenance_product(const SchemeSpec& spec, const std::vector<size_t>& indices) {
  PauliObservable acc = PauliObservable::identity(spec.n);
  for (size_t i : indices) acc = multiply(acc, spec.observables[i]);
  return acc;
}

Context build_context(const SchemeSpec& spec, std::vector<size_t> generators) {
  // Independent basis of the generator labels with provenance tracking.
  struct Row {
    uint64_t label;
    uint32_t prov;
    int lead;
  };
  std::vector<Row> basis;
  for (size_t gi : generators) {
    uint64_t lab = spec.observables[gi].label().packed();
    uint32_t prov = 1u << gi;
    for (const Row& row : basis) {
      if ((lab >> row.lead) & 1u) {
        lab ^= row.label;
        prov ^= row.prov;
      }
    }
    if (lab) {
      basis.push_back(Row{lab, prov, std::countr_zero(lab)});
      std::sort(basis.begin(), basis.end(), [](const Row& a, const Row& b) { return a.lead < b.lead; });
    }
  }

  Context ctx;
  ctx.generators = std::move(generators);
  size_t r = basis.size();
  for (uint64_t combo = 0; combo < (1ull << r); ++combo) {
    uint64_t lab = 0;
    uint32_t prov = 0;
    for (size_t bi = 0; bi < r; ++bi) {
      if ((combo >> bi) & 1u) {
        lab ^= basis[bi].label;
        prov ^= basis[bi].prov;
      }
    }
    ContextMember member;
    member.label = BitString2n::from_packed(spec.n, lab);
    member.provenance = mask_to_indices(prov);
    member.sign = provenance_product(spec, member.provenance).sign();
    ctx.members.push_back(std::move(member));
  }
  std::sort(ctx.members.begin(), ctx.members.end(),
            [](const ContextMember& a, const ContextMember& b) { return a.label < b.label; });
  return ctx;
}

bool star_flag(const SchemeSpec& spec) {
  for (size_t q = 0; q < spec.n; ++q) {
    std::unordered_set<BitString2n, BitString2nHash> on_qubit;
    for (const auto& o : spec.observables) {
      if (o.label().support_weight() == 1 && (o.label().z(q) || o.label().x(q))) {
        on_qubit.insert(o.label());
      }
    }
    if (on_qubit.size() < 2) return false;
  }
  return true;
}

uint64_t ipow(uint64_t base, size_t exp) {
  uint64_t v = 1;
  for (size_t i = 0; i < exp; ++i) v *= base;
  return v;
}

}  // namespace

bool InferabilityClosure::contains_label(const BitString2n& label) const {
  if (label.num_qubits() != spec.n) return false;
  if (analytic_local) return true;
  return find(label) != nullptr;
}

const InferableEntry* InferabilityClosure::find(const BitString2n& label) const {
  auto it = std::lower_bound(
      inferable.begin(), inferable.end(), label,
      [](const InferableEntry& e, const BitString2n& l) { return e.label < l; });
  if (it != inferable.end() && it->label == label) return &*it;
  return nullptr;
}

InferabilityClosure closure(const SchemeSpec& spec) {
  validate_scheme(spec);
  InferabilityClosure result;
  result.spec = spec;
  result.star_assumption = star_flag(spec);

  bool within_bounds =
      spec.observables.size() <= kMaxEnumeratedObservables && spec.n <= kMaxEnumeratedQubits;
  if (!within_bounds) {
    if (is_local_scheme(spec) && spec.n <= kMaxLocalAnalyticQubits) {
      result.analytic_local = true;
      result.inferable_count = ipow(4, spec.n);
      result.context_count = ipow(3, spec.n);
      return result;
    }
    throw std::length_error(fmt::format(
        "closure enumeration bounded to {} observables and {} qubits; "
        "only the all-single-qubit scheme is supported beyond that",
        kMaxEnumeratedObservables, kMaxEnumeratedQubits));
  }

  for (const auto& gens : maximal_commuting_subsets(spec.observables)) {
    result.contexts.push_back(build_context(spec, gens));
  }
  result.context_count = result.contexts.size();

  std::map<BitString2n, InferableEntry> entries;
  for (const auto& ctx : result.contexts) {
    for (const auto& member : ctx.members) {
      auto it = entries.find(member.label);
      if (it == entries.end()) {
        entries.emplace(member.label,
                        InferableEntry{member.label, member.sign, member.provenance});
      } else if (member.provenance < it->second.provenance) {
        it->second = InferableEntry{member.label, member.sign, member.provenance};
      }
    }
  }
  result.inferable.reserve(entries.size());
  for (auto& [label, entry] : entries) {
    result.inferable.push_back(std::move(entry));
  }
  result.inferable_count = result.inferable.size();

  for (const auto& o : spec.observables) {
    assert(result.contains_label(o.label()));
  }
  return result;
}

bool check_tomographic_completeness(const InferabilityClosure& closure) {
  if (closure.analytic_local) return true;
  return closure.inferable_count == ipow(4, closure.spec.n);
}

std::string EquationRef::str() const {
  return fmt::format("context {}: {} . {} (rhs {})", context_index,
                     PauliObservable::observable(a, +1).str(),
                     PauliObservable::observable(b, +1).str(), rhs);
}

SicCheckResult check_absence_of_sic(const InferabilityClosure& closure) {
  SicCheckResult result;
  if (closure.analytic_local) {
    result.feasible = true;
    result.analytic_uniform = true;
    return result;
  }

  // Variable per nonzero inferable label; the identity label is pinned to +1.
  std::unordered_map<BitString2n, size_t, BitString2nHash> var_of;
  std::vector<const InferableEntry*> var_entry;
  for (const auto& entry : closure.inferable) {
    if (entry.label.is_zero()) continue;
    var_of.emplace(entry.label, var_entry.size());
    var_entry.push_back(&entry);
  }

  auto eta_bit = [&](const BitString2n& label) -> int {
    if (label.is_zero()) return 0;
    const InferableEntry* e = closure.find(label);
    return e->sign == -1 ? 1 : 0;
  };

  gf2::LinearSystem system(var_entry.size());
  std::vector<EquationRef> refs;
  std::set<std::pair<BitString2n, BitString2n>> seen;
  for (size_t ci = 0; ci < closure.contexts.size(); ++ci) {
    const Context& ctx = closure.contexts[ci];
    for (size_t i = 0; i < ctx.members.size(); ++i) {
      if (ctx.members[i].label.is_zero()) continue;
      for (size_t j = i + 1; j < ctx.members.size(); ++j) {
        if (ctx.members[j].label.is_zero()) continue;
        const BitString2n& a = ctx.members[i].label;
        const BitString2n& b = ctx.members[j].label;
        if (!seen.emplace(a, b).second) continue;
        BitString2n ab = a ^ b;
        PauliObservable prod = multiply(PauliObservable::observable(a, +1),
                                        PauliObservable::observable(b, +1));
        int beta = prod.sign() == -1 ? 1 : 0;
        int rhs = beta ^ eta_bit(a) ^ eta_bit(b) ^ eta_bit(ab);
        size_t vars[3] = {var_of.at(a), var_of.at(b), var_of.at(ab)};
        system.add_equation(vars, rhs, refs.size());
        refs.push_back(EquationRef{ci, a, b, rhs});
      }
    }
  }

  auto solved = system.solve();
  if (!solved.feasible) {
    result.feasible = false;
    for (size_t tag : solved.certificate_tags) {
      result.certificate.push_back(refs[tag]);
    }
    return result;
  }

  result.feasible = true;
  for (const auto& entry : closure.inferable) {
    int t = entry.label.is_zero() ? 0 : solved.solution[var_of.at(entry.label)];
    int eta = entry.sign == -1 ? 1 : 0;
    result.assignment[entry.label] = (t ^ eta) ? -1 : +1;
  }
  return result;
}

AssignmentTable normalize_convention(const InferabilityClosure& closure,
                                     const AssignmentTable& base) {
  if (closure.analytic_local) {
    throw std::invalid_argument(
        "the analytic local closure already multiplies exactly; nothing to normalize");
  }
  auto sign_of = [&](const BitString2n& label) -> int {
    auto it = base.find(label);
    if (it == base.end()) {
      throw NormalizationError(fmt::format("assignment missing label {}",
                                           PauliObservable::observable(label, +1).str()));
    }
    return it->second;
  };
  for (size_t ci = 0; ci < closure.contexts.size(); ++ci) {
    const Context& ctx = closure.contexts[ci];
    for (size_t i = 0; i < ctx.members.size(); ++i) {
      for (size_t j = i + 1; j < ctx.members.size(); ++j) {
        const BitString2n& a = ctx.members[i].label;
        const BitString2n& b = ctx.members[j].label;
        BitString2n ab = a ^ b;
        PauliObservable lhs = multiply(PauliObservable::observable(a, sign_of(a)),
                                       PauliObservable::observable(b, sign_of(b)));
        PauliObservable rhs = PauliObservable::observable(ab, sign_of(ab));
        if (lhs != rhs) {
          throw NormalizationError(fmt::format(
              "context {}: redefined triple {{{}, {}, {}}} multiplies to {} instead of {}", ci,
              PauliObservable::observable(a, sign_of(a)).str(),
              PauliObservable::observable(b, sign_of(b)).str(), rhs.str(), lhs.str(), rhs.str()));
        }
      }
    }
  }
  return base;
}

}  // namespace qcsi
