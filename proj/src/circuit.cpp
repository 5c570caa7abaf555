#include "qcsi/circuit.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace qcsi {

size_t Circuit::measurement_count() const {
  size_t count = 0;
  for (const auto& op : ops) {
    if (std::holds_alternative<PauliObservable>(op)) ++count;
  }
  return count;
}

Circuit Circuit::parse(std::istream& in, const std::string& source_name) {
  Circuit circuit;
  bool have_n = false;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error(fmt::format("{}:{}: {}", source_name, line_no, msg));
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream iss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (iss >> tok) {
      if (tok[0] == '#') break;
      tokens.push_back(tok);
    }
    if (tokens.empty()) continue;
    if (tokens[0] == "n") {
      if (tokens.size() != 2) fail("expected 'n <count>'");
      circuit.n = std::stoull(tokens[1]);
      if (circuit.n == 0) fail("qubit count must be positive");
      have_n = true;
    } else if (tokens[0] == "gate") {
      if (!have_n) fail("'n' must be declared first");
      if (tokens.size() < 3 || tokens.size() > 4) fail("expected 'gate <name> <q> [q2]'");
      size_t q0 = std::stoull(tokens[2]);
      size_t q1 = tokens.size() == 4 ? std::stoull(tokens[3]) : 0;
      Gate gate = [&] {
        try {
          return Gate::parse(tokens[1], q0, q1);
        } catch (const std::exception& e) {
          fail(e.what());
          throw;  // unreachable
        }
      }();
      if (gate.is_two_qubit() != (tokens.size() == 4)) fail("wrong number of gate targets");
      if (gate.q0 >= circuit.n || (gate.is_two_qubit() && gate.q1 >= circuit.n)) {
        fail(fmt::format("gate target out of range for n={}", circuit.n));
      }
      circuit.ops.emplace_back(gate);
    } else if (tokens[0] == "measure") {
      if (!have_n) fail("'n' must be declared first");
      if (tokens.size() != 2) fail("expected 'measure <pauli string>'");
      PauliObservable obs = [&] {
        try {
          return PauliObservable::parse(tokens[1]);
        } catch (const std::exception& e) {
          fail(e.what());
          throw;  // unreachable
        }
      }();
      if (obs.num_qubits() != circuit.n) {
        fail(fmt::format("observable acts on {} qubits, circuit has {}", obs.num_qubits(),
                         circuit.n));
      }
      circuit.ops.emplace_back(obs);
    } else {
      fail(fmt::format("unknown keyword '{}'", tokens[0]));
    }
  }
  if (!have_n) {
    throw std::runtime_error(fmt::format("{}: missing 'n' declaration", source_name));
  }
  return circuit;
}

Circuit Circuit::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open circuit file '{}'", path));
  }
  return parse(in, path);
}

}  // namespace qcsi
