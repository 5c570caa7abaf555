#pragma once

#include <istream>
#include <string>
#include <variant>
#include <vector>

#include "qcsi/pauli.hpp"

namespace qcsi {

// A straight-line program of gates and Pauli measurements.
struct Circuit {
  size_t n = 0;
  std::vector<std::variant<Gate, PauliObservable>> ops;

  size_t measurement_count() const;

  // Text format, line oriented with '#' comments:
  //   n 2
  //   gate H 0
  //   measure +ZI
  static Circuit parse(std::istream& in, const std::string& source_name);
  static Circuit parse_file(const std::string& path);
};

}  // namespace qcsi
