#include "qcsi/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace qcsi::gf2 {

namespace {
constexpr size_t kWordBits = 64;
}

LinearSystem::LinearSystem(size_t num_vars)
    : num_vars_(num_vars), words_((num_vars + kWordBits - 1) / kWordBits) {}

void LinearSystem::add_equation(std::span<const size_t> vars, int rhs, size_t tag) {
  Row row;
  row.coeffs.assign(words_, 0);
  for (size_t v : vars) {
    if (v >= num_vars_) {
      throw std::out_of_range(fmt::format("variable {} out of range ({} vars)", v, num_vars_));
    }
    row.coeffs[v / kWordBits] ^= 1ull << (v % kWordBits);
  }
  row.rhs = static_cast<uint8_t>(rhs & 1);
  row.tag = tag;
  rows_.push_back(std::move(row));
}

std::optional<std::vector<size_t>> LinearSystem::find_conflict(
    const std::vector<size_t>& row_indices) const {
  struct Work {
    std::vector<uint64_t> coeffs;
    uint8_t rhs;
    std::vector<uint64_t> prov;  // combination of input rows, bit per position
    size_t pivot;
  };
  size_t prov_words = (row_indices.size() + kWordBits - 1) / kWordBits;
  std::vector<Work> pivots;

  auto leading = [this](const std::vector<uint64_t>& coeffs) -> size_t {
    for (size_t w = 0; w < words_; ++w) {
      if (coeffs[w]) {
        return w * kWordBits + static_cast<size_t>(std::countr_zero(coeffs[w]));
      }
    }
    return num_vars_;
  };

  for (size_t pos = 0; pos < row_indices.size(); ++pos) {
    const Row& src = rows_[row_indices[pos]];
    Work cur{src.coeffs, src.rhs, std::vector<uint64_t>(prov_words, 0), 0};
    cur.prov[pos / kWordBits] |= 1ull << (pos % kWordBits);

    // Pivot rows carry no bits below their own pivot column, so one
    // ascending pass fully reduces the incoming row.
    for (const Work& pv : pivots) {
      if ((cur.coeffs[pv.pivot / kWordBits] >> (pv.pivot % kWordBits)) & 1u) {
        for (size_t w = 0; w < words_; ++w) cur.coeffs[w] ^= pv.coeffs[w];
        for (size_t w = 0; w < prov_words; ++w) cur.prov[w] ^= pv.prov[w];
        cur.rhs ^= pv.rhs;
      }
    }
    size_t lead = leading(cur.coeffs);
    if (lead == num_vars_) {
      if (cur.rhs) {
        std::vector<size_t> conflict;
        for (size_t p = 0; p < row_indices.size(); ++p) {
          if ((cur.prov[p / kWordBits] >> (p % kWordBits)) & 1u) {
            conflict.push_back(row_indices[p]);
          }
        }
        return conflict;
      }
      continue;  // redundant row
    }
    cur.pivot = lead;
    pivots.push_back(std::move(cur));
    // keep pivots ordered by pivot column so reduction above stays simple
    std::sort(pivots.begin(), pivots.end(),
              [](const Work& a, const Work& b) { return a.pivot < b.pivot; });
  }
  return std::nullopt;
}

LinearSystem::Result LinearSystem::solve() const {
  std::vector<size_t> all(rows_.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;

  auto conflict = find_conflict(all);
  if (conflict) {
    // Prune to an irredundant subset: drop rows as long as a conflict
    // survives among the remainder.
    std::vector<size_t> cert = *conflict;
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (size_t drop = 0; drop < cert.size(); ++drop) {
        std::vector<size_t> candidate;
        candidate.reserve(cert.size() - 1);
        for (size_t i = 0; i < cert.size(); ++i) {
          if (i != drop) candidate.push_back(cert[i]);
        }
        auto sub = find_conflict(candidate);
        if (sub) {
          cert = *sub;
          shrunk = true;
          break;
        }
      }
    }
    std::sort(cert.begin(), cert.end());
    Result res;
    res.feasible = false;
    for (size_t idx : cert) res.certificate_tags.push_back(rows_[idx].tag);
    return res;
  }

  // Feasible: Gauss-Jordan on a fresh copy, free variables to 0.
  std::vector<std::vector<uint64_t>> mat;
  std::vector<uint8_t> rhs;
  for (const Row& r : rows_) {
    mat.push_back(r.coeffs);
    rhs.push_back(r.rhs);
  }
  std::vector<size_t> pivot_row_of(num_vars_, SIZE_MAX);
  size_t rank = 0;
  for (size_t col = 0; col < num_vars_ && rank < mat.size(); ++col) {
    size_t sel = SIZE_MAX;
    for (size_t r = rank; r < mat.size(); ++r) {
      if ((mat[r][col / kWordBits] >> (col % kWordBits)) & 1u) {
        sel = r;
        break;
      }
    }
    if (sel == SIZE_MAX) continue;
    std::swap(mat[sel], mat[rank]);
    std::swap(rhs[sel], rhs[rank]);
    for (size_t r = 0; r < mat.size(); ++r) {
      if (r != rank && ((mat[r][col / kWordBits] >> (col % kWordBits)) & 1u)) {
        for (size_t w = 0; w < words_; ++w) mat[r][w] ^= mat[rank][w];
        rhs[r] ^= rhs[rank];
      }
    }
    pivot_row_of[col] = rank;
    ++rank;
  }

  Result res;
  res.feasible = true;
  res.solution.assign(num_vars_, 0);
  for (size_t col = 0; col < num_vars_; ++col) {
    size_t r = pivot_row_of[col];
    if (r == SIZE_MAX) continue;  // free -> 0
    // pivot value equals rhs once free variables are zeroed
    res.solution[col] = rhs[r];
  }
  return res;
}

bool LinearSystem::certificate_is_valid(const std::vector<size_t>& tags) const {
  std::vector<uint64_t> acc(words_, 0);
  uint8_t rhs = 0;
  for (size_t tag : tags) {
    bool found = false;
    for (const Row& r : rows_) {
      if (r.tag == tag) {
        for (size_t w = 0; w < words_; ++w) acc[w] ^= r.coeffs[w];
        rhs ^= r.rhs;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  for (uint64_t w : acc) {
    if (w) return false;
  }
  return rhs == 1;
}

}  // namespace qcsi::gf2
