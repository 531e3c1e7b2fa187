#include "genmod/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace genmod {

MultiIndexBasis::MultiIndexBasis(int d, int p, std::vector<MultiIndex> indices)
    : d_(d), p_(p), indices_(std::move(indices)) {
  const int P = static_cast<int>(indices_.size());
  degrees_.resize(P, d_);
  total_degrees_.resize(P);
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < d_; ++j) degrees_(i, j) = indices_[i].entries[j];
    total_degrees_[i] = indices_[i].total_degree();
  }
}

std::int64_t basis_cardinality(int d, int p) {
  // C(p+d, d) = prod_{i=1..d} (p+i)/i, kept exact by dividing at each step.
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= d; ++i) {
    const std::int64_t num = static_cast<std::int64_t>(p) + i;
    if (result > std::numeric_limits<std::int64_t>::max() / num)
      throw std::overflow_error("basis cardinality overflows 64-bit integer for d=" +
                                std::to_string(d) + ", p=" + std::to_string(p));
    result = result * num / i;  // exact: C(p+i, i) is an integer
  }
  return result;
}

bool multi_index_less(const MultiIndex& a, const MultiIndex& b) {
  const int ta = a.total_degree();
  const int tb = b.total_degree();
  if (ta != tb) return ta < tb;
  // Equal total degree: larger value at the first differing entry wins.
  for (size_t k = 0; k < a.entries.size(); ++k) {
    if (a.entries[k] != b.entries[k]) return a.entries[k] > b.entries[k];
  }
  return false;
}

namespace {

// All compositions of `total` into `d` non-negative parts.
void enumerate_compositions(int total, int d, std::vector<int>& current,
                            std::vector<MultiIndex>& out) {
  if (d == 1) {
    current.push_back(total);
    out.push_back(MultiIndex{current});
    current.pop_back();
    return;
  }
  for (int first = total; first >= 0; --first) {
    current.push_back(first);
    enumerate_compositions(total - first, d - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

MultiIndexBasis build_basis(int d, int p) {
  if (d < 1) throw std::invalid_argument("build_basis: d must be >= 1");
  if (p < 0) throw std::invalid_argument("build_basis: p must be >= 0");
  const std::int64_t P = basis_cardinality(d, p);
  if (P > std::numeric_limits<int>::max())
    throw std::overflow_error("basis cardinality " + std::to_string(P) +
                              " exceeds supported container size");

  std::vector<MultiIndex> indices;
  indices.reserve(static_cast<size_t>(P));
  std::vector<int> current;
  current.reserve(d);
  for (int t = 0; t <= p; ++t) {
    const size_t level_start = indices.size();
    enumerate_compositions(t, d, current, indices);
    std::sort(indices.begin() + static_cast<std::ptrdiff_t>(level_start), indices.end(),
              multi_index_less);
  }
  return MultiIndexBasis(d, p, std::move(indices));
}

}  // namespace genmod
