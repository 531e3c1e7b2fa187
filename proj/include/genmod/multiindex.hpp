#pragma once

#include <cstdint>
#include <vector>

#include "genmod/types.hpp"

namespace genmod {

/// Multi-index: one polynomial degree per input dimension.
struct MultiIndex {
  std::vector<int> entries;

  int total_degree() const {
    int s = 0;
    for (int e : entries) s += e;
    return s;
  }
  int dim() const { return static_cast<int>(entries.size()); }

  bool operator==(const MultiIndex& other) const { return entries == other.entries; }
};

/// Ordered total-degree multi-index set for d dimensions, max degree p.
///
/// Ordering: smaller total degree first; within a degree level, the index
/// whose first differing entry is larger comes first. The first element is
/// always the zero multi-index, mapping to the constant basis function.
/// Immutable after construction and safe to share across threads.
class MultiIndexBasis {
 public:
  MultiIndexBasis(int d, int p, std::vector<MultiIndex> indices);

  int dim() const { return d_; }
  int max_degree() const { return p_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& operator[](int i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Degrees as a size x d integer matrix (row i = indices()[i]).
  const Eigen::MatrixXi& degrees() const { return degrees_; }

  /// Total degree of each index.
  const std::vector<int>& total_degrees() const { return total_degrees_; }

 private:
  int d_;
  int p_;
  std::vector<MultiIndex> indices_;
  Eigen::MatrixXi degrees_;
  std::vector<int> total_degrees_;
};

/// Number of multi-indices with total degree <= p in d dimensions:
/// (p+d)! / (p! d!). Throws std::overflow_error if it does not fit in
/// a signed 64-bit integer.
std::int64_t basis_cardinality(int d, int p);

/// True if basis ordering places `a` strictly before `b`.
bool multi_index_less(const MultiIndex& a, const MultiIndex& b);

/// Builds the ordered multi-index set for (d, p). Deterministic; throws
/// std::invalid_argument for d < 1 or p < 0 and std::overflow_error when
/// the cardinality overflows (or exceeds what fits in an int-indexed
/// container, which is far beyond desk scale anyway).
MultiIndexBasis build_basis(int d, int p);

}  // namespace genmod
