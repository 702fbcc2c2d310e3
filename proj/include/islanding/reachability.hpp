#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "islanding/grid_model.hpp"

namespace islanding {

/// Square boolean matrix stored as packed 64-bit row words. Indices are
/// 0-based; bus i maps to row i - 1.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n);

  static BoolMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  bool get(std::size_t i, std::size_t j) const {
    return (words_[i * stride_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool value = true);

  bool symmetric() const;

  /// Boolean (AND-OR) matrix product.
  BoolMatrix operator*(const BoolMatrix& rhs) const;
  BoolMatrix operator|(const BoolMatrix& rhs) const;

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

  /// Rows of 0/1 characters separated by spaces, one row per line.
  std::string to_text() const;

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A maximal set of mutually reachable buses in the post-fault network.
struct ReachableRegion {
  std::vector<BusId> members;    // ascending
  bool contains_slack = false;
  std::vector<std::string> dgs;  // in case-file order
};

/// Entry (i, j) set iff a closed branch joins buses i and j.
BoolMatrix adjacency_matrix(const Network& net);

/// Logical OR of the boolean powers A^1 .. A^n.
///
/// Computed as A * (A | I)^(2^k) with 2^k >= n - 1, which reaches every
/// walk length 1..n in ceil(log2 n) squarings. Diagonal entries follow the
/// walk semantics of the power series: (i, i) is set iff i lies on a
/// closed walk, i.e. has at least one neighbour in an undirected graph.
BoolMatrix reachability_matrix(const BoolMatrix& adjacency);

/// Partitions every bus into reachability classes, ordered by smallest
/// member.
std::vector<ReachableRegion> regions(const Network& net);

/// Regions cut off from the slack bus that host at least one DG.
std::vector<ReachableRegion> islanding_candidates(const Network& net);

}  // namespace islanding
