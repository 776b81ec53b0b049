#pragma once

#include <cstddef>
#include <vector>

#include "trajeval/parsers.hpp"

namespace trajeval {

struct AssociationParams {
  double max_diff = 0.02;   // seconds
  double offset = 0.0;      // seconds, added to estimate stamps
  bool pair_by_index = false;
};

struct IndexPair {
  std::size_t ref;
  std::size_t est;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Injective ref <-> est matching, sorted by reference index.
struct Correspondences {
  std::vector<IndexPair> pairs;
  std::size_t unmatched_ref = 0;
  std::size_t unmatched_est = 0;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// Matches poses whose stamps differ by at most max_diff.
///
/// Candidate pairs are accepted greedily in order of increasing |dt| (ties
/// broken by reference index, then estimate index). The greedy result is then
/// completed to a maximum-cardinality matching with augmenting paths, which
/// only ever adds pairs and reroutes greedy ones when that gains a pair.
///
/// With pair_by_index the stamps are ignored and i <-> i for i < min(n, m).
///
/// Throws Error(kInvalidArgument) if max_diff <= 0, Error(kNoOverlap) when
/// no pair can be formed.
Correspondences associate(const Trajectory& ref, const Trajectory& est,
                          const AssociationParams& params = {});

}  // namespace trajeval
