#include "trajeval/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Edge {
  double gap;
  std::size_t ref;
  std::size_t est;
};

// Kuhn-style augmentation over an existing matching. Estimates visited by a
// failed search stay marked until the matching changes, so each phase costs
// O(E) and only successful augmentations start a new phase.
class Augmenter {
 public:
  Augmenter(const std::vector<std::vector<std::size_t>>& adj, std::vector<std::size_t>& ref_match,
            std::vector<std::size_t>& est_match)
      : adj_(adj), ref_match_(ref_match), est_match_(est_match),
        visited_(est_match.size(), 0) {}

  void run() {
    for (std::size_t r = 0; r < adj_.size(); ++r) {
      if (ref_match_[r] == kNone && !adj_[r].empty() && augment_from(r)) {
        ++generation_;
      }
    }
  }

 private:
  struct Frame {
    std::size_t ref;
    std::size_t next;
    std::size_t via;  // estimate taken from this ref
  };

  bool augment_from(std::size_t root) {
    stack_.clear();
    stack_.push_back({root, 0, kNone});
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      const auto& edges = adj_[top.ref];
      if (top.next == edges.size()) {
        stack_.pop_back();
        continue;
      }
      const std::size_t e = edges[top.next++];
      if (visited_[e] == generation_ + 1) continue;
      visited_[e] = generation_ + 1;
      top.via = e;
      if (est_match_[e] == kNone) {
        for (const Frame& f : stack_) {
          ref_match_[f.ref] = f.via;
          est_match_[f.via] = f.ref;
        }
        return true;
      }
      stack_.push_back({est_match_[e], 0, kNone});
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t>& ref_match_;
  std::vector<std::size_t>& est_match_;
  std::vector<std::size_t> visited_;
  std::size_t generation_ = 0;
  std::vector<Frame> stack_;
};

}  // namespace

Correspondences associate(const Trajectory& ref, const Trajectory& est,
                          const AssociationParams& params) {
  if (!(params.max_diff > 0.0) || !std::isfinite(params.max_diff)) {
    throw Error(ErrorKind::kInvalidArgument, "max_diff must be positive");
  }
  if (!std::isfinite(params.offset)) {
    throw Error(ErrorKind::kInvalidArgument, "offset must be finite");
  }

  const std::size_t n = ref.size();
  const std::size_t m = est.size();
  Correspondences out;

  if (params.pair_by_index) {
    const std::size_t k = std::min(n, m);
    out.pairs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.pairs.push_back({i, i});
    out.unmatched_ref = n - k;
    out.unmatched_est = m - k;
    return out;
  }

  std::vector<double> est_t(m);
  for (std::size_t j = 0; j < m; ++j) est_t[j] = est[j].timestamp + params.offset;

  const double d = params.max_diff;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ref[i].timestamp;
    // r - e is non-increasing in j, so this is a valid partition point.
    auto first = std::partition_point(est_t.begin(), est_t.end(),
                                      [&](double e) { return r - e > d; });
    for (auto it = first; it != est_t.end() && *it - r <= d; ++it) {
      const auto j = static_cast<std::size_t>(it - est_t.begin());
      edges.push_back({std::abs(r - *it), i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.gap, a.ref, a.est) < std::tie(b.gap, b.ref, b.est);
  });

  std::vector<std::size_t> ref_match(n, kNone);
  std::vector<std::size_t> est_match(m, kNone);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : edges) {
    adj[e.ref].push_back(e.est);  // nearest first, since edges are gap-sorted
    if (ref_match[e.ref] == kNone && est_match[e.est] == kNone) {
      ref_match[e.ref] = e.est;
      est_match[e.est] = e.ref;
    }
  }

  Augmenter(adj, ref_match, est_match).run();

  for (std::size_t i = 0; i < n; ++i) {
    if (ref_match[i] != kNone) out.pairs.push_back({i, ref_match[i]});
  }
  if (out.pairs.empty()) {
    throw Error(ErrorKind::kNoOverlap,
                "no overlap: no estimate stamp within max_diff of a reference stamp");
  }
  out.unmatched_ref = n - out.pairs.size();
  out.unmatched_est = m - out.pairs.size();
  return out;
}

}  // namespace trajeval
