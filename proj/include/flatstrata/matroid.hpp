#pragma once

// Greedy optimization over linear matroids of homology classes.
//
// The families we optimize over (sums of inverse square lengths, sums of
// squared periods) have weights attached to vectors, and the feasible sets
// are bases of the span.  Greedy selection in decreasing weight order is
// exact for matroids, and it is certified as soon as every candidate at
// least as heavy as the last pick has been considered.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "flatstrata/common.hpp"

namespace flatstrata {

// Incremental span of real vectors with a fixed rank tolerance.
class SpanTracker {
 public:
  SpanTracker(int dim, double eps_rank) : dim_(dim), eps_(eps_rank) {
    Q_.resize(dim, 0);
  }

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(Q_.cols()); }

  bool contains(const Eigen::VectorXd& v) const {
    return residual(v).norm() <= eps_ * std::max(1.0, v.norm());
  }

  // Adds v to the span if it is independent of it; returns whether it was.
  bool try_add(const Eigen::VectorXd& v) {
    require(v.size() == dim_, ErrorCode::SizeMismatch,
            "vector dimension mismatch in span tracker");
    Eigen::VectorXd r = residual(v);
    const double nr = r.norm();
    if (nr <= eps_ * std::max(1.0, v.norm())) return false;
    Q_.conservativeResize(dim_, Q_.cols() + 1);
    Q_.col(Q_.cols() - 1) = r / nr;
    return true;
  }

 private:
  Eigen::VectorXd residual(const Eigen::VectorXd& v) const {
    if (Q_.cols() == 0) return v;
    // twice through modified Gram-Schmidt keeps the residual orthogonal
    Eigen::VectorXd r = v - Q_ * (Q_.transpose() * v);
    r -= Q_ * (Q_.transpose() * r);
    return r;
  }

  int dim_;
  double eps_;
  Eigen::MatrixXd Q_;
};

struct GreedyResult {
  std::vector<int> picked;  // indices into the candidate list, in pick order
  double total = 0.0;       // sum of the picked weights
  bool complete = false;    // the span reached the requested rank
};

// Maximum-weight basis of span(candidates) / span(seed).  Candidates must be
// supplied in decreasing weight order (ties broken deterministically by the
// caller); the matroid exchange property makes the greedy pick optimal.
inline GreedyResult greedy_max_weight_basis(
    const std::vector<Eigen::VectorXd>& candidates,
    const std::vector<double>& weights, int target_rank, SpanTracker seed) {
  require(candidates.size() == weights.size(), ErrorCode::SizeMismatch,
          "weights and candidates differ in length");
  GreedyResult res;
  for (std::size_t i = 0; i + 1 < candidates.size(); ++i)
    require(weights[i] >= weights[i + 1] - 1e-12 * std::abs(weights[i]),
            ErrorCode::Internal, "greedy candidates not sorted by weight");
  const int base = seed.rank();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (target_rank >= 0 && seed.rank() - base >= target_rank) break;
    if (seed.try_add(candidates[i])) {
      res.picked.push_back(static_cast<int>(i));
      res.total += weights[i];
    }
  }
  res.complete = target_rank < 0 || seed.rank() - base >= target_rank;
  return res;
}

}  // namespace flatstrata
