#pragma once

#include <cstdint>
#include <vector>

#include "asrank/common.hpp"
#include "asrank/data.hpp"

namespace asrank {

// Weighted L1-hinge linear SVM problem. All labels are implicitly +1: pairs
// and pseudo-pairs are realized in positive orientation, point-wise problems
// encode the sign into the feature.
struct WeightedProblem {
  std::vector<SparseVector> features;
  std::vector<double> weights;  // per-example C_k, strictly positive
  int32_t dim = 0;

  size_t size() const { return features.size(); }
};

struct SolverState {
  std::vector<double> w;
  std::vector<double> alpha;  // dual variables, 0 <= alpha_k <= C_k
  double objective = 0.0;     // primal value at w
  double kkt_violation = 0.0; // max projected-gradient magnitude, full pass
  int sweeps = 0;
  bool converged = false;
};

// min_w 1/2 w.w + sum_k C_k [1 - w.x_k]_+
double objective(const WeightedProblem& prob, const std::vector<double>& w);

// Dual coordinate descent over the examples, one sweep visiting every
// coordinate in a random permutation:
//
//   min_a 1/2 a^T Q a - e^T a,  0 <= a_k <= C_k,  Q_kl = x_k . x_l
//
// with the incremental primal link w = sum_k a_k x_k. Each step is the
// box-clipped Newton update a_k <- clip(a_k + (1 - w.x_k)/|x_k|^2, 0, C_k).
// Stops when a fresh full KKT pass has max violation <= tol, or after
// max_sweeps sweeps. Warm start: alphas align with prob positionally, missing
// tail entries enter at 0, and every alpha is clamped into its (possibly new)
// box before resuming. Examples with zero-norm features are pinned at their
// upper bound and skipped in the sweeps.
//
// The sweep permutation consumes `rng`; pass a dedicated substream when the
// run must be reproducible.
SolverState solve(const WeightedProblem& prob, const SolverState* warm,
                  double tol, int max_sweeps, Rng& rng,
                  std::vector<double>* sweep_objectives = nullptr);

// Convenience overload with an internally seeded permutation stream.
SolverState solve(const WeightedProblem& prob, const SolverState* warm = nullptr,
                  double tol = 1e-3, int max_sweeps = 1000);

}  // namespace asrank
