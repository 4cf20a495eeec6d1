#pragma once

#include <cstdint>

#include "asrank/pairspace.hpp"
#include "asrank/solver.hpp"

namespace asrank {

// Point-wise weighted SVM, built through the pseudo-pair path. Positives get
// weight B*C/(2N+), negatives B*C/(2N-), so the total weight is B*C.
Model wsvm(const Dataset& d, int64_t budget, double C, ModelMode mode,
           double tol = 1e-3, int max_sweeps = 1000);

// Full pair materialization; feasible only for small N+*N-, guarded by `cap`.
Model naive_ranksvm(const Dataset& d, double C_pair, ModelMode mode,
                    int64_t cap = 250000, double tol = 1e-6,
                    int max_sweeps = 10000);

// Objective of the naive pair problem at a given model (uniform pair weight).
double ranksvm_objective(const Dataset& d, double C_pair, const Model& m);

struct TheoremCheck {
  double lhs = 0.0;  // pair-wise objective with C_ij = C/2 at w
  double rhs = 0.0;  // 1/4 of the point-wise objective, C+ = 2N-C, C- = 2N+C
  bool holds = false;
};

// Checks the pair-wise/point-wise upper bound at the given model. A plain
// model checks the point-wise SVM without threshold; a threshold model checks
// the variant with a threshold term (which cancels on real pairs). The
// regularizer on both sides is 1/2 |w|^2 over the feature weights only.
TheoremCheck verify_theorem1(const Dataset& d, double C, const Model& m);

}  // namespace asrank
