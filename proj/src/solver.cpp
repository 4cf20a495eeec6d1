#include "asrank/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asrank {

double objective(const WeightedProblem& prob, const std::vector<double>& w) {
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double loss = 0.0;
  for (size_t k = 0; k < prob.size(); ++k) {
    double hinge = 1.0 - dot(prob.features[k], w);
    if (hinge > 0.0) loss += prob.weights[k] * hinge;
  }
  return 0.5 * reg + loss;
}

namespace {

void validate(const WeightedProblem& prob) {
  if (prob.dim <= 0) throw ValidationError("problem dimension must be positive");
  if (prob.features.size() != prob.weights.size())
    throw ValidationError("feature/weight count mismatch");
  for (size_t k = 0; k < prob.size(); ++k) {
    double c = prob.weights[k];
    if (!(c > 0.0) || !std::isfinite(c))
      throw ValidationError("example weight must be strictly positive and finite");
    if (prob.features[k].max_index() >= prob.dim)
      throw DimensionError("feature index exceeds problem dimension");
  }
}

// Projected gradient of one coordinate: the amount by which its KKT condition
// is violated.
inline double projected_gradient(double g, double a, double c) {
  if (a <= 0.0) return std::min(g, 0.0);
  if (a >= c) return std::max(g, 0.0);
  return g;
}

double kkt_violation_full(const WeightedProblem& prob,
                          const std::vector<double>& w,
                          const std::vector<double>& alpha) {
  double worst = 0.0;
  for (size_t k = 0; k < prob.size(); ++k) {
    double g = dot(prob.features[k], w) - 1.0;
    worst = std::max(worst, std::fabs(projected_gradient(g, alpha[k], prob.weights[k])));
  }
  return worst;
}

}  // namespace

SolverState solve(const WeightedProblem& prob, const SolverState* warm,
                  double tol, int max_sweeps, Rng& rng,
                  std::vector<double>* sweep_objectives) {
  validate(prob);
  const size_t l = prob.size();

  SolverState st;
  st.alpha.assign(l, 0.0);
  if (warm) {
    size_t carry = std::min(warm->alpha.size(), l);
    std::copy(warm->alpha.begin(), warm->alpha.begin() + carry, st.alpha.begin());
  }

  std::vector<double> qd(l);
  std::vector<int32_t> active;
  active.reserve(l);
  for (size_t k = 0; k < l; ++k) {
    qd[k] = norm_sq(prob.features[k]);
    if (qd[k] > 0.0) {
      st.alpha[k] = std::clamp(st.alpha[k], 0.0, prob.weights[k]);
      active.push_back(static_cast<int32_t>(k));
    } else {
      // Zero feature: hinge contribution is the constant C_k and the dual is
      // maximized at the upper bound, where the KKT condition holds.
      st.alpha[k] = prob.weights[k];
    }
  }

  // Rebuild w from the dual so the primal-dual link holds exactly at entry,
  // also after weight changes or a checkpoint restore.
  st.w.assign(prob.dim, 0.0);
  for (size_t k = 0; k < l; ++k) {
    if (st.alpha[k] == 0.0) continue;
    for (const auto& e : prob.features[k].entries)
      st.w[e.index] += st.alpha[k] * e.value;
  }

  int sweep = 0;
  bool converged = false;
  double fresh_kkt = kkt_violation_full(prob, st.w, st.alpha);
  if (fresh_kkt <= tol) converged = true;

  while (!converged && sweep < max_sweeps) {
    rng.shuffle(active);
    double sweep_kkt = 0.0;
    for (int32_t k : active) {
      const SparseVector& x = prob.features[k];
      double g = dot(x, st.w) - 1.0;
      double pg = projected_gradient(g, st.alpha[k], prob.weights[k]);
      sweep_kkt = std::max(sweep_kkt, std::fabs(pg));
      if (std::fabs(pg) > 1e-12) {
        double old = st.alpha[k];
        double next = std::clamp(old - g / qd[k], 0.0, prob.weights[k]);
        if (next != old) {
          double delta = next - old;
          for (const auto& e : x.entries) st.w[e.index] += delta * e.value;
          st.alpha[k] = next;
        }
      }
    }
    ++sweep;
    if (sweep_objectives) sweep_objectives->push_back(objective(prob, st.w));
    if (sweep_kkt <= tol) {
      // The sweep values were computed against a moving w; confirm with a
      // fresh pass before reporting convergence.
      fresh_kkt = kkt_violation_full(prob, st.w, st.alpha);
      if (fresh_kkt <= tol) converged = true;
    }
  }

  if (!converged) fresh_kkt = kkt_violation_full(prob, st.w, st.alpha);
  st.kkt_violation = fresh_kkt;
  st.sweeps = sweep;
  st.converged = converged;
  st.objective = objective(prob, st.w);
  return st;
}

SolverState solve(const WeightedProblem& prob, const SolverState* warm,
                  double tol, int max_sweeps) {
  Rng rng = Rng::substream(0x5eedULL, "solver");
  return solve(prob, warm, tol, max_sweeps, rng, nullptr);
}

}  // namespace asrank
