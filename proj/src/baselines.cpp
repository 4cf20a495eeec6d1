#include "asrank/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace asrank {

Model wsvm(const Dataset& d, int64_t budget, double C, ModelMode mode,
           double tol, int max_sweeps) {
  if (budget <= 0 || !(C > 0.0))
    throw ValidationError("budget and C must be positive");
  const double c_pos = static_cast<double>(budget) * C / (2.0 * d.num_pos());
  const double c_neg = static_cast<double>(budget) * C / (2.0 * d.num_neg());

  WeightedProblem prob;
  prob.dim = model_dim(mode, d.n);
  prob.features.reserve(d.size());
  prob.weights.reserve(d.size());
  for (int32_t k = 0; k < d.size(); ++k) {
    PairRef p = d.labels[k] == 1 ? PairRef::pseudo_pos(k) : PairRef::pseudo_neg(k);
    prob.features.push_back(realize(p, d, mode));
    prob.weights.push_back(d.labels[k] == 1 ? c_pos : c_neg);
  }
  Rng rng = Rng::substream(0x5eedULL, "wsvm");
  SolverState st = solve(prob, nullptr, tol, max_sweeps, rng);
  return Model{mode, std::move(st.w)};
}

Model naive_ranksvm(const Dataset& d, double C_pair, ModelMode mode, int64_t cap,
                    double tol, int max_sweeps) {
  if (!(C_pair > 0.0)) throw ValidationError("C must be positive");
  const int64_t n_pairs =
      static_cast<int64_t>(d.num_pos()) * static_cast<int64_t>(d.num_neg());
  if (n_pairs > cap)
    throw SizeError("pair count " + std::to_string(n_pairs) +
                    " exceeds the naive solver cap " + std::to_string(cap));

  WeightedProblem prob;
  prob.dim = model_dim(mode, d.n);
  prob.features.reserve(n_pairs);
  prob.weights.assign(n_pairs, C_pair);
  for (int32_t pi : d.pos_idx)
    for (int32_t nj : d.neg_idx)
      prob.features.push_back(realize(PairRef::real(pi, nj), d, mode));
  Rng rng = Rng::substream(0x5eedULL, "naive_ranksvm");
  SolverState st = solve(prob, nullptr, tol, max_sweeps, rng);
  return Model{mode, std::move(st.w)};
}

double ranksvm_objective(const Dataset& d, double C_pair, const Model& m) {
  double reg = 0.0;
  size_t first = m.mode == ModelMode::kThreshold ? 1 : 0;
  for (size_t k = first; k < m.w.size(); ++k) reg += m.w[k] * m.w[k];
  const std::vector<double> s = score_all(d, m);
  double loss = 0.0;
  for (int32_t pi : d.pos_idx)
    for (int32_t nj : d.neg_idx)
      loss += std::max(1.0 - (s[pi] - s[nj]), 0.0);
  return 0.5 * reg + C_pair * loss;
}

TheoremCheck verify_theorem1(const Dataset& d, double C, const Model& m) {
  if (static_cast<int32_t>(m.w.size()) != model_dim(m.mode, d.n))
    throw DimensionError("model dimension does not match dataset");

  // Both objectives share the regularizer over the feature weights; the
  // threshold slot is not regularized in either formulation being compared.
  double reg = 0.0;
  size_t first = m.mode == ModelMode::kThreshold ? 1 : 0;
  for (size_t k = first; k < m.w.size(); ++k) reg += m.w[k] * m.w[k];
  reg *= 0.5;

  double pair_loss = 0.0;
  for (int32_t pi : d.pos_idx)
    for (int32_t nj : d.neg_idx)
      pair_loss += std::max(1.0 - pair_margin(PairRef::real(pi, nj), d, m), 0.0);

  double point_loss_pos = 0.0;
  for (int32_t pi : d.pos_idx)
    point_loss_pos += std::max(1.0 - pair_margin(PairRef::pseudo_pos(pi), d, m), 0.0);
  double point_loss_neg = 0.0;
  for (int32_t nj : d.neg_idx)
    point_loss_neg += std::max(1.0 - pair_margin(PairRef::pseudo_neg(nj), d, m), 0.0);

  TheoremCheck check;
  check.lhs = reg + (C / 2.0) * pair_loss;
  check.rhs = 0.25 * (reg + 2.0 * d.num_neg() * C * point_loss_pos +
                      2.0 * d.num_pos() * C * point_loss_neg);
  check.holds = check.lhs <= check.rhs + 1e-9;
  return check;
}

}  // namespace asrank
