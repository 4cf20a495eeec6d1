#include "asrank/evaluation.hpp"

#include <algorithm>
#include <numeric>

namespace asrank {

std::string to_string(TiePolicy p) {
  return p == TiePolicy::kLoss ? "loss" : "half";
}

TiePolicy tie_policy_from_string(const std::string& s) {
  if (s == "loss") return TiePolicy::kLoss;
  if (s == "half") return TiePolicy::kHalf;
  throw ValidationError("unknown tie policy '" + s + "'");
}

namespace {

void check_inputs(const std::vector<double>& scores,
                  const std::vector<int>& labels, int64_t* np, int64_t* nn) {
  if (scores.size() != labels.size())
    throw ValidationError("score/label count mismatch");
  *np = 0;
  *nn = 0;
  for (int y : labels) {
    if (y == 1)
      ++*np;
    else if (y == -1)
      ++*nn;
    else
      throw ValidationError("label must be +1 or -1");
  }
  if (*np == 0 || *nn == 0)
    throw ValidationError("AUC needs both classes present");
}

// Both routes count integer pair outcomes and assemble the report through the
// same arithmetic, so equal counts give bit-identical values.
AucReport assemble(int64_t mis, int64_t ties, int64_t n_pairs, TiePolicy policy) {
  double loss;
  if (policy == TiePolicy::kLoss)
    loss = static_cast<double>(mis + ties) / static_cast<double>(n_pairs);
  else
    loss = (static_cast<double>(mis) + 0.5 * static_cast<double>(ties)) /
           static_cast<double>(n_pairs);
  return AucReport{1.0 - loss, n_pairs, policy};
}

}  // namespace

AucReport auc_bruteforce(const std::vector<double>& scores,
                         const std::vector<int>& labels, TiePolicy policy) {
  int64_t np, nn;
  check_inputs(scores, labels, &np, &nn);
  int64_t mis = 0, ties = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != -1) continue;
      if (scores[i] < scores[j])
        ++mis;
      else if (scores[i] == scores[j])
        ++ties;
    }
  }
  return assemble(mis, ties, np * nn, policy);
}

AucReport auc_fast(const std::vector<double>& scores,
                   const std::vector<int>& labels, TiePolicy policy) {
  int64_t np, nn;
  check_inputs(scores, labels, &np, &nn);

  std::vector<int32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    return scores[a] < scores[b];
  });

  // Walk equal-score groups in ascending order. A positive in a group is
  // mis-ordered against every negative strictly above and tied against the
  // negatives in its own group.
  int64_t mis = 0, ties = 0;
  int64_t neg_below = 0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    int64_t group_pos = 0, group_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1)
        ++group_pos;
      else
        ++group_neg;
      ++j;
    }
    mis += group_pos * (nn - neg_below - group_neg);
    ties += group_pos * group_neg;
    neg_below += group_neg;
    i = j;
  }
  return assemble(mis, ties, np * nn, policy);
}

}  // namespace asrank
