#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asrank/common.hpp"

namespace asrank {

// How a positive/negative score tie is charged. kLoss counts a tie as a fully
// mis-ordered pair (the indicator uses <=); kHalf charges half, matching the
// conventional AUC.
enum class TiePolicy { kLoss, kHalf };

std::string to_string(TiePolicy p);
TiePolicy tie_policy_from_string(const std::string& s);

struct AucReport {
  double auc = 0.0;
  int64_t n_pairs = 0;
  TiePolicy tie_policy = TiePolicy::kLoss;
};

// O(N+ * N-) enumeration of every positive/negative pair.
AucReport auc_bruteforce(const std::vector<double>& scores,
                         const std::vector<int>& labels, TiePolicy policy);

// Sort-based rank-sum computation; identical value to auc_bruteforce.
AucReport auc_fast(const std::vector<double>& scores,
                   const std::vector<int>& labels, TiePolicy policy);

}  // namespace asrank
