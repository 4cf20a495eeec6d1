#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "asrank/pairspace.hpp"

namespace asrank {

enum class Strategy { kRandom, kSoftClose, kSoftCorrect, kHardClose, kHardCorrect };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);
bool is_soft(Strategy s);
bool is_hard(Strategy s);

// Pair/pseudo-pair mixing weight. "uniform" resolves against a dataset to
// |D_pair| / |D*|.
struct GammaSpec {
  std::optional<double> fixed;  // empty means uniform

  static GammaSpec value(double g);
  static GammaSpec uniform();
  static GammaSpec parse(const std::string& s);

  bool is_uniform() const { return !fixed.has_value(); }
  double resolve(const Dataset& d) const;
  std::string str() const;

  bool operator==(const GammaSpec&) const = default;
};

struct SamplingConfig {
  Strategy strategy = Strategy::kRandom;
  GammaSpec gamma = GammaSpec::value(1.0);
  bool bias_correction = true;
  int max_attempts = 10000;
  uint64_t seed = 0;
};

// One accepted draw. `p` is the acceptance probability used (Gamma times the
// strategy value function; 1 for Random at gamma=1 and for fallback returns).
struct SampleDraw {
  PairRef pair;
  double p = 1.0;
  int64_t rejections = 0;
  bool fallback = false;
};

// Membership set over PairRefs with per-kind counts, backing duplicate
// suppression in the chosen pool.
class PairSet {
 public:
  bool contains(const PairRef& p) const { return set_.contains(p.key()); }
  bool insert(const PairRef& p);
  int64_t size() const { return static_cast<int64_t>(set_.size()); }
  int64_t count_real() const { return n_real_; }
  int64_t count_pseudo() const { return n_pseudo_; }

 private:
  std::unordered_set<uint64_t> set_;
  int64_t n_real_ = 0;
  int64_t n_pseudo_ = 0;
};

// Uncertainty of the ranker on a pair: |w.x_ij|.
double closeness(const PairRef& p, const Dataset& d, const Model& m);
// Performance of the ranker on a pair: -[1 - w.x_ij]_+.
double correctness(const PairRef& p, const Dataset& d, const Model& m);

// Acceptance probability for soft closeness sampling: 2 / (1 + e^|margin|).
double soft_close_prob(double margin);
// Acceptance probability for soft correctness sampling:
// 1 - 2 / (1 + e^[1 - margin]_+).
double soft_correct_prob(double margin);

// Strategy value function on a margin (Random -> 1).
double strategy_prob(Strategy s, double margin);

// Rejection sampling over the unchosen pool: propose uniformly from D* (real
// pairs and pseudo-pairs proportional to their counts; gamma=1 proposes real
// pairs only), skip already-chosen candidates (not counted as rejections),
// accept with probability Gamma * p where Gamma is gamma for real pairs and
// (1-gamma) for pseudo-pairs. After max_attempts probability-rejections the
// best candidate seen (highest Gamma*p) is returned with p = 1 and the
// fallback flag set; if no candidate with positive probability has been seen
// yet, sampling continues and the first eligible candidate is returned the
// same way.
SampleDraw draw_soft(const Dataset& d, const Model& m, const SamplingConfig& cfg,
                     const PairSet& chosen, Rng& rng);

// The b unchosen pairs with the smallest measure, computed from one pass of
// instance scores: HardClose orders by |s_i - s_j| (per-positive outward scan
// over the sorted negative scores, merged best-first), HardCorrect by
// s_i - s_j (best-first expansion from the lowest-scoring positive and
// highest-scoring negative). With gamma in (0,1) pseudo-pairs join the
// candidate list with their margins; gamma=1 excludes pseudo-pairs and
// gamma=0 excludes real pairs. Ties are broken by kind (Real, PseudoPos,
// PseudoNeg) and then by instance indices, so real-pair ties follow
// (pos_idx, neg_idx) lexicographic order.
std::vector<PairRef> draw_hard(const Dataset& d, const Model& m,
                               const SamplingConfig& cfg, const PairSet& chosen,
                               int64_t b);

// Inverse-probability multiplier for a draw, 1 when correction is off.
double bias_weight(const SampleDraw& draw, const SamplingConfig& cfg);

}  // namespace asrank
