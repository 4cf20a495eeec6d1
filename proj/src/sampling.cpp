#include "asrank/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace asrank {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "Random";
    case Strategy::kSoftClose: return "SoftClose";
    case Strategy::kSoftCorrect: return "SoftCorrect";
    case Strategy::kHardClose: return "HardClose";
    case Strategy::kHardCorrect: return "HardCorrect";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "Random") return Strategy::kRandom;
  if (s == "SoftClose") return Strategy::kSoftClose;
  if (s == "SoftCorrect") return Strategy::kSoftCorrect;
  if (s == "HardClose") return Strategy::kHardClose;
  if (s == "HardCorrect") return Strategy::kHardCorrect;
  throw ValidationError("unknown strategy '" + s + "'");
}

bool is_soft(Strategy s) {
  return s == Strategy::kSoftClose || s == Strategy::kSoftCorrect;
}

bool is_hard(Strategy s) {
  return s == Strategy::kHardClose || s == Strategy::kHardCorrect;
}

GammaSpec GammaSpec::value(double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("gamma must be in [0,1]");
  return GammaSpec{g};
}

GammaSpec GammaSpec::uniform() { return GammaSpec{std::nullopt}; }

GammaSpec GammaSpec::parse(const std::string& s) {
  if (s == "uniform") return uniform();
  try {
    size_t used = 0;
    double g = std::stod(s, &used);
    if (used != s.size()) throw ValidationError("");
    return value(g);
  } catch (const std::exception&) {
    throw ValidationError("bad gamma '" + s + "' (number in [0,1] or 'uniform')");
  }
}

double GammaSpec::resolve(const Dataset& d) const {
  if (fixed) return *fixed;
  PairCounts c = count_pairs(d, 0.5);  // any gamma < 1 keeps pseudo-pairs counted
  return static_cast<double>(c.n_real) / static_cast<double>(c.total());
}

std::string GammaSpec::str() const {
  if (is_uniform()) return "uniform";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", *fixed);
  return buf;
}

bool PairSet::insert(const PairRef& p) {
  if (!set_.insert(p.key()).second) return false;
  if (p.kind == PairKind::kReal)
    ++n_real_;
  else
    ++n_pseudo_;
  return true;
}

double closeness(const PairRef& p, const Dataset& d, const Model& m) {
  return std::fabs(pair_margin(p, d, m));
}

double correctness(const PairRef& p, const Dataset& d, const Model& m) {
  return -std::max(1.0 - pair_margin(p, d, m), 0.0);
}

double soft_close_prob(double margin) {
  return 2.0 / (1.0 + std::exp(std::fabs(margin)));
}

double soft_correct_prob(double margin) {
  return 1.0 - 2.0 / (1.0 + std::exp(std::max(1.0 - margin, 0.0)));
}

double strategy_prob(Strategy s, double margin) {
  switch (s) {
    case Strategy::kSoftClose: return soft_close_prob(margin);
    case Strategy::kSoftCorrect: return soft_correct_prob(margin);
    default: return 1.0;
  }
}

double bias_weight(const SampleDraw& draw, const SamplingConfig& cfg) {
  if (!cfg.bias_correction) return 1.0;
  if (!(draw.p > 0.0)) throw ValidationError("draw probability must be positive");
  return 1.0 / draw.p;
}

namespace {

// Margin of a candidate through two sparse dots, no realization.
double candidate_margin(const PairRef& p, const Dataset& d, const Model& m) {
  switch (p.kind) {
    case PairKind::kReal:
      return instance_score(d, p.i, m) - instance_score(d, p.j, m);
    case PairKind::kPseudoPos:
      return instance_score(d, p.i, m);
    case PairKind::kPseudoNeg:
      return -instance_score(d, p.j, m);
  }
  throw ReferenceError("invalid pair kind");
}

int64_t eligible_remaining(const Dataset& d, double gamma, const PairSet& chosen) {
  PairCounts c = count_pairs(d, gamma);
  int64_t rem = 0;
  if (gamma > 0.0) rem += c.n_real - chosen.count_real();
  if (gamma < 1.0) rem += c.n_pseudo - chosen.count_pseudo();
  return rem;
}

}  // namespace

SampleDraw draw_soft(const Dataset& d, const Model& m, const SamplingConfig& cfg,
                     const PairSet& chosen, Rng& rng) {
  const double gamma = cfg.gamma.resolve(d);
  const PairCounts counts = count_pairs(d, gamma);
  if (eligible_remaining(d, gamma, chosen) <= 0)
    throw PoolExhaustedError("no eligible unchosen pairs remain");

  std::optional<PairRef> best;
  double best_ap = 0.0;
  std::optional<PairRef> first_eligible;  // Gamma > 0 but acceptance 0
  int64_t rejections = 0;
  int64_t skips = 0;
  constexpr int64_t kSkipCap = 100000000;

  while (true) {
    PairRef cand = PairRef::real(0, 0);
    bool real = counts.n_pseudo == 0 ||
                rng.next_below(static_cast<uint64_t>(counts.total())) <
                    static_cast<uint64_t>(counts.n_real);
    if (real) {
      int32_t pi = d.pos_idx[rng.next_below(d.num_pos())];
      int32_t nj = d.neg_idx[rng.next_below(d.num_neg())];
      cand = PairRef::real(pi, nj);
    } else {
      int32_t k = static_cast<int32_t>(rng.next_below(d.size()));
      cand = d.labels[k] == 1 ? PairRef::pseudo_pos(k) : PairRef::pseudo_neg(k);
    }
    if (chosen.contains(cand)) {
      if (++skips > kSkipCap)
        throw PoolExhaustedError("candidate skip cap exceeded");
      continue;
    }

    double gamma_k = cand.kind == PairKind::kReal ? gamma : 1.0 - gamma;
    double ap = gamma_k * strategy_prob(cfg.strategy, candidate_margin(cand, d, m));
    if (ap > best_ap) {
      best = cand;
      best_ap = ap;
    } else if (ap == 0.0 && gamma_k > 0.0 && !first_eligible) {
      first_eligible = cand;
    }

    if (rng.next_double() < ap)
      return SampleDraw{cand, ap, rejections, false};
    ++rejections;

    if (rejections >= cfg.max_attempts) {
      // Deterministic fallback: the selection is no longer probabilistic, so
      // the acceptance probability recorded is 1.
      if (best) return SampleDraw{*best, 1.0, rejections, true};
      if (first_eligible) return SampleDraw{*first_eligible, 1.0, rejections, true};
      // Keep drawing until some eligible candidate has been seen.
    }
  }
}

namespace {

struct HardCandidate {
  double value;
  PairRef pair;
};

// Total order on hard candidates: measure, then kind, then instance indices.
bool hard_less(const HardCandidate& a, const HardCandidate& b) {
  return std::tie(a.value, a.pair.kind, a.pair.i, a.pair.j) <
         std::tie(b.value, b.pair.kind, b.pair.i, b.pair.j);
}

// Gathers at least `want` unchosen real pairs in nondecreasing measure order,
// plus every pair tied with the want-th value, via a best-first frontier.
// `emit` maps a frontier cell to (measure, pair) and `advance` pushes its
// successors. Shared by both hard variants through small lambdas below.
class BoundTracker {
 public:
  explicit BoundTracker(int64_t want) : want_(want) {}

  void add(double v) {
    if (static_cast<int64_t>(worst_.size()) < want_) {
      worst_.push(v);
    } else if (v < worst_.top()) {
      worst_.pop();
      worst_.push(v);
    }
  }
  bool satisfied(double frontier_min) const {
    return static_cast<int64_t>(worst_.size()) >= want_ && frontier_min > worst_.top();
  }

 private:
  int64_t want_;
  std::priority_queue<double> worst_;  // max-heap of the want smallest values
};

std::vector<HardCandidate> gather_hard_real(const Dataset& d,
                                            const std::vector<double>& s,
                                            Strategy strategy,
                                            const PairSet& chosen, int64_t want) {
  std::vector<HardCandidate> out;
  if (want <= 0 || d.num_pos() == 0 || d.num_neg() == 0) return out;
  BoundTracker bound(want);

  if (strategy == Strategy::kHardCorrect) {
    // Grid best-first over positives ascending by score and negatives
    // descending: value(a,c) = s_pos[a] - s_neg[c] is monotone in both axes.
    std::vector<int32_t> pos = d.pos_idx, neg = d.neg_idx;
    std::sort(pos.begin(), pos.end(), [&](int32_t a, int32_t b) {
      return std::tie(s[a], a) < std::tie(s[b], b);
    });
    std::sort(neg.begin(), neg.end(), [&](int32_t a, int32_t b) {
      return std::make_tuple(-s[a], a) < std::make_tuple(-s[b], b);
    });
    const int64_t P = pos.size(), Q = neg.size();
    using Cell = std::tuple<double, int64_t, int64_t>;  // value, a, c
    std::priority_queue<Cell, std::vector<Cell>, std::greater<Cell>> heap;
    std::unordered_set<uint64_t> seen;
    auto push = [&](int64_t a, int64_t c) {
      if (a >= P || c >= Q) return;
      uint64_t key = static_cast<uint64_t>(a) * static_cast<uint64_t>(Q) + c;
      if (!seen.insert(key).second) return;
      heap.emplace(s[pos[a]] - s[neg[c]], a, c);
    };
    push(0, 0);
    while (!heap.empty()) {
      auto [v, a, c] = heap.top();
      if (bound.satisfied(v)) break;
      heap.pop();
      PairRef p = PairRef::real(pos[a], neg[c]);
      if (!chosen.contains(p)) {
        out.push_back({v, p});
        bound.add(v);
      }
      push(a + 1, c);
      push(a, c + 1);
    }
    return out;
  }

  // HardClose: for each positive, scan outward from the nearest negative
  // score in both directions; a global heap merges the per-positive streams.
  std::vector<int32_t> neg = d.neg_idx;
  std::sort(neg.begin(), neg.end(), [&](int32_t a, int32_t b) {
    return std::tie(s[a], a) < std::tie(s[b], b);
  });
  std::vector<double> neg_scores(neg.size());
  for (size_t k = 0; k < neg.size(); ++k) neg_scores[k] = s[neg[k]];
  const int64_t Q = neg.size();

  struct Walk {
    int32_t pos;
    int64_t lo, hi;  // next negative rank on each side, lo moves down
  };
  std::vector<Walk> walks;
  walks.reserve(d.num_pos());
  // value, side is encoded by which pointer the pop consumes
  using Item = std::tuple<double, int64_t, bool>;  // value, walk id, use_lo
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  auto push_next = [&](int64_t wid) {
    Walk& wk = walks[wid];
    double sp = s[wk.pos];
    double lo_v = wk.lo >= 0 ? std::fabs(sp - neg_scores[wk.lo]) : -1.0;
    double hi_v = wk.hi < Q ? std::fabs(sp - neg_scores[wk.hi]) : -1.0;
    if (wk.lo >= 0 && (wk.hi >= Q || lo_v <= hi_v))
      heap.emplace(lo_v, wid, true);
    else if (wk.hi < Q)
      heap.emplace(hi_v, wid, false);
  };

  for (int32_t pi : d.pos_idx) {
    auto it = std::upper_bound(neg_scores.begin(), neg_scores.end(), s[pi]);
    int64_t hi = it - neg_scores.begin();
    walks.push_back({pi, hi - 1, hi});
    push_next(static_cast<int64_t>(walks.size()) - 1);
  }
  while (!heap.empty()) {
    auto [v, wid, use_lo] = heap.top();
    if (bound.satisfied(v)) break;
    heap.pop();
    Walk& wk = walks[wid];
    int64_t rank = use_lo ? wk.lo-- : wk.hi++;
    PairRef p = PairRef::real(wk.pos, neg[rank]);
    if (!chosen.contains(p)) {
      out.push_back({v, p});
      bound.add(v);
    }
    push_next(wid);
  }
  return out;
}

}  // namespace

std::vector<PairRef> draw_hard(const Dataset& d, const Model& m,
                               const SamplingConfig& cfg, const PairSet& chosen,
                               int64_t b) {
  if (b < 0) throw ValidationError("draw count must be nonnegative");
  if (b == 0) return {};
  const double gamma = cfg.gamma.resolve(d);
  if (eligible_remaining(d, gamma, chosen) < b)
    throw PoolExhaustedError("fewer than b eligible unchosen pairs remain");

  const std::vector<double> s = score_all(d, m);
  std::vector<HardCandidate> cands;
  if (gamma > 0.0) cands = gather_hard_real(d, s, cfg.strategy, chosen, b);
  if (gamma < 1.0) {
    for (int32_t k = 0; k < d.size(); ++k) {
      PairRef p = d.labels[k] == 1 ? PairRef::pseudo_pos(k) : PairRef::pseudo_neg(k);
      if (chosen.contains(p)) continue;
      double margin = margin_from_scores(p, s);
      double v = cfg.strategy == Strategy::kHardClose ? std::fabs(margin) : margin;
      cands.push_back({v, p});
    }
  }
  std::sort(cands.begin(), cands.end(), hard_less);
  std::vector<PairRef> out;
  out.reserve(b);
  for (const auto& c : cands) {
    out.push_back(c.pair);
    if (static_cast<int64_t>(out.size()) == b) break;
  }
  if (static_cast<int64_t>(out.size()) < b)
    throw PoolExhaustedError("hard draw could not gather b pairs");
  return out;
}

}  // namespace asrank
