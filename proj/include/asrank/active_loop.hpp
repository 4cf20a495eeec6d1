#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "asrank/evaluation.hpp"
#include "asrank/sampling.hpp"
#include "asrank/solver.hpp"

namespace asrank {

// The chosen pool L*: sampled pairs with their acceptance probability, dual
// variable (for warm starts) and current example weight. The realized
// features live in `problem`, aligned with `pairs`; the full pair set is
// never materialized, only what was sampled.
struct ChosenPool {
  std::vector<PairRef> pairs;
  std::vector<double> probs;
  std::vector<double> alphas;
  WeightedProblem problem;  // features + weights, aligned with pairs
  PairSet membership;

  int64_t size() const { return static_cast<int64_t>(pairs.size()); }
  void add(const PairRef& p, double prob, const Dataset& d, ModelMode mode);
};

// Recomputes every member weight for the current pool size:
//   correction on   weight_k = Gamma_k * |L*| * C / (p_k * Z),  Z = sum 1/p_k
//   correction off  weight_k = Gamma_k * C
// with Gamma_k = gamma for real pairs, (1-gamma) for pseudo-pairs. Alphas are
// clipped into the new boxes. Recomputed each iteration because Z and |L*|
// change as the pool grows.
void pool_weights(ChosenPool& pool, double C, double gamma, bool bias_correction);

struct LoopConfig {
  int64_t budget = 8000;  // B
  int64_t step = 100;     // pairs added per iteration, b
  double C = 0.1;
  SamplingConfig sampling;
  double solver_tol = 1e-3;
  int max_sweeps = 1000;
  ModelMode mode = ModelMode::kPlain;
  TiePolicy tie_policy = TiePolicy::kLoss;  // for the per-iteration eval AUC
};

uint64_t loop_config_hash(const LoopConfig& cfg);

struct IterationRecord {
  int iter = 0;
  int64_t pool_size = 0;
  double auc_eval = 0.0;  // NaN when no evaluation set is given
  int64_t rejections = 0;
  double wall_time_s = 0.0;
  double objective = 0.0;
};

// One budgeted sample-then-train run. The initial pool is drawn with the
// configured strategy under the zero model; each step recomputes the pool
// weights, solves with a warm start, records the evaluation AUC, and draws
// the next batch until the budget is met. All randomness flows from
// cfg.sampling.seed through the "sampler" and "solver" substreams.
class ActiveRun {
 public:
  ActiveRun(const Dataset& train, const Dataset* eval, const LoopConfig& cfg);

  bool done() const {
    return !records_.empty() && records_.back().pool_size == cfg_.budget;
  }
  void step();
  void run() {
    while (!done()) step();
  }

  const Model& model() const { return model_; }
  const std::vector<IterationRecord>& records() const { return records_; }
  const ChosenPool& pool() const { return pool_; }

  // Lossless run state: pool entries, model, RNG states, records, and a
  // config hash that restore() verifies.
  void save_checkpoint(const std::string& path) const;
  static ActiveRun restore(const std::string& path, const Dataset& train,
                           const Dataset* eval, const LoopConfig& cfg);

 private:
  struct RestoreTag {};
  ActiveRun(RestoreTag, const Dataset& train, const Dataset* eval,
            const LoopConfig& cfg);
  void draw_batch(int64_t count);

  const Dataset& train_;
  const Dataset* eval_;
  LoopConfig cfg_;
  double gamma_;
  Rng rng_sampler_;
  Rng rng_solver_;
  ChosenPool pool_;
  Model model_;
  std::vector<IterationRecord> records_;
  int iter_ = 0;
  int64_t pending_rejections_ = 0;
  double pending_seconds_ = 0.0;
};

std::pair<Model, std::vector<IterationRecord>> run_active(const Dataset& train,
                                                          const Dataset* eval,
                                                          const LoopConfig& cfg);

}  // namespace asrank
