#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asrank/active_loop.hpp"
#include "asrank/stats.hpp"

namespace asrank {

// Full experiment protocol: (strategy x gamma) cells, each run over every
// seed and fold, curve and summary CSVs as the artifacts.
struct ExperimentConfig {
  std::string train_path;
  std::string test_path;  // empty -> cross validation
  int cv_k = 5;
  std::vector<Strategy> strategies;
  std::vector<GammaSpec> gammas;
  int64_t budget = 8000;
  int64_t step = 100;
  double C = 0.1;
  std::vector<uint64_t> seeds;
  TiePolicy tie_policy = TiePolicy::kLoss;
  ModelMode mode = ModelMode::kPlain;
  bool bias_correction = true;
  int max_attempts = 10000;
  double solver_tol = 1e-3;
  int max_sweeps = 1000;
  std::string out_dir = ".";
  uint64_t master_seed = 1;
  int threads = 1;
  bool timing = true;  // off writes wall_time_s as 0.000 for byte-stable CSVs
  std::string reference_strategy;  // default: first strategy
  std::string reference_gamma;     // default: first gamma
  std::optional<int32_t> dim_override;
  std::string dataset_name;  // default: train file stem

  void validate() const;
};

struct ExperimentResult {
  std::string curve_csv;
  std::string summary_csv;
};

inline constexpr const char* kCurveHeader =
    "dataset,strategy,gamma,mode,seed,fold,iter,pool_size,auc,rejections,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "dataset,strategy,gamma,mode,tie_policy,n,auc_mean,auc_std,p_value_vs_reference,reference";

// Runs the full grid and assembles both CSVs. Deterministic for a fixed
// config (including thread count independence); with timing off the output is
// byte-stable across invocations.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& train,
                                const Dataset* test);

// Loads datasets per the config, runs, writes curve.csv and summary.csv to
// cfg.out_dir. Returns the process exit code.
int cmd_run(const ExperimentConfig& cfg);

// Stratified k-fold split, shuffled by the "folds" substream of master_seed.
// Returns (train, eval) datasets per fold; every fold keeps the parent
// dimension.
std::vector<std::pair<Dataset, Dataset>> make_cv_folds(const Dataset& d, int k,
                                                       uint64_t master_seed);

// Final-budget AUC samples per cell, keyed "Strategy:gamma", extracted from a
// curve CSV (the row with the largest pool size per seed/fold).
std::map<std::string, std::vector<double>> final_auc_cells(const std::string& curve_csv);

struct CellComparison {
  TTestResult test;
  size_t n_a = 0, n_b = 0;
};

// Welch comparison of two cells of a curve CSV at the final budget.
CellComparison compare_cells(const std::string& curve_csv, const std::string& cell_a,
                             const std::string& cell_b, double level = 0.95);

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

// Scores for every instance of a LIBSVM stream under the model, input order.
std::vector<double> predict_scores(const Model& m, std::istream& data);

}  // namespace asrank
