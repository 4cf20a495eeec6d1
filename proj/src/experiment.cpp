#include "asrank/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace asrank {

void ExperimentConfig::validate() const {
  if (train_path.empty()) throw ValidationError("no training data given");
  if (test_path.empty() && cv_k < 2)
    throw ValidationError("cross validation needs k >= 2");
  if (strategies.empty()) throw ValidationError("no strategies given");
  if (gammas.empty()) throw ValidationError("no gamma values given");
  if (seeds.empty()) throw ValidationError("no seeds given");
  if (budget <= 0 || step <= 0 || step > budget)
    throw ValidationError("need 0 < step <= budget");
  if (!(C > 0.0)) throw ValidationError("C must be positive");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

std::vector<std::pair<Dataset, Dataset>> make_cv_folds(const Dataset& d, int k,
                                                       uint64_t master_seed) {
  if (k < 2) throw ValidationError("cross validation needs k >= 2");
  if (d.num_pos() < k || d.num_neg() < k)
    throw ValidationError("not enough instances of each class for the folds");
  std::vector<int32_t> pos = d.pos_idx, neg = d.neg_idx;
  Rng rng = Rng::substream(master_seed, "folds");
  rng.shuffle(pos);
  rng.shuffle(neg);

  std::vector<std::pair<Dataset, Dataset>> folds;
  folds.reserve(k);
  for (int f = 0; f < k; ++f) {
    std::vector<int32_t> eval_idx, train_idx;
    for (size_t i = 0; i < pos.size(); ++i)
      (static_cast<int>(i % k) == f ? eval_idx : train_idx).push_back(pos[i]);
    for (size_t i = 0; i < neg.size(); ++i)
      (static_cast<int>(i % k) == f ? eval_idx : train_idx).push_back(neg[i]);
    folds.emplace_back(subset(d, train_idx), subset(d, eval_idx));
  }
  return folds;
}

namespace {

std::string format_row(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string format_row(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string file_stem(const std::string& path) {
  std::filesystem::path p(path);
  if (p.extension() == ".gz") p = p.stem();
  return p.stem().string();
}

struct RunTask {
  size_t strategy_idx, gamma_idx, seed_idx, fold_idx;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& train,
                                const Dataset* test) {
  cfg.validate();

  // Fold construction: a held-out test set is fold 0, otherwise stratified CV.
  std::vector<std::pair<Dataset, Dataset>> folds;
  if (test) {
    folds.emplace_back(train, *test);
  } else {
    folds = make_cv_folds(train, cfg.cv_k, cfg.master_seed);
  }
  const size_t n_folds = folds.size();

  std::vector<RunTask> tasks;
  for (size_t si = 0; si < cfg.strategies.size(); ++si)
    for (size_t gi = 0; gi < cfg.gammas.size(); ++gi)
      for (size_t ei = 0; ei < cfg.seeds.size(); ++ei)
        for (size_t fi = 0; fi < n_folds; ++fi)
          tasks.push_back({si, gi, ei, fi});

  std::vector<std::vector<IterationRecord>> results(tasks.size());
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) return;
      }
      try {
        const RunTask& task = tasks[t];
        LoopConfig lc;
        lc.budget = cfg.budget;
        lc.step = cfg.step;
        lc.C = cfg.C;
        lc.solver_tol = cfg.solver_tol;
        lc.max_sweeps = cfg.max_sweeps;
        lc.mode = cfg.mode;
        lc.tie_policy = cfg.tie_policy;
        lc.sampling.strategy = cfg.strategies[task.strategy_idx];
        lc.sampling.gamma = cfg.gammas[task.gamma_idx];
        lc.sampling.bias_correction = cfg.bias_correction;
        lc.sampling.max_attempts = cfg.max_attempts;
        std::string name = format_row(
            "run/seed=%llu/fold=%zu/strategy=%s/gamma=%s",
            static_cast<unsigned long long>(cfg.seeds[task.seed_idx]), task.fold_idx,
            to_string(cfg.strategies[task.strategy_idx]).c_str(),
            cfg.gammas[task.gamma_idx].str().c_str());
        lc.sampling.seed = splitmix64(cfg.master_seed) ^ fnv1a64(name);
        const auto& [ftrain, feval] = folds[task.fold_idx];
        results[t] = run_active(ftrain, &feval, lc).second;
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  {
    std::vector<std::thread> pool;
    int n_threads = std::min<int>(cfg.threads, static_cast<int>(tasks.size()));
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const std::string dataset =
      cfg.dataset_name.empty() ? file_stem(cfg.train_path) : cfg.dataset_name;
  const std::string mode_str = to_string(cfg.mode);

  // Curve CSV, rows in canonical task order.
  std::string curve = std::string(kCurveHeader) + "\n";
  for (size_t t = 0; t < tasks.size(); ++t) {
    const RunTask& task = tasks[t];
    for (const IterationRecord& r : results[t]) {
      curve += format_row(
          "%s,%s,%s,%s,%llu,%zu,%d,%lld,%.6f,%lld,%.3f\n", dataset.c_str(),
          to_string(cfg.strategies[task.strategy_idx]).c_str(),
          cfg.gammas[task.gamma_idx].str().c_str(), mode_str.c_str(),
          static_cast<unsigned long long>(cfg.seeds[task.seed_idx]), task.fold_idx,
          r.iter, static_cast<long long>(r.pool_size), r.auc_eval,
          static_cast<long long>(r.rejections), cfg.timing ? r.wall_time_s : 0.0);
    }
  }

  // Summary: mean +- std of the final-budget AUC per cell, Welch p-value
  // against the reference cell.
  std::string ref_strategy =
      cfg.reference_strategy.empty() ? to_string(cfg.strategies[0]) : cfg.reference_strategy;
  std::string ref_gamma =
      cfg.reference_gamma.empty() ? cfg.gammas[0].str() : cfg.reference_gamma;
  const std::string reference = ref_strategy + ":" + ref_gamma;

  const size_t runs_per_cell = cfg.seeds.size() * n_folds;
  auto cell_finals = [&](size_t si, size_t gi) {
    std::vector<double> finals;
    finals.reserve(runs_per_cell);
    size_t base = (si * cfg.gammas.size() + gi) * runs_per_cell;
    for (size_t r = 0; r < runs_per_cell; ++r)
      finals.push_back(results[base + r].back().auc_eval);
    return finals;
  };

  std::vector<double> ref_finals;
  for (size_t si = 0; si < cfg.strategies.size(); ++si)
    for (size_t gi = 0; gi < cfg.gammas.size(); ++gi)
      if (to_string(cfg.strategies[si]) == ref_strategy &&
          cfg.gammas[gi].str() == ref_gamma)
        ref_finals = cell_finals(si, gi);
  if (ref_finals.empty())
    throw ValidationError("reference cell " + reference + " not in the grid");

  std::string summary = std::string(kSummaryHeader) + "\n";
  std::vector<double> summary_means;
  for (size_t si = 0; si < cfg.strategies.size(); ++si) {
    for (size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
      std::vector<double> finals = cell_finals(si, gi);
      double m = mean(finals);
      double sd = finals.size() >= 2 ? std::sqrt(sample_variance(finals)) : 0.0;
      summary_means.push_back(m);
      bool is_ref = to_string(cfg.strategies[si]) == ref_strategy &&
                    cfg.gammas[gi].str() == ref_gamma;
      double p = std::nan("");
      if (is_ref)
        p = 1.0;
      else if (finals.size() >= 2 && ref_finals.size() >= 2)
        p = welch_ttest(finals, ref_finals).p_two_sided;
      summary += format_row("%s,%s,%s,%s,%s,%zu,%.6f,%.6f,%.6g,%s\n", dataset.c_str(),
                            to_string(cfg.strategies[si]).c_str(),
                            cfg.gammas[gi].str().c_str(), mode_str.c_str(),
                            to_string(cfg.tie_policy).c_str(), finals.size(), m, sd, p,
                            reference.c_str());
    }
  }

  // Consistency check: the summary means must equal the mean of the curve
  // rows at the final pool size, re-read from the CSV text itself.
  auto cells = final_auc_cells(curve);
  size_t cell_idx = 0;
  for (size_t si = 0; si < cfg.strategies.size(); ++si) {
    for (size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
      std::string key = to_string(cfg.strategies[si]) + ":" + cfg.gammas[gi].str();
      auto it = cells.find(key);
      if (it == cells.end() || it->second.size() != runs_per_cell)
        throw Error("internal consistency check failed: missing cell " + key);
      double diff = std::fabs(mean(it->second) - summary_means[cell_idx]);
      if (diff > 1e-6)
        throw Error("internal consistency check failed for cell " + key);
      ++cell_idx;
    }
  }

  return ExperimentResult{std::move(curve), std::move(summary)};
}

std::map<std::string, std::vector<double>> final_auc_cells(const std::string& curve_csv) {
  std::istringstream in(curve_csv);
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader)
    throw ValidationError("not a curve CSV (bad header)");
  // cell -> run (seed,fold) -> (pool_size, auc at that size)
  std::map<std::string, std::map<std::string, std::pair<long long, double>>> best;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 11) throw ParseError(lineno, "expected 11 CSV fields");
    std::string cell = f[1] + ":" + f[2];
    std::string run = f[4] + "/" + f[5];
    long long pool = std::stoll(f[7]);
    double auc = std::stod(f[8]);
    auto& slot = best[cell][run];
    if (slot.first < pool) slot = {pool, auc};
  }
  std::map<std::string, std::vector<double>> out;
  for (auto& [cell, runs] : best) {
    auto& v = out[cell];
    for (auto& [run, pa] : runs) v.push_back(pa.second);
  }
  return out;
}

CellComparison compare_cells(const std::string& curve_csv, const std::string& cell_a,
                             const std::string& cell_b, double level) {
  auto cells = final_auc_cells(curve_csv);
  auto ita = cells.find(cell_a);
  auto itb = cells.find(cell_b);
  if (ita == cells.end()) throw ValidationError("cell '" + cell_a + "' not found");
  if (itb == cells.end()) throw ValidationError("cell '" + cell_b + "' not found");
  CellComparison c;
  c.n_a = ita->second.size();
  c.n_b = itb->second.size();
  c.test = welch_ttest(ita->second, itb->second, level);
  return c;
}

int cmd_run(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset train = parse_libsvm_file(cfg.train_path, cfg.dim_override);
  std::optional<Dataset> test;
  if (!cfg.test_path.empty()) {
    // The test split must live in the training feature space.
    test = parse_libsvm_file(cfg.test_path,
                             cfg.dim_override ? cfg.dim_override : std::optional<int32_t>(train.n));
    if (test->n < train.n)
      throw DimensionError("test set dimension below training dimension");
  }

  ExperimentResult result = run_experiment(cfg, train, test ? &*test : nullptr);

  std::filesystem::create_directories(cfg.out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::string path = (std::filesystem::path(cfg.out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
  };
  write("curve.csv", result.curve_csv);
  write("summary.csv", result.summary_csv);
  return 0;
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model " + path);
  out << "asrank-model 1\n";
  out << "mode " << to_string(m.mode) << "\n";
  out << "dim " << m.w.size() << "\n";
  char buf[64];
  for (double v : m.w) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path);
  std::string magic, mode_word, mode_str, dim_word;
  int version = 0;
  size_t dim = 0;
  in >> magic >> version >> mode_word >> mode_str >> dim_word >> dim;
  if (!in || magic != "asrank-model" || version != 1 || mode_word != "mode" ||
      dim_word != "dim")
    throw ValidationError("not an asrank model file: " + path);
  Model m;
  m.mode = model_mode_from_string(mode_str);
  m.w.resize(dim);
  for (size_t k = 0; k < dim; ++k)
    if (!(in >> m.w[k])) throw ValidationError("truncated model file: " + path);
  return m;
}

std::vector<double> predict_scores(const Model& m, std::istream& data) {
  std::vector<SparseVector> instances;
  std::vector<int> labels;
  parse_libsvm_instances(data, &instances, &labels);
  const int32_t feat_dim = m.mode == ModelMode::kPlain
                               ? static_cast<int32_t>(m.w.size())
                               : static_cast<int32_t>(m.w.size()) - 1;
  std::vector<double> scores;
  scores.reserve(instances.size());
  for (const SparseVector& x : instances) {
    if (x.max_index() >= feat_dim)
      throw DimensionError("instance feature index exceeds model dimension");
    double s = m.mode == ModelMode::kPlain ? 0.0 : -m.w[0];
    const int32_t off = m.mode == ModelMode::kPlain ? 0 : 1;
    for (const auto& e : x.entries) s += e.value * m.w[e.index + off];
    scores.push_back(s);
  }
  return scores;
}

}  // namespace asrank
