#include "asrank/active_loop.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace asrank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int64_t eligible_pool_size(const Dataset& d, double gamma) {
  PairCounts c = count_pairs(d, gamma);
  int64_t total = 0;
  if (gamma > 0.0) total += c.n_real;
  if (gamma < 1.0) total += c.n_pseudo;
  return total;
}

}  // namespace

void ChosenPool::add(const PairRef& p, double prob, const Dataset& d,
                     ModelMode mode) {
  if (!membership.insert(p)) throw ValidationError("pair already in chosen pool");
  pairs.push_back(p);
  probs.push_back(prob);
  alphas.push_back(0.0);
  problem.features.push_back(realize(p, d, mode));
  problem.weights.push_back(1.0);  // placeholder until pool_weights runs
}

void pool_weights(ChosenPool& pool, double C, double gamma, bool bias_correction) {
  const int64_t n = pool.size();
  if (n == 0) return;
  double z = 0.0;
  if (bias_correction) {
    for (double p : pool.probs) {
      if (!(p > 0.0)) throw ValidationError("stored draw probability must be positive");
      z += 1.0 / p;
    }
  }
  for (int64_t k = 0; k < n; ++k) {
    double gamma_k = pool.pairs[k].kind == PairKind::kReal ? gamma : 1.0 - gamma;
    double w;
    if (bias_correction)
      w = gamma_k * static_cast<double>(n) * C / (pool.probs[k] * z);
    else
      w = gamma_k * C;
    pool.problem.weights[k] = w;
    pool.alphas[k] = std::clamp(pool.alphas[k], 0.0, w);
  }
}

uint64_t loop_config_hash(const LoopConfig& cfg) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "B=%lld;b=%lld;C=%.17g;strategy=%s;gamma=%s;bias=%d;"
                "max_attempts=%d;seed=%llu;tol=%.17g;sweeps=%d;mode=%s;tie=%s",
                static_cast<long long>(cfg.budget), static_cast<long long>(cfg.step),
                cfg.C, to_string(cfg.sampling.strategy).c_str(),
                cfg.sampling.gamma.str().c_str(), cfg.sampling.bias_correction ? 1 : 0,
                cfg.sampling.max_attempts,
                static_cast<unsigned long long>(cfg.sampling.seed), cfg.solver_tol,
                cfg.max_sweeps, to_string(cfg.mode).c_str(),
                to_string(cfg.tie_policy).c_str());
  return fnv1a64(buf);
}

ActiveRun::ActiveRun(const Dataset& train, const Dataset* eval,
                     const LoopConfig& cfg)
    : train_(train),
      eval_(eval),
      cfg_(cfg),
      gamma_(cfg.sampling.gamma.resolve(train)),
      rng_sampler_(Rng::substream(cfg.sampling.seed, "sampler")),
      rng_solver_(Rng::substream(cfg.sampling.seed, "solver")),
      model_(Model::zeros(cfg.mode, train.n)) {
  if (cfg_.budget <= 0 || cfg_.step <= 0)
    throw ValidationError("budget and step must be positive");
  if (cfg_.step > cfg_.budget) throw ValidationError("step must not exceed budget");
  if (!(cfg_.C > 0.0)) throw ValidationError("C must be positive");
  if (cfg_.budget > eligible_pool_size(train_, gamma_))
    throw PoolExhaustedError("budget exceeds the pair pool");
  pool_.problem.dim = model_dim(cfg_.mode, train_.n);
  draw_batch(std::min(cfg_.step, cfg_.budget));
}

ActiveRun::ActiveRun(RestoreTag, const Dataset& train, const Dataset* eval,
                     const LoopConfig& cfg)
    : train_(train),
      eval_(eval),
      cfg_(cfg),
      gamma_(cfg.sampling.gamma.resolve(train)),
      rng_sampler_(0),
      rng_solver_(0),
      model_(Model::zeros(cfg.mode, train.n)) {
  pool_.problem.dim = model_dim(cfg_.mode, train_.n);
}

void ActiveRun::draw_batch(int64_t count) {
  auto t0 = Clock::now();
  if (is_hard(cfg_.sampling.strategy)) {
    for (const PairRef& p :
         draw_hard(train_, model_, cfg_.sampling, pool_.membership, count))
      pool_.add(p, 1.0, train_, cfg_.mode);
  } else {
    for (int64_t k = 0; k < count; ++k) {
      SampleDraw draw =
          draw_soft(train_, model_, cfg_.sampling, pool_.membership, rng_sampler_);
      pool_.add(draw.pair, draw.p, train_, cfg_.mode);
      pending_rejections_ += draw.rejections;
    }
  }
  pending_seconds_ += seconds_since(t0);
}

void ActiveRun::step() {
  if (done()) throw ValidationError("run already finished");
  auto t0 = Clock::now();

  pool_weights(pool_, cfg_.C, gamma_, cfg_.sampling.bias_correction);
  SolverState warm;
  warm.alpha = pool_.alphas;
  SolverState st = solve(pool_.problem, &warm, cfg_.solver_tol, cfg_.max_sweeps,
                         rng_solver_);
  pool_.alphas = st.alpha;
  model_.w = st.w;

  IterationRecord rec;
  rec.iter = ++iter_;
  rec.pool_size = pool_.size();
  rec.objective = st.objective;
  rec.rejections = pending_rejections_;
  pending_rejections_ = 0;
  if (eval_) {
    rec.auc_eval =
        auc_fast(score_all(*eval_, model_), eval_->labels, cfg_.tie_policy).auc;
  } else {
    rec.auc_eval = std::nan("");
  }
  if (pool_.size() < cfg_.budget)
    draw_batch(std::min(cfg_.step, cfg_.budget - pool_.size()));
  rec.wall_time_s = pending_seconds_ + seconds_since(t0);
  pending_seconds_ = 0.0;
  records_.push_back(rec);
}

std::pair<Model, std::vector<IterationRecord>> run_active(const Dataset& train,
                                                          const Dataset* eval,
                                                          const LoopConfig& cfg) {
  ActiveRun run(train, eval, cfg);
  run.run();
  return {run.model(), run.records()};
}

namespace {
constexpr int kCheckpointVersion = 1;
}

void ActiveRun::save_checkpoint(const std::string& path) const {
  nlohmann::json j;
  j["version"] = kCheckpointVersion;
  j["config_hash"] = loop_config_hash(cfg_);
  j["iter"] = iter_;
  j["pending_rejections"] = pending_rejections_;
  j["rng_sampler"] = rng_sampler_.serialize();
  j["rng_solver"] = rng_solver_.serialize();
  j["model_w"] = model_.w;

  nlohmann::json pool;
  std::vector<int> kinds;
  std::vector<int32_t> is, js;
  for (const PairRef& p : pool_.pairs) {
    kinds.push_back(static_cast<int>(p.kind));
    is.push_back(p.i);
    js.push_back(p.j);
  }
  pool["kind"] = kinds;
  pool["i"] = is;
  pool["j"] = js;
  pool["p"] = pool_.probs;
  pool["alpha"] = pool_.alphas;
  pool["weight"] = pool_.problem.weights;
  j["pool"] = pool;

  nlohmann::json recs = nlohmann::json::array();
  for (const IterationRecord& r : records_) {
    recs.push_back({{"iter", r.iter},
                    {"pool_size", r.pool_size},
                    {"auc_eval", r.auc_eval},
                    {"rejections", r.rejections},
                    {"wall_time_s", r.wall_time_s},
                    {"objective", r.objective}});
  }
  j["records"] = recs;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path);
  out << j.dump();
}

ActiveRun ActiveRun::restore(const std::string& path, const Dataset& train,
                             const Dataset* eval, const LoopConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
  if (j.value("version", -1) != kCheckpointVersion)
    throw CheckpointError("checkpoint version mismatch");
  if (j.value("config_hash", uint64_t{0}) != loop_config_hash(cfg))
    throw CheckpointError("checkpoint was written with a different config");

  ActiveRun run(RestoreTag{}, train, eval, cfg);
  run.iter_ = j.at("iter").get<int>();
  run.pending_rejections_ = j.at("pending_rejections").get<int64_t>();
  run.rng_sampler_.deserialize(j.at("rng_sampler").get<std::string>());
  run.rng_solver_.deserialize(j.at("rng_solver").get<std::string>());
  run.model_.w = j.at("model_w").get<std::vector<double>>();
  if (run.model_.w.size() != static_cast<size_t>(model_dim(cfg.mode, train.n)))
    throw CheckpointError("checkpoint model dimension mismatch");

  const auto& pool = j.at("pool");
  auto kinds = pool.at("kind").get<std::vector<int>>();
  auto is = pool.at("i").get<std::vector<int32_t>>();
  auto js = pool.at("j").get<std::vector<int32_t>>();
  auto probs = pool.at("p").get<std::vector<double>>();
  auto alphas = pool.at("alpha").get<std::vector<double>>();
  auto weights = pool.at("weight").get<std::vector<double>>();
  size_t n = kinds.size();
  if (is.size() != n || js.size() != n || probs.size() != n ||
      alphas.size() != n || weights.size() != n)
    throw CheckpointError("checkpoint pool arrays disagree in length");
  for (size_t k = 0; k < n; ++k) {
    if (kinds[k] < 0 || kinds[k] > 2) throw CheckpointError("bad pair kind");
    PairRef p{static_cast<PairKind>(kinds[k]), is[k], js[k]};
    run.pool_.add(p, probs[k], train, cfg.mode);
    run.pool_.alphas[k] = alphas[k];
    run.pool_.problem.weights[k] = weights[k];
  }

  for (const auto& r : j.at("records")) {
    IterationRecord rec;
    rec.iter = r.at("iter").get<int>();
    rec.pool_size = r.at("pool_size").get<int64_t>();
    rec.auc_eval = r.at("auc_eval").is_null() ? std::nan("")
                                              : r.at("auc_eval").get<double>();
    rec.rejections = r.at("rejections").get<int64_t>();
    rec.wall_time_s = r.at("wall_time_s").get<double>();
    rec.objective = r.at("objective").get<double>();
    run.records_.push_back(rec);
  }
  return run;
}

}  // namespace asrank
