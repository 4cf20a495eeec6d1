#include "asrank/pairspace.hpp"

namespace asrank {

std::string to_string(ModelMode m) {
  return m == ModelMode::kPlain ? "plain" : "threshold";
}

ModelMode model_mode_from_string(const std::string& s) {
  if (s == "plain") return ModelMode::kPlain;
  if (s == "threshold") return ModelMode::kThreshold;
  throw ValidationError("unknown model mode '" + s + "'");
}

int32_t model_dim(ModelMode mode, int32_t n) {
  return mode == ModelMode::kPlain ? n : n + 1;
}

namespace {

const SparseVector& checked_instance(const Dataset& d, int32_t k) {
  if (k < 0 || k >= d.size())
    throw ReferenceError("pair references instance " + std::to_string(k) +
                         " outside dataset of size " + std::to_string(d.size()));
  return d.instances[k];
}

SparseVector shift_up(const SparseVector& v) {
  SparseVector out;
  out.entries.reserve(v.nnz());
  for (const auto& e : v.entries) out.entries.push_back({e.index + 1, e.value});
  return out;
}

SparseVector with_slot0(double slot0, const SparseVector& v) {
  SparseVector out;
  out.entries.reserve(v.nnz() + 1);
  out.entries.push_back({0, slot0});
  for (const auto& e : v.entries) out.entries.push_back({e.index + 1, e.value});
  return out;
}

}  // namespace

SparseVector realize(const PairRef& p, const Dataset& d, ModelMode mode) {
  switch (p.kind) {
    case PairKind::kReal: {
      SparseVector diff = sparse_diff(checked_instance(d, p.i), checked_instance(d, p.j));
      return mode == ModelMode::kPlain ? diff : shift_up(diff);
    }
    case PairKind::kPseudoPos: {
      const SparseVector& x = checked_instance(d, p.i);
      return mode == ModelMode::kPlain ? x : with_slot0(-1.0, x);
    }
    case PairKind::kPseudoNeg: {
      SparseVector neg = negate(checked_instance(d, p.j));
      return mode == ModelMode::kPlain ? neg : with_slot0(+1.0, neg);
    }
  }
  throw ReferenceError("invalid pair kind");
}

double pair_margin(const PairRef& p, const Dataset& d, const Model& m) {
  if (static_cast<int32_t>(m.w.size()) != model_dim(m.mode, d.n))
    throw DimensionError("model dimension does not match dataset");
  return dot(realize(p, d, m.mode), m.w);
}

double instance_score(const Dataset& d, int32_t k, const Model& m) {
  const SparseVector& x = checked_instance(d, k);
  if (m.mode == ModelMode::kPlain) {
    if (static_cast<int32_t>(m.w.size()) != d.n)
      throw DimensionError("model dimension does not match dataset");
    return dot(x, m.w);
  }
  if (static_cast<int32_t>(m.w.size()) != d.n + 1)
    throw DimensionError("model dimension does not match dataset");
  double s = -m.w[0];
  for (const auto& e : x.entries) s += e.value * m.w[e.index + 1];
  return s;
}

double margin_from_scores(const PairRef& p, const std::vector<double>& scores) {
  switch (p.kind) {
    case PairKind::kReal:
      return scores[p.i] - scores[p.j];
    case PairKind::kPseudoPos:
      return scores[p.i];
    case PairKind::kPseudoNeg:
      return -scores[p.j];
  }
  throw ReferenceError("invalid pair kind");
}

std::vector<double> score_all(const Dataset& d, const Model& m) {
  std::vector<double> s(d.size());
  for (int32_t k = 0; k < d.size(); ++k) s[k] = instance_score(d, k, m);
  return s;
}

PairCounts count_pairs(const Dataset& d, double gamma) {
  PairCounts c;
  c.n_real = static_cast<int64_t>(d.num_pos()) * static_cast<int64_t>(d.num_neg());
  c.n_pseudo = gamma == 1.0 ? 0 : static_cast<int64_t>(d.size());
  return c;
}

}  // namespace asrank
