#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asrank/data.hpp"

namespace asrank {

// Symbolic reference to a pair in positive orientation (y = +1). Real pairs
// reference one positive and one negative instance; pseudo-pairs put an
// instance point against the zero vector. Never materialized en masse.
enum class PairKind : uint8_t { kReal = 0, kPseudoPos = 1, kPseudoNeg = 2 };

struct PairRef {
  PairKind kind;
  int32_t i;  // positive instance index (kReal, kPseudoPos), else -1
  int32_t j;  // negative instance index (kReal, kPseudoNeg), else -1

  static PairRef real(int32_t pos, int32_t neg) { return {PairKind::kReal, pos, neg}; }
  static PairRef pseudo_pos(int32_t pos) { return {PairKind::kPseudoPos, pos, -1}; }
  static PairRef pseudo_neg(int32_t neg) { return {PairKind::kPseudoNeg, -1, neg}; }

  bool operator==(const PairRef&) const = default;

  // Unique packed key for hash sets. Instance indices fit easily in 31 bits
  // at the scales this artifact targets.
  uint64_t key() const {
    return (static_cast<uint64_t>(kind) << 62) |
           (static_cast<uint64_t>(static_cast<uint32_t>(i + 1)) << 31) |
           static_cast<uint64_t>(static_cast<uint32_t>(j + 1));
  }
};

// Ranking model. In plain mode w has length n and r(x) = w.x. In threshold
// mode w has length 1+n with slot 0 holding the threshold, and instances are
// ranked through the extended vector [-1; x].
enum class ModelMode : uint8_t { kPlain, kThreshold };

std::string to_string(ModelMode m);
ModelMode model_mode_from_string(const std::string& s);

struct Model {
  ModelMode mode = ModelMode::kPlain;
  std::vector<double> w;

  static Model zeros(ModelMode mode, int32_t n) {
    return Model{mode, std::vector<double>(mode == ModelMode::kPlain ? n : n + 1, 0.0)};
  }
  double theta() const { return mode == ModelMode::kThreshold ? w[0] : 0.0; }
};

int32_t model_dim(ModelMode mode, int32_t n);

// Feature vector of a pair in the model coordinate space of `mode`:
//   plain      Real -> x_i - x_j, PseudoPos -> x_i, PseudoNeg -> -x_j
//   threshold  Real -> [0; x_i - x_j] (slot 0 dropped, it is exactly zero),
//              PseudoPos -> [-1; x_i], PseudoNeg -> [+1; -x_j]
SparseVector realize(const PairRef& p, const Dataset& d, ModelMode mode);

// m.w . realize(p, d, m.mode). For Real pairs the threshold slot cancels, so
// both modes give the same value.
double pair_margin(const PairRef& p, const Dataset& d, const Model& m);

// Score of one instance under the model (through the extended vector in
// threshold mode, i.e. w.x - theta).
double instance_score(const Dataset& d, int32_t k, const Model& m);

// Margin assembled from instance scores: Real -> s_i - s_j, PseudoPos -> s_i,
// PseudoNeg -> -s_j. Equal to pair_margin up to roundoff (within 1e-12 for
// desk-scale data); the sampling module uses this form so soft draws cost two
// sparse dots and hard draws reuse one score pass.
double margin_from_scores(const PairRef& p, const std::vector<double>& scores);

std::vector<double> score_all(const Dataset& d, const Model& m);

struct PairCounts {
  int64_t n_real = 0;
  int64_t n_pseudo = 0;
  int64_t total() const { return n_real + n_pseudo; }
};

// |D_pair| and |D_pseu| for the joint sampling pool. gamma == 1 excludes
// pseudo-pairs entirely.
PairCounts count_pairs(const Dataset& d, double gamma);

}  // namespace asrank
