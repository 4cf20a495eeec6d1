#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asrank/common.hpp"

namespace asrank {

struct SparseEntry {
  int32_t index;  // 0-based internal index (the LIBSVM boundary is the parser)
  double value;

  bool operator==(const SparseEntry&) const = default;
};

// Sorted sparse feature vector. Indices strictly ascending, duplicates
// forbidden.
struct SparseVector {
  std::vector<SparseEntry> entries;

  bool empty() const { return entries.empty(); }
  size_t nnz() const { return entries.size(); }
  int32_t max_index() const { return entries.empty() ? -1 : entries.back().index; }

  bool operator==(const SparseVector&) const = default;

  // Validating factory for hand-built vectors.
  static SparseVector from_entries(std::vector<SparseEntry> e);
};

double dot(const SparseVector& a, const std::vector<double>& b);
double norm_sq(const SparseVector& a);
SparseVector sparse_diff(const SparseVector& a, const SparseVector& b);
SparseVector negate(const SparseVector& a);

// Labeled instance collection with positive/negative index partitions.
// Immutable after construction.
struct Dataset {
  std::vector<SparseVector> instances;
  std::vector<int> labels;  // +1 / -1
  std::vector<int32_t> pos_idx;
  std::vector<int32_t> neg_idx;
  int32_t n = 0;  // feature dimension

  int32_t size() const { return static_cast<int32_t>(instances.size()); }
  int32_t num_pos() const { return static_cast<int32_t>(pos_idx.size()); }
  int32_t num_neg() const { return static_cast<int32_t>(neg_idx.size()); }

  bool operator==(const Dataset& o) const {
    return instances == o.instances && labels == o.labels && n == o.n;
  }

  static Dataset from_instances(std::vector<SparseVector> instances,
                                std::vector<int> labels,
                                std::optional<int32_t> dim_override = {});
};

// LIBSVM text format: `<label> <idx>:<val> ...` with ascending 1-based
// indices, label in {+1,-1}; `#` starts a comment. Dimension defaults to the
// max index seen; the override exists so train/test splits share a feature
// space.
Dataset parse_libsvm(std::istream& in, std::optional<int32_t> dim_override = {});
Dataset parse_libsvm(const std::string& text, std::optional<int32_t> dim_override = {});

// Line-level parser without the dataset invariants (may be empty or
// single-class); used for scoring arbitrary inputs.
void parse_libsvm_instances(std::istream& in, std::vector<SparseVector>* instances,
                            std::vector<int>* labels);

// Reads a file, transparently gunzipping when the name ends in ".gz".
Dataset parse_libsvm_file(const std::string& path,
                          std::optional<int32_t> dim_override = {});

void serialize_libsvm(const Dataset& d, std::ostream& out);
std::string serialize_libsvm(const Dataset& d);

// New dataset from a subset of instance indices; keeps the parent dimension.
Dataset subset(const Dataset& d, const std::vector<int32_t>& indices);

std::string read_file_maybe_gz(const std::string& path);

}  // namespace asrank
