#include "asrank/data.hpp"

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace asrank {

SparseVector SparseVector::from_entries(std::vector<SparseEntry> e) {
  for (size_t k = 0; k < e.size(); ++k) {
    if (e[k].index < 0) throw ValidationError("negative sparse index");
    if (k > 0 && e[k].index <= e[k - 1].index)
      throw ValidationError("sparse indices not strictly ascending");
  }
  SparseVector v;
  v.entries = std::move(e);
  return v;
}

double dot(const SparseVector& a, const std::vector<double>& b) {
  double s = 0.0;
  for (const auto& e : a.entries) {
    if (e.index >= static_cast<int32_t>(b.size()))
      throw DimensionError("sparse index " + std::to_string(e.index) +
                           " out of range for dense vector of length " +
                           std::to_string(b.size()));
    s += e.value * b[e.index];
  }
  return s;
}

double norm_sq(const SparseVector& a) {
  double s = 0.0;
  for (const auto& e : a.entries) s += e.value * e.value;
  return s;
}

SparseVector sparse_diff(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  out.entries.reserve(a.nnz() + b.nnz());
  size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    if (j >= b.nnz() || (i < a.nnz() && a.entries[i].index < b.entries[j].index)) {
      out.entries.push_back(a.entries[i++]);
    } else if (i >= a.nnz() || b.entries[j].index < a.entries[i].index) {
      out.entries.push_back({b.entries[j].index, -b.entries[j].value});
      ++j;
    } else {
      double v = a.entries[i].value - b.entries[j].value;
      if (v != 0.0) out.entries.push_back({a.entries[i].index, v});
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector negate(const SparseVector& a) {
  SparseVector out = a;
  for (auto& e : out.entries) e.value = -e.value;
  return out;
}

Dataset Dataset::from_instances(std::vector<SparseVector> instances,
                                std::vector<int> labels,
                                std::optional<int32_t> dim_override) {
  if (instances.size() != labels.size())
    throw ValidationError("instance/label count mismatch");
  Dataset d;
  d.instances = std::move(instances);
  d.labels = std::move(labels);
  int32_t max_idx = -1;
  for (int32_t k = 0; k < d.size(); ++k) {
    if (d.labels[k] == 1)
      d.pos_idx.push_back(k);
    else if (d.labels[k] == -1)
      d.neg_idx.push_back(k);
    else
      throw ValidationError("label must be +1 or -1");
    max_idx = std::max(max_idx, d.instances[k].max_index());
  }
  d.n = dim_override ? *dim_override : max_idx + 1;
  if (max_idx + 1 > d.n)
    throw ValidationError("feature index exceeds declared dimension");
  if (d.instances.empty()) throw ValidationError("empty dataset");
  if (d.pos_idx.empty() || d.neg_idx.empty())
    throw ValidationError("bipartite ranking requires both classes");
  return d;
}

namespace {

bool parse_double(std::string_view tok, double* out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects leading '+'
  auto [p, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && p == last;
}

}  // namespace

void parse_libsvm_instances(std::istream& in, std::vector<SparseVector>* instances,
                            std::vector<int>* labels) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    size_t pos = 0;
    auto next_token = [&](std::string_view* tok) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) return false;
      size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      *tok = std::string_view(line).substr(start, pos - start);
      return true;
    };

    std::string_view tok;
    if (!next_token(&tok)) continue;  // blank or comment-only line

    double labval;
    if (!parse_double(tok, &labval))
      throw ParseError(lineno, "non-numeric label '" + std::string(tok) + "'");
    if (labval != 1.0 && labval != -1.0)
      throw ParseError(lineno, "label must be +1 or -1");
    int label = labval > 0 ? 1 : -1;

    SparseVector x;
    int32_t prev = 0;  // external indices are 1-based
    while (next_token(&tok)) {
      auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(lineno, "expected idx:val, got '" + std::string(tok) + "'");
      int32_t idx;
      {
        auto sub = tok.substr(0, colon);
        auto [p, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), idx);
        if (ec != std::errc() || p != sub.data() + sub.size())
          throw ParseError(lineno, "bad feature index '" + std::string(sub) + "'");
      }
      if (idx <= prev)
        throw ParseError(lineno, "non-ascending feature index " + std::to_string(idx));
      double val;
      if (!parse_double(tok.substr(colon + 1), &val))
        throw ParseError(lineno, "bad feature value '" + std::string(tok.substr(colon + 1)) + "'");
      x.entries.push_back({idx - 1, val});
      prev = idx;
    }
    instances->push_back(std::move(x));
    labels->push_back(label);
  }
}

Dataset parse_libsvm(std::istream& in, std::optional<int32_t> dim_override) {
  std::vector<SparseVector> instances;
  std::vector<int> labels;
  parse_libsvm_instances(in, &instances, &labels);
  if (instances.empty()) throw ValidationError("empty dataset");
  return Dataset::from_instances(std::move(instances), std::move(labels), dim_override);
}

Dataset parse_libsvm(const std::string& text, std::optional<int32_t> dim_override) {
  std::istringstream is(text);
  return parse_libsvm(is, dim_override);
}

std::string read_file_maybe_gz(const std::string& path) {
  if (path.size() > 3 && path.substr(path.size() - 3) == ".gz") {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw Error("cannot open " + path);
    std::string out;
    char buf[1 << 16];
    int got;
    while ((got = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, got);
    bool bad = got < 0;
    gzclose(f);
    if (bad) throw Error("gzip read error in " + path);
    return out;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Dataset parse_libsvm_file(const std::string& path,
                          std::optional<int32_t> dim_override) {
  return parse_libsvm(read_file_maybe_gz(path), dim_override);
}

void serialize_libsvm(const Dataset& d, std::ostream& out) {
  char buf[64];
  for (int32_t k = 0; k < d.size(); ++k) {
    out << (d.labels[k] > 0 ? "+1" : "-1");
    for (const auto& e : d.instances[k].entries) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", e.index + 1, e.value);
      out << buf;
    }
    out << '\n';
  }
}

std::string serialize_libsvm(const Dataset& d) {
  std::ostringstream os;
  serialize_libsvm(d, os);
  return os.str();
}

Dataset subset(const Dataset& d, const std::vector<int32_t>& indices) {
  std::vector<SparseVector> instances;
  std::vector<int> labels;
  instances.reserve(indices.size());
  labels.reserve(indices.size());
  for (int32_t k : indices) {
    if (k < 0 || k >= d.size()) throw ReferenceError("subset index out of range");
    instances.push_back(d.instances[k]);
    labels.push_back(d.labels[k]);
  }
  return Dataset::from_instances(std::move(instances), std::move(labels), d.n);
}

}  // namespace asrank
