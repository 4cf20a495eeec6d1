#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asrank {

// Error taxonomy. Everything user-facing derives from Error so the CLI can
// catch one type; the subclasses keep the failure modes distinguishable in
// tests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ReferenceError : public Error {
 public:
  using Error::Error;
};

class PoolExhaustedError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. The uniform helpers are hand-rolled instead of
// using <random> distributions so that identical seeds give identical draws
// regardless of the standard library implementation (checkpoint replay and
// byte-identical CSV outputs depend on this).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(splitmix64(seed)) {}

  // Independent stream derived from a root seed and a stream name.
  static Rng substream(uint64_t root, std::string_view name) {
    return Rng(splitmix64(root) ^ fnv1a64(name));
  }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n). Lemire multiply-shift with rejection of the biased
  // tail.
  uint64_t next_below(uint64_t n) {
    if (n == 0) throw ValidationError("next_below(0)");
    uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    uint64_t lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t k = v.size(); k > 1; --k) {
      size_t j = static_cast<size_t>(next_below(k));
      std::swap(v[k - 1], v[j]);
    }
  }

  std::string serialize() const {
    std::ostringstream os;
    os << gen_;
    return os.str();
  }

  void deserialize(const std::string& s) {
    std::istringstream is(s);
    is >> gen_;
    if (!is) throw CheckpointError("bad rng state");
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace asrank
