#ifndef FAIRAUC_COMMON_HPP
#define FAIRAUC_COMMON_HPP

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace fairauc {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Error hierarchy. Everything thrown by the library derives from Error so the
// C boundary can map exceptions to status codes uniformly.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValueError : public Error {
 public:
  using Error::Error;
};
class SplitError : public Error {
 public:
  using Error::Error;
};
class EmptyStratumError : public Error {
 public:
  using Error::Error;
};
class EmptyClassError : public Error {
 public:
  using Error::Error;
};
class DegenerateDatasetError : public Error {
 public:
  using Error::Error;
};
class BatchTooSmallError : public Error {
 public:
  using Error::Error;
};
class BatchDegenerateError : public Error {
 public:
  using Error::Error;
};
class NumericError : public Error {
 public:
  using Error::Error;
};
class DivergenceError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Groups, labels and the canonical ordered-pair index.
// ---------------------------------------------------------------------------

enum class Group : std::uint8_t { A = 0, B = 1 };

inline char group_char(Group g) { return g == Group::A ? 'a' : 'b'; }

// Stratum index over (group, label): (a,+), (a,-), (b,+), (b,-).
inline int stratum_index(Group z, int label) {
  return 2 * static_cast<int>(z) + (label > 0 ? 0 : 1);
}

// Ordered group pairs (z, z') in the canonical order
// [(a,a), (a,b), (b,a), (b,b)]: positives drawn from z, negatives from z'.
// Risk vectors, AUC vectors and simplex weights all use this order.
struct GroupPairIndex {
  static constexpr int kCount = 4;
  static constexpr int index(Group z, Group z_prime) {
    return 2 * static_cast<int>(z) + static_cast<int>(z_prime);
  }
  static constexpr Group pos_group(int k) { return static_cast<Group>(k / 2); }
  static constexpr Group neg_group(int k) { return static_cast<Group>(k % 2); }
  static std::string name(int k) {
    return std::string(1, group_char(pos_group(k))) + group_char(neg_group(k));
  }
};

using Vec4 = std::array<double, 4>;

// ---------------------------------------------------------------------------
// Seedable RNG with a documented substream rule ("fairauc-rng-v1").
// The base generator is std::mt19937_64, whose output sequence is fully
// specified by the C++ standard, so runs reproduce across platforms.
// Substream s is seeded by splitmix64(base_seed ^ (s+1) * 0x9E3779B97F4A7C15).
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RngState {
 public:
  explicit RngState(std::uint64_t seed)
      : base_seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t base_seed() const { return base_seed_; }
  std::mt19937_64& engine() { return engine_; }

  // Independent substream for epoch (or any other) index s.
  RngState substream(std::uint64_t s) const {
    return RngState(splitmix64(base_seed_ ^ ((s + 1) * 0x9E3779B97F4A7C15ULL)));
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
  }

 private:
  std::uint64_t base_seed_;
  std::mt19937_64 engine_;
};

}  // namespace fairauc

#endif  // FAIRAUC_COMMON_HPP
