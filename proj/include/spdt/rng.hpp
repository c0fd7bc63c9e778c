#pragma once
// Counter-based random streams. Every randomized component derives an
// independent stream from (seed, tag, ids...) so draws never depend on
// iteration order or thread count: two sites keyed the same way see the
// same numbers, sites keyed differently are decorrelated.

#include <cmath>
#include <cstdint>

namespace spdt {

// splitmix64 finalizer: full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
  return mix64(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

// splitmix64 generator seeded by a mixed key. Cheap to construct, so the
// intended use is one short-lived Rng per (entity, day, replicate, ...).
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : s_(seed) {}

  static Rng stream(uint64_t seed, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0,
                    uint64_t d = 0) {
    uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = hash_combine(h, a);
    h = hash_combine(h, b);
    h = hash_combine(h, c);
    h = hash_combine(h, d);
    return Rng(h);
  }

  uint64_t u64() {
    s_ += 0x9E3779B97F4A7C15ULL;
    return mix64(s_);
  }

  // uniform in [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0,n) via 128-bit multiply; bias O(n/2^64), negligible
  // for simulation use and branch-free.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(u64()) * n) >> 64);
  }

  // inclusive range
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  uint64_t s_;
};

// Geometric on {1,2,...} with Pr(t)=p(1-p)^{t-1}, drawn by inverse CDF.
inline int64_t geometric1(double p, Rng& rng) {
  if (p >= 1.0) return 1;
  double u = rng.uniform();
  // smallest t with 1-(1-p)^t >= u
  int64_t t = 1 + static_cast<int64_t>(std::floor(std::log1p(-u) / std::log1p(-p)));
  return t < 1 ? 1 : t;
}

// Truncated geometric on {0,...,cap-1} with Pr(t)=p(1-p)^t / (1-(1-p)^cap),
// inverse CDF. cap >= 1.
inline int64_t truncated_geometric(double p, int64_t cap, Rng& rng) {
  if (p >= 1.0 || cap <= 1) return 0;
  double log1mp = std::log1p(-p);
  double mass = -std::expm1(static_cast<double>(cap) * log1mp);  // 1-(1-p)^cap
  double u = rng.uniform();
  // smallest t with (1-p)^{t+1} <= 1 - u*mass
  double t = std::ceil(std::log1p(-u * mass) / log1mp) - 1.0;
  int64_t ti = static_cast<int64_t>(t);
  if (ti < 0) ti = 0;
  if (ti > cap - 1) ti = cap - 1;
  return ti;
}

}  // namespace spdt
