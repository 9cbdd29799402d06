// Seeded instance generators. Works are uniform integers in [w_lo, w_hi];
// eligibility is either a uniformly random nonempty subset per task or a
// family of nested prefixes of one random processor permutation. All draws
// come from one mt19937_64 stream with rejection-sampled bounds, so a seed
// pins the instance exactly.
#pragma once

#include <cstdint>
#include <random>

#include "esched/core.hpp"
#include "esched/rounding.hpp"

namespace esched {

enum class EligibilityKind { random_subset, inclusive };

struct GenParams {
  int m = 1;
  int n = 1;
  int w_lo = 1;
  int w_hi = 10000;
  EligibilityKind eligibility = EligibilityKind::random_subset;
  std::uint64_t seed = 0;
  double alpha = 2.0;
  double C = 1.0;
  double s_max = 0.0;  // <= 0 means: derive from smax_guarantee so FDR fits
};

// Seed mixer for deriving independent per-cell / per-repeat streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

// Unbiased integer in [0, n); rejection keeps the draw independent of the
// standard library's distribution implementation.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline void require_valid_params(const GenParams& p) {
  if (p.m < 1 || p.n < 1)
    throw std::invalid_argument("generator needs m >= 1 and n >= 1");
  if (p.w_lo < 1 || p.w_hi < p.w_lo)
    throw std::invalid_argument("generator needs 1 <= w_lo <= w_hi");
  if (!(p.alpha > 1.0) || !(p.C > 0.0))
    throw std::invalid_argument("generator needs alpha > 1 and C > 0");
}

inline void finish_instance(Instance& inst, const GenParams& p) {
  inst.deadline = p.C;
  inst.alpha = p.alpha;
  // The auto cap sits just above the guarantee so that float rounding in the
  // comparison s_max*C >= smax_guarantee cannot flip the premise.
  inst.s_max = p.s_max > 0.0
                   ? p.s_max
                   : smax_guarantee(inst) / p.C * (1.0 + 1e-12);
}

}  // namespace detail

// Independent eligibility: |M_j| uniform in 1..m, then a uniform subset of
// that size (partial Fisher-Yates).
inline Instance gen_random(const GenParams& p) {
  detail::require_valid_params(p);
  std::mt19937_64 rng(p.seed);
  Instance inst;
  inst.m = p.m;
  inst.tasks.resize(p.n);
  std::vector<int> pool(p.m);
  for (Task& t : inst.tasks) {
    t.work = static_cast<double>(
        p.w_lo + static_cast<int>(detail::bounded(rng, p.w_hi - p.w_lo + 1)));
    const int size = 1 + static_cast<int>(detail::bounded(rng, p.m));
    std::iota(pool.begin(), pool.end(), 0);
    for (int k = 0; k < size; ++k)
      std::swap(pool[k], pool[k + detail::bounded(rng, p.m - k)]);
    t.eligible.assign(pool.begin(), pool.begin() + size);
    std::sort(t.eligible.begin(), t.eligible.end());
  }
  detail::finish_instance(inst, p);
  return inst;
}

// Inclusive (nested) eligibility: one random processor permutation; each task
// receives a prefix of random length >= 1, so any two sets are nested.
inline Instance gen_inclusive(const GenParams& p) {
  detail::require_valid_params(p);
  std::mt19937_64 rng(p.seed);
  Instance inst;
  inst.m = p.m;
  inst.tasks.resize(p.n);
  std::vector<int> perm(p.m);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < p.m - 1; ++k)
    std::swap(perm[k], perm[k + detail::bounded(rng, p.m - k)]);
  for (Task& t : inst.tasks) {
    t.work = static_cast<double>(
        p.w_lo + static_cast<int>(detail::bounded(rng, p.w_hi - p.w_lo + 1)));
    const int len = 1 + static_cast<int>(detail::bounded(rng, p.m));
    t.eligible.assign(perm.begin(), perm.begin() + len);
    std::sort(t.eligible.begin(), t.eligible.end());
  }
  detail::finish_instance(inst, p);
  return inst;
}

inline Instance generate(const GenParams& p) {
  return p.eligibility == EligibilityKind::random_subset ? gen_random(p)
                                                         : gen_inclusive(p);
}

}  // namespace esched
