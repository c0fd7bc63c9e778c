#pragma once
// Small numerics shared across modules: compensated (Kahan) summation with a
// deterministic blocked variant whose result is bit-identical for any thread
// count, and a bracketed bisection root finder.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spdt {

// Sequential compensated sum (Kahan-Babuska/Neumaier: the correction also
// survives terms larger than the running sum) — the serial reference.
inline double kahan_sum_serial(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

// Blocked Kahan sum: fixed 4096-element blocks are summed independently
// (parallel) and the block totals combined in block order (serial). The
// blocking is part of the definition, so the result does not depend on the
// number of threads.
inline double kahan_sum_blocked(std::span<const double> xs) {
  constexpr size_t kBlock = 4096;
  const size_t n = xs.size();
  const size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return kahan_sum_serial(xs);
  std::vector<double> partial(nblocks);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (long long bi = 0; bi < static_cast<long long>(nblocks); ++bi) {
    size_t lo = static_cast<size_t>(bi) * kBlock;
    size_t hi = lo + kBlock < n ? lo + kBlock : n;
    partial[static_cast<size_t>(bi)] = kahan_sum_serial(xs.subspan(lo, hi - lo));
  }
  return kahan_sum_serial(partial);
}

// Map f over [0,n) into fixed blocks and sum like kahan_sum_blocked, without
// materializing the full term array.
inline double kahan_transform_sum(size_t n, const std::function<double(size_t)>& f) {
  constexpr size_t kBlock = 4096;
  const size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks == 0) return 0.0;
  std::vector<double> partial(nblocks);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (long long bi = 0; bi < static_cast<long long>(nblocks); ++bi) {
    size_t lo = static_cast<size_t>(bi) * kBlock;
    size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0, c = 0.0;
    for (size_t i = lo; i < hi; ++i) {
      const double x = f(i);
      double t = s + x;
      if (std::fabs(s) >= std::fabs(x))
        c += (s - t) + x;
      else
        c += (x - t) + s;
      s = t;
    }
    partial[static_cast<size_t>(bi)] = s + c;
  }
  return kahan_sum_serial(partial);
}

// Bisection on [lo, hi]; requires a sign change. Converges to near machine
// precision on the argument; returns the midpoint of the final bracket.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          int max_iter = 200, double xtol = 1e-15) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::runtime_error("bisect_root: no sign change on bracket: f(lo)=" +
                             std::to_string(flo) + " f(hi)=" + std::to_string(fhi));
  for (int i = 0; i < max_iter && hi - lo > xtol * (1.0 + std::fabs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace spdt
