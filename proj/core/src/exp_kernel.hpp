#pragma once

#include <cstddef>
#include <cstdint>

namespace gsc::detail {

// Eight-lane double vector (GCC/Clang vector extension). Lowered to whatever
// SIMD width the target offers; lane order is fixed, so reductions over it
// give the same result on every machine.
inline constexpr std::size_t kLanes = 8;
using vdouble = double __attribute__((vector_size(kLanes * sizeof(double))));
using vint64 = std::int64_t __attribute__((vector_size(kLanes * sizeof(double))));

inline vdouble vload(const double* p) {
  vdouble v;
  __builtin_memcpy(&v, p, sizeof v);
  return v;
}

inline void vstore(double* p, vdouble v) { __builtin_memcpy(p, &v, sizeof v); }

inline vdouble vbroadcast(double x) { return vdouble{} + x; }

inline double hsum(vdouble v) {
  double s = 0.0;
  for (std::size_t k = 0; k < kLanes; ++k) s += v[k];
  return s;
}

inline double hmax(vdouble v) {
  double s = v[0];
  for (std::size_t k = 1; k < kLanes; ++k) s = v[k] > s ? v[k] : s;
  return s;
}

/// exp(x) for x <= 0, lane-wise. Cody-Waite reduction x = n ln2 + r with
/// |r| <= ln2/2 and a degree-13 Taylor polynomial; relative error below
/// 3e-16. Lanes below -708 return 0.
inline vdouble exp_nonpositive(vdouble x) {
  constexpr double kLog2e = 1.4426950408889634;
  constexpr double kShift = 0x1.8p52;
  constexpr double kLn2Hi = 6.93147180369123816490e-01;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;

  const vdouble floor = vbroadcast(-708.0);
  const vdouble xc = x < floor ? floor : x;
  vdouble kd = xc * kLog2e + kShift;
  const vint64 ki = (vint64)kd;
  kd -= kShift;
  const vdouble r = (xc - kd * kLn2Hi) - kd * kLn2Lo;

  vdouble p = r * (1.0 / 6227020800.0) + 1.0 / 479001600.0;
  p = p * r + 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;

  const vint64 bits = (ki + 1023) << 52;
  const vdouble scale = (vdouble)bits;
  return x < floor ? vdouble{} : p * scale;
}

/// Scalar form of the same approximation, for loop tails.
inline double exp_nonpositive(double x) { return exp_nonpositive(vbroadcast(x))[0]; }

}  // namespace gsc::detail
