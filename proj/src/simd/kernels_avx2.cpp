#include <immintrin.h>

#include <algorithm>

#include "trmc/simd/kernels.hpp"

namespace trmc::simd::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n) {
  __m256d ax = _mm256_setzero_pd();
  __m256d ay = _mm256_setzero_pd();
  __m256d az = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    ax = _mm256_add_pd(ax, _mm256_loadu_pd(vx + i));
    ay = _mm256_add_pd(ay, _mm256_loadu_pd(vy + i));
    az = _mm256_add_pd(az, _mm256_loadu_pd(vz + i));
  }
  VelocitySums s{hsum(ax), hsum(ay), hsum(az)};
  for (; i < n; ++i) {
    s.sx += vx[i];
    s.sy += vy[i];
    s.sz += vz[i];
  }
  return s;
}

CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u) {
  const __m256d ux = _mm256_set1_pd(u.x);
  const __m256d uy = _mm256_set1_pd(u.y);
  const __m256d uz = _mm256_set1_pd(u.z);
  __m256d acc_sq = _mm256_setzero_pd();
  __m256d acc_x = _mm256_setzero_pd();
  __m256d acc_q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(vx + i);
    const __m256d y = _mm256_loadu_pd(vy + i);
    const __m256d z = _mm256_loadu_pd(vz + i);
    const __m256d dx = _mm256_sub_pd(x, ux);
    const __m256d dy = _mm256_sub_pd(y, uy);
    const __m256d dz = _mm256_sub_pd(z, uz);
    const __m256d dx2 = _mm256_mul_pd(dx, dx);
    __m256d d2 = _mm256_fmadd_pd(dy, dy, dx2);
    d2 = _mm256_fmadd_pd(dz, dz, d2);
    __m256d v2 = _mm256_mul_pd(x, x);
    v2 = _mm256_fmadd_pd(y, y, v2);
    v2 = _mm256_fmadd_pd(z, z, v2);
    acc_sq = _mm256_add_pd(acc_sq, d2);
    acc_x = _mm256_add_pd(acc_x, dx2);
    acc_q = _mm256_fmadd_pd(v2, v2, acc_q);
  }
  CentralSums s{hsum(acc_sq), hsum(acc_x), hsum(acc_q)};
  for (; i < n; ++i) {
    const double dx = vx[i] - u.x;
    const double dy = vy[i] - u.y;
    const double dz = vz[i] - u.z;
    const double v2 = vx[i] * vx[i] + vy[i] * vy[i] + vz[i] * vz[i];
    s.sq += dx * dx + dy * dy + dz * dz;
    s.sq_x += dx * dx;
    s.quartic += v2 * v2;
  }
  return s;
}

double max_deviation_sq(const double* vx, const double* vy, const double* vz, std::size_t n,
                        Vec3 u) {
  const __m256d ux = _mm256_set1_pd(u.x);
  const __m256d uy = _mm256_set1_pd(u.y);
  const __m256d uz = _mm256_set1_pd(u.z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(vx + i), ux);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(vy + i), uy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(vz + i), uz);
    __m256d d2 = _mm256_mul_pd(dx, dx);
    d2 = _mm256_fmadd_pd(dy, dy, d2);
    d2 = _mm256_fmadd_pd(dz, dz, d2);
    acc = _mm256_max_pd(acc, d2);
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double dx = vx[i] - u.x;
    const double dy = vy[i] - u.y;
    const double dz = vz[i] - u.z;
    m = std::max(m, dx * dx + dy * dy + dz * dz);
  }
  return m;
}

void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target) {
  // Centred form without FMA: bitwise identical to the scalar kernel.
  const __m256d s = _mm256_set1_pd(scale);
  const __m256d cx = _mm256_set1_pd(centre.x);
  const __m256d cy = _mm256_set1_pd(centre.y);
  const __m256d cz = _mm256_set1_pd(centre.z);
  const __m256d tx = _mm256_set1_pd(target.x);
  const __m256d ty = _mm256_set1_pd(target.y);
  const __m256d tz = _mm256_set1_pd(target.z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_sub_pd(_mm256_loadu_pd(vx + i), cx);
    const __m256d y = _mm256_sub_pd(_mm256_loadu_pd(vy + i), cy);
    const __m256d z = _mm256_sub_pd(_mm256_loadu_pd(vz + i), cz);
    _mm256_storeu_pd(vx + i, _mm256_add_pd(tx, _mm256_mul_pd(s, x)));
    _mm256_storeu_pd(vy + i, _mm256_add_pd(ty, _mm256_mul_pd(s, y)));
    _mm256_storeu_pd(vz + i, _mm256_add_pd(tz, _mm256_mul_pd(s, z)));
  }
  for (; i < n; ++i) {
    vx[i] = target.x + scale * (vx[i] - centre.x);
    vy[i] = target.y + scale * (vy[i] - centre.y);
    vz[i] = target.z + scale * (vz[i] - centre.z);
  }
}

void advance(double* x, const double* vx, std::size_t n, double dt) {
  const __m256d d = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(x + i, _mm256_add_pd(p, _mm256_mul_pd(_mm256_loadu_pd(vx + i), d)));
  }
  for (; i < n; ++i) x[i] += vx[i] * dt;
}

}  // namespace trmc::simd::avx2
