#include <algorithm>

#include "trmc/simd/kernels.hpp"

namespace trmc::simd::scalar {

VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n) {
  VelocitySums s;
  for (std::size_t i = 0; i < n; ++i) {
    s.sx += vx[i];
    s.sy += vy[i];
    s.sz += vz[i];
  }
  return s;
}

CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u) {
  CentralSums s;
  for (std::size_t i = 0; i < n; ++i) {
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
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = vx[i] - u.x;
    const double dy = vy[i] - u.y;
    const double dz = vz[i] - u.z;
    m = std::max(m, dx * dx + dy * dy + dz * dz);
  }
  return m;
}

void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target) {
  for (std::size_t i = 0; i < n; ++i) {
    vx[i] = target.x + scale * (vx[i] - centre.x);
    vy[i] = target.y + scale * (vy[i] - centre.y);
    vz[i] = target.z + scale * (vz[i] - centre.z);
  }
}

void advance(double* x, const double* vx, std::size_t n, double dt) {
  for (std::size_t i = 0; i < n; ++i) x[i] += vx[i] * dt;
}

}  // namespace trmc::simd::scalar
