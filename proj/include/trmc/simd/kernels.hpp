#pragma once

// Data-parallel inner loops over structure-of-arrays velocity storage.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The public entry points dispatch once, at first use, to the best
// variant the CPU supports. Setting TRMC_ISA=scalar in the environment (or
// calling force_isa) pins the scalar path. Variants differ only in summation
// order, so reductions agree to a few ulps of the summed magnitudes.

#include <cstddef>
#include <string_view>

namespace trmc::simd {

struct VelocitySums {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
};

// Sums taken about a centre u: sum |v-u|^2, sum (vx-ux)^2, and the raw
// fourth moment sum |v|^4.
struct CentralSums {
  double sq = 0.0;
  double sq_x = 0.0;
  double quartic = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  VelocitySums (*sum_velocity)(const double*, const double*, const double*, std::size_t);
  CentralSums (*central_sums)(const double*, const double*, const double*, std::size_t, Vec3);
  double (*max_deviation_sq)(const double*, const double*, const double*, std::size_t, Vec3);
  void (*affine)(double*, double*, double*, std::size_t, Vec3, double, Vec3);
  void (*advance)(double*, const double*, std::size_t, double);
};

namespace scalar {
VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n);
CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u);
double max_deviation_sq(const double* vx, const double* vy, const double* vz, std::size_t n,
                        Vec3 u);
void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target);
void advance(double* x, const double* vx, std::size_t n, double dt);
}  // namespace scalar

#if defined(TRMC_HAVE_AVX2)
namespace avx2 {
VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n);
CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u);
double max_deviation_sq(const double* vx, const double* vy, const double* vz, std::size_t n,
                        Vec3 u);
void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target);
void advance(double* x, const double* vx, std::size_t n, double dt);
}  // namespace avx2
#endif

bool isa_supported(Isa isa);
Isa active_isa();
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);
const KernelTable& table(Isa isa);

// Dispatched entry points.
VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n);
CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u);
double max_deviation_sq(const double* vx, const double* vy, const double* vz, std::size_t n,
                        Vec3 u);
// v <- target + scale * (v - centre)
void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target);
// x <- x + vx * dt
void advance(double* x, const double* vx, std::size_t n, double dt);

}  // namespace trmc::simd
