#include <atomic>
#include <cstdlib>
#include <string_view>

#include "trmc/simd/kernels.hpp"

namespace trmc::simd {
namespace {

constexpr KernelTable kScalar{&scalar::sum_velocity, &scalar::central_sums,
                              &scalar::max_deviation_sq, &scalar::affine, &scalar::advance};

#if defined(TRMC_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::sum_velocity, &avx2::central_sums, &avx2::max_deviation_sq,
                            &avx2::affine, &avx2::advance};
#endif

Isa detect() {
  if (const char* env = std::getenv("TRMC_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::Scalar;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(TRMC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) isa = Isa::Scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable& table(Isa isa) {
#if defined(TRMC_HAVE_AVX2)
  if (isa == Isa::Avx2 && isa_supported(Isa::Avx2)) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

VelocitySums sum_velocity(const double* vx, const double* vy, const double* vz, std::size_t n) {
  return table(active_isa()).sum_velocity(vx, vy, vz, n);
}

CentralSums central_sums(const double* vx, const double* vy, const double* vz, std::size_t n,
                         Vec3 u) {
  return table(active_isa()).central_sums(vx, vy, vz, n, u);
}

double max_deviation_sq(const double* vx, const double* vy, const double* vz, std::size_t n,
                        Vec3 u) {
  return table(active_isa()).max_deviation_sq(vx, vy, vz, n, u);
}

void affine(double* vx, double* vy, double* vz, std::size_t n, Vec3 centre, double scale,
            Vec3 target) {
  table(active_isa()).affine(vx, vy, vz, n, centre, scale, target);
}

void advance(double* x, const double* vx, std::size_t n, double dt) {
  table(active_isa()).advance(x, vx, n, dt);
}

}  // namespace trmc::simd
