#pragma once

// Inner loops of the numeric lab. Every kernel has a scalar reference
// implementation and an AVX2 variant; the variant is chosen once at startup
// (NEWTONPOLY_SIMD=scalar forces the reference).

#include "newtonpoly/taylor.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace npoly::simd {

/// A polynomial flattened for batch evaluation: term t is coef[t] * prod_i x_i^exps[t*n + i].
struct MonomialTable {
  std::size_t n = 0;
  std::vector<double> coef;
  std::vector<int> exps;
  int max_exp = 0;

  static MonomialTable from(const TaylorPoly& p);
  std::size_t terms() const { return coef.size(); }
};

inline constexpr std::size_t kMaxVars = 8;
inline constexpr int kMaxExponent = 48;

struct PhaseSum {
  double re = 0.0;  // sum w cos(phase)
  double im = 0.0;  // sum w sin(phase)
};

struct KernelTable {
  const char* name;
  /// out[k] = p(coords[0][k], ..., coords[n-1][k]) for k < count.
  void (*eval_poly)(const MonomialTable& p, const double* const* coords, std::size_t count, double* out);
  PhaseSum (*phase_sum)(const double* phase, const double* weight, std::size_t count);
  void (*sincos)(const double* x, std::size_t count, double* s, double* c);
  /// Radial profile of the plateau bump of the given radius, from squared radii.
  void (*bump)(const double* r2, std::size_t count, double radius, double* out);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table in use: AVX2 when available unless NEWTONPOLY_SIMD=scalar.
const KernelTable& kernels();
Isa active_isa();

/// Scalar radial profile, shared by the reference kernel and the bump object.
double bump_profile(double radius_of_point, double radius);

}  // namespace npoly::simd
