#pragma once

#include <cstddef>
#include <span>

namespace npoly::numeric {

/// Radial plateau bump: 1 on |x| <= r/2, 0 on |x| >= r, and
/// 1 - S((1 - cos(pi t)) / 2) between, with S(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7 and
/// t = (|x| - r/2) / (r/2). Vanishes to order 8 at both ends of the ramp, so it is C^7.
class BumpFunction {
 public:
  BumpFunction(std::size_t n, double radius);

  std::size_t dim() const { return n_; }
  double radius() const { return radius_; }
  int smoothness() const { return 7; }
  const char* family() const { return "polynomial-cosine-plateau"; }
  /// Integral over R^n.
  double mass() const { return mass_; }

  double operator()(std::span<const double> x) const;

 private:
  std::size_t n_;
  double radius_;
  double mass_;
};

}  // namespace npoly::numeric
