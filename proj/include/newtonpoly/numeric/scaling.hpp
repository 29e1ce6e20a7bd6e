#pragma once

// N(H-bar) = 2 N(H) and, for n = 2, the zero order of H-bar on each dilated compact face:
//   ord(H-bar_{2F}) = 2 max(m_F, 2) - 4.

#include "newtonpoly/face_zeros.hpp"
#include "newtonpoly/newton.hpp"

#include <vector>

namespace npoly::numeric {

struct ScalingFaceCheck {
  FaceRecord face;
  int order_H = 0;
  int order_Hbar = 0;
  int expected = 0;
  bool ok() const { return order_Hbar == expected; }
};

struct ScalingCheck {
  bool polyhedron_ok = false;
  std::vector<ScalingFaceCheck> faces;  // empty unless n = 2
  bool passed() const;
};

ScalingCheck newton_scaling_check(const TaylorPoly& H, const NumericZeroOptions& opt = {});

}  // namespace npoly::numeric
