#include "newtonpoly/numeric/scaling.hpp"

#include <algorithm>

namespace npoly::numeric {

bool ScalingCheck::passed() const {
  return polyhedron_ok && std::all_of(faces.begin(), faces.end(), [](const auto& f) { return f.ok(); });
}

ScalingCheck newton_scaling_check(const TaylorPoly& H, const NumericZeroOptions& opt) {
  const TaylorPoly Hbar = hessian_gauge_fourth_power(H);
  const NewtonPolyhedron N = build_polyhedron(H);
  const NewtonPolyhedron Nbar = build_polyhedron(Hbar);
  ScalingCheck out;
  out.polyhedron_ok = scaled_polyhedron_equal(N, Nbar, Rational(2));
  if (H.dim() != 2 || !out.polyhedron_ok) return out;
  for (const auto& F : N.compact_faces()) {
    ScalingFaceCheck c;
    c.face = F;
    c.order_H = zero_order_on_face(face_restrict(H, F), F, opt).order;
    const FaceRecord F2 = dilate_face(F, 2);
    c.order_Hbar = zero_order_on_face(face_restrict(Hbar, F2), F2, opt).order;
    c.expected = 2 * std::max(c.order_H, 2) - 4;
    out.faces.push_back(std::move(c));
  }
  return out;
}

}  // namespace npoly::numeric
