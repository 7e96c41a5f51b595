#include "visnerf/sh.hpp"

#include "visnerf/errors.hpp"

namespace visnerf {

void sh_basis(int degree, const Vec3& d, double* out) {
  if (degree < 0 || degree > 3)
    throw ConfigError("sh_basis: degree must be in [0, 3]");
  const double x = d.x(), y = d.y(), z = d.z();

  out[0] = 0.28209479177387814;
  if (degree < 1) return;
  out[1] = -0.48860251190291987 * y;
  out[2] = 0.48860251190291987 * z;
  out[3] = -0.48860251190291987 * x;
  if (degree < 2) return;
  const double xx = x * x, yy = y * y, zz = z * z;
  out[4] = 1.0925484305920792 * x * y;
  out[5] = -1.0925484305920792 * y * z;
  out[6] = 0.94617469575755997 * zz - 0.31539156525251999;
  out[7] = -1.0925484305920792 * x * z;
  out[8] = 0.54627421529603959 * (xx - yy);
  if (degree < 3) return;
  out[9] = -0.59004358992664352 * y * (3.0 * xx - yy);
  out[10] = 2.8906114426405538 * x * y * z;
  out[11] = -0.45704579946446572 * y * (5.0 * zz - 1.0);
  out[12] = 0.37317633259011546 * z * (5.0 * zz - 3.0);
  out[13] = -0.45704579946446572 * x * (5.0 * zz - 1.0);
  out[14] = 1.4453057213202769 * z * (xx - yy);
  out[15] = -0.59004358992664352 * x * (xx - 3.0 * yy);
}

}  // namespace visnerf
