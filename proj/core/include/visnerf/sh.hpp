#pragma once

#include "visnerf/geometry.hpp"

namespace visnerf {

/// Number of real spherical-harmonic basis functions up to `degree`.
inline int sh_terms(int degree) { return (degree + 1) * (degree + 1); }

/// Evaluates the real SH basis (degree <= 3) for a unit direction into
/// out[0 .. sh_terms(degree)).
void sh_basis(int degree, const Vec3& direction, double* out);

}  // namespace visnerf
