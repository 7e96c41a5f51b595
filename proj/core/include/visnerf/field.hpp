#pragma once

#include "visnerf/geometry.hpp"

namespace visnerf {

/// Density and view-dependent radiance at one point.
struct FieldSample {
  double sigma = 0.0;          // >= 0, inverse scene units
  Vec3 color = Vec3::Zero();   // linear RGB in [0,1]
};

/// Queryable radiance field. Implementations must be safe for concurrent
/// read-only queries.
class RadianceField {
 public:
  virtual ~RadianceField() = default;

  /// Throws NumericError on non-finite input. `direction` must be unit norm.
  virtual FieldSample sample(const Vec3& point, const Vec3& direction) const = 0;

  /// Density-only fast path for transmittance marches.
  virtual double density(const Vec3& point) const = 0;
};

}  // namespace visnerf
