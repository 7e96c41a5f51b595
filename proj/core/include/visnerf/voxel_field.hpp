#pragma once

#include <string>
#include <vector>

#include "visnerf/field.hpp"
#include "visnerf/geometry.hpp"

namespace visnerf {

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();

  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  Aabb scaled(double factor) const {
    const Vec3 c = 0.5 * (min + max);
    const Vec3 h = 0.5 * factor * extent();
    return {c - h, c + h};
  }
};

/// Dense trilinear voxel field. Grid nodes sit at voxel centers; queries
/// between the outermost centers and the bounds clamp to the edge values,
/// and queries outside the bounds return zero density and black. Serves as
/// ground truth for synthetic scenes and as the oracle content source.
class VoxelField : public RadianceField {
 public:
  VoxelField() = default;
  VoxelField(int nx, int ny, int nz, const Aabb& bounds);

  FieldSample sample(const Vec3& point, const Vec3& direction) const override;
  double density(const Vec3& point) const override;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  const Aabb& bounds() const { return bounds_; }

  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(k) * ny_ + j) * nx_ + i;
  }
  double& sigma_at(int i, int j, int k) { return sigma_[index(i, j, k)]; }
  double sigma_at(int i, int j, int k) const { return sigma_[index(i, j, k)]; }
  double& color_at(int i, int j, int k, int c) { return color_[3 * index(i, j, k) + c]; }
  double color_at(int i, int j, int k, int c) const { return color_[3 * index(i, j, k) + c]; }

  /// World position of grid node (i, j, k).
  Vec3 node_position(int i, int j, int k) const;

  /// Binary container: magic "VXF1", little-endian u32 nx/ny/nz, bounds as
  /// 6 float64 (min xyz then max xyz), then sigma and color arrays as
  /// float32, x fastest. Round-trips bit-exactly.
  void save(const std::string& path) const;
  static VoxelField load(const std::string& path);

 private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  Aabb bounds_;
  std::vector<double> sigma_;
  std::vector<double> color_;  // 3 per node
};

}  // namespace visnerf
