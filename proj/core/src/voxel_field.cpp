#include "visnerf/voxel_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "visnerf/errors.hpp"

namespace visnerf {

VoxelField::VoxelField(int nx, int ny, int nz, const Aabb& bounds)
    : nx_(nx), ny_(ny), nz_(nz), bounds_(bounds) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw ConfigError("voxel field: resolution must be positive");
  if (!((bounds.max - bounds.min).array() > 0).all())
    throw ConfigError("voxel field: degenerate bounds");
  const size_t n = static_cast<size_t>(nx) * ny * nz;
  sigma_.assign(n, 0.0);
  color_.assign(3 * n, 0.0);
}

Vec3 VoxelField::node_position(int i, int j, int k) const {
  const Vec3 voxel = bounds_.extent().cwiseQuotient(Vec3(nx_, ny_, nz_));
  return bounds_.min + voxel.cwiseProduct(Vec3(i + 0.5, j + 0.5, k + 0.5));
}

FieldSample VoxelField::sample(const Vec3& point, const Vec3& /*direction*/) const {
  if (!point.allFinite()) throw NumericError("voxel field: non-finite query point");
  FieldSample out;
  if (!bounds_.contains(point)) return out;

  // Continuous node coordinates: node (i,j,k) lives at index i+0.5 voxels
  // from the min corner.
  const Vec3 voxel = bounds_.extent().cwiseQuotient(Vec3(nx_, ny_, nz_));
  Vec3 q = (point - bounds_.min).cwiseQuotient(voxel) - Vec3::Constant(0.5);
  q.x() = std::clamp(q.x(), 0.0, static_cast<double>(nx_ - 1));
  q.y() = std::clamp(q.y(), 0.0, static_cast<double>(ny_ - 1));
  q.z() = std::clamp(q.z(), 0.0, static_cast<double>(nz_ - 1));

  const int i0 = std::min(static_cast<int>(q.x()), nx_ - 1);
  const int j0 = std::min(static_cast<int>(q.y()), ny_ - 1);
  const int k0 = std::min(static_cast<int>(q.z()), nz_ - 1);
  const int i1 = std::min(i0 + 1, nx_ - 1);
  const int j1 = std::min(j0 + 1, ny_ - 1);
  const int k1 = std::min(k0 + 1, nz_ - 1);
  const double fx = q.x() - i0, fy = q.y() - j0, fz = q.z() - k0;

  const int ii[2] = {i0, i1}, jj[2] = {j0, j1}, kk[2] = {k0, k1};
  const double wx[2] = {1.0 - fx, fx}, wy[2] = {1.0 - fy, fy}, wz[2] = {1.0 - fz, fz};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double w = wx[a] * wy[b] * wz[c];
        if (w == 0.0) continue;
        const size_t idx = index(ii[a], jj[b], kk[c]);
        out.sigma += w * sigma_[idx];
        out.color.x() += w * color_[3 * idx + 0];
        out.color.y() += w * color_[3 * idx + 1];
        out.color.z() += w * color_[3 * idx + 2];
      }
  return out;
}

double VoxelField::density(const Vec3& point) const {
  return sample(point, Vec3::UnitZ()).sigma;
}

namespace {
constexpr char kMagic[4] = {'V', 'X', 'F', '1'};
}

void VoxelField::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("voxel field: cannot open for writing: " + path);
  out.write(kMagic, 4);
  const uint32_t res[3] = {static_cast<uint32_t>(nx_), static_cast<uint32_t>(ny_),
                           static_cast<uint32_t>(nz_)};
  out.write(reinterpret_cast<const char*>(res), sizeof(res));
  const double bounds[6] = {bounds_.min.x(), bounds_.min.y(), bounds_.min.z(),
                            bounds_.max.x(), bounds_.max.y(), bounds_.max.z()};
  out.write(reinterpret_cast<const char*>(bounds), sizeof(bounds));
  std::vector<float> buf(sigma_.size());
  for (size_t i = 0; i < sigma_.size(); ++i) buf[i] = static_cast<float>(sigma_[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  buf.resize(color_.size());
  for (size_t i = 0; i < color_.size(); ++i) buf[i] = static_cast<float>(color_[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw ConfigError("voxel field: write failed: " + path);
}

VoxelField VoxelField::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("voxel field: cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError("voxel field: bad magic in " + path);
  uint32_t res[3];
  in.read(reinterpret_cast<char*>(res), sizeof(res));
  double bounds[6];
  in.read(reinterpret_cast<char*>(bounds), sizeof(bounds));
  if (!in) throw ConfigError("voxel field: truncated header in " + path);

  Aabb box{{bounds[0], bounds[1], bounds[2]}, {bounds[3], bounds[4], bounds[5]}};
  VoxelField field(static_cast<int>(res[0]), static_cast<int>(res[1]),
                   static_cast<int>(res[2]), box);
  std::vector<float> buf(field.sigma_.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  for (size_t i = 0; i < buf.size(); ++i) field.sigma_[i] = buf[i];
  buf.resize(field.color_.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  for (size_t i = 0; i < buf.size(); ++i) field.color_[i] = buf[i];
  if (!in) throw ConfigError("voxel field: truncated data in " + path);
  return field;
}

}  // namespace visnerf
