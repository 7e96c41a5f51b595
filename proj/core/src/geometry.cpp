#include "visnerf/geometry.hpp"

#include <cmath>

#include "visnerf/errors.hpp"

namespace visnerf {

void validate(const Intrinsics& k) {
  if (!(k.fx > 0) || !(k.fy > 0) || !std::isfinite(k.fx) || !std::isfinite(k.fy))
    throw ConfigError("intrinsics: fx and fy must be positive and finite");
  if (k.width <= 0 || k.height <= 0)
    throw ConfigError("intrinsics: width and height must be positive");
  if (!(k.cx >= 0 && k.cx < k.width) || !(k.cy >= 0 && k.cy < k.height))
    throw ConfigError("intrinsics: principal point outside the image");
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::from_matrix(const Mat4& m) {
  Pose p;
  p.rotation = m.topLeftCorner<3, 3>();
  p.translation = m.topRightCorner<3, 1>();
  return p;
}

bool is_rotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const Mat3 should_be_identity = m.transpose() * m;
  if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

void validate(const Pose& pose) {
  if (!pose.translation.allFinite())
    throw ConfigError("pose: non-finite translation");
  if (!is_rotation(pose.rotation))
    throw ConfigError("pose: rotation is not orthonormal with det +1");
}

void validate(const Camera& camera) {
  validate(camera.intrinsics);
  validate(camera.pose);
  if (!(camera.near > 0) || !(camera.far > camera.near) || !std::isfinite(camera.far))
    throw ConfigError("camera: require 0 < near < far, both finite");
}

Ray pixel_ray(const Camera& camera, double px, double py) {
  const Intrinsics& k = camera.intrinsics;
  if (!(px >= 0 && px < k.width && py >= 0 && py < k.height))
    throw ConfigError("pixel_ray: pixel outside the image");
  const Vec3 dir_cam((px + 0.5 - k.cx) / k.fx, (py + 0.5 - k.cy) / k.fy, 1.0);
  Ray ray;
  ray.origin = camera.pose.center();
  ray.direction = (camera.pose.rotation * dir_cam).normalized();
  ray.t_near = camera.near;
  ray.t_far = camera.far;
  return ray;
}

std::optional<Projection> project(const Camera& camera, const Vec3& point) {
  const Intrinsics& k = camera.intrinsics;
  const Vec3 p_cam = camera.pose.to_camera(point);
  if (!(p_cam.z() > 0)) return std::nullopt;
  // Inverse of pixel_ray: continuous image coords minus the half-pixel
  // offset, so project(pixel_ray(c, px, py).at(t)) == (px, py).
  Projection proj;
  proj.px = k.fx * p_cam.x() / p_cam.z() + k.cx - 0.5;
  proj.py = k.fy * p_cam.y() / p_cam.z() + k.cy - 0.5;
  proj.depth = p_cam.z();
  return proj;
}

bool in_frustum(const Camera& camera, const Vec3& point) {
  const auto proj = project(camera, point);
  if (!proj) return false;
  const Intrinsics& k = camera.intrinsics;
  return proj->px >= 0 && proj->px < k.width && proj->py >= 0 && proj->py < k.height &&
         proj->depth >= camera.near && proj->depth <= camera.far;
}

Vec3 contract(const Vec3& p) {
  const double n = p.norm();
  if (n <= 1.0) return p;
  return (2.0 - 1.0 / n) * (p / n);
}

Pose look_at_pose(const Vec3& eye, const Vec3& target, const Vec3& up_hint) {
  const Vec3 offset = target - eye;
  const double len = offset.norm();
  if (len < 1e-12) throw ConfigError("look_at: target coincides with the camera center");
  const Vec3 fwd = offset / len;

  Vec3 up = up_hint.normalized();
  if (fwd.cross(up).norm() < 1e-9) up = Vec3::UnitX();

  // +z forward, +y down: right = fwd x up keeps det(R) = +1.
  const Vec3 right = fwd.cross(up).normalized();
  const Vec3 down = fwd.cross(right).normalized();

  Pose pose;
  pose.rotation.col(0) = right;
  pose.rotation.col(1) = down;
  pose.rotation.col(2) = fwd;
  pose.translation = eye;
  return pose;
}

std::vector<Pose> circle_trajectory(const Pose& center, double radius, int m,
                                    const Vec3& look_at) {
  if (m < 1) throw ConfigError("circle_trajectory: m must be >= 1");
  if (radius < 0) throw ConfigError("circle_trajectory: radius must be >= 0");

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<Pose> poses;
  poses.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double angle = kTwoPi * i / m;
    const Vec3 local(radius * std::cos(angle), radius * std::sin(angle), 0.0);
    const Vec3 eye = center.to_world(local);
    poses.push_back(look_at_pose(eye, look_at, center.up()));
  }
  return poses;
}

}  // namespace visnerf
