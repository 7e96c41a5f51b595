#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace visnerf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Pinhole intrinsics in pixels. cx/cy live in continuous image coordinates
/// where the center of pixel (i, j) is at (i + 0.5, j + 0.5).
struct Intrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
};

/// Throws ConfigError if fx/fy are not positive or the principal point lies
/// outside the image.
void validate(const Intrinsics& k);

/// World-from-camera rigid transform. Camera convention: +x right, +y down,
/// +z is the viewing direction; the camera center in world space is
/// `translation`. This convention is used consistently in all file formats.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 center() const { return translation; }
  Vec3 forward() const { return rotation.col(2); }
  Vec3 up() const { return -rotation.col(1); }

  Vec3 to_world(const Vec3& p_cam) const { return rotation * p_cam + translation; }
  Vec3 to_camera(const Vec3& p_world) const {
    return rotation.transpose() * (p_world - translation);
  }

  Mat4 matrix() const;
  static Pose from_matrix(const Mat4& m);
};

/// True when m is orthonormal with determinant +1 within tol.
bool is_rotation(const Mat3& m, double tol = 1e-6);

/// Throws ConfigError if the rotation block fails is_rotation or any entry
/// is non-finite.
void validate(const Pose& pose);

struct Camera {
  Intrinsics intrinsics;
  Pose pose;
  double near = 0.1;
  double far = 10.0;
};

void validate(const Camera& camera);

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();  // unit norm
  double t_near = 0.0;
  double t_far = 1.0;

  Vec3 at(double t) const { return origin + t * direction; }
};

/// Ray from the camera center through the center of pixel (px, py).
/// Sub-pixel coordinates are allowed; pixel (px, py) covers
/// [px, px+1) x [py, py+1) and its center is (px + 0.5, py + 0.5).
/// Throws ConfigError for pixels outside [0, width) x [0, height).
Ray pixel_ray(const Camera& camera, double px, double py);

struct Projection {
  double px = 0, py = 0;  // pixel coordinates, same convention as pixel_ray
  double depth = 0;       // camera-frame z
};

/// Projects a world point. Returns nullopt when the point is at or behind
/// the camera plane (camera-frame depth <= 0).
std::optional<Projection> project(const Camera& camera, const Vec3& point);

/// True iff the point projects in front of the camera, into
/// [0, width) x [0, height), with depth in [near, far].
bool in_frustum(const Camera& camera, const Vec3& point);

/// Scene contraction for unbounded scenes: identity inside the unit ball,
/// (2 - 1/|p|) * p/|p| outside. Output norm is always < 2.
Vec3 contract(const Vec3& p);

/// Pose whose center is `eye`, looking at `target`, with camera up as close
/// to `up_hint` as possible. Falls back to world +x as up when the view
/// direction is parallel to up_hint. Throws ConfigError when eye == target.
Pose look_at_pose(const Vec3& eye, const Vec3& target, const Vec3& up_hint);

/// m poses whose centers are evenly spaced on a circle of the given radius
/// in the center pose's local x-y plane, each oriented to look at `look_at`
/// with the center pose's up vector. radius == 0 or m == 1 degenerates to
/// look-at versions of the center pose.
std::vector<Pose> circle_trajectory(const Pose& center, double radius, int m,
                                    const Vec3& look_at);

}  // namespace visnerf
