#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <limits>

#include "gensplat/error.hpp"

namespace gensplat {

template <typename S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Vec4 = Eigen::Matrix<S, 4, 1>;
template <typename S>
using Mat2 = Eigen::Matrix<S, 2, 2>;
template <typename S>
using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S>
using Mat23 = Eigen::Matrix<S, 2, 3>;
template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using MatX3 = Eigen::Matrix<S, Eigen::Dynamic, 3>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Unit-quaternion rotation. The quaternion is renormalized by every
/// constructor so downstream code can rely on |q| = 1.
template <typename S>
class Rotation {
 public:
  Rotation() : q_(S(1), S(0), S(0), S(0)) {}

  Rotation(S w, S x, S y, S z) : q_(w, x, y, z) { normalize(); }

  explicit Rotation(const Eigen::Quaternion<S>& q) : q_(q) { normalize(); }

  explicit Rotation(const Mat3<S>& m) : q_(m) { normalize(); }

  static Rotation identity() { return Rotation(); }

  static Rotation axis_angle(const Vec3<S>& axis, S angle) {
    return Rotation(Eigen::Quaternion<S>(Eigen::AngleAxis<S>(angle, axis.normalized())));
  }

  const Eigen::Quaternion<S>& quat() const { return q_; }
  Vec4<S> coeffs_wxyz() const { return Vec4<S>(q_.w(), q_.x(), q_.y(), q_.z()); }

  Mat3<S> matrix() const { return q_.toRotationMatrix(); }

  Rotation inverse() const { return Rotation(q_.conjugate()); }

  Rotation operator*(const Rotation& rhs) const { return Rotation(q_ * rhs.q_); }

  Vec3<S> operator*(const Vec3<S>& v) const { return q_ * v; }

  template <typename T>
  Rotation<T> cast() const {
    return Rotation<T>(static_cast<T>(q_.w()), static_cast<T>(q_.x()), static_cast<T>(q_.y()),
                       static_cast<T>(q_.z()));
  }

 private:
  void normalize() {
    S n = q_.norm();
    if (!(n > S(0)) || !std::isfinite(static_cast<double>(n)))
      throw InvalidInputError("Rotation: quaternion norm is zero or non-finite");
    // Skip the divide when already unit to working precision. This makes
    // normalization bitwise idempotent, so serialization round-trips exactly.
    if (std::abs(n - S(1)) > S(4) * std::numeric_limits<S>::epsilon()) q_.coeffs() /= n;
  }

  Eigen::Quaternion<S> q_;  // unit
};

/// Rigid transform, world-from-camera convention throughout the library.
template <typename S>
class SE3 {
 public:
  SE3() : t_(Vec3<S>::Zero()) {}
  SE3(const Rotation<S>& r, const Vec3<S>& t) : r_(r), t_(t) {}

  static SE3 identity() { return SE3(); }
  static SE3 translation(const Vec3<S>& t) { return SE3(Rotation<S>(), t); }

  const Rotation<S>& rotation() const { return r_; }
  const Vec3<S>& trans() const { return t_; }

  Vec3<S> apply(const Vec3<S>& p) const { return r_ * p + t_; }

  SE3 inverse() const {
    Rotation<S> ri = r_.inverse();
    return SE3(ri, -(ri * t_));
  }

  Eigen::Matrix<S, 4, 4> matrix() const {
    Eigen::Matrix<S, 4, 4> m = Eigen::Matrix<S, 4, 4>::Identity();
    m.template block<3, 3>(0, 0) = r_.matrix();
    m.template block<3, 1>(0, 3) = t_;
    return m;
  }

  template <typename T>
  SE3<T> cast() const {
    return SE3<T>(r_.template cast<T>(), t_.template cast<T>());
  }

 private:
  Rotation<S> r_;
  Vec3<S> t_;
};

/// Applies b then a: compose(a, b).apply(x) == a.apply(b.apply(x)).
template <typename S>
SE3<S> compose(const SE3<S>& a, const SE3<S>& b) {
  return SE3<S>(a.rotation() * b.rotation(), a.rotation() * b.trans() + a.trans());
}

/// Pose of frame j expressed in frame i: compose(p_i, result) == p_j.
template <typename S>
SE3<S> relative_pose(const SE3<S>& p_i, const SE3<S>& p_j) {
  return compose(p_i.inverse(), p_j);
}

/// Rotation angle between r1 and r2 on SO(3), in [0, pi]. Computed from the
/// Frobenius inner product <R1, R2> = trace(R1^T R2), which keeps the result
/// exactly symmetric in its arguments. The trace argument is clamped to
/// [-1, 1]; float rounding otherwise yields NaN near 0 and pi.
template <typename S>
S geodesic_distance(const Rotation<S>& r1, const Rotation<S>& r2) {
  const Mat3<S> m1 = r1.matrix();
  const Mat3<S> m2 = r2.matrix();
  S tr = m1.cwiseProduct(m2).sum();
  S c = (tr - S(1)) / S(2);
  c = std::max(S(-1), std::min(S(1), c));
  return std::acos(c);
}

template <typename S>
struct Ray {
  Vec3<S> origin;
  Vec3<S> direction;  // unit

  Ray(const Vec3<S>& o, const Vec3<S>& d) : origin(o) {
    S n = d.norm();
    if (!(n > S(0)) || !std::isfinite(static_cast<double>(n)))
      throw InvalidInputError("Ray: direction norm is zero or non-finite");
    direction = d / n;
  }
};

/// Midpoint of the shortest segment connecting two skew lines. Degenerate for
/// (near-)parallel axes; below |cross| = 1e-8 the closest-point solve is
/// ill-conditioned and the caller must supply a pivot explicitly.
template <typename S>
Vec3<S> pivot_point(const Ray<S>& axis_a, const Ray<S>& axis_b) {
  const Vec3<S>& da = axis_a.direction;
  const Vec3<S>& db = axis_b.direction;
  if (da.cross(db).norm() <= S(1e-8))
    throw DegenerateGeometryError("pivot_point: optical axes are (near-)parallel");
  const Vec3<S> w0 = axis_a.origin - axis_b.origin;
  const S a = da.dot(da);
  const S b = da.dot(db);
  const S c = db.dot(db);
  const S d = da.dot(w0);
  const S e = db.dot(w0);
  const S den = a * c - b * b;
  const S s = (b * e - c * d) / den;
  const S t = (a * e - b * d) / den;
  const Vec3<S> pa = axis_a.origin + s * da;
  const Vec3<S> pb = axis_b.origin + t * db;
  return (pa + pb) / S(2);
}

/// Pinhole camera. Pose is world-from-camera; rendering inverts once at the
/// boundary.
template <typename S>
struct CameraModel {
  S fx = S(1), fy = S(1);
  S cx = S(0), cy = S(0);
  int width = 0, height = 0;
  SE3<S> pose;

  CameraModel() = default;
  CameraModel(S fx_, S fy_, S cx_, S cy_, int w, int h, const SE3<S>& pose_ = SE3<S>())
      : fx(fx_), fy(fy_), cx(cx_), cy(cy_), width(w), height(h), pose(pose_) {
    validate();
  }

  void validate() const {
    if (!(fx > S(0)) || !(fy > S(0)))
      throw InvalidInputError("CameraModel: focal lengths must be positive");
    if (!(cx >= S(0)) || !(cx < S(width)) || !(cy >= S(0)) || !(cy < S(height)))
      throw InvalidInputError("CameraModel: principal point outside the image");
  }

  Vec3<S> center() const { return pose.trans(); }

  /// Optical axis in world coordinates (camera +Z).
  Ray<S> optical_axis() const { return Ray<S>(pose.trans(), pose.rotation() * Vec3<S>(0, 0, 1)); }

  template <typename T>
  CameraModel<T> cast() const {
    return CameraModel<T>(static_cast<T>(fx), static_cast<T>(fy), static_cast<T>(cx),
                          static_cast<T>(cy), width, height, pose.template cast<T>());
  }
};

inline constexpr double kNearPlane = 0.01;  // meters; robot workspaces are table-scale

template <typename S>
struct Projection {
  S u, v;    // pixels
  S depth;   // meters, camera-frame z
};

/// Pinhole projection of a world point. Throws when the point sits at or
/// behind the near plane.
template <typename S>
Projection<S> project(const Vec3<S>& point, const CameraModel<S>& cam,
                      S near_plane = S(kNearPlane)) {
  if (!point.allFinite()) throw InvalidInputError("project: non-finite point");
  const Vec3<S> pc = cam.pose.inverse().apply(point);
  if (!(pc.z() > near_plane)) throw BehindCameraError("project: point behind the near plane");
  return Projection<S>{cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy,
                       pc.z()};
}

/// Back-projection of a pixel at a given camera-frame depth into world space.
template <typename S>
Vec3<S> unproject(S u, S v, S depth, const CameraModel<S>& cam) {
  const Vec3<S> pc((u - cam.cx) / cam.fx * depth, (v - cam.cy) / cam.fy * depth, depth);
  return cam.pose.apply(pc);
}

/// Per-pixel rigid transform of an HxW point grid stored as (H*W)x3 rows:
/// out(u,v) = R * pm(u,v) + T.
template <typename S>
MatX3<S> transform_pointmap(const MatX3<S>& pm, const SE3<S>& pose) {
  if (!pm.allFinite()) throw InvalidInputError("transform_pointmap: non-finite point map");
  const Mat3<S> r = pose.rotation().matrix();
  MatX3<S> out = pm * r.transpose();
  out.rowwise() += pose.trans().transpose();
  return out;
}

/// d(R(q) v)/dq_k for a unit quaternion q = (w,x,y,z); returns the four
/// partial rotation matrices. Gradients of anything built on R(q) contract
/// against these and are then projected onto the unit-norm tangent.
template <typename S>
std::array<Mat3<S>, 4> rotation_matrix_jacobian(const Vec4<S>& q) {
  const S w = q(0), x = q(1), y = q(2), z = q(3);
  std::array<Mat3<S>, 4> d;
  d[0] << 0, -z, y, z, 0, -x, -y, x, 0;
  d[1] << 0, y, z, y, -2 * x, -w, z, w, -2 * x;
  d[2] << -2 * y, x, w, x, 0, z, -w, z, -2 * y;
  d[3] << -2 * z, -w, x, w, -2 * z, y, x, y, 0;
  for (auto& m : d) m *= S(2);
  return d;
}

/// Projects an ambient quaternion gradient onto the tangent space of the unit
/// sphere at q, i.e. the gradient of f(normalize(q)) evaluated at |q| = 1.
template <typename S>
Vec4<S> project_quat_gradient(const Vec4<S>& q, const Vec4<S>& grad) {
  return grad - q * q.dot(grad);
}

}  // namespace gensplat
