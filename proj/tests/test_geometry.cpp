#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gensplat/geometry.hpp"
#include "gensplat/rng.hpp"

using namespace gensplat;

namespace {

Rotation<double> random_rotation(Rng& rng) {
  // 4 iid normals normalized -> uniform on S^3.
  Vec4<double> q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  return Rotation<double>(q(0), q(1), q(2), q(3));
}

SE3<double> random_pose(Rng& rng) {
  return SE3<double>(random_rotation(rng),
                     Vec3<double>(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)));
}

// Independent oracle: relative rotation angle from the quaternion inner
// product, 2*acos(|<q1,q2>|).
double quat_angle_oracle(const Rotation<double>& r1, const Rotation<double>& r2) {
  double dot = std::abs(r1.quat().coeffs().dot(r2.quat().coeffs()));
  return 2.0 * std::acos(std::min(1.0, dot));
}

}  // namespace

TEST_CASE("rotation constructors produce unit quaternions and orthonormal matrices") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rotation<double> r = random_rotation(rng);
    CHECK(std::abs(r.quat().norm() - 1.0) < 1e-6);
    Mat3<double> m = r.matrix();
    CHECK(std::abs(m.determinant() - 1.0) < 1e-6);
    CHECK((m.transpose() * m - Mat3<double>::Identity()).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK_THROWS_AS(Rotation<double>(0, 0, 0, 0), InvalidInputError);
}

TEST_CASE("quaternion <-> matrix round-trip recovers +/-q") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Rotation<double> r = random_rotation(rng);
    Rotation<double> back(r.matrix());
    Vec4<double> a = r.coeffs_wxyz();
    Vec4<double> b = back.coeffs_wxyz();
    double err = std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
    CHECK(err < 1e-6);
  }
}

TEST_CASE("compose: identity and commuting translations") {
  SE3<double> id;
  SE3<double> both = compose(id, id);
  CHECK(both.trans().norm() == 0.0);
  CHECK(geodesic_distance(both.rotation(), id.rotation()) == 0.0);

  SE3<double> a = SE3<double>::translation({1, 0, 0});
  SE3<double> b = SE3<double>::translation({0, 2, 0});
  CHECK((compose(a, b).trans() - Vec3<double>(1, 2, 0)).norm() < 1e-15);
}

TEST_CASE("compose Rz(90)*Rz(90) matches the 3x3 matrix-product oracle") {
  Rotation<double> rz90 = Rotation<double>::axis_angle({0, 0, 1}, M_PI / 2);
  SE3<double> a(rz90, {0.3, -0.1, 2.0});
  SE3<double> b(rz90, {1.0, 0.5, 0.0});
  Eigen::Matrix4d oracle = a.matrix() * b.matrix();  // homogeneous-product route
  CHECK((compose(a, b).matrix() - oracle).cwiseAbs().maxCoeff() < 1e-12);
  // the rotation part really is Rz(180)
  Mat3<double> rz180 = Rotation<double>::axis_angle({0, 0, 1}, M_PI).matrix();
  CHECK((compose(a, b).rotation().matrix() - rz180).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compose applies b then a on points") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    SE3<double> a = random_pose(rng), b = random_pose(rng);
    Vec3<double> x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK((compose(a, b).apply(x) - a.apply(b.apply(x))).norm() < 1e-12);
  }
}

TEST_CASE("compose(p, inverse(p)) is the identity within 1e-6") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    SE3<double> p = random_pose(rng);
    SE3<double> e = compose(p, p.inverse());
    CHECK(geodesic_distance(e.rotation(), Rotation<double>()) < 1e-6);
    CHECK(e.trans().norm() < 1e-6);
  }
}

TEST_CASE("relative_pose recomposes to the target") {
  Rng rng(19);
  SE3<double> q = random_pose(rng);
  // identity cases
  SE3<double> r0 = relative_pose(q, q);
  CHECK(geodesic_distance(r0.rotation(), Rotation<double>()) < 1e-12);
  CHECK(r0.trans().norm() < 1e-12);
  SE3<double> r1 = relative_pose(SE3<double>(), q);
  CHECK((r1.matrix() - q.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  // random pairs: compose(p_i, rel) == p_j
  for (int i = 0; i < 100; ++i) {
    SE3<double> pi = random_pose(rng), pj = random_pose(rng);
    SE3<double> rel = relative_pose(pi, pj);
    CHECK((compose(pi, rel).matrix() - pj.matrix()).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("geodesic_distance: trivial angles") {
  Rotation<double> id;
  CHECK(geodesic_distance(id, id) == 0.0);
  Rotation<double> rz90 = Rotation<double>::axis_angle({0, 0, 1}, M_PI / 2);
  CHECK(std::abs(geodesic_distance(id, rz90) - M_PI / 2) < 1e-9);
}

TEST_CASE("geodesic_distance agrees with the quaternion-angle oracle") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    Rotation<double> r1 = random_rotation(rng), r2 = random_rotation(rng);
    CHECK(std::abs(geodesic_distance(r1, r2) - quat_angle_oracle(r1, r2)) < 1e-6);
  }
}

TEST_CASE("geodesic_distance is exactly symmetric") {
  Rng rng(29);
  for (int i = 0; i < 500; ++i) {
    Rotation<double> r1 = random_rotation(rng), r2 = random_rotation(rng);
    CHECK(geodesic_distance(r1, r2) == geodesic_distance(r2, r1));
  }
}

TEST_CASE("geodesic_distance clamps near pi instead of returning NaN") {
  Rotation<float> id;
  Rotation<float> flip = Rotation<float>::axis_angle({0, 1, 0}, float(M_PI));
  float d = geodesic_distance(id, flip);
  CHECK(std::isfinite(d));
  CHECK(std::abs(d - float(M_PI)) < 1e-3f);
}

TEST_CASE("transform_pointmap basic cases") {
  MatX3<double> pm(2, 3);
  pm << 0, 0, 0, 1, 0, 0;

  MatX3<double> same = transform_pointmap(pm, SE3<double>());
  CHECK((same - pm).cwiseAbs().maxCoeff() == 0.0);

  MatX3<double> lifted = transform_pointmap(pm, SE3<double>::translation({0, 0, 1}));
  CHECK((lifted.row(0) - Eigen::RowVector3d(0, 0, 1)).norm() < 1e-15);

  SE3<double> rz(Rotation<double>::axis_angle({0, 0, 1}, M_PI / 2), Vec3<double>::Zero());
  MatX3<double> rot = transform_pointmap(pm, rz);
  CHECK((rot.row(1) - Eigen::RowVector3d(0, 1, 0)).norm() < 1e-6);

  MatX3<double> bad = pm;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(transform_pointmap(bad, SE3<double>()), InvalidInputError);
}

TEST_CASE("transform_pointmap round-trips through the inverse pose in float32") {
  Rng rng(31);
  SE3<float> pose = random_pose(rng).cast<float>();
  MatX3<float> pm(64 * 48, 3);
  for (int i = 0; i < pm.rows(); ++i)
    for (int j = 0; j < 3; ++j) pm(i, j) = float(rng.uniform(-3, 3));
  MatX3<float> back = transform_pointmap(transform_pointmap(pm, pose), pose.inverse());
  CHECK((back - pm).cwiseAbs().maxCoeff() < 1e-5f);
}

TEST_CASE("pivot_point: intersecting, skew, parallel") {
  Ray<double> za({0, 0, 0}, {0, 0, 1});
  Ray<double> xa({0, 0, 0}, {1, 0, 0});
  CHECK(pivot_point(za, xa).norm() < 1e-15);

  // closest points are (0,0,0) on A and (1,0,0) on B
  Ray<double> b({1, 0, 0}, {0, 1, 0});
  CHECK((pivot_point(za, b) - Vec3<double>(0.5, 0, 0)).norm() < 1e-15);

  Ray<double> zb({1, 0, 0}, {0, 0, 1});
  CHECK_THROWS_AS(pivot_point(za, zb), DegenerateGeometryError);
}

TEST_CASE("pivot_point is invariant to swap and to direction rescale") {
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    Ray<double> a({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                  {rng.normal(), rng.normal(), rng.normal()});
    Ray<double> b({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                  {rng.normal(), rng.normal(), rng.normal()});
    if (a.direction.cross(b.direction).norm() <= 1e-8) continue;
    Vec3<double> p = pivot_point(a, b);
    CHECK((pivot_point(b, a) - p).norm() == 0.0);  // swap: exact
    Ray<double> a5(a.origin, a.direction * 5.0);
    Ray<double> bm(b.origin, b.direction * -0.25);
    CHECK((pivot_point(a5, bm) - p).norm() < 1e-12);  // rescale
  }
}

TEST_CASE("project: on-axis, hand pinhole, behind-camera") {
  CameraModel<double> cam(100, 100, 50, 50, 100, 100);
  auto on_axis = project<double>({0, 0, 1}, cam);
  CHECK(on_axis.u == doctest::Approx(50).epsilon(1e-12));
  CHECK(on_axis.v == doctest::Approx(50).epsilon(1e-12));
  CHECK(on_axis.depth == doctest::Approx(1.0));

  auto p = project<double>({0.1, 0, 1}, cam);
  CHECK(p.u == doctest::Approx(60).epsilon(1e-12));
  CHECK(p.v == doctest::Approx(50).epsilon(1e-12));
  CHECK(p.depth == doctest::Approx(1.0));

  CHECK_THROWS_AS(project<double>({0, 0, -1}, cam), BehindCameraError);
  CHECK_THROWS_AS(
      project<double>({std::numeric_limits<double>::quiet_NaN(), 0, 1}, cam),
      InvalidInputError);
}

TEST_CASE("project respects the camera pose") {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    CameraModel<double> cam(120, 110, 63.5, 47.5, 128, 96, random_pose(rng));
    // point 2m in front of the camera along its axis projects to the principal point
    Vec3<double> pw = cam.pose.apply(Vec3<double>(0, 0, 2));
    auto pr = project(pw, cam);
    CHECK(std::abs(pr.u - cam.cx) < 1e-9);
    CHECK(std::abs(pr.v - cam.cy) < 1e-9);
    CHECK(std::abs(pr.depth - 2.0) < 1e-9);
  }
}

TEST_CASE("project then unproject is the identity within 1e-4 px") {
  Rng rng(43);
  CameraModel<double> cam(95.0, 105.0, 63.0, 48.0, 128, 96, random_pose(rng));
  for (int i = 0; i < 300; ++i) {
    double u = rng.uniform(0, 127), v = rng.uniform(0, 95), d = rng.uniform(0.05, 5.0);
    Vec3<double> pw = unproject(u, v, d, cam);
    auto pr = project(pw, cam);
    CHECK(std::abs(pr.u - u) < 1e-4);
    CHECK(std::abs(pr.v - v) < 1e-4);
    CHECK(std::abs(pr.depth - d) < 1e-9);
  }
}

TEST_CASE("camera model validation") {
  CHECK_THROWS_AS(CameraModel<double>(0, 100, 50, 50, 100, 100), InvalidInputError);
  CHECK_THROWS_AS(CameraModel<double>(100, 100, 120, 50, 100, 100), InvalidInputError);
  CHECK_THROWS_AS(CameraModel<double>(100, 100, 50, -1, 100, 100), InvalidInputError);
}

TEST_CASE("ray direction is normalized to 1e-9") {
  Ray<double> r({0, 0, 0}, {3, 4, 0});
  CHECK(std::abs(r.direction.norm() - 1.0) < 1e-9);
  CHECK_THROWS_AS(Ray<double>({0, 0, 0}, {0, 0, 0}), InvalidInputError);
}

TEST_CASE("rotation matrix jacobian matches finite differences of the raw formula") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    Rotation<double> r = random_rotation(rng);
    Vec4<double> q = r.coeffs_wxyz();
    auto jac = rotation_matrix_jacobian(q);
    const double h = 1e-7;
    for (int k = 0; k < 4; ++k) {
      Vec4<double> qp = q, qm = q;
      qp(k) += h;
      qm(k) -= h;
      // raw quadratic formula, no renormalization: ambient partials
      Eigen::Quaternion<double> ep(qp(0), qp(1), qp(2), qp(3));
      Eigen::Quaternion<double> em(qm(0), qm(1), qm(2), qm(3));
      Mat3<double> fd = (ep.toRotationMatrix() - em.toRotationMatrix()) / (2 * h);
      CHECK((fd - jac[k]).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("tangent-projected quaternion gradient matches normalized finite differences") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    Rotation<double> r = random_rotation(rng);
    Vec4<double> q = r.coeffs_wxyz();
    Vec3<double> v(rng.normal(), rng.normal(), rng.normal());
    Vec3<double> w(rng.normal(), rng.normal(), rng.normal());
    // f(q) = w . R(normalize(q)) v
    auto jac = rotation_matrix_jacobian(q);
    Vec4<double> ambient;
    for (int k = 0; k < 4; ++k) ambient(k) = w.dot(jac[k] * v);
    Vec4<double> grad = project_quat_gradient(q, ambient);
    const double h = 1e-6;
    for (int k = 0; k < 4; ++k) {
      Vec4<double> qp = q, qm = q;
      qp(k) += h;
      qm(k) -= h;
      double fp = w.dot(Rotation<double>(qp(0), qp(1), qp(2), qp(3)).matrix() * v);
      double fm = w.dot(Rotation<double>(qm(0), qm(1), qm(2), qm(3)).matrix() * v);
      CHECK(std::abs((fp - fm) / (2 * h) - grad(k)) < 1e-5);
    }
  }
}
