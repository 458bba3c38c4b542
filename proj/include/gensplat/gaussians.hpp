#pragma once

#include <vector>

#include "gensplat/geometry.hpp"
#include "gensplat/tensor_io.hpp"

namespace gensplat {

template <typename S>
S sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

template <typename S>
S logit(S p) {
  if (!(p > S(0)) || !(p < S(1))) throw InvalidInputError("logit: argument outside (0,1)");
  return std::log(p / (S(1) - p));
}

/// Anisotropic Gaussian primitive. Scale is stored as log and opacity as
/// logit so unconstrained gradient steps keep the exponentiated scale
/// positive and the effective opacity inside (0,1).
template <typename S>
struct GaussianPrimitive {
  Vec3<S> center = Vec3<S>::Zero();   // meters, world frame
  Rotation<S> rotation;
  Vec3<S> log_scale = Vec3<S>::Zero();
  S logit_opacity = S(0);
  MatX<S> sh;                          // K x 3, K = (degree+1)^2

  Vec3<S> scales() const { return log_scale.array().exp(); }
  S opacity() const { return sigmoid(logit_opacity); }
};

/// Sigma = R diag(s)^2 R^T. Symmetric positive definite for positive scales.
template <typename S>
Mat3<S> covariance(const Vec3<S>& scale, const Rotation<S>& rotation) {
  if (!(scale.minCoeff() > S(0)))
    throw InvalidInputError("covariance: scales must be strictly positive");
  const Mat3<S> r = rotation.matrix();
  return r * scale.array().square().matrix().asDiagonal() * r.transpose();
}

// Real spherical harmonics, splatting-ecosystem convention (signs folded
// into the constants; exported PLYs must shade identically in third-party
// viewers).
inline constexpr double kSH0 = 0.28209479177387814;
inline constexpr double kSH1 = 0.4886025119029199;
inline constexpr double kSH2[5] = {1.0925484305920792, -1.0925484305920792,
                                   0.31539156525252005, -1.0925484305920792,
                                   0.5462742152960396};
inline constexpr double kSH3[7] = {-0.5900435899266435, 2.890611442640554,
                                   -0.4570457994644658, 0.3731763325901154,
                                   -0.4570457994644658, 1.445305721320277,
                                   -0.5900435899266435};

/// Basis values B_k(dir) for k < (degree+1)^2; dir must be unit length.
template <typename S>
VecX<S> sh_basis(const Vec3<S>& dir, int degree) {
  if (degree < 0 || degree > 3) throw InvalidInputError("sh_basis: degree must be in [0,3]");
  const S x = dir.x(), y = dir.y(), z = dir.z();
  VecX<S> b((degree + 1) * (degree + 1));
  b(0) = S(kSH0);
  if (degree > 0) {
    b(1) = S(-kSH1) * y;
    b(2) = S(kSH1) * z;
    b(3) = S(-kSH1) * x;
  }
  if (degree > 1) {
    const S xx = x * x, yy = y * y, zz = z * z;
    b(4) = S(kSH2[0]) * x * y;
    b(5) = S(kSH2[1]) * y * z;
    b(6) = S(kSH2[2]) * (2 * zz - xx - yy);
    b(7) = S(kSH2[3]) * x * z;
    b(8) = S(kSH2[4]) * (xx - yy);
  }
  if (degree > 2) {
    const S xx = x * x, yy = y * y, zz = z * z;
    b(9) = S(kSH3[0]) * y * (3 * xx - yy);
    b(10) = S(kSH3[1]) * x * y * z;
    b(11) = S(kSH3[2]) * y * (4 * zz - xx - yy);
    b(12) = S(kSH3[3]) * z * (2 * zz - 3 * xx - 3 * yy);
    b(13) = S(kSH3[4]) * x * (4 * zz - xx - yy);
    b(14) = S(kSH3[5]) * z * (xx - yy);
    b(15) = S(kSH3[6]) * x * (xx - 3 * yy);
  }
  return b;
}

/// dB_k/d(dir) as a K x 3 matrix (partials w.r.t. the ambient components;
/// callers chain through direction normalization themselves).
template <typename S>
MatX3<S> sh_basis_dir_jacobian(const Vec3<S>& dir, int degree) {
  if (degree < 0 || degree > 3) throw InvalidInputError("sh_basis: degree must be in [0,3]");
  const S x = dir.x(), y = dir.y(), z = dir.z();
  MatX3<S> j = MatX3<S>::Zero((degree + 1) * (degree + 1), 3);
  if (degree > 0) {
    j.row(1) << S(0), S(-kSH1), S(0);
    j.row(2) << S(0), S(0), S(kSH1);
    j.row(3) << S(-kSH1), S(0), S(0);
  }
  if (degree > 1) {
    j.row(4) << S(kSH2[0]) * y, S(kSH2[0]) * x, S(0);
    j.row(5) << S(0), S(kSH2[1]) * z, S(kSH2[1]) * y;
    j.row(6) << S(-2 * kSH2[2]) * x, S(-2 * kSH2[2]) * y, S(4 * kSH2[2]) * z;
    j.row(7) << S(kSH2[3]) * z, S(0), S(kSH2[3]) * x;
    j.row(8) << S(2 * kSH2[4]) * x, S(-2 * kSH2[4]) * y, S(0);
  }
  if (degree > 2) {
    const S xx = x * x, yy = y * y, zz = z * z;
    j.row(9) << S(6 * kSH3[0]) * x * y, S(3 * kSH3[0]) * (xx - yy), S(0);
    j.row(10) << S(kSH3[1]) * y * z, S(kSH3[1]) * x * z, S(kSH3[1]) * x * y;
    j.row(11) << S(-2 * kSH3[2]) * x * y, S(kSH3[2]) * (4 * zz - xx - 3 * yy),
        S(8 * kSH3[2]) * y * z;
    j.row(12) << S(-6 * kSH3[3]) * x * z, S(-6 * kSH3[3]) * y * z,
        S(kSH3[3]) * (6 * zz - 3 * xx - 3 * yy);
    j.row(13) << S(kSH3[4]) * (4 * zz - 3 * xx - yy), S(-2 * kSH3[4]) * x * y,
        S(8 * kSH3[4]) * x * z;
    j.row(14) << S(2 * kSH3[5]) * x * z, S(-2 * kSH3[5]) * y * z, S(kSH3[5]) * (xx - yy);
    j.row(15) << S(3 * kSH3[6]) * (xx - yy), S(-6 * kSH3[6]) * x * y, S(0);
  }
  return j;
}

/// color(dir) = 0.5 + sum_k c_k B_k(dir), clamped to [0, inf) per channel.
template <typename S>
Vec3<S> sh_eval(const MatX<S>& coeffs, const Vec3<S>& view_dir, int degree) {
  const int k = (degree + 1) * (degree + 1);
  if (coeffs.rows() != k || coeffs.cols() != 3)
    throw InvalidInputError("sh_eval: coefficient count does not match degree");
  Vec3<S> c = coeffs.transpose() * sh_basis(view_dir, degree);
  c.array() += S(0.5);
  return c.cwiseMax(S(0));
}

template <typename S>
struct Scene {
  std::vector<GaussianPrimitive<S>> gaussians;
  int sh_degree = 0;

  int coeff_count() const { return (sh_degree + 1) * (sh_degree + 1); }

  void validate() const {
    if (sh_degree < 0 || sh_degree > 3)
      throw InvalidInputError("Scene: sh_degree must be in [0,3]");
    const int k = coeff_count();
    for (size_t i = 0; i < gaussians.size(); ++i) {
      const auto& g = gaussians[i];
      if (g.sh.rows() != k || g.sh.cols() != 3)
        throw InvalidInputError("Scene: gaussian " + std::to_string(i) +
                                " has wrong SH coefficient count");
      if (!g.center.allFinite() || !g.log_scale.allFinite() || !g.sh.allFinite() ||
          !std::isfinite(double(g.logit_opacity)))
        throw InvalidInputError("Scene: gaussian " + std::to_string(i) +
                                " has non-finite parameters");
    }
  }
};

/// Raw-tensor sidecar form: one row per Gaussian,
/// [center(3) | quat wxyz(4) | log_scale(3) | logit_opacity(1) | sh channel-major 3K].
template <typename S>
Tensor scene_to_tensor(const Scene<S>& scene) {
  scene.validate();
  const int k = scene.coeff_count();
  const uint32_t w = uint32_t(11 + 3 * k);
  Tensor t({uint32_t(scene.gaussians.size()), w});
  for (size_t i = 0; i < scene.gaussians.size(); ++i) {
    const auto& g = scene.gaussians[i];
    float* row = t.data.data() + i * w;
    for (int c = 0; c < 3; ++c) row[c] = float(g.center(c));
    Vec4<S> q = g.rotation.coeffs_wxyz();
    for (int c = 0; c < 4; ++c) row[3 + c] = float(q(c));
    for (int c = 0; c < 3; ++c) row[7 + c] = float(g.log_scale(c));
    row[10] = float(g.logit_opacity);
    for (int ch = 0; ch < 3; ++ch)
      for (int j = 0; j < k; ++j) row[11 + ch * k + j] = float(g.sh(j, ch));
  }
  return t;
}

template <typename S>
Scene<S> scene_from_tensor(const Tensor& t) {
  if (t.dims.size() != 2) throw FormatError("scene tensor must be 2-D");
  const uint32_t w = t.dims[1];
  if (w < 11 || (w - 11) % 3 != 0) throw FormatError("scene tensor row width is not 11 + 3K");
  const int k = int(w - 11) / 3;
  int degree = -1;
  for (int d = 0; d <= 3; ++d)
    if ((d + 1) * (d + 1) == k) degree = d;
  if (degree < 0) throw FormatError("scene tensor SH count is not a supported (deg+1)^2");
  Scene<S> scene;
  scene.sh_degree = degree;
  scene.gaussians.resize(t.dims[0]);
  for (size_t i = 0; i < scene.gaussians.size(); ++i) {
    auto& g = scene.gaussians[i];
    const float* row = t.data.data() + i * w;
    g.center = Vec3<S>(S(row[0]), S(row[1]), S(row[2]));
    g.rotation = Rotation<S>(S(row[3]), S(row[4]), S(row[5]), S(row[6]));
    g.log_scale = Vec3<S>(S(row[7]), S(row[8]), S(row[9]));
    g.logit_opacity = S(row[10]);
    g.sh.resize(k, 3);
    for (int ch = 0; ch < 3; ++ch)
      for (int j = 0; j < k; ++j) g.sh(j, ch) = S(row[11 + ch * k + j]);
  }
  scene.validate();
  return scene;
}

/// Binary little-endian PLY in the de-facto splatting vertex layout:
/// x,y,z, f_dc_0..2, f_rest_* (channel-major), opacity, scale_0..2,
/// rot_0..3 with rot_0 = qw. Log-scales and logit-opacities are written raw.
void ply_export(const Scene<float>& scene, const std::filesystem::path& path);
Scene<float> ply_import(const std::filesystem::path& path);

}  // namespace gensplat
