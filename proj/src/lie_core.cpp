#include "lieio/lie_core.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace lieio {

const char* manifold_name(Manifold m) {
  switch (m) {
    case Manifold::R3: return "r3";
    case Manifold::SO3xR3: return "so3xr3";
    case Manifold::SE3: return "se3";
  }
  return "?";
}

Manifold manifold_from_string(const std::string& s) {
  if (s == "r3") return Manifold::R3;
  if (s == "so3xr3") return Manifold::SO3xR3;
  if (s == "se3") return Manifold::SE3;
  throw std::invalid_argument("unknown manifold: " + s);
}

namespace so3 {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

TrigCoeffs trig_coeffs_closed(double t) {
  const double t2 = t * t;
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double sh = std::sin(0.5 * t);
  TrigCoeffs k;
  k.a1 = s / t;
  // 1 - cos t written as 2 sin^2(t/2): the direct difference cancels badly
  // for small t and would poison the linear term of V.
  k.a2 = 2.0 * sh * sh / t2;
  k.b2 = (t - s) / (t2 * t);
  k.c2 = 1.0 / t2 - (1.0 + c) / (2.0 * t * s);
  return k;
}

TrigCoeffs trig_coeffs_taylor(double t) {
  const double t2 = t * t;
  const double t4 = t2 * t2;
  TrigCoeffs k;
  k.a1 = 1.0 - t2 / 6.0 + t4 / 120.0;
  k.a2 = 0.5 - t2 / 24.0 + t4 / 720.0;
  k.b2 = 1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0;
  k.c2 = 1.0 / 12.0 + t2 / 720.0 + t4 / 30240.0;
  return k;
}

TrigCoeffs trig_coeffs(double t) {
  return t < kSmallAngle ? trig_coeffs_taylor(t) : trig_coeffs_closed(t);
}

Mat3 exp(const Vec3& phi) {
  const double t = phi.norm();
  const TrigCoeffs k = trig_coeffs(t);
  const Mat3 p = hat(phi);
  return Mat3::Identity() + k.a1 * p + k.a2 * p * p;
}

Vec3 log(const Mat3& rot) {
  const double c = std::clamp(0.5 * (rot.trace() - 1.0), -1.0, 1.0);
  const double t = std::acos(c);
  if (t >= kMaxAngle) throw std::domain_error("so3::log: rotation angle too close to pi");
  const Vec3 w = vee(0.5 * (rot - rot.transpose()));  // sin(t) * axis
  if (t < kSmallAngle) {
    const double t2 = t * t;
    return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * w;  // t/sin(t)
  }
  return (t / std::sin(t)) * w;
}

Mat3 left_jacobian(const Vec3& phi) {
  const double t = phi.norm();
  const TrigCoeffs k = trig_coeffs(t);
  const Mat3 p = hat(phi);
  return Mat3::Identity() + k.a2 * p + k.b2 * p * p;
}

Mat3 left_jacobian_inv(const Vec3& phi) {
  const double t = phi.norm();
  const TrigCoeffs k = trig_coeffs(t);
  const Mat3 p = hat(phi);
  return Mat3::Identity() - 0.5 * p + k.c2 * p * p;
}

Mat3 right_jacobian(const Vec3& phi) { return left_jacobian(-phi); }

Mat3 orthonormalize(const Mat3& rot) {
  Eigen::JacobiSVD<Mat3> svd(rot, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Mat3 d = Mat3::Identity();
    d(2, 2) = -1.0;
    r = svd.matrixU() * d * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace so3

namespace {

void check_same(Manifold a, Manifold b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": manifold tag mismatch (" +
                                manifold_name(a) + " vs " + manifold_name(b) + ")");
  }
}

}  // namespace

Pose Pose::retag(Manifold m) const {
  Pose p = *this;
  p.manifold = m;
  if (m == Manifold::R3) p.rotation = Mat3::Identity();
  return p;
}

Pose compose(const Pose& a, const Pose& b) {
  check_same(a.manifold, b.manifold, "compose");
  Pose out;
  out.manifold = a.manifold;
  if (a.manifold == Manifold::R3) {
    out.translation = a.translation + b.translation;
    return out;
  }
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose inverse(const Pose& p) {
  Pose out;
  out.manifold = p.manifold;
  if (p.manifold == Manifold::R3) {
    out.translation = -p.translation;
    return out;
  }
  out.rotation = p.rotation.transpose();
  out.translation = -(out.rotation * p.translation);
  return out;
}

Pose exp_map(const Pose& base, const Twist& xi) {
  check_same(base.manifold, xi.manifold, "exp_map");
  Pose inc;
  inc.manifold = base.manifold;
  switch (base.manifold) {
    case Manifold::R3:
      inc.translation = xi.trans;
      break;
    case Manifold::SO3xR3:
      inc.rotation = so3::exp(xi.rot);
      inc.translation = xi.trans;
      break;
    case Manifold::SE3:
      inc.rotation = so3::exp(xi.rot);
      inc.translation = so3::left_jacobian(xi.rot) * xi.trans;
      break;
  }
  return compose(base, inc);
}

Twist log_map(const Pose& base, const Pose& target) {
  check_same(base.manifold, target.manifold, "log_map");
  const Pose rel = compose(inverse(base), target);
  Twist xi;
  xi.manifold = base.manifold;
  switch (base.manifold) {
    case Manifold::R3:
      xi.trans = rel.translation;
      break;
    case Manifold::SO3xR3:
      xi.rot = so3::log(rel.rotation);
      xi.trans = rel.translation;
      break;
    case Manifold::SE3:
      xi.rot = so3::log(rel.rotation);
      xi.trans = so3::left_jacobian_inv(xi.rot) * rel.translation;
      break;
  }
  return xi;
}

Pose geodesic_interp_fraction(const Pose& a, const Pose& b, double s) {
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  Twist xi = log_map(a, b);
  xi.rot *= s;
  xi.trans *= s;
  return exp_map(a, xi);
}

Pose geodesic_interp(const Pose& a, const Pose& b, double t_a, double t_b, double t) {
  if (!(t_a < t_b)) throw std::invalid_argument("geodesic_interp: degenerate segment");
  if (t < t_a || t > t_b) throw std::invalid_argument("geodesic_interp: t outside segment");
  return geodesic_interp_fraction(a, b, (t - t_a) / (t_b - t_a));
}

}  // namespace lieio
