#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

// Exact exp/log maps, composition and geodesic interpolation on the three
// manifolds used as event-generation reference signals: R^3, SO(3)xR^3 and
// SE(3). All functions are pure; Pose and Twist are plain values.

namespace lieio {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

enum class Manifold { R3, SO3xR3, SE3 };

const char* manifold_name(Manifold m);
Manifold manifold_from_string(const std::string& s);

namespace so3 {

// Branch switch for the trigonometric coefficients. Below this angle the
// closed forms lose digits to cancellation and the Taylor branch is used.
inline constexpr double kSmallAngle = 1e-4;
// Relative rotations this close to pi are rejected (ambiguous log branch).
inline constexpr double kMaxAngle = M_PI - 1e-6;

Mat3 hat(const Vec3& v);
Vec3 vee(const Mat3& m);

// Rodrigues coefficients sin(t)/t and (1-cos(t))/t^2, and the left-Jacobian
// coefficients (1-cos(t))/t^2, (t-sin(t))/t^3 plus the V^-1 quadratic term.
// Exposed with an explicit branch so the near-zero agreement of the two
// branches can be checked directly.
struct TrigCoeffs {
  double a1;  // sin(t)/t
  double a2;  // (1-cos(t))/t^2
  double b2;  // (t-sin(t))/t^3
  double c2;  // 1/t^2 - (1+cos(t))/(2 t sin(t))
};
TrigCoeffs trig_coeffs_closed(double theta);
TrigCoeffs trig_coeffs_taylor(double theta);
TrigCoeffs trig_coeffs(double theta);

Mat3 exp(const Vec3& phi);
// Throws std::domain_error if the rotation angle is >= pi - 1e-6.
Vec3 log(const Mat3& rot);

Mat3 left_jacobian(const Vec3& phi);
Mat3 left_jacobian_inv(const Vec3& phi);
Mat3 right_jacobian(const Vec3& phi);

// Nearest orthonormal matrix with det +1 (polar projection).
Mat3 orthonormalize(const Mat3& rot);

}  // namespace so3

struct Twist {
  Manifold manifold = Manifold::SE3;
  Vec3 rot = Vec3::Zero();    // radians; zero for R3
  Vec3 trans = Vec3::Zero();  // meters

  Vec6 vec() const {
    Vec6 v;
    v << rot, trans;
    return v;
  }
  double norm() const { return vec().norm(); }

  static Twist Zero(Manifold m) { return Twist{m, Vec3::Zero(), Vec3::Zero()}; }
  static Twist FromVec(Manifold m, const Vec6& v) {
    return Twist{m, v.head<3>(), v.tail<3>()};
  }
};

struct Pose {
  Manifold manifold = Manifold::SE3;
  Mat3 rotation = Mat3::Identity();  // identity for R3
  Vec3 translation = Vec3::Zero();

  static Pose Identity(Manifold m) { return Pose{m, Mat3::Identity(), Vec3::Zero()}; }

  // Same rotation/translation viewed on a different manifold (R3 drops the
  // rotation entirely).
  Pose retag(Manifold m) const;
};

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);

// base o Exp(xi). Throws std::invalid_argument on manifold mismatch.
Pose exp_map(const Pose& base, const Twist& xi);
// Log(base^-1 o target). Throws std::domain_error near the pi branch cut.
Twist log_map(const Pose& base, const Pose& target);

// a o Exp(((t-t_a)/(t_b-t_a)) Log(a^-1 b)); endpoints returned exactly.
Pose geodesic_interp(const Pose& a, const Pose& b, double t_a, double t_b, double t);
// Same, on an interpolation fraction s in [0,1].
Pose geodesic_interp_fraction(const Pose& a, const Pose& b, double s);

}  // namespace lieio
