#pragma once

#include <span>
#include <vector>

#include "lieio/lie_core.hpp"

// Bias/gravity correction of raw IMU samples and on-manifold forward-Euler
// pre-integration. The resulting path is the reference signal for event
// generation.

namespace lieio {

struct RawImuSample {
  double t = 0.0;    // seconds
  Vec3 omega = Vec3::Zero();  // rad/s, body frame
  Vec3 accel = Vec3::Zero();  // m/s^2, body frame (specific force)
};

struct ImuCalibration {
  Vec3 bias_gyro = Vec3::Zero();   // rad/s
  Vec3 bias_accel = Vec3::Zero();  // m/s^2
  Vec3 gravity = Vec3(0, 0, -9.81);
  Mat3 gravity_frame = Mat3::Identity();  // estimated gravity-aligned frame
};

struct CorrectedImuSample {
  double t = 0.0;
  Vec3 omega = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

// omega_hat = R_g (omega_bar - b_g);  a_hat = R_g (a_bar - b_a) + g
CorrectedImuSample correct_sample(const RawImuSample& raw, const ImuCalibration& calib);

struct PreintegrationPath {
  struct Node {
    double t = 0.0;
    Pose pose;      // SE3-tagged
    Vec3 velocity = Vec3::Zero();
  };
  std::vector<Node> samples;
  Vec3 v0 = Vec3::Zero();

  double t_start() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
};

// Forward-Euler recursion with biases frozen at the window-start estimate:
//   R_{i+1} = R_i Exp((w_i - b_g) dt)
//   v_{i+1} = v_i + R_i (a_i - b_a) dt + g dt
//   t_{i+1} = t_i + v_i dt + 1/2 g dt^2 + 1/2 R_i (a_i - b_a) dt^2
// Throws std::invalid_argument for fewer than two samples or non-monotone
// timestamps.
PreintegrationPath preintegrate(std::span<const RawImuSample> raws, const Pose& init_pose,
                                const Vec3& v0, const ImuCalibration& calib);

// Piecewise-geodesic interpolation of the path; exact at sample timestamps.
// Throws std::out_of_range for t outside [t_start, t_end].
Pose sample_reference(const PreintegrationPath& path, double t);

// Linear interpolation of corrected samples at time t (clamped to the ends).
CorrectedImuSample interpolate_corrected(std::span<const CorrectedImuSample> samples, double t);

}  // namespace lieio
