#pragma once

#include <Eigen/Core>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lieio/event_stack.hpp"
#include "lieio/imu_preint.hpp"

// Clone-state EKF fusing strap-down propagation with window displacement
// measurements from a pluggable displacement prior. Error-state layout is
// [clone_1(6), ..., clone_n(6), current(15)] with clone errors
// (dtheta, dp) and current errors (dtheta, dv, dt, dbg, dba); rotations use
// the left perturbation R <- Exp(dtheta) R.

namespace lieio {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct NoiseParams {
  // Continuous-time densities: gyro/accel white noise and bias drift.
  double gyro_sigma = 1e-3;        // rad/s/sqrt(Hz)
  double accel_sigma = 1e-2;       // m/s^2/sqrt(Hz)
  double gyro_bias_drift = 1e-5;   // rad/s per sqrt(s)
  double accel_bias_drift = 1e-4;  // m/s^2 per sqrt(s)

  // 12x12 covariance of (eta_g, eta_a, eta_gd, eta_ad) for one step of
  // length dt.
  Eigen::Matrix<double, 12, 12> discrete(double dt) const;
};

struct DisplacementMeasurement {
  Vec3 d = Vec3::Zero();             // yaw-frame displacement over the window
  Mat3 sigma = Mat3::Identity();     // PSD covariance
};

struct CloneState {
  double t = 0.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();  // bookkeeping for pre-integration seeding;
                                 // not part of the error state
};

class FilterState {
 public:
  FilterState(double t0, const Mat3& rot, const Vec3& vel, const Vec3& pos,
              const Vec& p0_diag, int clone_budget = 20);

  double time() const { return t_; }
  const Mat3& rotation() const { return rot_; }
  const Vec3& velocity() const { return vel_; }
  const Vec3& position() const { return pos_; }
  const Vec3& bias_gyro() const { return bg_; }
  const Vec3& bias_accel() const { return ba_; }
  const std::deque<CloneState>& clones() const { return clones_; }
  const Mat& covariance() const { return cov_; }
  int dim() const { return static_cast<int>(cov_.rows()); }

  // Strap-down propagation of mean and covariance with one raw IMU sample
  // (the sample's dt spans [t, raw.t]). Throws on a non-monotone timestamp.
  void propagate(const RawImuSample& raw, const NoiseParams& noise,
                 const ImuCalibration& calib);

  // Appends the current (R, t) as a clone; covariance grows by 6 rows/cols
  // with exact cross-covariance copies. The oldest clone is marginalized
  // when the budget is exceeded.
  void augment_clone(double t);
  void marginalize_oldest_clone();

  // Displacement update against clone j. Throws std::runtime_error when the
  // innovation covariance is singular.
  void measurement_update(std::size_t clone_index, const DisplacementMeasurement& meas);

  // Analytic Jacobians, exposed for finite-difference validation.
  static Eigen::Matrix<double, 15, 15> propagation_jacobian_state(
      const Mat3& rot, const Vec3& omega_body, const Vec3& accel_body, double dt);
  static Eigen::Matrix<double, 15, 12> propagation_jacobian_noise(
      const Mat3& rot, const Vec3& omega_body, double dt);
  Mat measurement_jacobian(std::size_t clone_index) const;
  Vec3 predicted_displacement(std::size_t clone_index) const;

 private:
  int clone_offset(std::size_t clone_index) const { return 6 * static_cast<int>(clone_index); }
  int cur_offset() const { return 6 * static_cast<int>(clones_.size()); }

  double t_;
  Mat3 rot_;
  Vec3 vel_, pos_, bg_ = Vec3::Zero(), ba_ = Vec3::Zero();
  std::deque<CloneState> clones_;
  Mat cov_;
  int clone_budget_;
};

// Yaw of R under the xyz Euler factorization R = Rz(yaw) Ry(pitch) Rx(roll).
double yaw_of(const Mat3& rot);
// Rz(yaw_of(rot)).
Mat3 yaw_rotation(const Mat3& rot);

// Displacement prior interface: consumes the window's event stack plus the
// window boundaries and returns a displacement measurement.
using DisplacementPrior =
    std::function<DisplacementMeasurement(const EventStack&, double t0, double t1)>;

// Oracle prior: ground-truth yaw-frame displacement plus N(0, sigma^2 I)
// noise with Sigma = sigma^2 I. `gt_pose` maps a timestamp to the true pose.
DisplacementPrior make_oracle_prior(std::function<Pose(double)> gt_pose, double sigma,
                                    std::uint64_t seed);

struct FilterConfig {
  double update_rate_hz = 20.0;
  double window_s = 1.0;
  int clone_budget = 21;  // one 1-second window at the update rate, inclusive
  NoiseParams noise;
  ImuCalibration calib;
  EventGenConfig event_cfg;
  int stack_bins = 200;
  Vec p0_diag;  // initial 15-entry error-state variance diagonal; defaulted if empty
};

struct TrajectorySample {
  double t = 0.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 bias_gyro = Vec3::Zero();
  Vec3 bias_accel = Vec3::Zero();
};

// Full pipeline: propagate every IMU sample, clone at the update cadence and,
// once a window-old clone exists, build the window's events + stack, query
// the prior and apply the displacement update. A null prior reduces the run
// to pure strap-down integration.
std::vector<TrajectorySample> run_filter(std::span<const RawImuSample> stream,
                                         const DisplacementPrior& prior,
                                         const FilterConfig& cfg, const Mat3& rot0,
                                         const Vec3& vel0, const Vec3& pos0);

}  // namespace lieio
