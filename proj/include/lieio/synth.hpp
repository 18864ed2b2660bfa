#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lieio/event_gen.hpp"
#include "lieio/imu_preint.hpp"
#include "lieio/spline.hpp"

// Synthetic trajectory generation, time reparametrization, synthetic-IMU
// synthesis, training-noise augmentation and the chamfer toy experiment.

namespace lieio {

// Strictly increasing map [0, duration] -> [0, 1].
class Reparametrization {
 public:
  static Reparametrization identity(double duration);
  static Reparametrization power(double alpha, double duration);  // (t/dt)^alpha
  static Reparametrization random_monotone(double duration, std::mt19937_64& rng,
                                           int knots = 8);

  double phi(double t) const;
  double dphi(double t) const;
  double ddphi(double t) const;
  double inv(double s) const;  // phi^-1, by bisection
  double duration() const { return duration_; }
  std::string label() const { return label_; }

 private:
  enum class Kind { Power, Spline };
  Kind kind_ = Kind::Power;
  double alpha_ = 1.0;
  double duration_ = 1.0;
  MonotoneCubic spline_;
  std::string label_ = "t";
};

struct RandomWalkConfig {
  int knots = 8;
  double pos_scale = 0.35;   // m, knot-to-knot step scale
  double rot_scale = 0.25;   // rad
};

// C^2 position / C^1 rotation trajectory: cubic splines over the path
// parameter composed with a time reparametrization. Accessors are analytic.
class SynthTrajectory {
 public:
  static SynthTrajectory random_walk(std::uint64_t seed,
                                     const RandomWalkConfig& cfg = {},
                                     double duration = 1.0);
  // Fit through timestamped poses; rotations interpolated through cumulative
  // rotation-vector knots.
  static SynthTrajectory fit(std::span<const double> times, std::span<const Pose> poses);

  double duration() const { return phi_.duration(); }

  Pose pose(double t) const;                // SE3
  Vec3 velocity_world(double t) const;
  Vec3 accel_world(double t) const;
  Vec3 angular_rate_body(double t) const;

  // Path accessors on the arc parameter s in [0, 1].
  Pose pose_path(double s) const;

  // Same geometric path under a different time parametrization.
  SynthTrajectory reparametrized(const Reparametrization& phi) const;
  const Reparametrization& phi() const { return phi_; }

 private:
  CubicSpline3 pos_;     // P(s)
  CubicSpline3 rotvec_;  // rho(s); R(s) = Exp(rho(s))
  Reparametrization phi_ = Reparametrization::identity(1.0);
};

struct NoiseSpec {
  double v0_range = 0.5;          // m/s, uniform per axis
  double gravity_tilt_deg = 5.0;  // max tilt of the gravity-aligned frame
  double omega_range = 0.05;      // rad/s, uniform per axis
  double accel_range = 0.2;       // m/s^2
  double polarity_range = 0.5;    // renormalized afterwards
  double gyro_noise_sigma = 1e-3;   // rad/s/sqrt(Hz)
  double accel_noise_sigma = 1e-2;  // m/s^2/sqrt(Hz)
  double gyro_bias_sigma0 = 0.0;    // initial bias draw, rad/s
  double accel_bias_sigma0 = 0.0;   // m/s^2
  double gyro_bias_drift = 1e-5;    // rad/s per sqrt(s)
  double accel_bias_drift = 1e-4;   // m/s^2 per sqrt(s)
  std::uint64_t seed = 0;

  static NoiseSpec zero();
  static NoiseSpec toy_default();  // adds nonzero initial-bias draws
};

// Body-frame gyro/accel samples from analytic derivatives, with gravity
// re-added and rotated into the body frame, plus white noise and a bias
// random walk. Includes the window endpoint sample.
std::vector<RawImuSample> synthesize_imu(const SynthTrajectory& traj, double rate_hz,
                                         const NoiseSpec& noise, std::mt19937_64& rng,
                                         const Vec3& gravity = Vec3(0, 0, -9.81));

SynthTrajectory reparametrize(const SynthTrajectory& traj, const Reparametrization& phi);

// Symmetric mean nearest-neighbour distance between timestamp sets, as a
// percentage of the window length. Throws std::invalid_argument on an empty
// set.
double chamfer_distance(std::span<const double> a, std::span<const double> b, double window);

struct ToyRow {
  std::string reference;  // "preint" | "gt"
  std::string phi_label;
  bool corrected = false;
  double theta = 0.0;
  double chamfer_pct = 0.0;
};

struct ToyConfig {
  int windows = 100;
  std::vector<double> alphas = {0.5, 2.0};
  std::vector<double> thetas = {0.005, 0.01, 0.02};
  std::string reference = "gt";  // or "preint"
  // Slow windows keep the event sets sparse enough that the chamfer metric
  // does not saturate at the inter-event gap.
  RandomWalkConfig walk{8, 0.04, 0.02};
  double gt_rate_hz = 200.0;
  double imu_rate_hz = 1000.0;
  std::uint64_t seed = 7;
  // Pre-integration reference only: drawn initial biases become the
  // (uncompensated) reference error.
  NoiseSpec noise = NoiseSpec::toy_default();
};

// Table-style chamfer report: for each (alpha, theta), events from the
// reparametrized window are compared against the canonical ones, with and
// without remapping through phi_alpha. Rows are per-cell means over windows.
std::vector<ToyRow> run_toy_experiment(const ToyConfig& cfg);

// One NDP input window, as perturbed for training.
struct WindowInputs {
  Vec3 v0 = Vec3::Zero();
  Mat3 gravity_frame = Mat3::Identity();
  std::vector<CorrectedImuSample> samples;
  std::vector<Twist> polarities;
};

WindowInputs apply_training_noise(const WindowInputs& in, const NoiseSpec& spec,
                                  std::mt19937_64& rng);

}  // namespace lieio
