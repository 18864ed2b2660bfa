#include "lieio/ekf.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <memory>
#include <random>

namespace lieio {

Eigen::Matrix<double, 12, 12> NoiseParams::discrete(double dt) const {
  Eigen::Matrix<double, 12, 12> w = Eigen::Matrix<double, 12, 12>::Zero();
  w.block<3, 3>(0, 0) = Mat3::Identity() * (gyro_sigma * gyro_sigma / dt);
  w.block<3, 3>(3, 3) = Mat3::Identity() * (accel_sigma * accel_sigma / dt);
  w.block<3, 3>(6, 6) = Mat3::Identity() * (gyro_bias_drift * gyro_bias_drift * dt);
  w.block<3, 3>(9, 9) = Mat3::Identity() * (accel_bias_drift * accel_bias_drift * dt);
  return w;
}

FilterState::FilterState(double t0, const Mat3& rot, const Vec3& vel, const Vec3& pos,
                         const Vec& p0_diag, int clone_budget)
    : t_(t0), rot_(rot), vel_(vel), pos_(pos), clone_budget_(clone_budget) {
  if (p0_diag.size() != 15) throw std::invalid_argument("FilterState: p0_diag must have 15 entries");
  cov_ = p0_diag.asDiagonal();
}

Eigen::Matrix<double, 15, 15> FilterState::propagation_jacobian_state(
    const Mat3& rot, const Vec3& omega_body, const Vec3& accel_body, double dt) {
  Eigen::Matrix<double, 15, 15> a = Eigen::Matrix<double, 15, 15>::Identity();
  const Mat3 rot_next = rot * so3::exp(omega_body * dt);
  const Mat3 acc_hat = so3::hat(rot * accel_body);
  a.block<3, 3>(0, 9) = -rot_next * so3::right_jacobian(omega_body * dt) * dt;
  a.block<3, 3>(3, 0) = -acc_hat * dt;
  a.block<3, 3>(3, 12) = -rot * dt;
  a.block<3, 3>(6, 0) = -0.5 * acc_hat * dt * dt;
  a.block<3, 3>(6, 3) = Mat3::Identity() * dt;
  a.block<3, 3>(6, 12) = -0.5 * rot * dt * dt;
  return a;
}

Eigen::Matrix<double, 15, 12> FilterState::propagation_jacobian_noise(const Mat3& rot,
                                                                      const Vec3& omega_body,
                                                                      double dt) {
  Eigen::Matrix<double, 15, 12> b = Eigen::Matrix<double, 15, 12>::Zero();
  const Mat3 rot_next = rot * so3::exp(omega_body * dt);
  b.block<3, 3>(0, 0) = -rot_next * so3::right_jacobian(omega_body * dt) * dt;
  b.block<3, 3>(3, 3) = -rot * dt;
  b.block<3, 3>(6, 3) = -0.5 * rot * dt * dt;
  b.block<3, 3>(9, 6) = Mat3::Identity();
  b.block<3, 3>(12, 9) = Mat3::Identity();
  return b;
}

void FilterState::propagate(const RawImuSample& raw, const NoiseParams& noise,
                            const ImuCalibration& calib) {
  const double dt = raw.t - t_;
  if (dt <= 0.0) throw std::invalid_argument("propagate: non-monotone timestamp");

  const Vec3 omega = raw.omega - bg_;
  const Vec3 accel_body = raw.accel - ba_;
  const Vec3 acc_w = rot_ * accel_body + calib.gravity;

  const auto a = propagation_jacobian_state(rot_, omega, accel_body, dt);
  const auto b = propagation_jacobian_noise(rot_, omega, dt);

  pos_ += vel_ * dt + 0.5 * acc_w * dt * dt;
  vel_ += acc_w * dt;
  rot_ = rot_ * so3::exp(omega * dt);
  t_ = raw.t;

  const int c = cur_offset();
  const int n = dim();
  cov_.block(c, c, 15, 15) =
      a * cov_.block(c, c, 15, 15) * a.transpose() + b * noise.discrete(dt) * b.transpose();
  if (c > 0) {
    cov_.block(0, c, c, 15) = cov_.block(0, c, c, 15) * a.transpose();
    cov_.block(c, 0, 15, c) = cov_.block(0, c, c, 15).transpose();
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  (void)n;
}

void FilterState::augment_clone(double t) {
  if (static_cast<int>(clones_.size()) >= clone_budget_) marginalize_oldest_clone();

  const int n = dim();
  const int c = cur_offset();
  Mat j = Mat::Zero(n + 6, n);
  j.topLeftCorner(c, c).setIdentity();              // existing clones
  j.block(c, c, 3, 3).setIdentity();                // new clone dtheta <- current dtheta
  j.block(c + 3, c + 6, 3, 3).setIdentity();        // new clone dp <- current dt
  j.block(c + 6, c, 15, 15).setIdentity();          // current state
  cov_ = (j * cov_ * j.transpose()).eval();

  clones_.push_back({t, rot_, pos_, vel_});
}

void FilterState::marginalize_oldest_clone() {
  if (clones_.empty()) return;
  const int n = dim();
  Mat reduced(n - 6, n - 6);
  reduced = cov_.block(6, 6, n - 6, n - 6);
  cov_ = reduced;
  clones_.pop_front();
}

double yaw_of(const Mat3& rot) { return std::atan2(rot(1, 0), rot(0, 0)); }

Mat3 yaw_rotation(const Mat3& rot) { return so3::exp(Vec3(0, 0, yaw_of(rot))); }

Vec3 FilterState::predicted_displacement(std::size_t clone_index) const {
  const CloneState& c = clones_.at(clone_index);
  return yaw_rotation(c.rotation).transpose() * (pos_ - c.position);
}

Mat FilterState::measurement_jacobian(std::size_t clone_index) const {
  const CloneState& c = clones_.at(clone_index);
  const double gamma = yaw_of(c.rotation);
  const double beta = std::asin(std::clamp(-c.rotation(2, 0), -1.0, 1.0));
  const Mat3 rg_t = yaw_rotation(c.rotation).transpose();

  Mat3 hz = Mat3::Zero();
  hz.row(2) << std::cos(gamma) * std::tan(beta), std::sin(gamma) * std::tan(beta), 1.0;

  Mat h = Mat::Zero(3, dim());
  const int jc = clone_offset(clone_index);
  h.block<3, 3>(0, jc) = rg_t * so3::hat(pos_ - c.position) * hz;  // clone dtheta (yaw only)
  h.block<3, 3>(0, jc + 3) = -rg_t;                                // clone dp
  h.block<3, 3>(0, cur_offset() + 6) = rg_t;                       // current dt
  return h;
}

void FilterState::measurement_update(std::size_t clone_index,
                                     const DisplacementMeasurement& meas) {
  if (clone_index >= clones_.size())
    throw std::out_of_range("measurement_update: no such clone");

  const Mat h = measurement_jacobian(clone_index);
  const Mat3 s = (h * cov_ * h.transpose() + meas.sigma).eval();
  Eigen::LDLT<Mat3> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() < 1e-15 * ldlt.vectorD().maxCoeff())
    throw std::runtime_error("measurement_update: singular innovation covariance");

  const Vec3 innovation = predicted_displacement(clone_index) - meas.d;
  const Mat k = cov_ * h.transpose() * ldlt.solve(Mat3::Identity());
  const Vec delta = k * (-innovation);

  // Apply the correction through the box-plus retraction.
  for (std::size_t j = 0; j < clones_.size(); ++j) {
    const int off = clone_offset(j);
    clones_[j].rotation = so3::exp(delta.segment<3>(off)) * clones_[j].rotation;
    clones_[j].position += delta.segment<3>(off + 3);
  }
  const int c = cur_offset();
  rot_ = so3::exp(delta.segment<3>(c)) * rot_;
  vel_ += delta.segment<3>(c + 3);
  pos_ += delta.segment<3>(c + 6);
  bg_ += delta.segment<3>(c + 9);
  ba_ += delta.segment<3>(c + 12);

  const Mat ikh = Mat::Identity(dim(), dim()) - k * h;
  cov_ = (ikh * cov_ * ikh.transpose() + k * meas.sigma * k.transpose()).eval();
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

DisplacementPrior make_oracle_prior(std::function<Pose(double)> gt_pose, double sigma,
                                    std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [gt_pose = std::move(gt_pose), sigma, rng](const EventStack&, double t0,
                                                    double t1) -> DisplacementMeasurement {
    const Pose a = gt_pose(t0);
    const Pose b = gt_pose(t1);
    DisplacementMeasurement m;
    m.d = yaw_rotation(a.rotation).transpose() * (b.translation - a.translation);
    if (sigma > 0.0) {
      std::normal_distribution<double> n(0.0, sigma);
      m.d += Vec3(n(*rng), n(*rng), n(*rng));
    }
    const double var = (sigma > 0.0) ? sigma * sigma : 1e-6;
    m.sigma = var * Mat3::Identity();
    return m;
  };
}

std::vector<TrajectorySample> run_filter(std::span<const RawImuSample> stream,
                                         const DisplacementPrior& prior,
                                         const FilterConfig& cfg, const Mat3& rot0,
                                         const Vec3& vel0, const Vec3& pos0) {
  if (stream.size() < 2) throw std::invalid_argument("run_filter: stream too short");
  const double window = cfg.window_s;
  if (stream.back().t - stream.front().t < window)
    throw std::invalid_argument("run_filter: stream shorter than one window");

  Vec p0 = cfg.p0_diag;
  if (p0.size() == 0) {
    p0 = Vec(15);
    p0 << 1e-4, 1e-4, 1e-4, 1e-3, 1e-3, 1e-3, 1e-6, 1e-6, 1e-6, 1e-6, 1e-6, 1e-6, 1e-4,
        1e-4, 1e-4;
  }
  FilterState state(stream.front().t, rot0, vel0, pos0, p0, cfg.clone_budget);

  const double update_dt = 1.0 / cfg.update_rate_hz;
  double next_clone = stream.front().t;

  std::vector<TrajectorySample> traj;
  traj.reserve(stream.size());
  auto record = [&] {
    traj.push_back({state.time(), state.rotation(), state.position(), state.velocity(),
                    state.bias_gyro(), state.bias_accel()});
  };
  record();

  for (std::size_t i = 0; i + 1 < stream.size(); ++i) {
    // Forward-Euler: sample i's measurement held over [t_i, t_{i+1}].
    RawImuSample step = stream[i];
    step.t = stream[i + 1].t;
    state.propagate(step, cfg.noise, cfg.calib);
    record();

    if (!prior) continue;
    if (state.time() + 1e-9 < next_clone) continue;
    state.augment_clone(state.time());
    next_clone += update_dt;

    // Update against the clone closest to one window old, once available.
    const auto& clones = state.clones();
    std::size_t best = clones.size();
    double best_err = 0.45 * update_dt;  // must sit near the window boundary
    for (std::size_t j = 0; j < clones.size(); ++j) {
      const double err = std::abs((state.time() - clones[j].t) - window);
      if (err < best_err) {
        best_err = err;
        best = j;
      }
    }
    if (best == clones.size()) continue;

    const CloneState clone = clones[best];
    // Window pre-integration seeded from the clone estimate.
    std::vector<RawImuSample> win;
    std::vector<CorrectedImuSample> corrected;
    ImuCalibration wcal = cfg.calib;
    wcal.bias_gyro = state.bias_gyro();
    wcal.bias_accel = state.bias_accel();
    for (const auto& s : stream) {
      if (s.t < clone.t - 1e-9 || s.t > state.time() + 1e-9) continue;
      win.push_back(s);
      corrected.push_back(correct_sample(s, wcal));
    }
    if (win.size() < 2) continue;

    const Pose init{Manifold::SE3, clone.rotation, clone.position};
    const auto path = preintegrate(win, init, clone.velocity, wcal);
    const auto events = generate_events(path, cfg.event_cfg, corrected);
    const auto stack = build_stack(events, cfg.stack_bins);
    const auto meas = prior(stack, clone.t, state.time());
    state.measurement_update(best, meas);
  }
  return traj;
}

}  // namespace lieio
