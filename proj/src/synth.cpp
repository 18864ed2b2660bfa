#include "lieio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lieio {

namespace {

// Derivatives of (t/dt)^alpha blow up at t=0 for alpha<1 (and alpha<2 for
// the second derivative); evaluation is clamped a fraction of the window
// away from the endpoint.
constexpr double kPowerClamp = 1e-3;

std::string alpha_label(double alpha) {
  if (alpha == 1.0) return "t";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t^%g", alpha);
  return buf;
}

}  // namespace

Reparametrization Reparametrization::identity(double duration) {
  return power(1.0, duration);
}

Reparametrization Reparametrization::power(double alpha, double duration) {
  if (alpha <= 0.0 || duration <= 0.0)
    throw std::invalid_argument("Reparametrization::power: alpha and duration must be positive");
  Reparametrization r;
  r.kind_ = Kind::Power;
  r.alpha_ = alpha;
  r.duration_ = duration;
  r.label_ = alpha_label(alpha);
  return r;
}

Reparametrization Reparametrization::random_monotone(double duration, std::mt19937_64& rng,
                                                     int knots) {
  if (knots < 3) throw std::invalid_argument("random_monotone: need >= 3 knots");
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> x(knots), y(knots);
  double xs = 0.0, ys = 0.0;
  for (int i = 0; i < knots; ++i) {
    xs += u(rng);
    ys += u(rng);
    x[i] = xs;
    y[i] = ys;
  }
  for (int i = 0; i < knots; ++i) {
    x[i] = (i == 0) ? 0.0 : x[i] / xs * duration;
    y[i] = (i == 0) ? 0.0 : y[i] / ys;
  }
  x[knots - 1] = duration;
  y[knots - 1] = 1.0;
  Reparametrization r;
  r.kind_ = Kind::Spline;
  r.duration_ = duration;
  r.spline_ = MonotoneCubic(x, y);
  r.label_ = "monotone-spline";
  return r;
}

double Reparametrization::phi(double t) const {
  if (kind_ == Kind::Spline) return spline_.value(t);
  return std::pow(t / duration_, alpha_);
}

double Reparametrization::dphi(double t) const {
  if (kind_ == Kind::Spline) return spline_.deriv(t);
  const double tc = (alpha_ < 1.0) ? std::max(t, kPowerClamp * duration_) : t;
  return alpha_ / duration_ * std::pow(tc / duration_, alpha_ - 1.0);
}

double Reparametrization::ddphi(double t) const {
  if (kind_ == Kind::Spline) return spline_.deriv2(t);
  if (alpha_ == 1.0) return 0.0;
  const double tc = (alpha_ < 2.0) ? std::max(t, kPowerClamp * duration_) : t;
  return alpha_ * (alpha_ - 1.0) / (duration_ * duration_) *
         std::pow(tc / duration_, alpha_ - 2.0);
}

double Reparametrization::inv(double s) const {
  double lo = 0.0, hi = duration_;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * duration_; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < s) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

SynthTrajectory SynthTrajectory::random_walk(std::uint64_t seed, const RandomWalkConfig& cfg,
                                             double duration) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> s(cfg.knots);
  std::vector<Eigen::Vector3d> pos(cfg.knots), rho(cfg.knots);
  Vec3 p = Vec3::Zero(), r = Vec3::Zero();
  for (int i = 0; i < cfg.knots; ++i) {
    s[i] = static_cast<double>(i) / (cfg.knots - 1);
    pos[i] = p;
    rho[i] = r;
    p += cfg.pos_scale * Vec3(n(rng), n(rng), n(rng));
    r += cfg.rot_scale * Vec3(n(rng), n(rng), n(rng));
  }
  SynthTrajectory traj;
  traj.pos_ = CubicSpline3(s, pos);
  traj.rotvec_ = CubicSpline3(s, rho);
  traj.phi_ = Reparametrization::identity(duration);
  return traj;
}

SynthTrajectory SynthTrajectory::fit(std::span<const double> times,
                                     std::span<const Pose> poses) {
  if (times.size() != poses.size() || times.size() < 2)
    throw std::invalid_argument("SynthTrajectory::fit: need >= 2 timestamped poses");
  const double t0 = times.front();
  const double dur = times.back() - t0;
  if (dur <= 0.0) throw std::invalid_argument("SynthTrajectory::fit: non-increasing times");

  std::vector<double> s(times.size());
  std::vector<Eigen::Vector3d> pos(times.size()), rho(times.size());
  // Cumulative rotation-vector chain; consecutive increments are assumed
  // small, so Exp(rho_k) tracks R_k to second order in the increments.
  Vec3 r = so3::log(poses[0].rotation);
  for (std::size_t i = 0; i < times.size(); ++i) {
    s[i] = (times[i] - t0) / dur;
    pos[i] = poses[i].translation;
    if (i > 0) r += so3::log(poses[i - 1].rotation.transpose() * poses[i].rotation);
    rho[i] = r;
  }
  SynthTrajectory traj;
  traj.pos_ = CubicSpline3(s, pos);
  traj.rotvec_ = CubicSpline3(s, rho);
  traj.phi_ = Reparametrization::identity(dur);
  return traj;
}

Pose SynthTrajectory::pose_path(double s) const {
  Pose p;
  p.manifold = Manifold::SE3;
  p.rotation = so3::exp(rotvec_.value(s));
  p.translation = pos_.value(s);
  return p;
}

Pose SynthTrajectory::pose(double t) const { return pose_path(phi_.phi(t)); }

Vec3 SynthTrajectory::velocity_world(double t) const {
  const double s = phi_.phi(t);
  return pos_.deriv(s) * phi_.dphi(t);
}

Vec3 SynthTrajectory::accel_world(double t) const {
  const double s = phi_.phi(t);
  const double dp = phi_.dphi(t);
  return pos_.deriv2(s) * dp * dp + pos_.deriv(s) * phi_.ddphi(t);
}

Vec3 SynthTrajectory::angular_rate_body(double t) const {
  const double s = phi_.phi(t);
  const Vec3 rho = rotvec_.value(s);
  return so3::right_jacobian(rho) * (rotvec_.deriv(s) * phi_.dphi(t));
}

SynthTrajectory SynthTrajectory::reparametrized(const Reparametrization& phi) const {
  SynthTrajectory out = *this;
  out.phi_ = phi;
  return out;
}

SynthTrajectory reparametrize(const SynthTrajectory& traj, const Reparametrization& phi) {
  return traj.reparametrized(phi);
}

NoiseSpec NoiseSpec::zero() {
  NoiseSpec s;
  s.v0_range = s.gravity_tilt_deg = s.omega_range = s.accel_range = s.polarity_range = 0.0;
  s.gyro_noise_sigma = s.accel_noise_sigma = 0.0;
  s.gyro_bias_sigma0 = s.accel_bias_sigma0 = 0.0;
  s.gyro_bias_drift = s.accel_bias_drift = 0.0;
  return s;
}

NoiseSpec NoiseSpec::toy_default() {
  NoiseSpec s;
  s.gyro_bias_sigma0 = 0.0008;  // rad/s
  s.accel_bias_sigma0 = 0.004;  // m/s^2
  return s;
}

std::vector<RawImuSample> synthesize_imu(const SynthTrajectory& traj, double rate_hz,
                                         const NoiseSpec& noise, std::mt19937_64& rng,
                                         const Vec3& gravity) {
  if (rate_hz < 10.0) throw std::invalid_argument("synthesize_imu: rate must be >= 10 Hz");
  const double dur = traj.duration();
  const double dt = 1.0 / rate_hz;
  std::normal_distribution<double> n(0.0, 1.0);
  auto gauss3 = [&] { return Vec3(n(rng), n(rng), n(rng)); };

  Vec3 bg = noise.gyro_bias_sigma0 * gauss3();
  Vec3 ba = noise.accel_bias_sigma0 * gauss3();
  const double sg = noise.gyro_noise_sigma * std::sqrt(rate_hz);
  const double sa = noise.accel_noise_sigma * std::sqrt(rate_hz);

  std::vector<RawImuSample> out;
  out.reserve(static_cast<std::size_t>(dur * rate_hz) + 2);
  for (double t = 0.0; t <= dur + 1e-12; t += dt) {
    const double tc = std::min(t, dur);
    const Mat3 rot = traj.pose(tc).rotation;
    RawImuSample s;
    s.t = tc;
    s.omega = traj.angular_rate_body(tc) + bg + sg * gauss3();
    s.accel = rot.transpose() * (traj.accel_world(tc) - gravity) + ba + sa * gauss3();
    out.push_back(s);
    bg += noise.gyro_bias_drift * std::sqrt(dt) * gauss3();
    ba += noise.accel_bias_drift * std::sqrt(dt) * gauss3();
    if (tc >= dur) break;
  }
  if (out.back().t < dur - 1e-12) {
    RawImuSample s = out.back();
    s.t = dur;
    out.push_back(s);
  }
  return out;
}

double chamfer_distance(std::span<const double> a, std::span<const double> b, double window) {
  if (a.empty() || b.empty()) throw std::invalid_argument("chamfer_distance: empty set");
  if (window <= 0.0) throw std::invalid_argument("chamfer_distance: window must be positive");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  auto one_sided = [](const std::vector<double>& from, const std::vector<double>& to) {
    double sum = 0.0;
    for (double v : from) {
      auto it = std::lower_bound(to.begin(), to.end(), v);
      double best = std::numeric_limits<double>::infinity();
      if (it != to.end()) best = std::min(best, *it - v);
      if (it != to.begin()) best = std::min(best, v - *(it - 1));
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return 100.0 / window * 0.5 * (one_sided(sa, sb) + one_sided(sb, sa));
}

namespace {

PreintegrationPath gt_reference_path(const SynthTrajectory& traj, double rate_hz) {
  PreintegrationPath path;
  const double dur = traj.duration();
  const double dt = 1.0 / rate_hz;
  for (double t = 0.0; t <= dur + 1e-12; t += dt) {
    const double tc = std::min(t, dur);
    path.samples.push_back({tc, traj.pose(tc), traj.velocity_world(tc)});
    if (tc >= dur) break;
  }
  if (path.samples.back().t < dur - 1e-12)
    path.samples.push_back({dur, traj.pose(dur), traj.velocity_world(dur)});
  return path;
}

// Warped trajectory built the way a recorded sequence would be: replay the
// path under the new speed profile and resample it at the recorder's rate,
// then fit a spline through the resampled poses. The fit keeps velocities
// and accelerations finite where the analytic warp is singular (phi = t^alpha
// with alpha < 1 at t = 0).
SynthTrajectory warped_fit(const SynthTrajectory& base, const Reparametrization& phi,
                           double rate_hz) {
  const std::size_t n = static_cast<std::size_t>(rate_hz * base.duration());
  std::vector<double> times;
  std::vector<Pose> poses;
  times.reserve(n + 1);
  poses.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = base.duration() * static_cast<double>(k) / static_cast<double>(n);
    times.push_back(t);
    poses.push_back(base.pose_path(phi.phi(t)));
  }
  return SynthTrajectory::fit(times, poses);
}

PreintegrationPath preint_reference_path(const SynthTrajectory& traj, const ToyConfig& cfg,
                                         std::mt19937_64& rng) {
  const auto imu = synthesize_imu(traj, cfg.imu_rate_hz, cfg.noise, rng);
  ImuCalibration calib;  // zero bias estimates; the drawn biases become error
  const Pose init = traj.pose(0.0);
  const Vec3 v0 = traj.velocity_world(0.0);
  return preintegrate(imu, init, v0, calib);
}

std::vector<double> event_times(const std::vector<LieEvent>& events) {
  std::vector<double> t;
  t.reserve(events.size());
  for (const auto& e : events) t.push_back(e.tau);
  return t;
}

}  // namespace

std::vector<ToyRow> run_toy_experiment(const ToyConfig& cfg) {
  const bool use_gt = cfg.reference == "gt";
  if (!use_gt && cfg.reference != "preint")
    throw std::invalid_argument("run_toy_experiment: reference must be 'gt' or 'preint'");

  struct Cell {
    double corrected_sum = 0.0;
    double uncorrected_sum = 0.0;
    int count = 0;
  };
  // cell index: [alpha][theta]
  std::vector<std::vector<Cell>> cells(cfg.alphas.size(),
                                       std::vector<Cell>(cfg.thetas.size()));

  for (int w = 0; w < cfg.windows; ++w) {
    std::mt19937_64 rng(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(w));
    const SynthTrajectory base = SynthTrajectory::random_walk(rng(), cfg.walk);

    const PreintegrationPath canon_path =
        use_gt ? gt_reference_path(base, cfg.gt_rate_hz) : preint_reference_path(base, cfg, rng);

    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
      const auto phi = Reparametrization::power(cfg.alphas[ai], 1.0);
      const SynthTrajectory traj = warped_fit(base, phi, cfg.gt_rate_hz);
      const PreintegrationPath traj_path =
          use_gt ? gt_reference_path(traj, cfg.gt_rate_hz)
                 : preint_reference_path(traj, cfg, rng);

      for (std::size_t ti = 0; ti < cfg.thetas.size(); ++ti) {
        EventGenConfig ecfg;
        ecfg.theta = cfg.thetas[ti];
        ecfg.max_events = 100000;
        const auto canon_times = event_times(generate_events(canon_path, ecfg));
        const auto traj_times = event_times(generate_events(traj_path, ecfg));

        std::vector<double> remapped;
        remapped.reserve(traj_times.size());
        for (double t : traj_times) remapped.push_back(phi.phi(t));

        Cell& cell = cells[ai][ti];
        cell.corrected_sum += chamfer_distance(remapped, canon_times, 1.0);
        cell.uncorrected_sum += chamfer_distance(traj_times, canon_times, 1.0);
        cell.count += 1;
      }
    }
  }

  std::vector<ToyRow> rows;
  for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
    for (bool corrected : {false, true}) {
      for (std::size_t ti = 0; ti < cfg.thetas.size(); ++ti) {
        const Cell& cell = cells[ai][ti];
        ToyRow row;
        row.reference = cfg.reference;
        row.phi_label = alpha_label(cfg.alphas[ai]);
        row.corrected = corrected;
        row.theta = cfg.thetas[ti];
        row.chamfer_pct =
            (corrected ? cell.corrected_sum : cell.uncorrected_sum) / std::max(cell.count, 1);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

WindowInputs apply_training_noise(const WindowInputs& in, const NoiseSpec& spec,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Explicit return type: the deduced Eigen expression would dangle.
  auto uni3 = [&](double range) -> Vec3 { return Vec3(u(rng), u(rng), u(rng)) * range; };

  WindowInputs out = in;
  out.v0 += uni3(spec.v0_range);

  // Tilt by up to the configured angle about a random horizontal axis, then
  // apply a random yaw.
  const double az = 2.0 * M_PI * u01(rng);
  const Vec3 axis(std::cos(az), std::sin(az), 0.0);
  const double tilt = spec.gravity_tilt_deg * M_PI / 180.0 * u01(rng);
  const double yaw = 2.0 * M_PI * u01(rng);
  if (spec.gravity_tilt_deg > 0.0) {
    out.gravity_frame =
        so3::exp(Vec3(0, 0, yaw)) * so3::exp(axis * tilt) * in.gravity_frame;
  }

  for (auto& s : out.samples) {
    s.omega += uni3(spec.omega_range);
    s.accel += uni3(spec.accel_range);
  }
  for (auto& p : out.polarities) {
    Vec6 v = p.vec() + (Vec6() << uni3(spec.polarity_range), uni3(spec.polarity_range)).finished();
    const double n = v.norm();
    if (n > 0.0) v /= n;
    p = Twist::FromVec(p.manifold, v);
  }
  return out;
}

}  // namespace lieio
