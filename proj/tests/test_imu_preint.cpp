#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lieio/imu_preint.hpp>
#include <lieio/synth.hpp>

#include <random>
#include <vector>

using namespace lieio;

namespace {

std::vector<RawImuSample> constant_stream(const Vec3& omega, const Vec3& accel,
                                          double dt, int n) {
  std::vector<RawImuSample> out;
  for (int i = 0; i <= n; ++i) out.push_back({i * dt, omega, accel});
  return out;
}

}  // namespace

TEST_CASE("correct_sample identity calibration passes gyro through") {
  ImuCalibration calib;
  const auto c = correct_sample({0.0, Vec3(0.1, 0, 0), Vec3::Zero()}, calib);
  CHECK((c.omega - Vec3(0.1, 0, 0)).norm() <= 1e-15);
}

TEST_CASE("correct_sample cancels gravity for a level stationary IMU") {
  ImuCalibration calib;
  const auto c = correct_sample({0.0, Vec3::Zero(), -calib.gravity}, calib);
  CHECK(c.accel.norm() <= 1e-15);
}

TEST_CASE("correct_sample matches elementwise re-evaluation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    ImuCalibration calib;
    calib.bias_gyro = Vec3(u(rng), u(rng), u(rng)) * 0.01;
    calib.bias_accel = Vec3(u(rng), u(rng), u(rng)) * 0.1;
    calib.gravity_frame = so3::exp(Vec3(u(rng), u(rng), u(rng)) * 0.1);
    RawImuSample raw{0.0, Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
    const auto c = correct_sample(raw, calib);
    for (int i = 0; i < 3; ++i) {
      double w = 0, a = 0;
      for (int j = 0; j < 3; ++j) {
        w += calib.gravity_frame(i, j) * (raw.omega(j) - calib.bias_gyro(j));
        a += calib.gravity_frame(i, j) * (raw.accel(j) - calib.bias_accel(j));
      }
      a += calib.gravity(i);
      CHECK(c.omega(i) == doctest::Approx(w).epsilon(1e-14));
      CHECK(c.accel(i) == doctest::Approx(a).epsilon(1e-14));
    }
  }
}

TEST_CASE("stationary stream integrates to a constant state") {
  ImuCalibration calib;
  const auto raws = constant_stream(Vec3::Zero(), -calib.gravity, 0.005, 200);
  const auto path = preintegrate(raws, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);
  const auto& last = path.samples.back();
  CHECK(last.velocity.norm() <= 1e-12);
  CHECK(last.pose.translation.norm() <= 1e-12);
  CHECK((last.pose.rotation - Mat3::Identity()).norm() <= 1e-12);
}

TEST_CASE("constant acceleration matches the discrete-sum oracle") {
  ImuCalibration calib;
  const Vec3 a(0.5, 0, 0);
  const double dt = 0.01;
  const int n = 100;
  const auto raws = constant_stream(Vec3::Zero(), a - calib.gravity, dt, n);
  const auto path = preintegrate(raws, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);

  Vec3 v = Vec3::Zero(), p = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    p += v * dt + 0.5 * a * dt * dt;
    v += a * dt;
  }
  CHECK((path.samples.back().pose.translation - p).norm() <= 1e-12);
  CHECK((path.samples.back().velocity - v).norm() <= 1e-12);
  // First-order convergence to the continuum value 1/2 a T^2.
  CHECK((p - 0.5 * a).norm() <= 0.5 * a.norm() * dt * 1.5);
}

TEST_CASE("constant rotation rate composes exactly") {
  ImuCalibration calib;
  const Vec3 w(0, 0, 0.7);
  const auto raws = constant_stream(w, -calib.gravity, 0.005, 200);
  const auto path = preintegrate(raws, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);
  CHECK((path.samples.back().pose.rotation - so3::exp(w)).norm() <= 1e-9);
}

TEST_CASE("preintegration rejects malformed streams") {
  ImuCalibration calib;
  std::vector<RawImuSample> one{{0.0, Vec3::Zero(), Vec3::Zero()}};
  CHECK_THROWS_AS(preintegrate(one, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib),
                  std::invalid_argument);
  std::vector<RawImuSample> bad{{0.0, {}, {}}, {0.0, {}, {}}};
  CHECK_THROWS_AS(preintegrate(bad, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib),
                  std::invalid_argument);
}

TEST_CASE("concatenated windows reproduce the single run bitwise") {
  // Streams kept short enough that no renormalization boundary is crossed.
  auto traj = SynthTrajectory::random_walk(99);
  std::mt19937_64 rng(4);
  const auto raws = synthesize_imu(traj, 400.0, NoiseSpec::zero(), rng);
  ImuCalibration calib;
  const auto whole = preintegrate(raws, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);

  const std::size_t cut = raws.size() / 2;
  std::vector<RawImuSample> a(raws.begin(), raws.begin() + cut + 1);
  std::vector<RawImuSample> b(raws.begin() + cut, raws.end());
  const auto pa = preintegrate(a, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);
  const auto pb = preintegrate(b, pa.samples.back().pose, pa.samples.back().velocity, calib);
  const auto& tail = whole.samples.back();
  CHECK((pb.samples.back().pose.rotation - tail.pose.rotation).norm() == 0.0);
  CHECK((pb.samples.back().pose.translation - tail.pose.translation).norm() == 0.0);
  CHECK((pb.samples.back().velocity - tail.velocity).norm() == 0.0);
}

TEST_CASE("terminal error shrinks at first order in dt") {
  auto traj = SynthTrajectory::random_walk(5);
  ImuCalibration calib;
  auto terminal_error = [&](double rate) {
    std::mt19937_64 rng(0);
    const auto raws = synthesize_imu(traj, rate, NoiseSpec::zero(), rng);
    Pose init{Manifold::SE3, traj.pose(0).rotation, traj.pose(0).translation};
    const auto path = preintegrate(raws, init, traj.velocity_world(0), calib);
    return (path.samples.back().pose.translation - traj.pose(traj.duration()).translation).norm();
  };
  const double e1 = terminal_error(500);
  const double e2 = terminal_error(1000);
  CHECK(e2 <= 0.5 * e1 * 1.2);
  CHECK(e2 >= 0.5 * e1 * 0.8);
}

TEST_CASE("gravity-aligned correction leaves a stationary stream at rest") {
  // Tilted mount: the raw accel is -R_g^T g in the body frame; exact
  // calibration has to null the integrated displacement regardless of R_g.
  ImuCalibration calib;
  calib.gravity_frame = so3::exp(Vec3(0.2, -0.1, 0.4));
  const Vec3 raw_accel = -(calib.gravity_frame.transpose() * calib.gravity);
  const auto raws = constant_stream(Vec3::Zero(), raw_accel, 0.002, 500);

  // Correction first: the specific force maps to zero, so integrating the
  // corrected stream with no further gravity compensation stays at rest.
  std::vector<RawImuSample> corrected;
  for (const auto& r : raws) {
    const auto c = correct_sample(r, calib);
    corrected.push_back({c.t, c.omega, c.accel});
  }
  ImuCalibration plain;
  plain.gravity.setZero();
  const auto path = preintegrate(corrected, Pose::Identity(Manifold::SE3), Vec3::Zero(), plain);
  CHECK(path.samples.back().pose.translation.norm() <= 1e-9);
}

TEST_CASE("sample_reference is exact at nodes and geodesic between them") {
  ImuCalibration calib;
  const auto raws = constant_stream(Vec3(0, 0, 0.5), Vec3(0.2, 0, 0) - calib.gravity, 0.01, 50);
  const auto path = preintegrate(raws, Pose::Identity(Manifold::SE3), Vec3::Zero(), calib);
  const auto& node = path.samples[10];
  const Pose at = sample_reference(path, node.t);
  CHECK((at.rotation - node.pose.rotation).norm() == 0.0);
  CHECK((at.translation - node.pose.translation).norm() == 0.0);

  const auto& a = path.samples[10];
  const auto& b = path.samples[11];
  const double tm = 0.5 * (a.t + b.t);
  const Pose mid = sample_reference(path, tm);
  const Pose ref = geodesic_interp(a.pose, b.pose, a.t, b.t, tm);
  CHECK((mid.rotation - ref.rotation).norm() <= 1e-14);
  CHECK((mid.translation - ref.translation).norm() <= 1e-14);

  CHECK_THROWS_AS(sample_reference(path, -1.0), std::out_of_range);
}

TEST_CASE("interpolate_corrected is linear and clamped") {
  std::vector<CorrectedImuSample> s{{0.0, Vec3(1, 0, 0), Vec3(0, 2, 0)},
                                    {1.0, Vec3(3, 0, 0), Vec3(0, 4, 0)}};
  const auto mid = interpolate_corrected(s, 0.25);
  CHECK(mid.omega(0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(mid.accel(1) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(interpolate_corrected(s, -5.0).omega(0) == doctest::Approx(1.0));
  CHECK(interpolate_corrected(s, 5.0).omega(0) == doctest::Approx(3.0));
}
