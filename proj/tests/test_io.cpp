#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lieio/io.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using namespace lieio;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lieio_test_" + name)).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("imu csv round-trips bit-exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<RawImuSample> samples;
  for (int i = 0; i < 100; ++i)
    samples.push_back({0.005 * i + u(rng) * 1e-4, Vec3(u(rng), u(rng), u(rng)),
                       Vec3(u(rng), u(rng), u(rng))});
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });
  FileGuard g{tmp_path("imu.csv")};
  write_imu_csv(g.path, samples);
  const auto back = read_imu_csv(g.path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].t == samples[i].t);
    CHECK(back[i].omega == samples[i].omega);
    CHECK(back[i].accel == samples[i].accel);
  }
}

TEST_CASE("imu csv parse errors carry the line number") {
  FileGuard g{tmp_path("bad.csv")};
  {
    std::ofstream f(g.path);
    f << "t,wx,wy,wz,ax,ay,az\n0.0,0,0,0,0,0,0\nnot,a,number,0,0,0,0\n";
  }
  try {
    read_imu_csv(g.path);
    FAIL("expected parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("imu csv rejects non-monotone timestamps") {
  FileGuard g{tmp_path("mono.csv")};
  {
    std::ofstream f(g.path);
    f << "t,wx,wy,wz,ax,ay,az\n0.5,0,0,0,0,0,0\n0.4,0,0,0,0,0,0\n";
  }
  CHECK_THROWS_AS(read_imu_csv(g.path), std::runtime_error);
}

TEST_CASE("gt csv round-trips and validates quaternions") {
  std::vector<GtSample> gt;
  for (int i = 0; i < 10; ++i) {
    GtSample s;
    s.t = 0.1 * i;
    s.q = Eigen::Quaterniond(Eigen::AngleAxisd(0.1 * i, Vec3(0, 0, 1)));
    s.p = Vec3(i, 2.0 * i, 0);
    s.v = Vec3(1, 2, 0);
    gt.push_back(s);
  }
  FileGuard g{tmp_path("gt.csv")};
  write_gt_csv(g.path, gt);
  const auto back = read_gt_csv(g.path);
  REQUIRE(back.size() == gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    CHECK(back[i].q.coeffs() == gt[i].q.coeffs());
    CHECK(back[i].p == gt[i].p);
  }

  FileGuard bad{tmp_path("badq.csv")};
  {
    std::ofstream f(bad.path);
    f << "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz\n0.0,2,0,0,0,0,0,0,0,0,0\n";
  }
  CHECK_THROWS_AS(read_gt_csv(bad.path), std::runtime_error);
}

TEST_CASE("event log round-trips bit-exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<LieEvent> events;
  for (int i = 0; i < 50; ++i) {
    LieEvent e;
    e.tau = 0.01 * i + 1e-5 * u(rng);
    e.ref.rotation = so3::exp(Vec3(u(rng), u(rng), u(rng)));
    e.ref.translation = Vec3(u(rng), u(rng), u(rng));
    e.omega = Vec3(u(rng), u(rng), u(rng));
    e.accel = Vec3(u(rng), u(rng), u(rng));
    if (i > 0) {
      Twist p{Manifold::SE3, Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
      const double n = p.norm();
      p.rot /= n;
      p.trans /= n;
      e.polarity = p;
    }
    events.push_back(e);
  }
  FileGuard g{tmp_path("events.jsonl")};
  write_event_log(g.path, events, Manifold::SE3);
  const auto back = read_event_log(g.path);
  REQUIRE(back.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(back[i].tau == events[i].tau);
    CHECK(back[i].omega == events[i].omega);
    CHECK(back[i].accel == events[i].accel);
    CHECK(back[i].polarity.has_value() == events[i].polarity.has_value());
    if (back[i].polarity) {
      CHECK(back[i].polarity->vec() == events[i].polarity->vec());
    }
    CHECK((back[i].ref.translation - events[i].ref.translation).norm() == 0.0);
    CHECK((back[i].ref.rotation - events[i].ref.rotation).norm() <= 1e-15);
  }
}

TEST_CASE("trajectory csv round-trips bit-exactly") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<TrajectorySample> traj;
  for (int i = 0; i < 20; ++i) {
    TrajectorySample s;
    s.t = 0.05 * i;
    s.rotation = so3::exp(Vec3(u(rng), u(rng), u(rng)));
    s.position = Vec3(u(rng), u(rng), u(rng));
    s.velocity = Vec3(u(rng), u(rng), u(rng));
    s.bias_gyro = 0.01 * Vec3(u(rng), u(rng), u(rng));
    s.bias_accel = 0.1 * Vec3(u(rng), u(rng), u(rng));
    traj.push_back(s);
  }
  FileGuard g{tmp_path("traj.csv")};
  write_trajectory_csv(g.path, traj);
  const auto back = read_trajectory_csv(g.path);
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(back[i].t == traj[i].t);
    CHECK(back[i].position == traj[i].position);
    CHECK(back[i].velocity == traj[i].velocity);
    CHECK(back[i].bias_gyro == traj[i].bias_gyro);
    // Rotation passes through a quaternion; orthonormal to high precision.
    CHECK((back[i].rotation - traj[i].rotation).norm() <= 1e-12);
  }
}

TEST_CASE("report writer emits csv or json by extension") {
  FileGuard gc{tmp_path("report.csv")};
  FileGuard gj{tmp_path("report.json")};
  write_report(gc.path, {{"ate_m", 0.125}, {"rte_m", 0.5}});
  write_report(gj.path, {{"ate_m", 0.125}});
  std::ifstream fc(gc.path);
  std::string all((std::istreambuf_iterator<char>(fc)), std::istreambuf_iterator<char>());
  CHECK(all.find("ate_m") != std::string::npos);
  CHECK(all.find("0.125") != std::string::npos);
  std::ifstream fj(gj.path);
  std::string js((std::istreambuf_iterator<char>(fj)), std::istreambuf_iterator<char>());
  CHECK(js.find('{') != std::string::npos);
}

TEST_CASE("missing file raises a readable error") {
  CHECK_THROWS_AS(read_imu_csv("/nonexistent/path/imu.csv"), std::runtime_error);
}
