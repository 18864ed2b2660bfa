#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lieio/event_stack.hpp>

#include <algorithm>
#include <random>
#include <vector>

using namespace lieio;

namespace {

std::mt19937_64 rng(99);

std::vector<LieEvent> random_events(int m) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<LieEvent> events;
  for (int j = 0; j < m; ++j) {
    LieEvent e;
    e.tau = j * 0.01;
    e.omega = Vec3(u(rng), u(rng), u(rng));
    e.accel = Vec3(u(rng), u(rng), u(rng));
    if (j > 0) {
      Twist p{Manifold::SE3, Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
      const double n = p.norm();
      p.rot /= n;
      p.trans /= n;
      e.polarity = p;
    }
    events.push_back(e);
  }
  return events;
}

// Direct double-loop re-implementation of the binning rule.
Eigen::MatrixXd oracle_stack(const std::vector<LieEvent>& events, int bins) {
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(bins, 12);
  const int m = static_cast<int>(events.size());
  if (m == 0) return data;
  std::vector<int> n_b(bins, 0);
  std::vector<Eigen::Matrix<double, 6, 1>> psum(bins, Eigen::Matrix<double, 6, 1>::Zero());
  for (int j = 1; j <= m; ++j) {
    const int b = (m == 1) ? 0 : static_cast<int>((j - 1) * (bins - 1) / (m - 1));
    const auto& e = events[j - 1];
    data.block<1, 3>(b, 0) += e.accel.transpose();
    data.block<1, 3>(b, 3) += e.omega.transpose();
    n_b[b] += 1;
    if (e.polarity) psum[b] += e.polarity->vec();
  }
  for (int b = 0; b < bins; ++b) {
    if (n_b[b] == 0) continue;
    data.block<1, 6>(b, 0) /= n_b[b];
    const double l = psum[b].norm();
    if (l >= 1e-12) data.block<1, 6>(b, 6) = (psum[b] / l).transpose();
  }
  return data;
}

}  // namespace

TEST_CASE("empty input gives an all-zero stack") {
  const auto s = build_stack({}, 200);
  CHECK(s.data.rows() == 200);
  CHECK(s.data.cols() == 12);
  CHECK(s.data.norm() == 0.0);
}

TEST_CASE("single event lands in bin 0") {
  const auto events = random_events(1);
  const auto s = build_stack(events, 200);
  CHECK(s.occupancy[0] == 1);
  CHECK((s.data.block<1, 3>(0, 0).transpose() - events[0].accel).norm() <= 1e-15);
  CHECK(s.data.bottomRows(199).norm() == 0.0);
}

TEST_CASE("M equals B collapses to the identity placement") {
  const auto events = random_events(200);
  const auto s = build_stack(events, 200);
  for (int b = 0; b < 200; ++b) {
    CHECK(s.occupancy[b] == 1);
    CHECK((s.data.block<1, 3>(b, 0).transpose() - events[b].accel).norm() <= 1e-15);
  }
}

TEST_CASE("stack equals the double-loop oracle for all sizes") {
  for (int m : {0, 1, 37, 200, 400}) {
    const auto events = random_events(m);
    const auto s = build_stack(events, 200);
    CHECK((s.data - oracle_stack(events, 200)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("bin indices stay in range and occupancy sums to M") {
  for (int m : {2, 3, 10, 199, 201, 1000}) {
    const auto events = random_events(m);
    const auto s = build_stack(events, 200);
    int total = 0;
    for (int b = 0; b < 200; ++b) total += s.occupancy[b];
    CHECK(total == m);
  }
}

TEST_CASE("occupied bins carry unit polarity norms") {
  const auto events = random_events(400);
  const auto s = build_stack(events, 200);
  for (int b = 0; b < 200; ++b) {
    if (s.occupancy[b] == 0) continue;
    const double n = s.data.block<1, 6>(b, 6).norm();
    if (n > 0) CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("in-bin permutation leaves the stack unchanged") {
  auto events = random_events(400);  // two events per bin
  const auto a = build_stack(events, 200);
  auto bin_of = [&](std::size_t idx) {  // idx 0-based, j = idx + 1
    return idx * 199 / 399;
  };
  for (std::size_t j = 1; j + 1 < events.size(); ++j) {
    if (bin_of(j) == bin_of(j + 1) && events[j].polarity && events[j + 1].polarity) {
      std::swap(events[j], events[j + 1]);
      ++j;
    }
  }
  const auto b = build_stack(events, 200);
  CHECK((a.data - b.data).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("antipodal polarities cancel to a zero block") {
  auto events = random_events(3);
  events[2].polarity = *events[1].polarity;
  events[2].polarity->rot *= -1;
  events[2].polarity->trans *= -1;
  // Place both in the same bin.
  const auto s = build_stack(events, 1);
  CHECK(s.data.block<1, 6>(0, 6).norm() == 0.0);
}

TEST_CASE("initial event contributes no polarity") {
  auto events = random_events(2);
  const auto s = build_stack(events, 2);
  // Bin 0 holds only the polarity-free initial event.
  CHECK(s.occupancy[0] == 1);
  CHECK(s.data.block<1, 6>(0, 6).norm() == 0.0);
  CHECK(s.data.block<1, 6>(1, 6).norm() == doctest::Approx(1.0).epsilon(1e-9));
}
