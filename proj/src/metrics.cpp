#include "lieio/metrics.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lieio/ekf.hpp"

namespace lieio {

AlignedTrajectoryPair associate(std::span<const TrajPoint> estimate,
                                std::span<const TrajPoint> ground_truth) {
  if (estimate.empty() || ground_truth.size() < 2)
    throw std::invalid_argument("associate: empty trajectory");

  AlignedTrajectoryPair out;
  for (const auto& e : estimate) {
    if (e.t < ground_truth.front().t - 1e-9 || e.t > ground_truth.back().t + 1e-9) continue;
    auto it = std::lower_bound(ground_truth.begin(), ground_truth.end(), e.t,
                               [](const TrajPoint& p, double t) { return p.t < t; });
    std::size_t i = static_cast<std::size_t>(std::distance(ground_truth.begin(), it));
    if (i == 0) i = 1;
    if (i >= ground_truth.size()) i = ground_truth.size() - 1;
    const TrajPoint& a = ground_truth[i - 1];
    const TrajPoint& b = ground_truth[i];
    const double s = (e.t - a.t) / (b.t - a.t);

    out.times.push_back(e.t);
    out.est_rot.push_back(e.rotation);
    out.est_pos.push_back(e.position);
    out.gt_pos.push_back((1.0 - s) * a.position + s * b.position);
    out.gt_rot.push_back(a.rotation *
                         so3::exp(s * so3::log(a.rotation.transpose() * b.rotation)));
  }
  if (out.times.empty()) throw std::invalid_argument("associate: no temporal overlap");
  return out;
}

void umeyama_align(AlignedTrajectoryPair& pair) {
  const Eigen::Index n = static_cast<Eigen::Index>(pair.size());
  Eigen::Matrix3Xd src(3, n), dst(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    src.col(i) = pair.est_pos[static_cast<std::size_t>(i)];
    dst.col(i) = pair.gt_pos[static_cast<std::size_t>(i)];
  }
  const Eigen::Matrix4d sim = Eigen::umeyama(src, dst, true);
  const Mat3 sr = sim.topLeftCorner<3, 3>();
  const Vec3 tr = sim.topRightCorner<3, 1>();
  const double scale = sr.col(0).norm();
  const Mat3 r = sr / scale;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    pair.est_pos[i] = sr * pair.est_pos[i] + tr;
    pair.est_rot[i] = r * pair.est_rot[i];
  }
}

double ate(const AlignedTrajectoryPair& pair) {
  if (pair.size() == 0) throw std::invalid_argument("ate: empty pair");
  double acc = 0.0;
  for (std::size_t i = 0; i < pair.size(); ++i)
    acc += (pair.est_pos[i] - pair.gt_pos[i]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(pair.size()));
}

double rte(const AlignedTrajectoryPair& pair, double delta_t, bool yaw_aligned) {
  if (pair.size() < 2) throw std::invalid_argument("rte: empty pair");
  if (delta_t >= pair.times.back() - pair.times.front())
    throw std::invalid_argument("rte: window longer than trajectory");

  double acc = 0.0;
  std::size_t count = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const double target = pair.times[i] + delta_t;
    if (target > pair.times.back() + 1e-9) break;
    while (j + 1 < pair.size() && pair.times[j] < target - 1e-9) ++j;
    const Vec3 d_gt = pair.gt_pos[j] - pair.gt_pos[i];
    const Vec3 d_est = pair.est_pos[j] - pair.est_pos[i];
    Mat3 align = Mat3::Identity();
    if (yaw_aligned)
      align = yaw_rotation(pair.gt_rot[i]) * yaw_rotation(pair.est_rot[i]).transpose();
    acc += (d_gt - align * d_est).squaredNorm();
    ++count;
  }
  if (count == 0) throw std::invalid_argument("rte: no complete window");
  return std::sqrt(acc / static_cast<double>(count));
}

namespace {
double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}
}  // namespace

double aye(const AlignedTrajectoryPair& pair) {
  if (pair.size() == 0) throw std::invalid_argument("aye: empty pair");
  double acc = 0.0;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const double d = wrap_angle(yaw_of(pair.est_rot[i]) - yaw_of(pair.gt_rot[i]));
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pair.size())) * 180.0 / M_PI;
}

double drift_percent(const AlignedTrajectoryPair& pair) {
  if (pair.size() < 2) throw std::invalid_argument("drift: need >= 2 samples");
  double length = 0.0;
  for (std::size_t i = 1; i < pair.size(); ++i)
    length += (pair.gt_pos[i] - pair.gt_pos[i - 1]).norm();
  if (length <= 0.0) throw std::invalid_argument("drift: zero-length ground truth");
  return 100.0 * (pair.est_pos.back() - pair.gt_pos.back()).norm() / length;
}

double displacement_mse(std::span<const Vec3> predicted, std::span<const Vec3> actual) {
  if (predicted.empty() || predicted.size() != actual.size())
    throw std::invalid_argument("displacement_mse: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    acc += (predicted[i] - actual[i]).squaredNorm();
  return acc / static_cast<double>(predicted.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double hi = values[mid];
  const double lo = *std::max_element(values.begin(),
                                      values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace lieio
