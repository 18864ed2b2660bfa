#include "lieio/imu_preint.hpp"

#include <algorithm>

namespace lieio {

CorrectedImuSample correct_sample(const RawImuSample& raw, const ImuCalibration& calib) {
  CorrectedImuSample out;
  out.t = raw.t;
  out.omega = calib.gravity_frame * (raw.omega - calib.bias_gyro);
  out.accel = calib.gravity_frame * (raw.accel - calib.bias_accel) + calib.gravity;
  return out;
}

PreintegrationPath preintegrate(std::span<const RawImuSample> raws, const Pose& init_pose,
                                const Vec3& v0, const ImuCalibration& calib) {
  if (raws.size() < 2) throw std::invalid_argument("preintegrate: need at least 2 samples");

  PreintegrationPath path;
  path.v0 = v0;
  path.samples.reserve(raws.size());

  Mat3 rot = init_pose.rotation;
  Vec3 pos = init_pose.translation;
  Vec3 vel = v0;
  const Vec3& bg = calib.bias_gyro;
  const Vec3& ba = calib.bias_accel;
  const Vec3& g = calib.gravity;

  path.samples.push_back({raws[0].t, Pose{Manifold::SE3, rot, pos}, vel});
  for (size_t i = 0; i + 1 < raws.size(); ++i) {
    const double dt = raws[i + 1].t - raws[i].t;
    if (dt <= 0.0) throw std::invalid_argument("preintegrate: non-monotone timestamps");
    const Vec3 acc_w = rot * (raws[i].accel - ba);
    pos += vel * dt + 0.5 * g * dt * dt + 0.5 * acc_w * dt * dt;
    vel += acc_w * dt + g * dt;
    rot = rot * so3::exp((raws[i].omega - bg) * dt);
    if ((i + 1) % 1000 == 0) rot = so3::orthonormalize(rot);
    path.samples.push_back({raws[i + 1].t, Pose{Manifold::SE3, rot, pos}, vel});
  }
  return path;
}

Pose sample_reference(const PreintegrationPath& path, double t) {
  const auto& s = path.samples;
  if (s.empty() || t < s.front().t || t > s.back().t)
    throw std::out_of_range("sample_reference: t outside path range");
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const PreintegrationPath::Node& n, double v) { return n.t < v; });
  if (it != s.end() && it->t == t) return it->pose;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return geodesic_interp(a.pose, b.pose, a.t, b.t, t);
}

CorrectedImuSample interpolate_corrected(std::span<const CorrectedImuSample> samples, double t) {
  if (samples.empty()) return {};
  if (t <= samples.front().t) return samples.front();
  if (t >= samples.back().t) return samples.back();
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const CorrectedImuSample& s, double v) { return s.t < v; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  CorrectedImuSample out;
  out.t = t;
  out.omega = (1.0 - s) * a.omega + s * b.omega;
  out.accel = (1.0 - s) * a.accel + s * b.accel;
  return out;
}

}  // namespace lieio
