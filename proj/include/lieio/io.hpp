#pragma once

#include <Eigen/Geometry>
#include <map>
#include <string>
#include <vector>

#include "lieio/ekf.hpp"
#include "lieio/event_gen.hpp"
#include "lieio/event_stack.hpp"
#include "lieio/metrics.hpp"

// File formats: IMU / ground-truth CSV ingestion, line-delimited event
// records, trajectory CSV and report output. Parse errors carry line numbers.

namespace lieio {

struct GtSample {
  double t = 0.0;
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

// CSV with header t,wx,wy,wz,ax,ay,az. Requires strictly increasing t.
std::vector<RawImuSample> read_imu_csv(const std::string& path);
void write_imu_csv(const std::string& path, std::span<const RawImuSample> samples);

// CSV with header t,qw,qx,qy,qz,px,py,pz,vx,vy,vz. Quaternions must be unit
// within 1e-6.
std::vector<GtSample> read_gt_csv(const std::string& path);
void write_gt_csv(const std::string& path, std::span<const GtSample> samples);

std::vector<TrajPoint> to_traj_points(std::span<const GtSample> samples);
std::vector<TrajPoint> to_traj_points(std::span<const TrajectorySample> samples);

// One JSON record per line:
//   {"t": ..., "p": [6] or null, "ref": {"q": [4], "t": [3]}, "w": [3], "a": [3]}
// Doubles round-trip bit-exactly.
void write_event_log(const std::string& path, std::span<const LieEvent> events,
                     Manifold manifold);
std::vector<LieEvent> read_event_log(const std::string& path);

void write_trajectory_csv(const std::string& path, std::span<const TrajectorySample> traj);
std::vector<TrajectorySample> read_trajectory_csv(const std::string& path);

// Row-major B x 12 stack dump, one bin per CSV row.
void write_stack_csv(const std::string& path, const EventStack& stack);

// Flat key/value report, CSV (two columns) or JSON object by extension.
void write_report(const std::string& path, const std::map<std::string, double>& values);

}  // namespace lieio
