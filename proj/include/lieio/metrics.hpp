#pragma once

#include <span>
#include <vector>

#include "lieio/lie_core.hpp"

// Trajectory evaluation: ATE, RTE, AYE, drift and displacement MSE, plus the
// association / alignment pre-steps.

namespace lieio {

struct TrajPoint {
  double t = 0.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 position = Vec3::Zero();
};

struct AlignedTrajectoryPair {
  std::vector<double> times;
  std::vector<Mat3> est_rot, gt_rot;
  std::vector<Vec3> est_pos, gt_pos;
  std::size_t size() const { return times.size(); }
};

// Resamples the ground truth at the estimate's timestamps (linear position,
// geodesic rotation). Estimate samples outside the ground-truth span are
// dropped; throws std::invalid_argument when nothing overlaps.
AlignedTrajectoryPair associate(std::span<const TrajPoint> estimate,
                                std::span<const TrajPoint> ground_truth);

// Similarity (Umeyama) alignment of the estimated positions onto the ground
// truth, applied in place.
void umeyama_align(AlignedTrajectoryPair& pair);

// RMSE of position errors, meters.
double ate(const AlignedTrajectoryPair& pair);

// RMSE of windowed displacement differences with the estimate's window
// displacement rotated by R_gamma * Rhat_gamma^T; yaw_aligned=false uses the
// identity instead (with a 60 s window this is the RoNIN-style variant).
double rte(const AlignedTrajectoryPair& pair, double delta_t = 1.0, bool yaw_aligned = true);

// RMSE of wrapped yaw differences, degrees.
double aye(const AlignedTrajectoryPair& pair);

// Final position error over total ground-truth path length, percent.
double drift_percent(const AlignedTrajectoryPair& pair);

double displacement_mse(std::span<const Vec3> predicted, std::span<const Vec3> actual);

double median(std::vector<double> values);

}  // namespace lieio
