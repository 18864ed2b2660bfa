#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "lieio/event_gen.hpp"

// Fixed-size B x 12 tensor consumed by displacement priors. Channels are
// [accel(3) | omega(3) | polarity(6)] per bin; accel/omega are averaged per
// bin, polarities summed then renormalized to unit norm.

namespace lieio {

struct EventStack {
  int bins = 200;
  Eigen::MatrixXd data;            // bins x 12
  std::vector<int> occupancy;      // n_b per bin
};

// Bin index j* = floor((j-1)/(M-1) * (B-1)) for M >= 2; the single event of
// an M = 1 stack lands in bin 0. The polarity-free initial event contributes
// to the accel/omega channels only. A summed polarity below 1e-12 in norm
// (antipodal cancellation) leaves the bin's polarity block zero.
EventStack build_stack(std::span<const LieEvent> events, int bins = 200);

}  // namespace lieio
