#include "lieio/event_stack.hpp"

#include <cmath>
#include <stdexcept>

namespace lieio {

EventStack build_stack(std::span<const LieEvent> events, int bins) {
  if (bins < 1) throw std::invalid_argument("build_stack: bins must be positive");

  EventStack stack;
  stack.bins = bins;
  stack.data = Eigen::MatrixXd::Zero(bins, 12);
  stack.occupancy.assign(static_cast<std::size_t>(bins), 0);

  const std::size_t m = events.size();
  if (m == 0) return stack;

  for (std::size_t j = 1; j <= m; ++j) {
    // Integer arithmetic keeps the map exact: with m == bins every event
    // lands in its own bin instead of drifting off by floating-point floor.
    const int b = (m >= 2) ? static_cast<int>((j - 1) * static_cast<std::size_t>(bins - 1) /
                                              (m - 1))
                           : 0;
    const LieEvent& e = events[j - 1];
    stack.occupancy[b] += 1;
    stack.data.block<1, 3>(b, 0) += e.accel.transpose();
    stack.data.block<1, 3>(b, 3) += e.omega.transpose();
    if (e.polarity) stack.data.block<1, 6>(b, 6) += e.polarity->vec().transpose();
  }

  for (int b = 0; b < bins; ++b) {
    if (stack.occupancy[b] == 0) continue;
    stack.data.block<1, 6>(b, 0) /= stack.occupancy[b];
    const double l = stack.data.block<1, 6>(b, 6).norm();
    if (l < 1e-12) {
      stack.data.block<1, 6>(b, 6).setZero();
    } else {
      stack.data.block<1, 6>(b, 6) /= l;
    }
  }
  return stack;
}

}  // namespace lieio
