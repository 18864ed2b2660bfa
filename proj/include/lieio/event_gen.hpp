#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lieio/imu_preint.hpp"
#include "lieio/lie_core.hpp"

// Generalized level-crossing on the reference signal: event timestamps, Lie
// polarities and reference reconstruction, on R^3, SO(3)xR^3 and SE(3), plus
// the 1-D scalar specialization.

namespace lieio {

struct EventGenConfig {
  double theta = 0.01;                  // contrast threshold (mixed rad/m norm)
  Manifold manifold = Manifold::SE3;
  double solver_tol = 1e-9;             // bisection tolerance, seconds
  std::size_t max_events = 2000;        // guard against theta too small
};

struct LieEvent {
  double tau = 0.0;
  std::optional<Twist> polarity;  // unit norm; absent for the initial event
  Pose ref;                       // reference pose x_ref at tau
  Vec3 omega = Vec3::Zero();      // corrected IMU, linearly interpolated at tau
  Vec3 accel = Vec3::Zero();
};

// Level-crossing generator on a piecewise-geodesic reference signal. The
// first event is at the window start and carries no polarity. Corrected IMU
// samples, when given, are attached to each event by linear interpolation.
// Throws std::runtime_error when the max-events guard trips.
std::vector<LieEvent> generate_events(const PreintegrationPath& reference,
                                      const EventGenConfig& cfg,
                                      std::span<const CorrectedImuSample> corrected = {});

struct ScalarEvent {
  double tau = 0.0;
  int polarity = 0;  // -1/+1; 0 for the initial event
  double ref = 0.0;  // reference value x_ref
};

// 1-D specialization: level-crossing on log(x) for a positive piecewise
// sampled signal; reduces to the Lie generator on the 1-D multiplicative
// group. Throws std::domain_error on a non-positive sample.
std::vector<ScalarEvent> generate_events_scalar(
    std::span<const std::pair<double, double>> signal, double theta,
    double solver_tol = 1e-9, std::size_t max_events = 100000);

// x_ref_j = x_ref_{j-1} o Exp(theta p_j); returns [x0, ...] with one entry
// per polarity-carrying event.
std::vector<Pose> reconstruct_references(std::span<const LieEvent> events, double theta,
                                         const Pose& x0);

// Rotates the rotational and translational blocks of a polarity into the
// given frame; norm preserved.
Twist gravity_align_polarity(const Twist& p, const Mat3& frame);

namespace detail {

// Generic level-crossing engine shared by the Lie and scalar generators.
// Traits requirements:
//   using State;  using Tangent;
//   static State interp(const State& a, const State& b, double s);
//   static Tangent boxminus(const State& ref, const State& x);  // Log(ref^-1 x)
//   static double norm(const Tangent&);
template <class Traits>
struct EngineEvent {
  double t;
  typename Traits::State state;
  bool has_polarity;
  typename Traits::Tangent polarity;
};

template <class Traits>
std::vector<EngineEvent<Traits>> run_engine(std::span<const double> times,
                                            std::span<const typename Traits::State> nodes,
                                            double theta, double tol, std::size_t max_events) {
  using State = typename Traits::State;
  if (times.size() != nodes.size() || times.size() < 1)
    throw std::invalid_argument("event engine: malformed node sequence");
  if (theta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("event engine: theta and tolerance must be positive");

  std::vector<EngineEvent<Traits>> events;
  State ref = nodes[0];
  events.push_back({times[0], ref, false, {}});

  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    double t_cur = t0;
    for (;;) {
      auto at = [&](double t) { return Traits::interp(nodes[i], nodes[i + 1], (t - t0) / (t1 - t0)); };
      const double d_end = Traits::norm(Traits::boxminus(ref, nodes[i + 1]));
      if (d_end < theta) break;
      // First crossing is bracketed in [t_cur, t1]; bisect on time.
      double lo = t_cur;
      double hi = t1;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double d = Traits::norm(Traits::boxminus(ref, at(mid)));
        if (d >= theta) hi = mid; else lo = mid;
      }
      const double tau = hi;
      const State x_new = (tau == t1) ? nodes[i + 1] : at(tau);
      // Raw step in the tangent space; callers normalize into a polarity.
      events.push_back({tau, x_new, true, Traits::boxminus(ref, x_new)});
      ref = x_new;
      if (events.size() > max_events)
        throw std::runtime_error("event engine: max-events guard exceeded (theta too small?)");
      if (t1 - tau <= tol) break;  // remainder below solver resolution
      t_cur = tau;
    }
  }
  return events;
}

// 1-D multiplicative group for the engine, with states stored as their logs
// so the group operations reduce to arithmetic on the line.
struct MultiplicativeTraits {
  using State = double;   // log(x)
  using Tangent = double;
  static State interp(State a, State b, double s) { return a + s * (b - a); }
  static Tangent boxminus(State ref, State x) { return x - ref; }
  static double norm(Tangent t) { return std::fabs(t); }
};

}  // namespace detail

}  // namespace lieio
