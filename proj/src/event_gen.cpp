#include "lieio/event_gen.hpp"

#include <cmath>

namespace lieio {

namespace {

struct LieTraits {
  using State = Pose;
  using Tangent = Twist;
  static State interp(const State& a, const State& b, double s) {
    return geodesic_interp_fraction(a, b, s);
  }
  static Tangent boxminus(const State& ref, const State& x) { return log_map(ref, x); }
  static double norm(const Tangent& t) { return t.norm(); }
};

}  // namespace

std::vector<LieEvent> generate_events(const PreintegrationPath& reference,
                                      const EventGenConfig& cfg,
                                      std::span<const CorrectedImuSample> corrected) {
  if (reference.samples.empty())
    throw std::invalid_argument("generate_events: empty reference path");

  std::vector<double> times;
  std::vector<Pose> nodes;
  times.reserve(reference.samples.size());
  nodes.reserve(reference.samples.size());
  for (const auto& n : reference.samples) {
    times.push_back(n.t);
    nodes.push_back(n.pose.retag(cfg.manifold));
  }

  const auto raw = detail::run_engine<LieTraits>(times, nodes, cfg.theta, cfg.solver_tol,
                                                 cfg.max_events);
  std::vector<LieEvent> events;
  events.reserve(raw.size());
  for (const auto& e : raw) {
    LieEvent ev;
    ev.tau = e.t;
    ev.ref = e.state;
    if (e.has_polarity) {
      Twist p = e.polarity;
      const double n = p.norm();
      p.rot /= n;
      p.trans /= n;
      ev.polarity = p;
    }
    if (!corrected.empty()) {
      const auto imu = interpolate_corrected(corrected, e.t);
      ev.omega = imu.omega;
      ev.accel = imu.accel;
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<ScalarEvent> generate_events_scalar(
    std::span<const std::pair<double, double>> signal, double theta, double solver_tol,
    std::size_t max_events) {
  std::vector<double> times;
  std::vector<double> logs;
  times.reserve(signal.size());
  logs.reserve(signal.size());
  for (const auto& [t, x] : signal) {
    if (!(x > 0.0)) throw std::domain_error("generate_events_scalar: non-positive sample");
    times.push_back(t);
    logs.push_back(std::log(x));
  }
  if (times.empty()) throw std::invalid_argument("generate_events_scalar: empty signal");
  if (theta <= 0.0 || solver_tol <= 0.0)
    throw std::invalid_argument("generate_events_scalar: theta and tolerance must be positive");

  // Direct 1-D level-crossing on log(x), with the signal linearly
  // interpolated in the log domain between samples.
  std::vector<ScalarEvent> events;
  double log_ref = logs[0];
  events.push_back({times[0], 0, std::exp(log_ref)});

  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    double t_cur = t0;
    for (;;) {
      auto at = [&](double t) {
        const double s = (t - t0) / (t1 - t0);
        return logs[i] + s * (logs[i + 1] - logs[i]);
      };
      if (std::fabs(logs[i + 1] - log_ref) < theta) break;
      double lo = t_cur;
      double hi = t1;
      while (hi - lo > solver_tol) {
        const double mid = 0.5 * (lo + hi);
        if (std::fabs(at(mid) - log_ref) >= theta) hi = mid; else lo = mid;
      }
      const double tau = hi;
      const double log_new = (tau == t1) ? logs[i + 1] : at(tau);
      events.push_back({tau, log_new - log_ref > 0.0 ? 1 : -1, std::exp(log_new)});
      log_ref = log_new;
      if (events.size() > max_events)
        throw std::runtime_error("generate_events_scalar: max-events guard exceeded");
      if (t1 - tau <= solver_tol) break;
      t_cur = tau;
    }
  }
  return events;
}

std::vector<Pose> reconstruct_references(std::span<const LieEvent> events, double theta,
                                         const Pose& x0) {
  std::vector<Pose> refs;
  refs.reserve(events.size() + 1);
  refs.push_back(x0);
  Pose cur = x0;
  for (const auto& e : events) {
    if (!e.polarity) continue;
    Twist step = *e.polarity;
    step.manifold = cur.manifold;
    step.rot *= theta;
    step.trans *= theta;
    cur = exp_map(cur, step);
    refs.push_back(cur);
  }
  return refs;
}

Twist gravity_align_polarity(const Twist& p, const Mat3& frame) {
  Twist out = p;
  out.rot = frame * p.rot;
  out.trans = frame * p.trans;
  return out;
}

}  // namespace lieio
