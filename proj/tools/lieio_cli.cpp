#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "lieio/ekf.hpp"
#include "lieio/io.hpp"
#include "lieio/metrics.hpp"
#include "lieio/synth.hpp"

namespace {

using namespace lieio;
using json = nlohmann::json;

struct Defaults {
  double theta = 0.01;
  int bins = 200;
  double window = 1.0;
  double update_rate = 20.0;
};

// flags > config file > built-in defaults; the config file only supplies
// values the flags left untouched.
Defaults load_defaults(const std::string& config_path) {
  Defaults d;
  if (config_path.empty()) return d;
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error(config_path + ": cannot open config");
  json j = json::parse(in);
  d.theta = j.value("theta", d.theta);
  d.bins = j.value("bins", d.bins);
  d.window = j.value("window", d.window);
  d.update_rate = j.value("update_rate", d.update_rate);
  return d;
}

ImuCalibration load_calib(const std::string& path) {
  ImuCalibration c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open calibration");
  json j = json::parse(in);
  auto vec = [&](const char* key, Vec3 fallback) {
    if (!j.contains(key)) return fallback;
    return Vec3(j[key].at(0), j[key].at(1), j[key].at(2));
  };
  c.bias_gyro = vec("bias_gyro", c.bias_gyro);
  c.bias_accel = vec("bias_accel", c.bias_accel);
  c.gravity = vec("gravity", c.gravity);
  return c;
}

std::function<Pose(double)> gt_pose_fn(std::vector<GtSample> gt) {
  return [gt = std::move(gt)](double t) -> Pose {
    auto it = std::lower_bound(gt.begin(), gt.end(), t,
                               [](const GtSample& s, double x) { return s.t < x; });
    std::size_t i = static_cast<std::size_t>(std::distance(gt.begin(), it));
    if (i == 0) i = 1;
    if (i >= gt.size()) i = gt.size() - 1;
    const Pose a{Manifold::SE3, gt[i - 1].q.toRotationMatrix(), gt[i - 1].p};
    const Pose b{Manifold::SE3, gt[i].q.toRotationMatrix(), gt[i].p};
    return geodesic_interp(a, b, gt[i - 1].t, gt[i].t, std::clamp(t, gt[i - 1].t, gt[i].t));
  };
}

Vec3 gt_velocity_at(const std::vector<GtSample>& gt, double t) {
  auto it = std::lower_bound(gt.begin(), gt.end(), t,
                             [](const GtSample& s, double x) { return s.t < x; });
  std::size_t i = static_cast<std::size_t>(std::distance(gt.begin(), it));
  if (i == 0) i = 1;
  if (i >= gt.size()) i = gt.size() - 1;
  const double s = std::clamp((t - gt[i - 1].t) / (gt[i].t - gt[i - 1].t), 0.0, 1.0);
  return (1.0 - s) * gt[i - 1].v + s * gt[i].v;
}

int cmd_convert(const std::string& imu_path, const std::string& gt_path,
                const std::string& calib_path, const std::string& v0_file, double theta,
                const std::string& manifold, double window, const std::string& v0_source,
                const std::string& out_path, const std::string& stack_out, int bins) {
  const auto imu = read_imu_csv(imu_path);
  if (imu.size() < 2) throw std::runtime_error(imu_path + ": need at least 2 IMU samples");
  const auto calib = load_calib(calib_path);

  std::vector<GtSample> gt;
  if (v0_source == "gt") {
    if (gt_path.empty()) throw std::runtime_error("--v0-source gt requires --gt");
    gt = read_gt_csv(gt_path);
  }
  Vec3 v0_fixed = Vec3::Zero();
  if (v0_source == "file") {
    std::ifstream in(v0_file);
    if (!in) throw std::runtime_error(v0_file + ": cannot open v0 file");
    json j = json::parse(in);
    v0_fixed = Vec3(j.at("v0").at(0), j.at("v0").at(1), j.at("v0").at(2));
  }

  EventGenConfig ecfg;
  ecfg.theta = theta;
  ecfg.manifold = manifold_from_string(manifold);

  std::vector<LieEvent> all_events;
  std::size_t w = 0;
  for (double t0 = imu.front().t; t0 + window <= imu.back().t + 1e-9; t0 += window, ++w) {
    std::vector<RawImuSample> win;
    std::vector<CorrectedImuSample> corrected;
    for (const auto& s : imu) {
      if (s.t < t0 - 1e-9 || s.t > t0 + window + 1e-9) continue;
      win.push_back(s);
      corrected.push_back(correct_sample(s, calib));
    }
    if (win.size() < 2) continue;
    const Vec3 v0 = (v0_source == "gt") ? gt_velocity_at(gt, t0) : v0_fixed;
    const auto path = preintegrate(win, Pose::Identity(Manifold::SE3), v0, calib);
    auto events = generate_events(path, ecfg, corrected);
    all_events.insert(all_events.end(), events.begin(), events.end());
    if (!stack_out.empty()) {
      const auto stack = build_stack(events, bins);
      char name[64];
      std::snprintf(name, sizeof name, "_w%04zu.csv", w);
      write_stack_csv(stack_out + name, stack);
    }
  }
  write_event_log(out_path, all_events, ecfg.manifold);
  std::cout << "wrote " << all_events.size() << " events to " << out_path << "\n";
  return 0;
}

int cmd_toy(const std::vector<double>& alphas, const std::vector<double>& thetas,
            const std::string& reference, std::uint64_t seed, int windows,
            const std::string& out_path) {
  ToyConfig cfg;
  if (!alphas.empty()) cfg.alphas = alphas;
  if (!thetas.empty()) cfg.thetas = thetas;
  cfg.reference = reference;
  cfg.seed = seed;
  cfg.windows = windows;
  const auto rows = run_toy_experiment(cfg);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
  out.precision(17);
  out << "reference,phi,corrected,theta,chamfer_pct\n";
  for (const auto& r : rows)
    out << r.reference << ',' << r.phi_label << ',' << (r.corrected ? 1 : 0) << ','
        << r.theta << ',' << r.chamfer_pct << '\n';
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_ekf(const std::string& imu_path, const std::string& gt_path,
            const std::string& prior_spec, double update_rate, double theta, int bins,
            const std::string& out_path) {
  const auto imu = read_imu_csv(imu_path);
  const auto gt = read_gt_csv(gt_path);
  if (gt.size() < 2) throw std::runtime_error(gt_path + ": need at least 2 samples");

  FilterConfig cfg;
  cfg.update_rate_hz = update_rate;
  cfg.event_cfg.theta = theta;
  cfg.stack_bins = bins;

  DisplacementPrior prior;  // none: pure integration
  if (prior_spec.rfind("oracle:", 0) == 0) {
    const double sigma = std::stod(prior_spec.substr(7));
    prior = make_oracle_prior(gt_pose_fn(gt), sigma, 42);
  } else if (prior_spec != "none") {
    throw std::runtime_error("unknown --prior '" + prior_spec + "' (oracle:SIGMA or none)");
  }

  const Mat3 rot0 = gt.front().q.toRotationMatrix();
  const auto traj = run_filter(imu, prior, cfg, rot0, gt.front().v, gt.front().p);
  write_trajectory_csv(out_path, traj);
  std::cout << "wrote " << traj.size() << " states to " << out_path << "\n";
  return 0;
}

int cmd_metrics(const std::string& est_path, const std::string& gt_path, double rte_window,
                const std::string& align, const std::string& out_path) {
  const auto est = read_trajectory_csv(est_path);
  const auto gt = read_gt_csv(gt_path);
  auto pair = associate(to_traj_points(std::span<const TrajectorySample>(est)),
                        to_traj_points(std::span<const GtSample>(gt)));
  if (align == "umeyama") umeyama_align(pair);

  std::map<std::string, double> report;
  report["ate_m"] = ate(pair);
  report["rte_m"] = rte(pair, rte_window);
  report["aye_deg"] = aye(pair);
  report["drift_pct"] = drift_percent(pair);
  if (out_path.empty()) {
    for (const auto& [k, v] : report) std::cout << k << " = " << v << "\n";
  } else {
    write_report(out_path, report);
    std::cout << "wrote report to " << out_path << "\n";
  }
  return 0;
}

int cmd_bench(int runs) {
  auto traj = SynthTrajectory::random_walk(11, {}, 10.0);
  std::mt19937_64 rng(11);
  const auto imu = synthesize_imu(traj, 1000.0, NoiseSpec::zero(), rng);
  ImuCalibration calib;
  std::vector<CorrectedImuSample> corrected;
  corrected.reserve(imu.size());
  for (const auto& s : imu) corrected.push_back(correct_sample(s, calib));
  const auto path = preintegrate(imu, traj.pose(0.0), traj.velocity_world(0.0), calib);

  EventGenConfig ecfg;
  ecfg.theta = 0.01;
  ecfg.max_events = 1 << 20;

  double gen_best = 1e300, stack_best = 1e300;
  std::size_t n_events = 0;
  for (int r = 0; r < runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto events = generate_events(path, ecfg, corrected);
    const auto t1 = std::chrono::steady_clock::now();
    const auto stack = build_stack(events, 200);
    const auto t2 = std::chrono::steady_clock::now();
    n_events = events.size();
    const double gen_us = std::chrono::duration<double, std::micro>(t1 - t0).count() /
                          static_cast<double>(events.size());
    const double stack_us = std::chrono::duration<double, std::micro>(t2 - t1).count() /
                            static_cast<double>(events.size());
    gen_best = std::min(gen_best, gen_us);
    stack_best = std::min(stack_best, stack_us);
    std::cout << "run " << r << ": generation " << gen_us << " us/event, stacking "
              << stack_us << " us/event\n";
  }
  std::cout << "events: " << n_events << "\n";
  std::cout << "best generation: " << gen_best << " us/event\n";
  std::cout << "best stacking: " << stack_best << " us/event\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie-event inertial odometry toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config supplying defaults");

  // convert
  auto* convert = app.add_subcommand("convert", "IMU CSV -> event log");
  std::string c_imu, c_gt, c_calib, c_v0file, c_manifold = "se3", c_v0src = "zero", c_out;
  std::string c_stack_out;
  double c_theta = -1, c_window = -1;
  int c_bins = -1;
  convert->add_option("--imu", c_imu, "IMU CSV")->required();
  convert->add_option("--gt", c_gt, "ground-truth CSV (for --v0-source gt)");
  convert->add_option("--calib", c_calib, "calibration JSON");
  convert->add_option("--theta", c_theta, "contrast threshold");
  convert->add_option("--manifold", c_manifold, "r3|so3xr3|se3");
  convert->add_option("--window", c_window, "window length [s]");
  convert->add_option("--v0-source", c_v0src, "gt|zero|file");
  convert->add_option("--v0-file", c_v0file, "JSON with {\"v0\": [3]}");
  convert->add_option("--out", c_out, "output event log")->required();
  convert->add_option("--stack-out", c_stack_out, "per-window stack CSV prefix");
  convert->add_option("--bins", c_bins, "stack bins");

  // toy
  auto* toy = app.add_subcommand("toy", "chamfer toy experiment");
  std::vector<double> t_alphas, t_thetas;
  std::string t_ref = "gt", t_out;
  std::uint64_t t_seed = 7;
  int t_windows = 100;
  toy->add_option("--alphas", t_alphas, "power-law exponents");
  toy->add_option("--thetas", t_thetas, "thresholds");
  toy->add_option("--reference", t_ref, "gt|preint");
  toy->add_option("--seed", t_seed, "RNG seed");
  toy->add_option("--windows", t_windows, "windows per cell");
  toy->add_option("--out", t_out, "output CSV")->required();

  // ekf
  auto* ekf = app.add_subcommand("ekf", "clone-state EKF run");
  std::string e_imu, e_gt, e_prior = "none", e_out;
  double e_rate = -1, e_theta = -1;
  int e_bins = -1;
  ekf->add_option("--imu", e_imu, "IMU CSV")->required();
  ekf->add_option("--gt", e_gt, "ground-truth CSV")->required();
  ekf->add_option("--prior", e_prior, "oracle:SIGMA or none");
  ekf->add_option("--update-rate", e_rate, "update rate [Hz]");
  ekf->add_option("--theta", e_theta, "contrast threshold");
  ekf->add_option("--bins", e_bins, "stack bins");
  ekf->add_option("--out", e_out, "trajectory CSV")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "trajectory evaluation");
  std::string m_est, m_gt, m_align = "none", m_out;
  double m_rte = 1.0;
  metrics->add_option("--est", m_est, "estimated trajectory CSV")->required();
  metrics->add_option("--gt", m_gt, "ground-truth CSV")->required();
  metrics->add_option("--rte-window", m_rte, "RTE window [s]");
  metrics->add_option("--align", m_align, "none|umeyama");
  metrics->add_option("--out", m_out, "report CSV/JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "per-event timing");
  int b_runs = 5;
  bench->add_option("--runs", b_runs, "repetitions");

  CLI11_PARSE(app, argc, argv);

  try {
    const Defaults d = load_defaults(config_path);
    if (convert->parsed())
      return cmd_convert(c_imu, c_gt, c_calib, c_v0file,
                         c_theta > 0 ? c_theta : d.theta, c_manifold,
                         c_window > 0 ? c_window : d.window, c_v0src, c_out, c_stack_out,
                         c_bins > 0 ? c_bins : d.bins);
    if (toy->parsed()) return cmd_toy(t_alphas, t_thetas, t_ref, t_seed, t_windows, t_out);
    if (ekf->parsed())
      return cmd_ekf(e_imu, e_gt, e_prior, e_rate > 0 ? e_rate : d.update_rate,
                     e_theta > 0 ? e_theta : d.theta, e_bins > 0 ? e_bins : d.bins, e_out);
    if (metrics->parsed()) return cmd_metrics(m_est, m_gt, m_rte, m_align, m_out);
    if (bench->parsed()) return cmd_bench(b_runs);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
