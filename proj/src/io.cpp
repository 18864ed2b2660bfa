#include "lieio/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace lieio {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<double> split_fields(const std::string& line, const std::string& path,
                                 std::size_t lineno, std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size() && cell.find_first_not_of(" \t\r", pos) != std::string::npos)
        throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      parse_fail(path, lineno, "bad numeric field '" + cell + "'");
    }
  }
  if (out.size() != expected)
    parse_fail(path, lineno,
               "expected " + std::to_string(expected) + " fields, got " +
                   std::to_string(out.size()));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

void expect_header(std::ifstream& in, const std::string& path, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != expected) parse_fail(path, 1, "expected header '" + expected + "'");
}

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 json_to_vec3(const json& j) { return Vec3(j.at(0), j.at(1), j.at(2)); }

}  // namespace

std::vector<RawImuSample> read_imu_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, path, "t,wx,wy,wz,ax,ay,az");
  std::vector<RawImuSample> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line, path, lineno, 7);
    if (!out.empty() && f[0] <= out.back().t)
      parse_fail(path, lineno, "timestamps not strictly increasing");
    out.push_back({f[0], Vec3(f[1], f[2], f[3]), Vec3(f[4], f[5], f[6])});
  }
  return out;
}

void write_imu_csv(const std::string& path, std::span<const RawImuSample> samples) {
  auto out = open_out(path);
  out.precision(17);
  out << "t,wx,wy,wz,ax,ay,az\n";
  for (const auto& s : samples)
    out << s.t << ',' << s.omega.x() << ',' << s.omega.y() << ',' << s.omega.z() << ','
        << s.accel.x() << ',' << s.accel.y() << ',' << s.accel.z() << '\n';
}

std::vector<GtSample> read_gt_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, path, "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz");
  std::vector<GtSample> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line, path, lineno, 11);
    if (!out.empty() && f[0] <= out.back().t)
      parse_fail(path, lineno, "timestamps not strictly increasing");
    GtSample s;
    s.t = f[0];
    s.q = Eigen::Quaterniond(f[1], f[2], f[3], f[4]);
    if (std::abs(s.q.norm() - 1.0) > 1e-6)
      parse_fail(path, lineno, "quaternion norm deviates from 1 by more than 1e-6");
    s.p = Vec3(f[5], f[6], f[7]);
    s.v = Vec3(f[8], f[9], f[10]);
    out.push_back(s);
  }
  return out;
}

void write_gt_csv(const std::string& path, std::span<const GtSample> samples) {
  auto out = open_out(path);
  out.precision(17);
  out << "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz\n";
  for (const auto& s : samples)
    out << s.t << ',' << s.q.w() << ',' << s.q.x() << ',' << s.q.y() << ',' << s.q.z() << ','
        << s.p.x() << ',' << s.p.y() << ',' << s.p.z() << ',' << s.v.x() << ',' << s.v.y()
        << ',' << s.v.z() << '\n';
}

std::vector<TrajPoint> to_traj_points(std::span<const GtSample> samples) {
  std::vector<TrajPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples)
    out.push_back({s.t, s.q.normalized().toRotationMatrix(), s.p});
  return out;
}

std::vector<TrajPoint> to_traj_points(std::span<const TrajectorySample> samples) {
  std::vector<TrajPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.t, s.rotation, s.position});
  return out;
}

void write_event_log(const std::string& path, std::span<const LieEvent> events,
                     Manifold manifold) {
  auto out = open_out(path);
  for (const auto& e : events) {
    json rec;
    rec["t"] = e.tau;
    if (e.polarity) {
      const Vec6 v = e.polarity->vec();
      rec["p"] = json::array({v[0], v[1], v[2], v[3], v[4], v[5]});
    } else {
      rec["p"] = nullptr;
    }
    const Eigen::Quaterniond q(e.ref.rotation);
    rec["ref"] = {{"q", json::array({q.w(), q.x(), q.y(), q.z()})},
                  {"t", vec_to_json(e.ref.translation)}};
    rec["w"] = vec_to_json(e.omega);
    rec["a"] = vec_to_json(e.accel);
    rec["m"] = manifold_name(manifold);
    out << rec.dump() << '\n';
  }
}

std::vector<LieEvent> read_event_log(const std::string& path) {
  auto in = open_in(path);
  std::vector<LieEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& ex) {
      parse_fail(path, lineno, ex.what());
    }
    try {
      LieEvent e;
      e.tau = rec.at("t");
      const Manifold m =
          rec.contains("m") ? manifold_from_string(rec["m"]) : Manifold::SE3;
      if (!rec.at("p").is_null()) {
        const auto& p = rec["p"];
        Vec6 v;
        for (int k = 0; k < 6; ++k) v[k] = p.at(k);
        e.polarity = Twist::FromVec(m, v);
      }
      const auto& q = rec.at("ref").at("q");
      e.ref.manifold = m;
      e.ref.rotation =
          Eigen::Quaterniond(q.at(0), q.at(1), q.at(2), q.at(3)).toRotationMatrix();
      e.ref.translation = json_to_vec3(rec.at("ref").at("t"));
      e.omega = json_to_vec3(rec.at("w"));
      e.accel = json_to_vec3(rec.at("a"));
      if (!out.empty() && e.tau < out.back().tau)
        parse_fail(path, lineno, "event timestamps not monotone");
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      parse_fail(path, lineno, ex.what());
    }
  }
  return out;
}

void write_trajectory_csv(const std::string& path, std::span<const TrajectorySample> traj) {
  auto out = open_out(path);
  out.precision(17);
  out << "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz,bgx,bgy,bgz,bax,bay,baz\n";
  for (const auto& s : traj) {
    const Eigen::Quaterniond q(s.rotation);
    out << s.t << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z() << ','
        << s.position.x() << ',' << s.position.y() << ',' << s.position.z() << ','
        << s.velocity.x() << ',' << s.velocity.y() << ',' << s.velocity.z() << ','
        << s.bias_gyro.x() << ',' << s.bias_gyro.y() << ',' << s.bias_gyro.z() << ','
        << s.bias_accel.x() << ',' << s.bias_accel.y() << ',' << s.bias_accel.z() << '\n';
  }
}

std::vector<TrajectorySample> read_trajectory_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, path, "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz,bgx,bgy,bgz,bax,bay,baz");
  std::vector<TrajectorySample> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line, path, lineno, 17);
    TrajectorySample s;
    s.t = f[0];
    s.rotation = Eigen::Quaterniond(f[1], f[2], f[3], f[4]).normalized().toRotationMatrix();
    s.position = Vec3(f[5], f[6], f[7]);
    s.velocity = Vec3(f[8], f[9], f[10]);
    s.bias_gyro = Vec3(f[11], f[12], f[13]);
    s.bias_accel = Vec3(f[14], f[15], f[16]);
    out.push_back(s);
  }
  return out;
}

void write_stack_csv(const std::string& path, const EventStack& stack) {
  auto out = open_out(path);
  out.precision(17);
  for (Eigen::Index b = 0; b < stack.data.rows(); ++b) {
    for (Eigen::Index c = 0; c < stack.data.cols(); ++c) {
      if (c) out << ',';
      out << stack.data(b, c);
    }
    out << '\n';
  }
}

void write_report(const std::string& path, const std::map<std::string, double>& values) {
  auto out = open_out(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    for (const auto& [k, v] : values) j[k] = v;
    out << j.dump(2) << '\n';
  } else {
    out.precision(17);
    out << "metric,value\n";
    for (const auto& [k, v] : values) out << k << ',' << v << '\n';
  }
}

}  // namespace lieio
