#include "octo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "octo/errors.hpp"

namespace octo {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "iter,f,grad_norm,region_kind,saddle_index,noise_added,dist_to_min\n";
  for (const StepRecord& r : traj.records) {
    os << r.iter << ',' << format_double(r.f) << ',' << format_double(r.grad_norm) << ','
       << region_kind_name(r.region_kind) << ',' << r.saddle_index << ','
       << (r.noise_added ? 1 : 0) << ',' << format_double(r.dist_to_min) << '\n';
  }
}

void write_points_csv(std::ostream& os, const Trajectory& traj) {
  os << "iter";
  for (int j = 1; j <= traj.dim; ++j) os << ",x_" << j;
  os << '\n';
  for (std::size_t i = 0; i < traj.point_iters.size(); ++i) {
    os << traj.point_iters[i];
    for (double v : traj.point_at(i)) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_escape_csv(std::ostream& os, const EscapeReport& report) {
  os << "saddle_index,T_k,T_k_tau,quadratic_time,ratio\n";
  for (int k = 0; k < report.dim; ++k) {
    const auto& s = report.saddles[static_cast<std::size_t>(k)];
    os << (k + 1) << ',';
    if (s.first_escape) os << *s.first_escape;
    os << ',' << s.connector_iters << ',';
    if (const auto q = s.quadratic_time()) os << *q;
    os << ',';
    if (k + 1 < report.dim) {
      const auto& r = report.ratios[static_cast<std::size_t>(k)];
      if (r) os << format_double(*r);
    }
    os << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto os = open_out(path);
  write_trajectory_csv(os, traj);
}

void write_points_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto os = open_out(path);
  write_points_csv(os, traj);
}

void write_escape_csv(const std::filesystem::path& path, const EscapeReport& report) {
  auto os = open_out(path);
  write_escape_csv(os, report);
}

std::string params_to_json(const LandscapeParams& params, OobPolicy policy) {
  nlohmann::json j;
  j["d"] = params.dim;
  j["L"] = params.L;
  j["gamma"] = params.gamma;
  j["tau"] = params.tau;
  j["oob_policy"] = policy == OobPolicy::Error ? "error" : "freeze";
  return j.dump();
}

std::pair<LandscapeParams, OobPolicy> params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("params_from_json: ") + e.what());
  }
  LandscapeParams p;
  try {
    p.dim = j.at("d").get<int>();
    p.L = j.at("L").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.tau = j.at("tau").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("params_from_json: ") + e.what());
  }
  OobPolicy policy = OobPolicy::Error;
  if (j.contains("oob_policy")) {
    const std::string s = j["oob_policy"].get<std::string>();
    if (s == "error")
      policy = OobPolicy::Error;
    else if (s == "freeze")
      policy = OobPolicy::FreezeGradient;
    else
      throw ParameterError("params_from_json: oob_policy must be 'error' or 'freeze'");
  }
  p.validate();
  return {p, policy};
}

}  // namespace octo
