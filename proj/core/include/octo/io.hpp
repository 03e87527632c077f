#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>

#include "octo/analysis.hpp"
#include "octo/landscape.hpp"
#include "octo/optimize.hpp"

namespace octo {

/// Shortest round-trip decimal form (to_chars); "nan"/"inf" for specials.
std::string format_double(double v);

// Column contracts (headers written verbatim):
//   trajectory: iter,f,grad_norm,region_kind,saddle_index,noise_added,dist_to_min
//   points:     iter,x_1,...,x_d
//   escape:     saddle_index,T_k,T_k_tau,quadratic_time,ratio  (empty = undefined)
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_points_csv(std::ostream& os, const Trajectory& traj);
void write_escape_csv(std::ostream& os, const EscapeReport& report);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_points_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_escape_csv(const std::filesystem::path& path, const EscapeReport& report);

/// {"d": int, "L": x, "gamma": x, "tau": x, "oob_policy": "error"|"freeze"}
std::string params_to_json(const LandscapeParams& params, OobPolicy policy);
std::pair<LandscapeParams, OobPolicy> params_from_json(const std::string& text);

}  // namespace octo
