#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "octo/landscape.hpp"
#include "octo/rng.hpp"

namespace octo {

struct GDConfig {
  double eta = 0.25;
  std::int64_t max_iters = 1000;
  std::optional<double> stop_grad_norm;    // stop once ||grad|| <= value
  std::optional<double> stop_dist_to_min;  // stop once dist to minimum <= value
  std::int64_t record_stride = 0;          // 0 = auto (1 unless the run exceeds the record budget)
  std::int64_t point_stride = 0;           // 0 = auto (<= ~1e6 stored vectors)
};

struct PGDConfig {
  GDConfig gd;
  double r = 0.0;               // perturbation radius
  std::int64_t t_thres = 1;     // min iterations between perturbations
  double g_thres = 0.0;         // gradient norm threshold for perturbing
  std::uint64_t seed = 0;
};

enum class StopReason : std::uint8_t { MaxIters, GradNorm, DistToMin };

struct StepRecord {
  std::int64_t iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  RegionKind region_kind = RegionKind::OutOfDomain;
  std::int16_t saddle_index = 0;
  bool noise_added = false;
  bool oob = false;
  double dist_to_min = 0.0;  // NaN for landscapes without a cataloged minimum
};

/// Exact escape bookkeeping, updated on every iteration even when the
/// stored records are thinned.
struct EscapeTally {
  std::vector<std::int64_t> first_escape;     // first t with |x_k| >= 2tau; -1 if never
  std::vector<std::int64_t> connector_iters;  // iterations spent in connector k
  std::int64_t first_optimum = -1;
  int watermark = 0;  // highest escape progress seen

  void resize(int d) {
    first_escape.assign(static_cast<std::size_t>(d), -1);
    connector_iters.assign(static_cast<std::size_t>(d), 0);
  }
  void update(const RegionId& reg, std::int64_t t) {
    const int prog = reg.progress();
    while (watermark < prog) {
      first_escape[static_cast<std::size_t>(watermark)] = t;
      ++watermark;
    }
    if (reg.kind == RegionKind::ConnectorXY || reg.kind == RegionKind::ConnectorXd)
      ++connector_iters[static_cast<std::size_t>(reg.index - 1)];
    if (reg.kind == RegionKind::Optimum && first_optimum < 0) first_optimum = t;
  }
};

struct Trajectory {
  int dim = 0;
  std::vector<StepRecord> records;        // state t = 0 .. total_iters, possibly thinned
  std::vector<std::int64_t> point_iters;  // iterations with a stored iterate vector
  std::vector<double> points;             // row-major, dim columns
  std::int64_t total_iters = 0;           // gradient steps taken
  StopReason stop_reason = StopReason::MaxIters;
  std::int64_t record_stride = 1;
  std::int64_t point_stride = 1;
  bool eta_warning = false;  // eta above 1/(2L)
  bool any_oob = false;
  std::uint64_t seed = 0;
  GDConfig config;
  std::optional<PGDConfig> pgd;             // engaged noise parameters, when PGD
  std::optional<LandscapeParams> octopus;   // parameter snapshot for octopus runs
  std::optional<EscapeTally> tally;         // exact escape stats for octopus runs

  std::span<const double> point_at(std::size_t i) const {
    return std::span<const double>(points).subspan(i * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
};

/// Callback invoked once per recorded iteration with the live iterate.
struct StepInfo {
  std::int64_t iter;
  std::span<const double> x;
  double f;
  double grad_norm;
  RegionId region;
  bool noise_added;
  bool oob;
  double dist_to_min;
};
using StepObserver = std::function<void(const StepInfo&)>;

/// Plain gradient descent x <- x - eta * grad f(x). Deterministic.
/// Throws ParameterError for eta in the divergence regime (eta > 2/L) and
/// DivergenceError if an iterate leaves the sane range.
Trajectory run_gd(const Landscape& landscape, std::span<const double> x0, const GDConfig& config,
                  const StepObserver& observer = {});

/// Perturbed gradient descent: when the gradient norm drops to g_thres and
/// no perturbation happened in the last t_thres iterations, add a uniform
/// sample from the r-ball before the gradient step. Reproducible from seed.
Trajectory run_pgd(const Landscape& landscape, std::span<const double> x0, const PGDConfig& config,
                   const StepObserver& observer = {});

/// Uniform sample from the closed Euclidean ball of radius r.
std::vector<double> sample_ball(RngStream& rng, int dim, double r);

struct InitScheme {
  enum class Kind : std::uint8_t { UnitCube, Cube, Gaussian };
  Kind kind = Kind::UnitCube;
  double lo = -1.0, hi = 1.0;  // Cube bounds
  double sigma = 1.0;          // Gaussian scale

  static InitScheme unit_cube() { return {}; }
  static InitScheme cube(double lo, double hi) { return {Kind::Cube, lo, hi, 1.0}; }
  static InitScheme gaussian(double sigma) { return {Kind::Gaussian, -1.0, 1.0, sigma}; }

  /// Parse "unitcube", "cube:<lo>,<hi>" or "gaussian:<sigma>".
  static InitScheme parse(const std::string& text);
  std::string to_string() const;
};

std::vector<double> sample_init(RngStream& rng, int dim, const InitScheme& scheme);

}  // namespace octo
