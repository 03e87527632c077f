#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "octo/octopus.hpp"
#include "octo/optimize.hpp"

namespace octo {

struct SaddleEscape {
  std::optional<std::int64_t> first_escape;  // T_k: first t with |x_k| >= 2tau
  std::int64_t connector_iters = 0;          // T_k^tau: iterations in connector k

  std::optional<std::int64_t> quadratic_time() const {
    if (!first_escape) return std::nullopt;
    return *first_escape - connector_iters;
  }
};

/// Escape-time statistics of one trajectory on an octopus landscape.
/// Times are measured on |x_k|, so reports are branch-agnostic.
struct EscapeReport {
  int dim = 0;
  std::vector<SaddleEscape> saddles;                        // k = 1..d
  std::vector<std::optional<double>> ratios;                // quadratic_time(k+1)/quadratic_time(k)
  std::vector<std::optional<std::int64_t>> per_saddle;      // T_k - T_{k-1}
  bool reached_min = false;   // trajectory entered the bowl region
  std::int64_t total_iters = 0;
};

/// Throws MismatchError when the trajectory was not produced on an octopus
/// with exactly these parameters.
EscapeReport escape_report(const Trajectory& traj, const LandscapeParams& params);

struct NonEscapeResult {
  bool pass = true;
  int trials = 0;
  std::int64_t steps_per_trial = 0;
  struct Violation {
    int trial = 0;
    std::int64_t iter = 0;
    double xd = 0.0;
  };
  std::vector<Violation> violations;  // first violation per failing trial
};

/// Run GD for ceil(((L+gamma)/gamma)^(d-1)) steps from x0 ~ U[0,1]^d and
/// check |x_d| <= 2tau at every iterate of every trial.
/// Requires tau >= e and eta <= 1/(2L); refuses runs beyond step_budget.
NonEscapeResult verify_non_escape(const LandscapeParams& params, double eta, int trials,
                                  std::uint64_t seed, std::int64_t step_budget = 100'000'000);

/// True iff ||grad f(x)|| <= epsilon and lambda_min(hess f(x)) >= -sqrt(rho * epsilon).
bool sosp_check(const Landscape& landscape, std::span<const double> x, double epsilon, double rho);

/// Sampled lower bounds on the boundedness / gradient-Lipschitz /
/// Hessian-Lipschitz constants. Estimates are running maxima, so they are
/// monotone in the sample count for a fixed seed.
struct SmoothnessEstimate {
  double bound_hat = 0.0;
  double ell_hat = 0.0;
  double rho_hat = 0.0;
  int samples = 0;
  double pair_scale = 0.0;
};

SmoothnessEstimate estimate_smoothness(const Landscape& landscape, int samples, double pair_scale,
                                       std::uint64_t seed);

struct StationaryScanResult {
  bool pass = true;
  std::int64_t points_scanned = 0;
  double epsilon = 0.0;
  double radius = 0.0;
  std::vector<std::vector<double>> spurious;  // small-gradient points away from the catalog
};

/// Grid scan of the (folded) domain for small-gradient points outside an
/// l-inf ball around the cataloged stationary points. With epsilon <=
/// gamma*tau/2 every true small-gradient point lies within epsilon/(2*gamma)
/// <= tau/4 of a cataloged point, so radius = epsilon/(2*gamma) is the
/// consistent exclusion radius.
StationaryScanResult scan_stationary(const OctopusLandscape& landscape, double resolution,
                                     double epsilon, double radius, std::size_t max_report = 8);

/// First stored iterate before the trajectory enters the bowl region that
/// passes sosp_check, or nullopt when there is none.
std::optional<std::int64_t> first_sosp_en_route(const OctopusLandscape& landscape,
                                                const Trajectory& traj, double epsilon, double rho);

}  // namespace octo
