#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "octo/params.hpp"

namespace octo {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values / first violations
};

struct SuiteResult {
  std::string suite;
  bool pass = true;
  std::vector<CheckResult> checks;

  void add(std::string name, bool ok, std::string detail = "");
};

struct VerifyOptions {
  LandscapeParams params;
  std::uint64_t seed = 20250809;
  int boundary_points = 1000;   // per face
  int gradient_points = 10000;  // stratified over region kinds
  int lemma8_trials = 100;
  double eta = 0.0;  // 0 = 1/(2L)
  std::int64_t step_budget = 100'000'000;
};

/// Connector construction: boundary conditions, g2 shape, fit reproduction,
/// and the gradient band sampled on a 200x200 grid. The lower slope bound
/// -4*L*tau <= dg/dxi cannot hold for a C^2 connector and its check reports
/// the measured minimum (expected to fail; kept for visibility).
SuiteResult verify_spline(const VerifyOptions& opt);

/// C^2 matching of adjacent pieces on the faces |x_i| = tau and |x_i| = 2tau.
SuiteResult verify_boundary(const VerifyOptions& opt);

/// Analytic gradient and Hessian against central finite differences.
SuiteResult verify_gradient(const VerifyOptions& opt);

/// Non-escape bound: GD stays at |x_d| <= 2tau for ceil(((L+g)/g)^(d-1)) steps.
SuiteResult verify_lemma8(const VerifyOptions& opt);

/// Stationary-point catalog, grid scan for spurious small-gradient points,
/// and second-order stationarity classification.
SuiteResult verify_sosp(const VerifyOptions& opt);

/// Sampled smoothness constants stay finite and grow polynomially in d.
SuiteResult verify_smoothness(const VerifyOptions& opt);

std::vector<SuiteResult> verify_all(const VerifyOptions& opt);

/// Run one suite by name ("spline", "boundary", "gradient", "lemma8",
/// "sosp", "smoothness" or "all").
std::vector<SuiteResult> run_suites(const std::string& name, const VerifyOptions& opt);

}  // namespace octo
