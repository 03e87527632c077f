#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "octo/numeric.hpp"
#include "octo/params.hpp"
#include "octo/rng.hpp"

namespace octo {

enum class RegionKind : std::uint8_t {
  Quadratic,    // saddle block i: the active coordinate is inside [0, tau)
  ConnectorXY,  // slab tau <= |x_i| <= 2tau coupling coordinates i and i+1
  ConnectorXd,  // last-coordinate slab (no successor coordinate)
  Optimum,      // all coordinates in [2tau, 6tau]: the bowl around a minimum
  OutOfDomain,
};

const char* region_kind_name(RegionKind k);

/// Compact region tag carried in per-step trajectory records.
/// `index` is the active saddle index (1..d), d+1 for Optimum, 0 for OutOfDomain.
struct RegionId {
  RegionKind kind = RegionKind::OutOfDomain;
  std::int16_t index = 0;

  bool operator==(const RegionId&) const = default;
  /// Progress measure: largest k such that coordinates 1..k have escaped.
  int progress() const {
    return kind == RegionKind::OutOfDomain ? 0 : static_cast<int>(index) - 1;
  }
};

/// Full region description, including the branch sign pattern.
/// signs[j] = sign(x_j), with +1 for zero coordinates.
struct Region {
  RegionKind kind = RegionKind::OutOfDomain;
  int index = 0;
  std::vector<std::int8_t> signs;

  RegionId id() const { return {kind, static_cast<std::int16_t>(index)}; }
};

/// Behavior when a point outside the domain is evaluated.
/// Error throws OutOfDomainError; FreezeGradient evaluates at the nearest
/// in-domain point instead and flags the step.
enum class OobPolicy : std::uint8_t { Error, FreezeGradient };

enum class StationaryKind : std::uint8_t { StrictSaddle, LocalMinimum };

struct StationaryPoint {
  std::vector<double> location;
  StationaryKind kind = StationaryKind::StrictSaddle;
  double lambda_min = 0.0;
  double alpha = 0.0;  // strictness margin: lambda_min <= -alpha at saddles
};

/// A twice-differentiable objective with analytic gradient and Hessian.
/// Implementations are immutable after construction; all evaluations are
/// pure and safe to call concurrently.
class Landscape {
 public:
  virtual ~Landscape() = default;

  virtual int dim() const = 0;

  /// Objective value and gradient at x, plus the region tag.
  /// Returns true when the out-of-domain freeze policy was applied.
  virtual bool eval_into(std::span<const double> x, double& f, std::span<double> grad,
                         RegionId& region) const = 0;

  virtual SymMat hessian(std::span<const double> x) const = 0;

  virtual RegionId region_of(std::span<const double> x) const = 0;

  /// Upper curvature scale used for step-size validation (eta <= 1/(2L)).
  virtual double curvature_scale() const = 0;

  /// Characteristic length used by the divergence guard.
  virtual double length_scale() const { return 1.0; }

  /// Euclidean distance from x to the nearest local minimum, or NaN when
  /// the landscape has no cataloged minimum.
  virtual double dist_to_minimum(std::span<const double>) const {
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Octopus parameter block when this landscape is an octopus (or wraps one
  /// trivially); nullptr otherwise.
  virtual const LandscapeParams* octopus_params() const { return nullptr; }

  /// Draw a point of the evaluation domain, used by sampled estimates.
  /// Default: uniform over the cube of half-width length_scale().
  virtual void sample_domain_point(RngStream& rng, std::span<double> out) const {
    for (double& v : out) v = rng.uniform(-length_scale(), length_scale());
  }

  // Convenience wrappers (allocate; fine outside hot loops).
  struct Evaluation {
    double f = 0.0;
    std::vector<double> grad;
    RegionId region;
    bool oob_frozen = false;
  };
  Evaluation evaluate(std::span<const double> x) const {
    Evaluation out;
    out.grad.resize(static_cast<std::size_t>(dim()));
    out.oob_frozen = eval_into(x, out.f, out.grad, out.region);
    return out;
  }
  double value(std::span<const double> x) const { return evaluate(x).f; }
};

}  // namespace octo
