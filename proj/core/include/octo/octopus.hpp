#pragma once

#include <memory>
#include <span>
#include <vector>

#include "octo/landscape.hpp"
#include "octo/spline.hpp"

namespace octo {

/// Region lookup from parameters alone (no connector construction needed).
/// Boundary ties go to the connector: the quadratic slab is [0, tau), the
/// connector slab [tau, 2tau]; the pieces agree to C^2 on the shared faces,
/// so any consistent rule yields the same evaluations.
Region locate_region(const LandscapeParams& params, std::span<const double> x);

/// The d-dimensional chain-of-saddles landscape, mirrored across every
/// coordinate axis.
///
/// One branch (all-positive signs) is a tube of d quadratic saddle blocks
/// joined by C^2 connector slabs, ending in a quadratic bowl; the full
/// domain is the union of its 2^d sign reflections. Evaluation works on
/// |x_i| with chain-rule sign factors, so cost is O(d) regardless of branch.
class OctopusLandscape final : public Landscape {
 public:
  explicit OctopusLandscape(const LandscapeParams& params,
                            OobPolicy policy = OobPolicy::Error);

  const LandscapeParams& params() const { return params_; }
  const ConnectorSet& connectors() const { return conn_; }
  OobPolicy oob_policy() const { return policy_; }
  double nu() const { return conn_.nu(); }

  Region locate(std::span<const double> x) const { return locate_region(params_, x); }

  // Landscape interface.
  int dim() const override { return params_.dim; }
  bool eval_into(std::span<const double> x, double& f, std::span<double> grad,
                 RegionId& region) const override;
  SymMat hessian(std::span<const double> x) const override;
  RegionId region_of(std::span<const double> x) const override;
  double curvature_scale() const override { return params_.L; }
  double length_scale() const override { return params_.tau; }
  double dist_to_minimum(std::span<const double> x) const override;
  const LandscapeParams* octopus_params() const override { return &params_; }
  /// Stratified over the 2d+1 region strata with random branch signs.
  void sample_domain_point(RngStream& rng, std::span<double> out) const override;

  /// Evaluate the piece belonging to `region` regardless of where x lies.
  /// Used to compare adjacent pieces on their shared boundary faces.
  Evaluation eval_in_region(const Region& region, std::span<const double> x) const;
  SymMat hessian_in_region(const Region& region, std::span<const double> x) const;

  /// The d strict saddles and the local minimum of one branch, each verified
  /// by direct evaluation (gradient norm and extreme Hessian eigenvalue).
  /// Throws VerificationError if a cataloged point fails its check.
  std::vector<StationaryPoint> stationary_points(std::span<const std::int8_t> branch_signs) const;

  std::vector<double> minimum_location(std::span<const std::int8_t> branch_signs) const;

  /// Nearest point of the domain (used by the FreezeGradient policy).
  std::vector<double> project_to_domain(std::span<const double> x) const;

 private:
  void eval_region(RegionKind kind, int index, std::span<const double> x, double& f,
                   std::span<double> grad) const;
  SymMat hessian_region(RegionKind kind, int index, std::span<const double> x) const;

  LandscapeParams params_;
  OobPolicy policy_;
  ConnectorSet conn_;
};

}  // namespace octo
