#pragma once

#include <memory>
#include <vector>

#include "octo/landscape.hpp"
#include "octo/spline.hpp"

namespace octo {

/// 2-D quadratic saddle f(x1, x2) = x1^2 - x2^2.
///
/// The neighborhood of interest is U = [-1,1]^2; the formula is global, so
/// evaluation never goes out of domain. With eta = 1/4, GD halves x1 and
/// grows x2 by 3/2 per step.
class ThinBandLandscape final : public Landscape {
 public:
  int dim() const override { return 2; }
  bool eval_into(std::span<const double> x, double& f, std::span<double> grad,
                 RegionId& region) const override;
  SymMat hessian(std::span<const double> x) const override;
  RegionId region_of(std::span<const double> x) const override;
  double curvature_scale() const override { return 1.0; }
};

/// 2-D saddle with a long approach slope: f = -4 x1 + x2^2 for x1 <= -2,
/// the quadratic saddle x1^2 - x2^2 for x1 >= -1, and a C^2 spline bridge
/// h(x1, x2) = h1(x1) + h2(x1) x2^2 in between. The bridge keeps the
/// transverse curvature between +1 and -1 so x2 cannot jump while crossing.
class FarAwayLandscape final : public Landscape {
 public:
  FarAwayLandscape();

  int dim() const override { return 2; }
  bool eval_into(std::span<const double> x, double& f, std::span<double> grad,
                 RegionId& region) const override;
  SymMat hessian(std::span<const double> x) const override;
  RegionId region_of(std::span<const double> x) const override;
  double curvature_scale() const override { return 1.0; }

  const QuinticHermite& bridge_level() const { return h1_; }
  const QuinticHermite& bridge_curvature() const { return h2_; }

 private:
  QuinticHermite h1_;
  QuinticHermite h2_;
};

ThinBandLandscape warmup_thin_band();
FarAwayLandscape warmup_far_away();

/// f'(x) = f((x - z) / R): moves the landscape to z and stretches it by R.
/// Gradients scale by 1/R, Hessians by 1/R^2; GD with step eta here matches
/// GD with step eta/R^2 on the base landscape through x -> (x - z)/R.
class AffineRescaledLandscape final : public Landscape {
 public:
  AffineRescaledLandscape(std::shared_ptr<const Landscape> base, std::vector<double> z, double R);

  int dim() const override { return base_->dim(); }
  bool eval_into(std::span<const double> x, double& f, std::span<double> grad,
                 RegionId& region) const override;
  SymMat hessian(std::span<const double> x) const override;
  RegionId region_of(std::span<const double> x) const override;
  double curvature_scale() const override { return base_->curvature_scale() / (R_ * R_); }
  double length_scale() const override { return base_->length_scale() * R_; }
  double dist_to_minimum(std::span<const double> x) const override;

  const Landscape& base() const { return *base_; }
  double scale() const { return R_; }
  std::span<const double> shift() const { return z_; }

 private:
  std::vector<double> map_in(std::span<const double> x) const;

  std::shared_ptr<const Landscape> base_;
  std::vector<double> z_;
  double R_;
};

AffineRescaledLandscape affine_rescale(std::shared_ptr<const Landscape> base,
                                       std::vector<double> z, double R);

}  // namespace octo
