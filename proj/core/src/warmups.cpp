#include "octo/warmups.hpp"

#include <cmath>

#include "octo/errors.hpp"

namespace octo {

bool ThinBandLandscape::eval_into(std::span<const double> x, double& f, std::span<double> grad,
                                  RegionId& region) const {
  f = x[0] * x[0] - x[1] * x[1];
  grad[0] = 2.0 * x[0];
  grad[1] = -2.0 * x[1];
  region = region_of(x);
  return false;
}

SymMat ThinBandLandscape::hessian(std::span<const double>) const {
  SymMat h(2);
  h.set(0, 0, 2.0);
  h.set(1, 1, -2.0);
  return h;
}

RegionId ThinBandLandscape::region_of(std::span<const double>) const {
  return {RegionKind::Quadratic, 1};
}

ThinBandLandscape warmup_thin_band() { return {}; }

FarAwayLandscape::FarAwayLandscape()
    // Bridge between -4 x1 + x2^2 (value 8, slope -4, flat) at x1 = -2 and
    // x1^2 - x2^2 (value 1, slope -2, curvature 2) at x1 = -1.
    : h1_(quintic_fit(-2.0, -1.0, 8.0, 1.0, -4.0, -2.0, 0.0, 2.0)),
      h2_(quintic_fit(-2.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0)) {}

bool FarAwayLandscape::eval_into(std::span<const double> x, double& f, std::span<double> grad,
                                 RegionId& region) const {
  const double x1 = x[0], x2 = x[1];
  if (x1 <= -2.0) {
    f = -4.0 * x1 + x2 * x2;
    grad[0] = -4.0;
    grad[1] = 2.0 * x2;
  } else if (x1 < -1.0) {
    const double c = h2_.value(x1);
    f = h1_.value(x1) + c * x2 * x2;
    grad[0] = h1_.deriv(x1) + h2_.deriv(x1) * x2 * x2;
    grad[1] = 2.0 * c * x2;
  } else {
    f = x1 * x1 - x2 * x2;
    grad[0] = 2.0 * x1;
    grad[1] = -2.0 * x2;
  }
  region = region_of(x);
  return false;
}

SymMat FarAwayLandscape::hessian(std::span<const double> x) const {
  SymMat h(2);
  const double x1 = x[0], x2 = x[1];
  if (x1 <= -2.0) {
    h.set(1, 1, 2.0);
  } else if (x1 < -1.0) {
    h.set(0, 0, h1_.second(x1) + h2_.second(x1) * x2 * x2);
    h.set(0, 1, 2.0 * h2_.deriv(x1) * x2);
    h.set(1, 1, 2.0 * h2_.value(x1));
  } else {
    h.set(0, 0, 2.0);
    h.set(1, 1, -2.0);
  }
  return h;
}

RegionId FarAwayLandscape::region_of(std::span<const double> x) const {
  if (x[0] <= -2.0) return {RegionKind::Quadratic, 2};  // the approach slope
  if (x[0] < -1.0) return {RegionKind::ConnectorXY, 1};
  return {RegionKind::Quadratic, 1};
}

FarAwayLandscape warmup_far_away() { return {}; }

AffineRescaledLandscape::AffineRescaledLandscape(std::shared_ptr<const Landscape> base,
                                                 std::vector<double> z, double R)
    : base_(std::move(base)), z_(std::move(z)), R_(R) {
  if (!base_) throw ParameterError("affine_rescale: base landscape is null");
  if (!(R_ > 0.0)) throw ParameterError("affine_rescale: R must be > 0");
  if (static_cast<int>(z_.size()) != base_->dim())
    throw ParameterError("affine_rescale: shift vector has wrong length");
}

std::vector<double> AffineRescaledLandscape::map_in(std::span<const double> x) const {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - z_[i]) / R_;
  return y;
}

bool AffineRescaledLandscape::eval_into(std::span<const double> x, double& f,
                                        std::span<double> grad, RegionId& region) const {
  const std::vector<double> y = map_in(x);
  const bool frozen = base_->eval_into(y, f, grad, region);
  for (double& g : grad) g /= R_;
  return frozen;
}

SymMat AffineRescaledLandscape::hessian(std::span<const double> x) const {
  SymMat h = base_->hessian(map_in(x));
  for (double& v : h.data()) v /= R_ * R_;
  return h;
}

RegionId AffineRescaledLandscape::region_of(std::span<const double> x) const {
  return base_->region_of(map_in(x));
}

double AffineRescaledLandscape::dist_to_minimum(std::span<const double> x) const {
  return base_->dist_to_minimum(map_in(x)) * R_;
}

AffineRescaledLandscape affine_rescale(std::shared_ptr<const Landscape> base,
                                       std::vector<double> z, double R) {
  return AffineRescaledLandscape(std::move(base), std::move(z), R);
}

}  // namespace octo
