#pragma once

#include <array>
#include <cmath>

#include "octo/params.hpp"
#include "octo/poly.hpp"

namespace octo {

/// Cubic matching prescribed values and first derivatives at both knots.
/// p(y) = c0 + c1 u + c2 u^2 + c3 u^3 with u = y - y0.
struct CubicHermite {
  double y0 = 0.0;
  double y1 = 1.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

  double value(double y) const {
    const double u = y - y0;
    return c0 + u * (c1 + u * (c2 + u * c3));
  }
  double deriv(double y) const {
    const double u = y - y0;
    return c1 + u * (2.0 * c2 + u * 3.0 * c3);
  }
  double second(double y) const { return 2.0 * c2 + 6.0 * c3 * (y - y0); }

  Poly to_poly() const { return Poly({c0, c1, c2, c3}, y0); }
};

/// Fit the cubic with p(y0)=f0, p(y1)=f1, p'(y0)=d0, p'(y1)=d1.
/// Throws ParameterError when y1 - y0 < 1e-12.
CubicHermite hermite_fit(double y0, double y1, double f0, double f1, double d0, double d1);

/// Quintic matching value, first and second derivative at both knots
/// (two-point Taylor interpolation).
struct QuinticHermite {
  double y0 = 0.0;
  double y1 = 1.0;
  std::array<double, 6> c{};  // coefficients in u = y - y0

  double value(double y) const {
    const double u = y - y0;
    double acc = 0.0;
    for (int i = 5; i >= 0; --i) acc = acc * u + c[static_cast<std::size_t>(i)];
    return acc;
  }
  double deriv(double y) const {
    const double u = y - y0;
    double acc = 0.0;
    for (int i = 5; i >= 1; --i) acc = acc * u + static_cast<double>(i) * c[static_cast<std::size_t>(i)];
    return acc;
  }
  double second(double y) const {
    const double u = y - y0;
    double acc = 0.0;
    for (int i = 5; i >= 2; --i)
      acc = acc * u + static_cast<double>(i * (i - 1)) * c[static_cast<std::size_t>(i)];
    return acc;
  }

  Poly to_poly() const { return Poly({c[0], c[1], c[2], c[3], c[4], c[5]}, y0); }
};

QuinticHermite quintic_fit(double y0, double y1, double f0, double f1, double d0, double d1,
                           double s0, double s1);

/// Value and partial derivatives of g(xi, xn) = g1(xi) + g2(xi) xn^2.
struct GEval {
  double value = 0.0;
  double d_xi = 0.0;
  double d_xnext = 0.0;
  double dd_xi_xi = 0.0;
  double dd_xi_xnext = 0.0;
  double dd_xnext_xnext = 0.0;
};

/// Sampled extrema of the connector gradient over [tau,2tau] x [0,tau].
///
/// The slope bound -4*L*tau <= dg/dxi does not hold for any C^2 connector
/// (matching g1''(2tau) = 2L > 0 forces g1' below -4*L*tau just left of
/// 2tau), so it is measured and reported instead of asserted.
struct GradientBandReport {
  double dgdxi_min = 0.0;
  double dgdxi_max = 0.0;
  double dgdxi_lower = 0.0;  // -4 L tau
  double dgdxi_upper = 0.0;  // -2 gamma tau
  double xnext_slack_min = 0.0;  // min of dg/dxn + 2 gamma xn

  // The bounds are met with exact equality on the slab edges, so the checks
  // allow a few ulps of evaluation rounding.
  double tol() const { return 1e-10 * std::max(1.0, std::fabs(dgdxi_lower)); }
  bool lower_ok() const { return dgdxi_min >= dgdxi_lower - tol(); }
  bool upper_ok() const { return dgdxi_max <= dgdxi_upper + tol(); }
  bool xnext_ok() const { return xnext_slack_min >= -tol(); }
  bool holds() const { return lower_ok() && upper_ok() && xnext_ok(); }
};

/// The C^2 connector polynomials for one parameter set.
///
/// g1 is the quartic antiderivative construction bridging -gamma*x^2 to
/// L*(x-4tau)^2 - nu across [tau, 2tau]; g2 is the explicit quintic taking
/// the transverse curvature from L down to -gamma. Immutable once built;
/// evaluation is pure and thread-safe.
class ConnectorSet {
 public:
  ConnectorSet(const LandscapeParams& params, Poly g1, Poly g2, double nu,
               GradientBandReport band);

  const LandscapeParams& params() const { return params_; }
  double nu() const { return nu_; }
  const GradientBandReport& band() const { return band_; }

  double g1(double x) const { return g1_(x); }
  double g1_deriv(double x) const { return g1_d_(x); }
  double g1_second(double x) const { return g1_dd_(x); }
  double g2(double x) const { return g2_(x); }
  double g2_deriv(double x) const { return g2_d_(x); }
  double g2_second(double x) const { return g2_dd_(x); }

  const Poly& g1_poly() const { return g1_; }
  const Poly& g2_poly() const { return g2_; }

  /// g and its partials at (xi, xnext). Requires tau <= xi <= 2tau and
  /// |xnext| <= tau (g is even in xnext); throws ParameterError otherwise.
  GEval eval_g(double xi, double xnext) const;

 private:
  LandscapeParams params_;
  Poly g1_, g1_d_, g1_dd_;
  Poly g2_, g2_d_, g2_dd_;
  double nu_;
  GradientBandReport band_;
};

/// Build the connector polynomials for `params` and verify every boundary
/// condition (throws ConstructionError on failure). The gradient-band
/// extrema are sampled on a 200x200 grid and stored in the result.
ConnectorSet build_connectors(const LandscapeParams& params);

}  // namespace octo
