#include "octo/spline.hpp"

#include <cmath>
#include <string>

#include "octo/errors.hpp"

namespace octo {

namespace {

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError("connector construction: " + what);
}

}  // namespace

CubicHermite hermite_fit(double y0, double y1, double f0, double f1, double d0, double d1) {
  const double h = y1 - y0;
  if (!(h >= 1e-12)) throw ParameterError("hermite_fit: degenerate interval, y1 - y0 < 1e-12");
  const double slope = (f1 - f0) / h;
  CubicHermite p;
  p.y0 = y0;
  p.y1 = y1;
  p.c0 = f0;
  p.c1 = d0;
  p.c2 = (3.0 * slope - d1 - 2.0 * d0) / h;
  p.c3 = -(2.0 * slope - d1 - d0) / (h * h);
  return p;
}

QuinticHermite quintic_fit(double y0, double y1, double f0, double f1, double d0, double d1,
                           double s0, double s1) {
  const double h = y1 - y0;
  if (!(h >= 1e-12)) throw ParameterError("quintic_fit: degenerate interval, y1 - y0 < 1e-12");
  // Left-end Taylor data fixes c0..c2; the right-end conditions give a 3x3
  // system for c3..c5 with the closed-form solution below.
  const double a = f1 - (f0 + d0 * h + 0.5 * s0 * h * h);
  const double b = d1 - (d0 + s0 * h);
  const double c = s1 - s0;
  QuinticHermite q;
  q.y0 = y0;
  q.y1 = y1;
  q.c[0] = f0;
  q.c[1] = d0;
  q.c[2] = 0.5 * s0;
  q.c[3] = (10.0 * a - 4.0 * b * h + 0.5 * c * h * h) / (h * h * h);
  q.c[4] = (-15.0 * a + 7.0 * b * h - c * h * h) / (h * h * h * h);
  q.c[5] = (6.0 * a - 3.0 * b * h + 0.5 * c * h * h) / (h * h * h * h * h);
  return q;
}

ConnectorSet::ConnectorSet(const LandscapeParams& params, Poly g1, Poly g2, double nu,
                           GradientBandReport band)
    : params_(params),
      g1_(std::move(g1)),
      g1_d_(g1_.derivative()),
      g1_dd_(g1_d_.derivative()),
      g2_(std::move(g2)),
      g2_d_(g2_.derivative()),
      g2_dd_(g2_d_.derivative()),
      nu_(nu),
      band_(band) {}

GEval ConnectorSet::eval_g(double xi, double xnext) const {
  const double tau = params_.tau;
  if (!(xi >= tau && xi <= 2.0 * tau) || !(std::fabs(xnext) <= tau)) {
    throw ParameterError("eval_g: point outside connector rectangle");
  }
  GEval out;
  const double g1v = g1_(xi), g1d = g1_d_(xi), g1dd = g1_dd_(xi);
  const double g2v = g2_(xi), g2d = g2_d_(xi), g2dd = g2_dd_(xi);
  const double xn2 = xnext * xnext;
  out.value = g1v + g2v * xn2;
  out.d_xi = g1d + g2d * xn2;
  out.d_xnext = 2.0 * g2v * xnext;
  out.dd_xi_xi = g1dd + g2dd * xn2;
  out.dd_xi_xnext = 2.0 * g2d * xnext;
  out.dd_xnext_xnext = 2.0 * g2v;
  return out;
}

ConnectorSet build_connectors(const LandscapeParams& params) {
  params.validate();
  const double L = params.L, gamma = params.gamma, tau = params.tau;

  // Slope profile: a cubic from (-2 gamma tau, slope -2 gamma) at tau to
  // (-4 L tau, slope 2 L) at 2 tau. Its antiderivative, anchored so that
  // g1(tau) = -gamma tau^2, is the quartic bridge.
  const CubicHermite p =
      hermite_fit(tau, 2.0 * tau, -2.0 * gamma * tau, -4.0 * L * tau, -2.0 * gamma, 2.0 * L);
  Poly g1 = p.to_poly().antiderivative();  // vanishes at tau by construction
  g1 += -gamma * tau * tau;

  // Transverse curvature: explicit quintic with flat first and second
  // derivatives at both ends, expanded about 2 tau.
  const double lg = L + gamma;
  const double t3 = tau * tau * tau, t4 = t3 * tau, t5 = t4 * tau;
  Poly g2({-gamma, 0.0, 0.0, -10.0 * lg / t3, -15.0 * lg / t4, -6.0 * lg / t5}, 2.0 * tau);

  const double nu = -g1(2.0 * tau) + 4.0 * L * tau * tau;

  ConnectorSet conn(params, std::move(g1), std::move(g2), nu, GradientBandReport{});

  // Boundary conditions. These are what the C^2 matching of the landscape
  // pieces rests on, so failure is a hard error.
  const double tol = 1e-10;
  require(conn.g1(tau) == -gamma * tau * tau, "g1(tau) != -gamma tau^2");
  require(close(conn.g1_deriv(tau), -2.0 * gamma * tau, tol), "g1'(tau) != -2 gamma tau");
  require(close(conn.g1_deriv(2.0 * tau), -4.0 * L * tau, tol), "g1'(2tau) != -4 L tau");
  require(close(conn.g1_second(tau), -2.0 * gamma, tol), "g1''(tau) != -2 gamma");
  require(close(conn.g1_second(2.0 * tau), 2.0 * L, tol), "g1''(2tau) != 2 L");
  require(close(conn.g2(tau), L, tol), "g2(tau) != L");
  require(close(conn.g2(2.0 * tau), -gamma, tol), "g2(2tau) != -gamma");
  require(close(conn.g2_deriv(tau), 0.0, tol), "g2'(tau) != 0");
  require(close(conn.g2_deriv(2.0 * tau), 0.0, tol), "g2'(2tau) != 0");
  require(close(conn.g2_second(tau), 0.0, tol), "g2''(tau) != 0");
  require(close(conn.g2_second(2.0 * tau), 0.0, tol), "g2''(2tau) != 0");
  require(close(conn.nu(), -conn.g1(2.0 * tau) + 4.0 * L * tau * tau, tol), "nu identity");

  // g2 must decay monotonically from L to -gamma; the transverse slope of g
  // then satisfies dg/dxn >= -2 gamma xn everywhere in the slab.
  for (int i = 0; i <= 1000; ++i) {
    const double x = tau + tau * static_cast<double>(i) / 1000.0;
    require(conn.g2(x) >= -gamma - 1e-12 * std::fabs(gamma), "g2 < -gamma on grid");
    require(conn.g2_deriv(x) <= 1e-12, "g2' > 0 on grid");
  }

  // Gradient extrema over the slab, sampled on a 200x200 grid. The upper
  // slope bound and the transverse bound must hold (the escape-time and
  // dwell arguments use them); the lower bound cannot hold for a C^2
  // connector and is recorded for inspection.
  GradientBandReport band;
  band.dgdxi_lower = -4.0 * L * tau;
  band.dgdxi_upper = -2.0 * gamma * tau;
  band.dgdxi_min = std::numeric_limits<double>::infinity();
  band.dgdxi_max = -std::numeric_limits<double>::infinity();
  band.xnext_slack_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double xi = tau + tau * static_cast<double>(i) / 200.0;
    for (int j = 0; j <= 200; ++j) {
      const double xn = tau * static_cast<double>(j) / 200.0;
      const GEval e = conn.eval_g(xi, xn);
      band.dgdxi_min = std::min(band.dgdxi_min, e.d_xi);
      band.dgdxi_max = std::max(band.dgdxi_max, e.d_xi);
      band.xnext_slack_min = std::min(band.xnext_slack_min, e.d_xnext + 2.0 * gamma * xn);
    }
  }
  require(band.upper_ok(), "dg/dxi exceeds -2 gamma tau on grid");
  require(band.xnext_ok(), "dg/dxnext below -2 gamma xnext on grid");

  return ConnectorSet(conn.params(), conn.g1_poly(), conn.g2_poly(), conn.nu(), band);
}

}  // namespace octo
