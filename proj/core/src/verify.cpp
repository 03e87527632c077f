#include "octo/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "octo/analysis.hpp"
#include "octo/errors.hpp"
#include "octo/octopus.hpp"
#include "octo/optimize.hpp"
#include "octo/rng.hpp"
#include "octo/spline.hpp"

namespace octo {

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double rel_to(double err, double scale) { return err / std::max(1.0, scale); }

std::vector<std::int8_t> random_signs(RngStream& rng, int d) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(d));
  for (auto& v : s) v = rng.uniform01() < 0.5 ? -1 : 1;
  return s;
}

double max_abs(const SymMat& m) {
  double v = 0.0;
  for (double a : m.data()) v = std::max(v, std::fabs(a));
  return v;
}

}  // namespace

void SuiteResult::add(std::string name, bool ok, std::string detail) {
  pass = pass && ok;
  checks.push_back({std::move(name), ok, std::move(detail)});
}

SuiteResult verify_spline(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "spline";
  const LandscapeParams& p = opt.params;

  try {
    const ConnectorSet conn = build_connectors(p);
    const double tau = p.tau, L = p.L, gamma = p.gamma;

    auto bc = [&](const char* name, double got, double want) {
      const double err = rel_to(std::fabs(got - want), std::max(std::fabs(got), std::fabs(want)));
      out.add(name, err <= 1e-10, fmt("got %.17g want %.17g rel %.3g", got, want, err));
    };
    bc("g1(tau) = -gamma tau^2", conn.g1(tau), -gamma * tau * tau);
    bc("g1'(tau) = -2 gamma tau", conn.g1_deriv(tau), -2.0 * gamma * tau);
    bc("g1'(2tau) = -4 L tau", conn.g1_deriv(2.0 * tau), -4.0 * L * tau);
    bc("g1''(tau) = -2 gamma", conn.g1_second(tau), -2.0 * gamma);
    bc("g1''(2tau) = 2 L", conn.g1_second(2.0 * tau), 2.0 * L);
    bc("g2(tau) = L", conn.g2(tau), L);
    bc("g2(2tau) = -gamma", conn.g2(2.0 * tau), -gamma);
    bc("nu = -g1(2tau) + 4 L tau^2", conn.nu(), -conn.g1(2.0 * tau) + 4.0 * L * tau * tau);

    bool g2_shape = true;
    for (int i = 0; i <= 1000 && g2_shape; ++i) {
      const double x = tau + tau * static_cast<double>(i) / 1000.0;
      g2_shape = conn.g2(x) >= -gamma - 1e-12 && conn.g2_deriv(x) <= 1e-12;
    }
    out.add("g2 >= -gamma and g2' <= 0 on grid", g2_shape);

    const GradientBandReport& band = conn.band();
    out.add("band: dg/dxi <= -2 gamma tau", band.upper_ok(),
            fmt("max %.6f bound %.6f", band.dgdxi_max, band.dgdxi_upper));
    out.add("band: dg/dxnext >= -2 gamma xnext", band.xnext_ok(),
            fmt("min slack %.3g", band.xnext_slack_min));
    // Cannot hold: matching g1''(2tau) = 2L > 0 forces g1' below -4 L tau
    // just left of 2tau. Kept as a check so the measured margin is visible.
    out.add("band: dg/dxi >= -4 L tau", band.lower_ok(),
            fmt("min %.6f bound %.6f", band.dgdxi_min, band.dgdxi_lower));

    // The fitter must reproduce its boundary data on random instances.
    RngStream rng(opt.seed, 1);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double y0 = rng.uniform(-5.0, 5.0);
      const double y1 = y0 + rng.uniform(0.1, 10.0);
      const double f0 = rng.uniform(-50.0, 50.0), f1 = rng.uniform(-50.0, 50.0);
      const double d0 = rng.uniform(-50.0, 50.0), d1 = rng.uniform(-50.0, 50.0);
      const CubicHermite q = hermite_fit(y0, y1, f0, f1, d0, d1);
      worst = std::max(worst, rel_to(std::fabs(q.value(y0) - f0), std::fabs(f0)));
      worst = std::max(worst, rel_to(std::fabs(q.value(y1) - f1), std::fabs(f1)));
      worst = std::max(worst, rel_to(std::fabs(q.deriv(y0) - d0), std::fabs(d0)));
      worst = std::max(worst, rel_to(std::fabs(q.deriv(y1) - d1), std::fabs(d1)));
    }
    out.add("hermite_fit reproduces boundary data", worst <= 1e-12, fmt("worst rel %.3g", worst));

    // Analytic partials of g against central differences at random
    // interior points.
    double worst_pd = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double xi = rng.uniform(tau + 1e-3, 2.0 * tau - 1e-3);
      const double xn = rng.uniform(1e-3, tau - 1e-3);
      const GEval e = conn.eval_g(xi, xn);
      const double h = 1e-6;
      const double fd_xi = (conn.eval_g(xi + h, xn).value - conn.eval_g(xi - h, xn).value) / (2.0 * h);
      const double fd_xn = (conn.eval_g(xi, xn + h).value - conn.eval_g(xi, xn - h).value) / (2.0 * h);
      worst_pd = std::max(worst_pd, rel_to(std::fabs(e.d_xi - fd_xi), std::fabs(e.d_xi)));
      worst_pd = std::max(worst_pd, rel_to(std::fabs(e.d_xnext - fd_xn), std::fabs(e.d_xnext)));
    }
    out.add("eval_g partials match central differences", worst_pd <= 1e-5,
            fmt("worst rel %.3g", worst_pd));
  } catch (const std::exception& e) {
    out.add("connector construction", false, e.what());
  }
  return out;
}

SuiteResult verify_boundary(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "boundary";
  const LandscapeParams& p = opt.params;
  const OctopusLandscape landscape(p);
  const int d = p.dim;
  const double tau = p.tau;
  RngStream rng(opt.seed, 2);

  for (int i = 1; i <= d; ++i) {
    for (int level = 0; level < 2; ++level) {  // 0: |x_i| = tau, 1: |x_i| = 2tau
      double df = 0.0, dg = 0.0, dh = 0.0;
      for (int n = 0; n < opt.boundary_points; ++n) {
        std::vector<double> x(static_cast<std::size_t>(d));
        const auto signs = random_signs(rng, d);
        for (int j = 0; j < d; ++j) {
          double a;
          if (j < i - 1)
            a = rng.uniform(2.0 * tau, 6.0 * tau);
          else if (j == i - 1)
            a = level == 0 ? tau : 2.0 * tau;
          else
            a = rng.uniform(0.0, tau);
          x[static_cast<std::size_t>(j)] = a * static_cast<double>(signs[static_cast<std::size_t>(j)]);
        }
        Region ra, rb;
        ra.signs = signs;
        rb.signs = signs;
        if (level == 0) {
          ra.kind = RegionKind::Quadratic;
          ra.index = i;
          rb.kind = i == d ? RegionKind::ConnectorXd : RegionKind::ConnectorXY;
          rb.index = i;
        } else {
          ra.kind = i == d ? RegionKind::ConnectorXd : RegionKind::ConnectorXY;
          ra.index = i;
          rb.kind = i == d ? RegionKind::Optimum : RegionKind::Quadratic;
          rb.index = i + 1;
        }
        const auto ea = landscape.eval_in_region(ra, x);
        const auto eb = landscape.eval_in_region(rb, x);
        df = std::max(df, std::fabs(ea.f - eb.f));
        for (int j = 0; j < d; ++j)
          dg = std::max(dg, std::fabs(ea.grad[static_cast<std::size_t>(j)] - eb.grad[static_cast<std::size_t>(j)]));
        SymMat ha = landscape.hessian_in_region(ra, x);
        const SymMat hb = landscape.hessian_in_region(rb, x);
        auto had = ha.data();
        auto hbd = hb.data();
        for (std::size_t m = 0; m < had.size(); ++m) had[m] -= hbd[m];
        dh = std::max(dh, max_abs(ha));
      }
      out.add(fmt("face |x_%d| = %stau", i, level == 0 ? "" : "2"),
              df <= 1e-8 && dg <= 1e-6 && dh <= 1e-4,
              fmt("max |df| %.3g, |dgrad| %.3g, |dhess| %.3g", df, dg, dh));
    }
  }
  return out;
}

SuiteResult verify_gradient(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "gradient";
  const LandscapeParams& p = opt.params;
  const OctopusLandscape landscape(p);
  const int d = p.dim;
  RngStream rng(opt.seed, 3);

  const double hg = 1e-6, hh = 1e-5;
  double worst_g = 0.0, worst_h = 0.0;
  int used = 0;
  std::vector<double> x(static_cast<std::size_t>(d)), xp(static_cast<std::size_t>(d));
  for (int n = 0; n < opt.gradient_points; ++n) {
    // Sample until all central-difference probes stay inside the domain.
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      landscape.sample_domain_point(rng, x);
      ok = true;
      for (int j = 0; j < d && ok; ++j) {
        for (double h : {hg, hh, -hg, -hh}) {
          xp = x;
          xp[static_cast<std::size_t>(j)] += h;
          if (landscape.region_of(xp).kind == RegionKind::OutOfDomain) {
            ok = false;
            break;
          }
        }
      }
    }
    if (!ok) continue;
    ++used;

    const auto ev = landscape.evaluate(x);
    const SymMat hess = landscape.hessian(x);
    double gscale = norm_inf(ev.grad);
    for (int j = 0; j < d; ++j) {
      xp = x;
      xp[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + hg;
      const double fp = landscape.value(xp);
      xp[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - hg;
      const double fm = landscape.value(xp);
      const double fd = (fp - fm) / (2.0 * hg);
      worst_g = std::max(
          worst_g, rel_to(std::fabs(fd - ev.grad[static_cast<std::size_t>(j)]), gscale));

      xp[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + hh;
      const auto gp = landscape.evaluate(xp);
      xp[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - hh;
      const auto gm = landscape.evaluate(xp);
      const double hscale = max_abs(hess);
      for (int m = 0; m < d; ++m) {
        const double fd2 =
            (gp.grad[static_cast<std::size_t>(m)] - gm.grad[static_cast<std::size_t>(m)]) / (2.0 * hh);
        worst_h = std::max(worst_h, rel_to(std::fabs(fd2 - hess(j, m)), hscale));
      }
    }
  }
  out.add("analytic gradient matches central differences", worst_g <= 1e-5,
          fmt("worst rel %.3g over %d points", worst_g, used));
  out.add("analytic hessian matches gradient differences", worst_h <= 1e-4,
          fmt("worst rel %.3g over %d points", worst_h, used));
  return out;
}

SuiteResult verify_lemma8(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "lemma8";
  try {
    const double eta = opt.eta > 0.0 ? opt.eta : 0.5 / opt.params.L;
    const NonEscapeResult res =
        verify_non_escape(opt.params, eta, opt.lemma8_trials, opt.seed, opt.step_budget);
    std::string detail = fmt("%d trials x %lld steps", res.trials,
                             static_cast<long long>(res.steps_per_trial));
    for (std::size_t i = 0; i < res.violations.size() && i < 4; ++i) {
      const auto& v = res.violations[i];
      detail += fmt("; trial %d escaped at t=%lld (x_d=%.6g)", v.trial,
                    static_cast<long long>(v.iter), v.xd);
    }
    out.add("|x_d| <= 2 tau within the step bound", res.pass, detail);
  } catch (const std::exception& e) {
    out.add("non-escape run", false, e.what());
  }
  return out;
}

SuiteResult verify_sosp(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "sosp";
  const LandscapeParams& p = opt.params;
  const OctopusLandscape landscape(p);
  const int d = p.dim;
  RngStream rng(opt.seed, 4);

  try {
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<std::int8_t> signs =
          rep == 0 ? std::vector<std::int8_t>(static_cast<std::size_t>(d), 1) : random_signs(rng, d);
      const auto pts = landscape.stationary_points(signs);
      bool lam_ok = true, min_ok = true;
      for (const auto& sp : pts) {
        if (sp.kind == StationaryKind::StrictSaddle)
          lam_ok = lam_ok && std::fabs(sp.lambda_min + 2.0 * p.gamma) <= 1e-9;
      }
      const auto& mn = pts.back();
      const double fmin = landscape.value(mn.location);
      min_ok = fmin == -static_cast<double>(d) * landscape.nu();
      const SymMat h = landscape.hessian(mn.location);
      for (int i = 0; i < d && min_ok; ++i)
        for (int j = 0; j < d && min_ok; ++j)
          min_ok = h(i, j) == (i == j ? 2.0 * p.L : 0.0);
      out.add(fmt("catalog (branch %d): lambda_min and minimum", rep), lam_ok && min_ok,
              fmt("f(min) %.17g", fmin));
    }
  } catch (const std::exception& e) {
    out.add("stationary catalog", false, e.what());
  }

  const double eps = p.gamma * p.tau / 2.0;
  if (d <= 3) {
    const auto scan = scan_stationary(landscape, p.tau / 20.0, eps, eps / (2.0 * p.gamma));
    out.add("grid scan: no spurious small-gradient points", scan.pass,
            fmt("%lld points, eps %.4g, radius %.4g", static_cast<long long>(scan.points_scanned),
                scan.epsilon, scan.radius));
  } else {
    out.add("grid scan: no spurious small-gradient points", true,
            fmt("skipped for d=%d (grid scan is run for d <= 3)", d));
  }

  // Saddles fail the second-order condition only when sqrt(rho*eps) < 2
  // gamma, i.e. eps < 4 gamma^2 / rho; the classification threshold has to
  // respect the measured rho_hat.
  const auto est = estimate_smoothness(landscape, 1000, p.tau / 50.0, opt.seed);
  const double eps_cls =
      0.5 * std::min(p.gamma * p.tau, 4.0 * p.gamma * p.gamma / est.rho_hat);
  const auto signs = std::vector<std::int8_t>(static_cast<std::size_t>(d), 1);
  const auto pts = landscape.stationary_points(signs);
  bool cls_ok = sosp_check(landscape, pts.back().location, eps_cls, est.rho_hat);
  for (int k = 0; k + 1 < static_cast<int>(pts.size()); ++k)
    cls_ok =
        cls_ok && !sosp_check(landscape, pts[static_cast<std::size_t>(k)].location, eps_cls, est.rho_hat);
  out.add("sosp_check: true at minimum, false at saddles", cls_ok,
          fmt("eps %.4g rho_hat %.4g", eps_cls, est.rho_hat));
  return out;
}

SuiteResult verify_smoothness(const VerifyOptions& opt) {
  SuiteResult out;
  out.suite = "smoothness";
  std::vector<double> xs, yb, yl, yr;
  bool finite = true;
  double ell_floor = 0.0;
  for (int dd = 2; dd <= 10; ++dd) {
    LandscapeParams p = opt.params;
    p.dim = dd;
    const OctopusLandscape landscape(p);
    const auto est = estimate_smoothness(landscape, 2000, p.tau / 50.0, opt.seed + static_cast<std::uint64_t>(dd));
    finite = finite && std::isfinite(est.bound_hat) && std::isfinite(est.ell_hat) &&
             std::isfinite(est.rho_hat) && est.bound_hat > 0.0 && est.ell_hat > 0.0 &&
             est.rho_hat > 0.0;
    if (dd == 2) ell_floor = est.ell_hat;
    xs.push_back(std::log(static_cast<double>(dd)));
    yb.push_back(std::log(est.bound_hat));
    yl.push_back(std::log(est.ell_hat));
    yr.push_back(std::log(est.rho_hat));
  }
  out.add("estimates finite and positive for d = 2..10", finite);
  out.add("ell_hat >= 2L", ell_floor >= 2.0 * opt.params.L * (1.0 - 1e-9),
          fmt("ell_hat(d=2) %.6g", ell_floor));

  auto slope = [&](const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double sb = slope(yb), sl = slope(yl), sr = slope(yr);
  out.add("log-log growth slopes <= 3", sb <= 3.0 && sl <= 3.0 && sr <= 3.0,
          fmt("B %.3f, ell %.3f, rho %.3f", sb, sl, sr));
  return out;
}

namespace {

// A suite that cannot even set up (bad parameters, failed construction)
// reports that as a failing check instead of escaping the runner.
SuiteResult guarded(const char* name, SuiteResult (*suite)(const VerifyOptions&),
                    const VerifyOptions& opt) {
  try {
    return suite(opt);
  } catch (const std::exception& e) {
    SuiteResult out;
    out.suite = name;
    out.add("setup", false, e.what());
    return out;
  }
}

}  // namespace

std::vector<SuiteResult> verify_all(const VerifyOptions& opt) {
  return {guarded("spline", verify_spline, opt),   guarded("boundary", verify_boundary, opt),
          guarded("gradient", verify_gradient, opt), guarded("lemma8", verify_lemma8, opt),
          guarded("sosp", verify_sosp, opt),       guarded("smoothness", verify_smoothness, opt)};
}

std::vector<SuiteResult> run_suites(const std::string& name, const VerifyOptions& opt) {
  if (name == "spline") return {guarded("spline", verify_spline, opt)};
  if (name == "boundary") return {guarded("boundary", verify_boundary, opt)};
  if (name == "gradient") return {guarded("gradient", verify_gradient, opt)};
  if (name == "lemma8") return {guarded("lemma8", verify_lemma8, opt)};
  if (name == "sosp") return {guarded("sosp", verify_sosp, opt)};
  if (name == "smoothness") return {guarded("smoothness", verify_smoothness, opt)};
  if (name == "all") return verify_all(opt);
  throw ParameterError("unknown suite '" + name + "'");
}

}  // namespace octo
