#include "octo/octopus.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "octo/errors.hpp"

namespace octo {

namespace {

inline double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

std::string point_string(std::span<const double> x) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", x[i]);
    s += buf;
    if (i + 1 < x.size()) s += ", ";
  }
  return s + ")";
}

}  // namespace

const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::Quadratic: return "quadratic";
    case RegionKind::ConnectorXY: return "connector_xy";
    case RegionKind::ConnectorXd: return "connector_xd";
    case RegionKind::Optimum: return "optimum";
    case RegionKind::OutOfDomain: return "out_of_domain";
  }
  return "?";
}

namespace {

// Dispatch: the active coordinate is the first with |x_j| <= 2tau whose tail
// coordinates all satisfy |x_m| <= tau. A coordinate at exactly 2tau prefers
// its connector but may also serve as an escaped prefix coordinate, so on a
// failed tail check it falls through to the next block.
RegionId region_id_of(const LandscapeParams& params, std::span<const double> x) {
  const int d = params.dim;
  const double tau = params.tau;
  int start = 0;
  for (;;) {
    int active = -1;
    for (int j = start; j < d; ++j) {
      const double a = std::fabs(x[static_cast<std::size_t>(j)]);
      if (a <= 2.0 * tau) {
        active = j;
        break;
      }
      if (a > 6.0 * tau) return {RegionKind::OutOfDomain, 0};
    }
    if (active < 0) return {RegionKind::Optimum, static_cast<std::int16_t>(d + 1)};
    bool tail_ok = true;
    for (int j = active + 1; j < d && tail_ok; ++j)
      tail_ok = std::fabs(x[static_cast<std::size_t>(j)]) <= tau;
    const double a = std::fabs(x[static_cast<std::size_t>(active)]);
    if (tail_ok) {
      RegionKind kind = a < tau ? RegionKind::Quadratic
                                : (active == d - 1 ? RegionKind::ConnectorXd
                                                   : RegionKind::ConnectorXY);
      return {kind, static_cast<std::int16_t>(active + 1)};
    }
    if (a == 2.0 * tau) {
      start = active + 1;  // boundary coordinate doubles as an escaped prefix
      continue;
    }
    return {RegionKind::OutOfDomain, 0};
  }
}

}  // namespace

Region locate_region(const LandscapeParams& params, std::span<const double> x) {
  const int d = params.dim;
  Region out;
  out.signs.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    out.signs[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] < 0.0 ? -1 : 1;
  const RegionId id = region_id_of(params, x);
  out.kind = id.kind;
  out.index = id.index;
  return out;
}

OctopusLandscape::OctopusLandscape(const LandscapeParams& params, OobPolicy policy)
    : params_(params), policy_(policy), conn_(build_connectors(params)) {}

RegionId OctopusLandscape::region_of(std::span<const double> x) const {
  return region_id_of(params_, x);
}

void OctopusLandscape::eval_region(RegionKind kind, int index, std::span<const double> x,
                                   double& f, std::span<double> grad) const {
  const double L = params_.L, gamma = params_.gamma, tau = params_.tau;
  const int d = params_.dim;
  const double nu = conn_.nu();

  auto prefix_term = [&](int j) {
    const double xj = x[static_cast<std::size_t>(j)];
    const double dj = xj - 4.0 * tau * sgn(xj);
    f += L * dj * dj;
    grad[static_cast<std::size_t>(j)] = 2.0 * L * dj;
  };
  auto tail_term = [&](int j) {
    const double xj = x[static_cast<std::size_t>(j)];
    f += L * xj * xj;
    grad[static_cast<std::size_t>(j)] = 2.0 * L * xj;
  };

  if (kind == RegionKind::Optimum) {
    f = -static_cast<double>(d) * nu;
    for (int j = 0; j < d; ++j) prefix_term(j);
    return;
  }

  const int i = index - 1;  // active coordinate, 0-based
  f = -static_cast<double>(index - 1) * nu;
  for (int j = 0; j < i; ++j) prefix_term(j);

  switch (kind) {
    case RegionKind::Quadratic: {
      const double xi = x[static_cast<std::size_t>(i)];
      f += -gamma * xi * xi;
      grad[static_cast<std::size_t>(i)] = -2.0 * gamma * xi;
      for (int j = i + 1; j < d; ++j) tail_term(j);
      break;
    }
    case RegionKind::ConnectorXY: {
      const double xi = x[static_cast<std::size_t>(i)];
      const double s = sgn(xi);
      const GEval e = conn_.eval_g(s * xi, x[static_cast<std::size_t>(i + 1)]);
      f += e.value;
      grad[static_cast<std::size_t>(i)] = s * e.d_xi;
      grad[static_cast<std::size_t>(i + 1)] = e.d_xnext;
      for (int j = i + 2; j < d; ++j) tail_term(j);
      break;
    }
    case RegionKind::ConnectorXd: {
      const double xi = x[static_cast<std::size_t>(i)];
      const double s = sgn(xi);
      const double u = s * xi;
      f += conn_.g1(u);
      grad[static_cast<std::size_t>(i)] = s * conn_.g1_deriv(u);
      break;
    }
    default:
      throw OutOfDomainError("octopus: cannot evaluate out-of-domain region");
  }
}

bool OctopusLandscape::eval_into(std::span<const double> x, double& f, std::span<double> grad,
                                 RegionId& region) const {
  region = region_of(x);
  if (region.kind != RegionKind::OutOfDomain) {
    eval_region(region.kind, region.index, x, f, grad);
    return false;
  }
  if (policy_ == OobPolicy::Error) {
    throw OutOfDomainError("octopus: point outside domain: " + point_string(x));
  }
  // FreezeGradient: evaluate at the nearest in-domain point instead.
  const std::vector<double> xp = project_to_domain(x);
  const RegionId inner = region_of(xp);
  eval_region(inner.kind, inner.index, xp, f, grad);
  return true;
}

SymMat OctopusLandscape::hessian_region(RegionKind kind, int index,
                                        std::span<const double> x) const {
  const double L = params_.L, gamma = params_.gamma;
  const int d = params_.dim;
  SymMat h(d);
  for (int j = 0; j < d; ++j) h.set(j, j, 2.0 * L);

  if (kind == RegionKind::Optimum) return h;
  const int i = index - 1;
  switch (kind) {
    case RegionKind::Quadratic:
      h.set(i, i, -2.0 * gamma);
      break;
    case RegionKind::ConnectorXY: {
      const double xi = x[static_cast<std::size_t>(i)];
      const double s = sgn(xi);
      const GEval e = conn_.eval_g(s * xi, x[static_cast<std::size_t>(i + 1)]);
      h.set(i, i, e.dd_xi_xi);
      h.set(i, i + 1, s * e.dd_xi_xnext);
      h.set(i + 1, i + 1, e.dd_xnext_xnext);
      break;
    }
    case RegionKind::ConnectorXd: {
      const double u = std::fabs(x[static_cast<std::size_t>(i)]);
      h.set(i, i, conn_.g1_second(u));
      break;
    }
    default:
      throw OutOfDomainError("octopus: cannot evaluate out-of-domain region");
  }
  return h;
}

SymMat OctopusLandscape::hessian(std::span<const double> x) const {
  RegionId reg = region_of(x);
  if (reg.kind == RegionKind::OutOfDomain) {
    if (policy_ == OobPolicy::Error)
      throw OutOfDomainError("octopus: point outside domain: " + point_string(x));
    const std::vector<double> xp = project_to_domain(x);
    reg = region_of(xp);
    return hessian_region(reg.kind, reg.index, xp);
  }
  return hessian_region(reg.kind, reg.index, x);
}

Landscape::Evaluation OctopusLandscape::eval_in_region(const Region& region,
                                                       std::span<const double> x) const {
  Evaluation out;
  out.grad.assign(static_cast<std::size_t>(dim()), 0.0);
  out.region = region.id();
  eval_region(region.kind, region.index, x, out.f, out.grad);
  return out;
}

SymMat OctopusLandscape::hessian_in_region(const Region& region, std::span<const double> x) const {
  return hessian_region(region.kind, region.index, x);
}

double OctopusLandscape::dist_to_minimum(std::span<const double> x) const {
  // Minima sit at (+-4tau, ..., +-4tau); folding onto |x| picks the nearest.
  const double target = 4.0 * params_.tau;
  double s = 0.0;
  for (double v : x) {
    const double dv = std::fabs(v) - target;
    s += dv * dv;
  }
  return std::sqrt(s);
}

std::vector<double> OctopusLandscape::minimum_location(
    std::span<const std::int8_t> branch_signs) const {
  const int d = params_.dim;
  if (static_cast<int>(branch_signs.size()) != d)
    throw ParameterError("minimum_location: sign vector has wrong length");
  std::vector<double> loc(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    loc[static_cast<std::size_t>(j)] = 4.0 * params_.tau * static_cast<double>(branch_signs[static_cast<std::size_t>(j)]);
  return loc;
}

std::vector<StationaryPoint> OctopusLandscape::stationary_points(
    std::span<const std::int8_t> branch_signs) const {
  const int d = params_.dim;
  if (static_cast<int>(branch_signs.size()) != d)
    throw ParameterError("stationary_points: sign vector has wrong length");

  std::vector<StationaryPoint> out;
  out.reserve(static_cast<std::size_t>(d) + 1);
  for (int k = 1; k <= d + 1; ++k) {
    StationaryPoint sp;
    sp.location.assign(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < k - 1; ++j)  // k = d+1 fills all coordinates: the minimum
      sp.location[static_cast<std::size_t>(j)] =
          4.0 * params_.tau * static_cast<double>(branch_signs[static_cast<std::size_t>(j)]);
    sp.kind = k <= d ? StationaryKind::StrictSaddle : StationaryKind::LocalMinimum;
    sp.alpha = k <= d ? 2.0 * params_.gamma : 0.0;

    const Evaluation ev = evaluate(sp.location);
    sp.lambda_min = octo::lambda_min(hessian(sp.location));
    const double gn = norm2(ev.grad);
    if (gn > 1e-10)
      throw VerificationError("stationary point " + std::to_string(k) +
                              " has nonzero gradient norm " + std::to_string(gn));
    if (sp.kind == StationaryKind::StrictSaddle) {
      if (!(sp.lambda_min <= -sp.alpha + 1e-9))
        throw VerificationError("saddle " + std::to_string(k) + " is not strict");
    } else if (!(sp.lambda_min >= -1e-12)) {
      throw VerificationError("minimum has negative curvature");
    }
    out.push_back(std::move(sp));
  }
  return out;
}

void OctopusLandscape::sample_domain_point(RngStream& rng, std::span<double> out) const {
  const int d = params_.dim;
  const double tau = params_.tau;
  // Strata: (Quadratic i) for i=1..d, (Connector i) for i=1..d, Optimum.
  const int stratum = static_cast<int>(rng.uniform01() * static_cast<double>(2 * d + 1));
  const int active = stratum < 2 * d ? stratum / 2 : d;  // d = bowl
  const bool connector = stratum < 2 * d && (stratum % 2 == 1);
  for (int j = 0; j < d; ++j) {
    double a;
    if (j < active) {
      a = rng.uniform(2.0 * tau, 6.0 * tau);
    } else if (j == active) {
      a = connector ? rng.uniform(tau, 2.0 * tau) : rng.uniform(0.0, tau);
    } else {
      a = rng.uniform(0.0, tau);
    }
    out[static_cast<std::size_t>(j)] = rng.uniform01() < 0.5 ? -a : a;
  }
}

std::vector<double> OctopusLandscape::project_to_domain(std::span<const double> x) const {
  const int d = params_.dim;
  const double tau = params_.tau;
  std::vector<double> folded(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) folded[static_cast<std::size_t>(j)] = std::fabs(x[static_cast<std::size_t>(j)]);

  auto clamp = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_pt(static_cast<std::size_t>(d));
  std::vector<double> cand(static_cast<std::size_t>(d));
  // One candidate block per active index (d+1 = the bowl).
  for (int i = 0; i < d + 1; ++i) {
    double dist = 0.0;
    for (int j = 0; j < d; ++j) {
      const double a = folded[static_cast<std::size_t>(j)];
      double lo, hi;
      if (j < i) {
        lo = 2.0 * tau;
        hi = 6.0 * tau;
      } else if (j == i) {
        lo = 0.0;
        hi = 2.0 * tau;
      } else {
        lo = 0.0;
        hi = tau;
      }
      const double c = clamp(a, lo, hi);
      cand[static_cast<std::size_t>(j)] = c;
      dist += (a - c) * (a - c);
    }
    if (dist < best) {
      best = dist;
      best_pt = cand;
    }
  }
  for (int j = 0; j < d; ++j) best_pt[static_cast<std::size_t>(j)] *= sgn(x[static_cast<std::size_t>(j)]);
  return best_pt;
}

}  // namespace octo
