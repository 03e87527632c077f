#include "octo/analysis.hpp"

#include <cmath>

#include "octo/errors.hpp"

namespace octo {

namespace {

EscapeTally tally_from_records(const Trajectory& traj, int d) {
  EscapeTally tally;
  tally.resize(d);
  for (const StepRecord& r : traj.records) {
    tally.update({r.region_kind, r.saddle_index}, r.iter);
  }
  return tally;
}

}  // namespace

EscapeReport escape_report(const Trajectory& traj, const LandscapeParams& params) {
  if (!traj.octopus || !(*traj.octopus == params))
    throw MismatchError("escape_report: trajectory was not produced on this landscape");
  const int d = params.dim;

  // With unthinned records the tally can be recomputed from the stored
  // metadata; thinned runs fall back to the exact streaming tally.
  const EscapeTally tally = traj.record_stride == 1 || !traj.tally
                                ? tally_from_records(traj, d)
                                : *traj.tally;

  EscapeReport rep;
  rep.dim = d;
  rep.total_iters = traj.total_iters;
  rep.reached_min = tally.first_optimum >= 0;
  rep.saddles.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    auto& s = rep.saddles[static_cast<std::size_t>(k)];
    if (tally.first_escape[static_cast<std::size_t>(k)] >= 0)
      s.first_escape = tally.first_escape[static_cast<std::size_t>(k)];
    s.connector_iters = tally.connector_iters[static_cast<std::size_t>(k)];
  }
  rep.ratios.resize(static_cast<std::size_t>(d - 1));
  for (int k = 0; k + 1 < d; ++k) {
    const auto qa = rep.saddles[static_cast<std::size_t>(k)].quadratic_time();
    const auto qb = rep.saddles[static_cast<std::size_t>(k + 1)].quadratic_time();
    if (qa && qb && *qa > 0)
      rep.ratios[static_cast<std::size_t>(k)] =
          static_cast<double>(*qb) / static_cast<double>(*qa);
  }
  rep.per_saddle.resize(static_cast<std::size_t>(d));
  std::int64_t prev = 0;
  for (int k = 0; k < d; ++k) {
    const auto& te = rep.saddles[static_cast<std::size_t>(k)].first_escape;
    if (!te) break;
    rep.per_saddle[static_cast<std::size_t>(k)] = *te - prev;
    prev = *te;
  }
  return rep;
}

NonEscapeResult verify_non_escape(const LandscapeParams& params, double eta, int trials,
                                  std::uint64_t seed, std::int64_t step_budget) {
  params.validate();
  if (params.tau_below_recommended())
    throw ParameterError("verify_non_escape: requires tau >= e");
  if (!(eta > 0.0) || eta > 0.5 / params.L * (1.0 + 1e-12))
    throw ParameterError("verify_non_escape: requires 0 < eta <= 1/(2L)");
  if (trials < 1) throw ParameterError("verify_non_escape: trials must be >= 1");

  const double bound = std::pow(params.escape_ratio(), params.dim - 1);
  if (!(bound < static_cast<double>(step_budget)))
    throw ParameterError("verify_non_escape: step count exceeds budget");
  const std::int64_t steps = static_cast<std::int64_t>(std::ceil(bound));

  const OctopusLandscape landscape(params);
  const int d = params.dim;
  NonEscapeResult res;
  res.trials = trials;
  res.steps_per_trial = steps;

  std::vector<double> x(static_cast<std::size_t>(d)), grad(static_cast<std::size_t>(d));
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, static_cast<std::uint64_t>(trial));
    for (double& c : x) c = rng.uniform01();  // U[0,1]^d, inside the positive branch
    bool violated = false;
    for (std::int64_t t = 0; t <= steps && !violated; ++t) {
      if (!(std::fabs(x[static_cast<std::size_t>(d - 1)]) <= 2.0 * params.tau)) {
        res.violations.push_back({trial, t, x[static_cast<std::size_t>(d - 1)]});
        violated = true;
        break;
      }
      if (t == steps) break;
      double f = 0.0;
      RegionId reg;
      landscape.eval_into(x, f, grad, reg);
      for (int j = 0; j < d; ++j)
        x[static_cast<std::size_t>(j)] -= eta * grad[static_cast<std::size_t>(j)];
    }
    if (violated) res.pass = false;
  }
  return res;
}

bool sosp_check(const Landscape& landscape, std::span<const double> x, double epsilon,
                double rho) {
  if (!(epsilon > 0.0)) throw ParameterError("sosp_check: epsilon must be > 0");
  if (!(rho > 0.0)) throw ParameterError("sosp_check: rho must be > 0");
  const auto ev = landscape.evaluate(x);
  if (norm2(ev.grad) > epsilon) return false;
  return lambda_min(landscape.hessian(x)) >= -std::sqrt(rho * epsilon);
}

SmoothnessEstimate estimate_smoothness(const Landscape& landscape, int samples, double pair_scale,
                                       std::uint64_t seed) {
  if (samples < 1) throw ParameterError("estimate_smoothness: samples must be >= 1");
  if (!(pair_scale > 0.0)) throw ParameterError("estimate_smoothness: pair_scale must be > 0");

  const int d = landscape.dim();
  SmoothnessEstimate est;
  est.samples = samples;
  est.pair_scale = pair_scale;

  RngStream rng(seed, 0);
  std::vector<double> x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
  for (int s = 0; s < samples; ++s) {
    landscape.sample_domain_point(rng, x);
    const auto ex = landscape.evaluate(x);
    est.bound_hat = std::max(est.bound_hat, std::fabs(ex.f));

    // Paired point at distance pair_scale, resampled until it stays in
    // the domain (a few tries suffice away from corners).
    bool ok = false;
    for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
      double n2 = 0.0;
      for (double& c : y) {
        c = rng.normal();
        n2 += c * c;
      }
      if (n2 == 0.0) continue;
      const double scale = pair_scale / std::sqrt(n2);
      for (int j = 0; j < d; ++j)
        y[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + scale * y[static_cast<std::size_t>(j)];
      ok = landscape.region_of(y).kind != RegionKind::OutOfDomain;
    }
    if (!ok) continue;

    const auto ey = landscape.evaluate(y);
    est.bound_hat = std::max(est.bound_hat, std::fabs(ey.f));
    const double dist = dist2(x, y);
    if (dist <= 0.0) continue;
    double gd2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double gd = ex.grad[static_cast<std::size_t>(j)] - ey.grad[static_cast<std::size_t>(j)];
      gd2 += gd * gd;
    }
    est.ell_hat = std::max(est.ell_hat, std::sqrt(gd2) / dist);

    SymMat hx = landscape.hessian(x);
    const SymMat hy = landscape.hessian(y);
    auto hd = hx.data();
    auto hyd = hy.data();
    for (std::size_t i = 0; i < hd.size(); ++i) hd[i] -= hyd[i];
    est.rho_hat = std::max(est.rho_hat, operator_norm(hx) / dist);
  }
  return est;
}

StationaryScanResult scan_stationary(const OctopusLandscape& landscape, double resolution,
                                     double epsilon, double radius, std::size_t max_report) {
  const LandscapeParams& p = landscape.params();
  const int d = p.dim;
  const double tau = p.tau;

  StationaryScanResult res;
  res.epsilon = epsilon;
  res.radius = radius;

  // Folded catalog: (4tau,...,4tau, 0,...,0) with k-1 leading entries for
  // saddle k, plus the all-4tau minimum.
  auto catalog_dist = [&](std::span<const double> a) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= d + 1; ++k) {
      double dist = 0.0;
      for (int j = 0; j < d; ++j) {
        const double target = j < k - 1 ? 4.0 * tau : 0.0;
        dist = std::max(dist, std::fabs(a[static_cast<std::size_t>(j)] - target));
      }
      best = std::min(best, dist);
    }
    return best;
  };

  std::vector<double> x(static_cast<std::size_t>(d)), grad(static_cast<std::size_t>(d));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(d));
  auto grid_size = [&](double lo, double hi) {
    return static_cast<std::int64_t>(std::floor((hi - lo) / resolution + 1e-9)) + 1;
  };

  // One pass per active block; coordinates j < i range over [2tau, 6tau],
  // the active one over [0, 2tau], the tail over [0, tau]. By mirror
  // symmetry scanning the positive orthant covers the full domain.
  for (int i = 0; i < d + 1; ++i) {
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      if (j < i) {
        lo[static_cast<std::size_t>(j)] = 2.0 * tau;
        hi[static_cast<std::size_t>(j)] = 6.0 * tau;
      } else if (j == i) {
        lo[static_cast<std::size_t>(j)] = 0.0;
        hi[static_cast<std::size_t>(j)] = 2.0 * tau;
      } else {
        lo[static_cast<std::size_t>(j)] = 0.0;
        hi[static_cast<std::size_t>(j)] = tau;
      }
    }
    for (int j = 0; j < d; ++j)
      counts[static_cast<std::size_t>(j)] = grid_size(lo[static_cast<std::size_t>(j)], hi[static_cast<std::size_t>(j)]);

    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    bool done = false;
    while (!done) {
      for (int j = 0; j < d; ++j)
        x[static_cast<std::size_t>(j)] =
            std::min(lo[static_cast<std::size_t>(j)] + resolution * static_cast<double>(idx[static_cast<std::size_t>(j)]),
                     hi[static_cast<std::size_t>(j)]);
      double f = 0.0;
      RegionId reg;
      landscape.eval_into(x, f, grad, reg);
      ++res.points_scanned;
      if (norm2(grad) <= epsilon && catalog_dist(x) > radius) {
        res.pass = false;
        if (res.spurious.size() < max_report) res.spurious.emplace_back(x.begin(), x.end());
      }
      // odometer increment
      int j = 0;
      for (; j < d; ++j) {
        if (++idx[static_cast<std::size_t>(j)] < counts[static_cast<std::size_t>(j)]) break;
        idx[static_cast<std::size_t>(j)] = 0;
      }
      done = j == d;
    }
  }
  return res;
}

std::optional<std::int64_t> first_sosp_en_route(const OctopusLandscape& landscape,
                                                const Trajectory& traj, double epsilon,
                                                double rho) {
  for (std::size_t i = 0; i < traj.point_iters.size(); ++i) {
    const auto x = traj.point_at(i);
    if (landscape.region_of(x).kind == RegionKind::Optimum) break;
    if (sosp_check(landscape, x, epsilon, rho)) return traj.point_iters[i];
  }
  return std::nullopt;
}

}  // namespace octo
