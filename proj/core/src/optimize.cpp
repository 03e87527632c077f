#include "octo/optimize.hpp"

#include <cmath>
#include <cstdio>

#include "octo/errors.hpp"

namespace octo {

namespace {

constexpr std::int64_t kRecordBudget = 1'000'000;
constexpr std::int64_t kPointBudget = 1'000'000;

std::int64_t auto_stride(std::int64_t max_iters, std::int64_t budget) {
  return std::max<std::int64_t>(1, (max_iters + budget) / budget);
}

struct NoiseParams {
  double r;
  std::int64_t t_thres;
  double g_thres;
};

Trajectory run_loop(const Landscape& ls, std::span<const double> x0, const GDConfig& cfg,
                    const NoiseParams* noise, std::uint64_t seed, const StepObserver& observer) {
  const int d = ls.dim();
  if (static_cast<int>(x0.size()) != d)
    throw ParameterError("run: x0 has wrong dimension");
  if (!(cfg.eta > 0.0)) throw ParameterError("run: eta must be > 0");
  if (cfg.max_iters < 0) throw ParameterError("run: max_iters must be >= 0");
  const double L = ls.curvature_scale();
  if (cfg.eta > 2.0 / L)
    throw ParameterError("run: eta > 2/L is in the divergence regime");

  Trajectory traj;
  traj.dim = d;
  traj.config = cfg;
  traj.seed = seed;
  traj.eta_warning = cfg.eta > 0.5 / L * (1.0 + 1e-12);
  traj.record_stride = cfg.record_stride > 0 ? cfg.record_stride : auto_stride(cfg.max_iters, kRecordBudget);
  traj.point_stride = cfg.point_stride > 0 ? cfg.point_stride : auto_stride(cfg.max_iters, kPointBudget);
  if (const LandscapeParams* op = ls.octopus_params()) {
    traj.octopus = *op;
    traj.tally.emplace();
    traj.tally->resize(op->dim);
  }

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
  RngStream rng(seed, 0);
  std::int64_t t_noise = noise ? -noise->t_thres - 1 : 0;
  const double guard = 1e6 * ls.length_scale();

  RegionId prev{};
  bool have_prev = false;
  std::int64_t t = 0;

  for (;; ++t) {
    double f = 0.0;
    RegionId reg;
    bool frozen = ls.eval_into(x, f, grad, reg);
    double gn = norm2(grad);

    bool noise_added = false;
    if (noise != nullptr && gn <= noise->g_thres && t - t_noise > noise->t_thres) {
      const std::vector<double> xi = sample_ball(rng, d, noise->r);
      for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] += xi[static_cast<std::size_t>(j)];
      t_noise = t;
      noise_added = true;
      frozen = ls.eval_into(x, f, grad, reg) || frozen;
      gn = norm2(grad);
    }

    const double dist = ls.dist_to_minimum(x);
    traj.any_oob = traj.any_oob || frozen;
    if (traj.tally) traj.tally->update(reg, t);

    const bool transition = !have_prev || !(reg == prev);
    prev = reg;
    have_prev = true;

    const bool stop_gn = cfg.stop_grad_norm && gn <= *cfg.stop_grad_norm;
    const bool stop_dm = cfg.stop_dist_to_min && dist <= *cfg.stop_dist_to_min;
    const bool last = t == cfg.max_iters || stop_gn || stop_dm;

    if (t % traj.record_stride == 0 || transition || noise_added || last) {
      traj.records.push_back({t, f, gn, reg.kind, reg.index, noise_added, frozen, dist});
    }
    if (t % traj.point_stride == 0 || transition || noise_added || last) {
      traj.point_iters.push_back(t);
      traj.points.insert(traj.points.end(), x.begin(), x.end());
    }
    if (observer) observer(StepInfo{t, x, f, gn, reg, noise_added, frozen, dist});

    if (last) {
      traj.stop_reason =
          stop_gn ? StopReason::GradNorm : (stop_dm ? StopReason::DistToMin : StopReason::MaxIters);
      break;
    }

    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] -= cfg.eta * grad[static_cast<std::size_t>(j)];
    if (norm_inf(x) > guard) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "run: |x|_inf > %.3g after %lld steps", guard,
                    static_cast<long long>(t + 1));
      throw DivergenceError(buf);
    }
  }

  traj.total_iters = t;
  return traj;
}

}  // namespace

Trajectory run_gd(const Landscape& landscape, std::span<const double> x0, const GDConfig& config,
                  const StepObserver& observer) {
  return run_loop(landscape, x0, config, nullptr, 0, observer);
}

Trajectory run_pgd(const Landscape& landscape, std::span<const double> x0, const PGDConfig& config,
                   const StepObserver& observer) {
  if (config.r < 0.0) throw ParameterError("run_pgd: r must be >= 0");
  if (config.t_thres < 1) throw ParameterError("run_pgd: t_thres must be >= 1");
  if (!(config.g_thres > 0.0)) throw ParameterError("run_pgd: g_thres must be > 0");
  NoiseParams np{config.r, config.t_thres, config.g_thres};
  Trajectory traj = run_loop(landscape, x0, config.gd, &np, config.seed, observer);
  traj.pgd = config;
  return traj;
}

std::vector<double> sample_ball(RngStream& rng, int dim, double r) {
  if (r < 0.0) throw ParameterError("sample_ball: r must be >= 0");
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  if (r == 0.0 || dim == 0) return v;
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& c : v) {
      c = rng.normal();
      n2 += c * c;
    }
  } while (n2 == 0.0);
  const double radius = r * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
  const double scale = radius / std::sqrt(n2);
  for (double& c : v) c *= scale;
  return v;
}

InitScheme InitScheme::parse(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw ParameterError("init: bad number in '" + text + "'");
    }
  };
  if (text == "unitcube") return unit_cube();
  if (text.rfind("gaussian:", 0) == 0) {
    const double s = number(text.substr(9));
    if (!(s > 0.0)) throw ParameterError("init: gaussian sigma must be > 0");
    return gaussian(s);
  }
  if (text.rfind("cube:", 0) == 0) {
    const std::string rest = text.substr(5);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ParameterError("init: cube needs cube:<lo>,<hi>");
    const double lo = number(rest.substr(0, comma));
    const double hi = number(rest.substr(comma + 1));
    if (!(lo < hi)) throw ParameterError("init: cube needs lo < hi");
    return cube(lo, hi);
  }
  throw ParameterError("init: unknown scheme '" + text + "'");
}

std::string InitScheme::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::UnitCube:
      return "unitcube";
    case Kind::Cube:
      std::snprintf(buf, sizeof buf, "cube:%g,%g", lo, hi);
      return buf;
    case Kind::Gaussian:
      std::snprintf(buf, sizeof buf, "gaussian:%g", sigma);
      return buf;
  }
  return "?";
}

std::vector<double> sample_init(RngStream& rng, int dim, const InitScheme& scheme) {
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
  switch (scheme.kind) {
    case InitScheme::Kind::UnitCube:
      for (double& c : x) c = rng.uniform(-1.0, 1.0);
      break;
    case InitScheme::Kind::Cube:
      for (double& c : x) c = rng.uniform(scheme.lo, scheme.hi);
      break;
    case InitScheme::Kind::Gaussian:
      for (double& c : x) c = scheme.sigma * rng.normal();
      break;
  }
  return x;
}

}  // namespace octo
