#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "octo/errors.hpp"
#include "octo/octopus.hpp"
#include "octo/optimize.hpp"
#include "octo/warmups.hpp"

using namespace octo;

namespace {

const double kE = std::exp(1.0);

LandscapeParams make_params(int d, double L = kE, double gamma = 1.0, double tau = kE) {
  return LandscapeParams{d, L, gamma, tau};
}

std::vector<double> vec(std::initializer_list<double> v) { return {v}; }

}  // namespace

TEST_CASE("sample_ball: radius zero gives the zero vector") {
  RngStream rng(1, 0);
  const auto v = sample_ball(rng, 5, 0.0);
  for (double c : v) CHECK(c == 0.0);
  CHECK_THROWS_AS(sample_ball(rng, 5, -1.0), ParameterError);
}

TEST_CASE("sample_ball: norms bounded, nested-ball mass, symmetric mean") {
  RngStream rng(2, 0);
  const int n = 100000, d = 5;
  int inside_half = 0;
  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto v = sample_ball(rng, d, 1.0);
    const double norm = norm2(v);
    CHECK(norm <= 1.0);
    if (norm <= 0.5) ++inside_half;
    for (int j = 0; j < d; ++j) mean[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
  }
  for (double& m : mean) m /= n;
  // Volume of the half-radius ball is 2^-5 of the total.
  CHECK(std::fabs(static_cast<double>(inside_half) / n - 0.03125) <= 0.002);
  CHECK(norm2(mean) <= 0.01);
}

TEST_CASE("sample_init: schemes produce the right supports") {
  RngStream rng(3, 0);
  const int n = 100000;

  std::vector<double> mean(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto v = sample_init(rng, 3, InitScheme::unit_cube());
    for (int j = 0; j < 3; ++j) {
      CHECK(std::fabs(v[static_cast<std::size_t>(j)]) <= 1.0);
      mean[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
    }
  }
  for (double m : mean) CHECK(std::fabs(m / n) <= 0.01);

  for (int i = 0; i < 1000; ++i) {
    const auto v = sample_init(rng, 4, InitScheme::cube(0.0, 1.0));
    for (double c : v) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
  }

  // Per-coordinate Gaussian tail: P(any |x_i| > 4 sigma) <= d * 2 Phi(-4).
  const double sigma = 0.7;
  int outside = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_init(rng, 5, InitScheme::gaussian(sigma));
    bool out = false;
    for (double c : v) out = out || std::fabs(c) > 4.0 * sigma;
    outside += out ? 1 : 0;
  }
  CHECK(static_cast<double>(outside) / n <= 1e-3);
}

TEST_CASE("InitScheme::parse round trips") {
  CHECK(InitScheme::parse("unitcube").kind == InitScheme::Kind::UnitCube);
  const auto c = InitScheme::parse("cube:0,1");
  CHECK(c.kind == InitScheme::Kind::Cube);
  CHECK(c.lo == 0.0);
  CHECK(c.hi == 1.0);
  const auto g = InitScheme::parse("gaussian:0.5");
  CHECK(g.kind == InitScheme::Kind::Gaussian);
  CHECK(g.sigma == 0.5);
  CHECK_THROWS_AS(InitScheme::parse("wat"), ParameterError);
  CHECK_THROWS_AS(InitScheme::parse("cube:1,0"), ParameterError);
  CHECK(InitScheme::parse(InitScheme::cube(-2.0, 3.0).to_string()).hi == 3.0);
}

TEST_CASE("run_gd: stationary start stays put") {
  const OctopusLandscape landscape(make_params(3));
  GDConfig cfg;
  cfg.eta = 1.0 / (4.0 * kE);
  cfg.max_iters = 50;
  const Trajectory t = run_gd(landscape, vec({0.0, 0.0, 0.0}), cfg);
  for (std::size_t i = 0; i < t.point_iters.size(); ++i) {
    for (double c : t.point_at(i)) CHECK(c == 0.0);
  }
  CHECK(t.total_iters == 50);
}

TEST_CASE("run_gd: region progression is monotone through the tube") {
  const OctopusLandscape landscape(make_params(2));
  GDConfig cfg;
  cfg.eta = 1.0 / (4.0 * kE);  // steep coordinates halve per step
  cfg.max_iters = 2000;
  cfg.stop_dist_to_min = 1e-6;
  const Trajectory t = run_gd(landscape, vec({0.5, 0.5}), cfg);

  // Expected region order: Quadratic(1), ConnectorXY(1), Quadratic(2),
  // ConnectorXd, Optimum.
  std::vector<RegionId> order;
  for (const auto& r : t.records) {
    const RegionId id{r.region_kind, r.saddle_index};
    if (order.empty() || !(order.back() == id)) order.push_back(id);
  }
  REQUIRE(order.size() == 5);
  CHECK(order[0] == RegionId{RegionKind::Quadratic, 1});
  CHECK(order[1] == RegionId{RegionKind::ConnectorXY, 1});
  CHECK(order[2] == RegionId{RegionKind::Quadratic, 2});
  CHECK(order[3] == RegionId{RegionKind::ConnectorXd, 2});
  CHECK(order[4] == RegionId{RegionKind::Optimum, 3});
  CHECK(t.stop_reason == StopReason::DistToMin);

  // Progress (escaped coordinate count) never decreases.
  int prog = 0;
  for (const auto& r : t.records) {
    const int pr = RegionId{r.region_kind, r.saddle_index}.progress();
    CHECK(pr >= prog);
    prog = pr;
  }
}

TEST_CASE("run_gd: containment for eta <= 1/(2L)") {
  const int d = 5;
  const OctopusLandscape landscape(make_params(d));  // Error policy would throw on exit
  RngStream rng(31, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x0(d);
    for (double& c : x0) c = rng.uniform01();
    GDConfig cfg;
    cfg.eta = 1.0 / (2.0 * kE);
    cfg.max_iters = 500;
    const Trajectory t = run_gd(landscape, x0, cfg);
    CHECK_FALSE(t.any_oob);
    for (const auto& r : t.records) CHECK(r.region_kind != RegionKind::OutOfDomain);
  }
}

TEST_CASE("run_gd: eta validation against the curvature scale") {
  const OctopusLandscape landscape(make_params(2));
  GDConfig cfg;
  cfg.max_iters = 10;

  cfg.eta = 2.0 / kE * 1.01;  // divergence regime
  CHECK_THROWS_AS(run_gd(landscape, vec({0.5, 0.5}), cfg), ParameterError);

  cfg.eta = 1.0 / kE;  // above 1/(2L), below 2/L: allowed with warning
  CHECK(run_gd(landscape, vec({0.5, 0.5}), cfg).eta_warning);

  cfg.eta = 1.0 / (2.0 * kE);
  CHECK_FALSE(run_gd(landscape, vec({0.5, 0.5}), cfg).eta_warning);
}

TEST_CASE("run_gd: divergence guard reports instead of overflowing") {
  const ThinBandLandscape f = warmup_thin_band();
  GDConfig cfg;
  cfg.eta = 1.9;  // amplifies x2 by 4.8 per step
  cfg.max_iters = 100;
  CHECK_THROWS_AS(run_gd(f, vec({0.0, 1.0}), cfg), DivergenceError);
}

TEST_CASE("run_pgd: r = 0 reproduces plain GD") {
  const OctopusLandscape landscape(make_params(3));
  PGDConfig cfg;
  cfg.gd.eta = 1.0 / (4.0 * kE);
  cfg.gd.max_iters = 300;
  cfg.r = 0.0;
  cfg.g_thres = 0.1;
  cfg.t_thres = 1;
  cfg.seed = 99;

  const auto x0 = vec({0.3, 0.4, 0.2});
  const Trajectory tp = run_pgd(landscape, x0, cfg);
  const Trajectory tg = run_gd(landscape, x0, cfg.gd);
  REQUIRE(tp.records.size() >= tg.records.size());
  // Noise of radius zero leaves iterates untouched.
  REQUIRE(tp.point_iters.size() > 0);
  for (std::size_t i = 0; i < tp.point_iters.size(); ++i) {
    // Compare against the GD points stored for the same iterations.
    const auto it = std::find(tg.point_iters.begin(), tg.point_iters.end(), tp.point_iters[i]);
    if (it == tg.point_iters.end()) continue;
    const auto k = static_cast<std::size_t>(it - tg.point_iters.begin());
    CHECK(tp.point_at(i)[0] == tg.point_at(k)[0]);
    CHECK(tp.point_at(i)[1] == tg.point_at(k)[1]);
    CHECK(tp.point_at(i)[2] == tg.point_at(k)[2]);
  }
}

TEST_CASE("run_pgd: no noise while the gradient stays large") {
  const OctopusLandscape landscape(make_params(2));
  PGDConfig cfg;
  cfg.gd.eta = 1.0 / (4.0 * kE);
  cfg.gd.max_iters = 40;
  cfg.r = 0.1;
  cfg.g_thres = 1e-6;  // never reached from this start
  cfg.seed = 7;
  const Trajectory t = run_pgd(landscape, vec({0.5, 0.5}), cfg);
  for (const auto& r : t.records) CHECK_FALSE(r.noise_added);
}

TEST_CASE("run_pgd: deterministic replay from the seed") {
  const OctopusLandscape landscape(make_params(4, 3.0));
  PGDConfig cfg;
  cfg.gd.eta = 1.0 / 12.0;
  cfg.gd.max_iters = 4000;
  cfg.r = kE / 100.0;
  cfg.g_thres = kE / 100.0;
  cfg.t_thres = 1;
  cfg.seed = 12345;

  const auto x0 = vec({0.5, 0.4, 0.6, 0.2});
  const Trajectory a = run_pgd(landscape, x0, cfg);
  const Trajectory b = run_pgd(landscape, x0, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].iter == b.records[i].iter);
    CHECK(a.records[i].f == b.records[i].f);
    CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
    CHECK(a.records[i].noise_added == b.records[i].noise_added);
  }
  CHECK(a.points == b.points);

  // Some noise must actually fire on this route.
  bool any_noise = false;
  for (const auto& r : a.records) any_noise = any_noise || r.noise_added;
  CHECK(any_noise);
}

TEST_CASE("run_pgd: containment with the experiment noise parameters") {
  const int d = 5;
  const OctopusLandscape landscape(make_params(d, 3.0));  // Error policy would throw on exit
  RngStream rng(53, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x0 = sample_init(rng, d, InitScheme::unit_cube());
    PGDConfig cfg;
    cfg.gd.eta = 1.0 / 12.0;
    cfg.gd.max_iters = 3000;
    cfg.gd.stop_dist_to_min = 0.1;
    cfg.r = kE / 100.0;
    cfg.g_thres = kE / 100.0;
    cfg.t_thres = 1;
    cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
    const Trajectory t = run_pgd(landscape, x0, cfg);
    CHECK_FALSE(t.any_oob);
  }
}

TEST_CASE("run_gd: freeze policy recovers from an out-of-domain start") {
  const LandscapeParams p = make_params(2);
  const OctopusLandscape soft(p, OobPolicy::FreezeGradient);
  GDConfig cfg;
  cfg.eta = 1.0 / (4.0 * kE);
  cfg.max_iters = 200;
  // Outside the domain: the frozen gradient at (6tau, 0) points back in.
  const Trajectory t = run_gd(soft, vec({7.0 * p.tau, 0.0}), cfg);
  CHECK(t.any_oob);
  CHECK(t.records.front().oob);
  CHECK(t.records.front().region_kind == RegionKind::OutOfDomain);
  CHECK_FALSE(t.records.back().oob);  // re-entered the domain
  CHECK(t.records.back().region_kind != RegionKind::OutOfDomain);

  const OctopusLandscape hard(p, OobPolicy::Error);
  CHECK_THROWS_AS(run_gd(hard, vec({7.0 * p.tau, 0.0}), cfg), OutOfDomainError);
}

TEST_CASE("run_pgd: config validation") {
  const OctopusLandscape landscape(make_params(2));
  const auto x0 = vec({0.5, 0.5});
  PGDConfig cfg;
  cfg.gd.eta = 0.05;
  cfg.gd.max_iters = 5;
  cfg.g_thres = 0.1;

  cfg.r = -0.1;
  CHECK_THROWS_AS(run_pgd(landscape, x0, cfg), ParameterError);
  cfg.r = 0.1;
  cfg.t_thres = 0;
  CHECK_THROWS_AS(run_pgd(landscape, x0, cfg), ParameterError);
  cfg.t_thres = 1;
  cfg.g_thres = 0.0;
  CHECK_THROWS_AS(run_pgd(landscape, x0, cfg), ParameterError);
}

TEST_CASE("stored points satisfy the update rule exactly") {
  const OctopusLandscape landscape(make_params(3, 2.0));
  GDConfig cfg;
  cfg.eta = 1.0 / 8.0;
  cfg.max_iters = 400;
  const Trajectory t = run_gd(landscape, vec({0.3, 0.8, 0.1}), cfg);
  REQUIRE(t.point_iters.size() == 401);  // stride 1 for a short run
  std::vector<double> grad(3);
  double f = 0.0;
  RegionId reg;
  for (std::size_t i = 0; i + 1 < t.point_iters.size(); ++i) {
    const auto x = t.point_at(i);
    landscape.eval_into(x, f, grad, reg);
    for (int j = 0; j < 3; ++j) {
      const double expect = x[static_cast<std::size_t>(j)] - cfg.eta * grad[static_cast<std::size_t>(j)];
      CHECK(t.point_at(i + 1)[static_cast<std::size_t>(j)] == expect);
    }
  }
}

TEST_CASE("trajectory thinning keeps transitions and endpoints") {
  const OctopusLandscape landscape(make_params(2));
  GDConfig cfg;
  cfg.eta = 1.0 / (4.0 * kE);
  cfg.max_iters = 1500;
  cfg.record_stride = 97;
  cfg.point_stride = 203;
  const Trajectory t = run_gd(landscape, vec({0.5, 0.5}), cfg);

  CHECK(t.records.front().iter == 0);
  CHECK(t.records.back().iter == t.total_iters);
  // Every region transition appears even off-stride.
  RegionKind prev = t.records.front().region_kind;
  int transitions = 0;
  for (const auto& r : t.records) {
    if (r.region_kind != prev) ++transitions;
    prev = r.region_kind;
  }
  CHECK(transitions == 4);
  for (std::size_t i = 1; i < t.records.size(); ++i)
    CHECK(t.records[i].iter > t.records[i - 1].iter);
}

TEST_CASE("escape tally tracks first passage exactly under thinning") {
  const OctopusLandscape landscape(make_params(2));
  GDConfig a;
  a.eta = 1.0 / (4.0 * kE);
  a.max_iters = 1500;
  GDConfig b = a;
  b.record_stride = 211;

  const auto x0 = vec({0.37, 0.61});
  const Trajectory ta = run_gd(landscape, x0, a);
  const Trajectory tb = run_gd(landscape, x0, b);
  REQUIRE(ta.tally.has_value());
  REQUIRE(tb.tally.has_value());
  CHECK(ta.tally->first_escape == tb.tally->first_escape);
  CHECK(ta.tally->connector_iters == tb.tally->connector_iters);
  CHECK(ta.tally->first_optimum == tb.tally->first_optimum);
}
