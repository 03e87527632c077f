// Command-line harness: reproduces the GD-vs-PGD escape experiments on the
// octopus landscape, runs the verification suites, and emits plot-ready CSV.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime
// error (divergence, out-of-domain, I/O).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "octo/analysis.hpp"
#include "octo/errors.hpp"
#include "octo/io.hpp"
#include "octo/octopus.hpp"
#include "octo/optimize.hpp"
#include "octo/parallel.hpp"
#include "octo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kE = 2.718281828459045235360287471353;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  std::uint64_t s = master ^ (k * 0x9E3779B97F4A7C15ull + 0x1234567ull);
  octo::splitmix64_next(s);
  return octo::splitmix64_next(s);
}

struct ExperimentSpec {
  std::vector<int> ds{5, 10};
  std::vector<double> Ls{1.0, 1.5, 2.0, 3.0};
  double gamma = 1.0;
  double tau = kE;
  double eta = 0.0;  // 0 = 1/(4L)
  std::string algo = "both";
  int trials = 100;
  std::uint64_t seed = 20250809;
  std::string init = "unitcube";
  std::int64_t tthres = 1;
  double gthres = 0.0;  // 0 = gamma * e / 100
  double r = kE / 100.0;
  std::int64_t max_iters = 0;  // 0 = per-algorithm default
  std::string out = "out";
  int jobs = 0;
  bool write_points = false;
  bool run_to_max = false;     // disable the convergence stop
  double stop_dist = 0.0;      // 0 = tau/20
  std::int64_t csv_rows = 10000;  // target rows per trajectory csv
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw octo::ParameterError("bad number '" + item + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw octo::ParameterError("empty list: '" + text + "'");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_doubles(text)) out.push_back(static_cast<int>(v));
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format_L(double L) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", L);
  return buf;
}

std::int64_t gd_default_iters(const octo::LandscapeParams& p, double eta) {
  const double bound = std::pow(p.escape_ratio(), p.dim - 1) / (2.0 * eta * p.gamma);
  return 10 * static_cast<std::int64_t>(std::ceil(bound));
}

// Config file fills only the values not already provided as flags
// (precedence: flags > config file > built-in defaults).
void apply_config_file(ExperimentSpec& spec, const std::string& path, const CLI::App* cmd) {
  std::ifstream is(path);
  if (!is) throw octo::ParameterError("cannot read config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw octo::ParameterError(std::string("config parse error: ") + e.what());
  }
  auto unset = [&](const char* flag, const char* key) {
    return cmd->count(flag) == 0 && j.contains(key);
  };
  auto list_of_double = [](const json& v) {
    std::vector<double> out;
    if (v.is_array())
      for (const auto& x : v) out.push_back(x.get<double>());
    else
      out.push_back(v.get<double>());
    return out;
  };
  try {
    if (unset("--d", "d")) {
      spec.ds.clear();
      for (double v : list_of_double(j["d"])) spec.ds.push_back(static_cast<int>(v));
    }
    if (unset("--L", "L")) spec.Ls = list_of_double(j["L"]);
    if (unset("--gamma", "gamma")) spec.gamma = j["gamma"].get<double>();
    if (unset("--tau", "tau")) spec.tau = j["tau"].get<double>();
    if (unset("--eta", "eta")) spec.eta = j["eta"].get<double>();
    if (unset("--algo", "algo")) spec.algo = j["algo"].get<std::string>();
    if (unset("--trials", "trials")) spec.trials = j["trials"].get<int>();
    if (unset("--seed", "seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (unset("--init", "init")) spec.init = j["init"].get<std::string>();
    if (unset("--tthres", "tthres")) spec.tthres = j["tthres"].get<std::int64_t>();
    if (unset("--gthres", "gthres")) spec.gthres = j["gthres"].get<double>();
    if (unset("--r", "r")) spec.r = j["r"].get<double>();
    if (unset("--max-iters", "max_iters")) spec.max_iters = j["max_iters"].get<std::int64_t>();
    if (unset("--out", "out")) spec.out = j["out"].get<std::string>();
    if (unset("--jobs", "jobs")) spec.jobs = j["jobs"].get<int>();
  } catch (const json::exception& e) {
    throw octo::ParameterError(std::string("config value error: ") + e.what());
  }
}

struct TrialSummary {
  int d = 0;
  double L = 0.0;
  std::string algo;
  int trial = 0;
  bool reached_min = false;
  std::int64_t total_iters = 0;
  std::vector<std::optional<std::int64_t>> per_saddle;
};

class OutputTracker {
 public:
  explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {}
  fs::path claim(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    fs::path p = dir_ / name;
    files_.push_back(p);
    return p;
  }
  void remove_all() {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& p : files_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  fs::path dir_;
  std::mutex mu_;
  std::vector<fs::path> files_;
};

int cmd_run(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw octo::ParameterError("trials must be >= 1");
  if (spec.Ls.empty() || spec.ds.empty()) throw octo::ParameterError("empty d or L list");
  if (spec.algo != "gd" && spec.algo != "pgd" && spec.algo != "both")
    throw octo::ParameterError("algo must be gd, pgd or both");
  const bool do_gd = spec.algo != "pgd";
  const bool do_pgd = spec.algo != "gd";
  if (do_gd && spec.max_iters == 0) {
    for (int d : spec.ds) {
      if (d >= 25)
        throw octo::ParameterError(
            "GD runs with d >= 25 need ((L+gamma)/gamma)^(d-1) steps, which is beyond any "
            "practical budget; pass --max-iters explicitly to force a capped run");
    }
  }
  const octo::InitScheme init = octo::InitScheme::parse(spec.init);

  fs::create_directories(spec.out);
  OutputTracker tracker(spec.out);

  struct Run {
    int d;
    double L;
    int trial;
    std::uint64_t flat;
  };
  std::vector<Run> runs;
  for (std::size_t di = 0; di < spec.ds.size(); ++di)
    for (std::size_t li = 0; li < spec.Ls.size(); ++li)
      for (int t = 0; t < spec.trials; ++t)
        runs.push_back({spec.ds[di], spec.Ls[li], t,
                        (di * spec.Ls.size() + li) * static_cast<std::uint64_t>(spec.trials) +
                            static_cast<std::uint64_t>(t)});

  std::vector<TrialSummary> gd_sum(runs.size()), pgd_sum(runs.size());

  auto run_one = [&](std::int64_t ri) {
    const Run& run = runs[static_cast<std::size_t>(ri)];
    octo::LandscapeParams params;
    params.dim = run.d;
    params.L = run.L;
    params.gamma = spec.gamma;
    params.tau = spec.tau;
    const octo::OctopusLandscape landscape(params);

    octo::RngStream init_rng(spec.seed, run.flat * 2);
    const std::vector<double> x0 = octo::sample_init(init_rng, run.d, init);
    const double eta = spec.eta > 0.0 ? spec.eta : 1.0 / (4.0 * run.L);
    const double stop_dist = spec.stop_dist > 0.0 ? spec.stop_dist : spec.tau / 20.0;

    auto summarize = [&](const octo::Trajectory& traj, const char* algo, TrialSummary& out) {
      const octo::EscapeReport rep = octo::escape_report(traj, params);
      out = {run.d, run.L, algo, run.trial, rep.reached_min, rep.total_iters, rep.per_saddle};
      const std::string stem = std::string(algo) + "_d" + std::to_string(run.d) + "_L" +
                               format_L(run.L) + "_t" + std::to_string(run.trial);
      octo::write_trajectory_csv(tracker.claim("traj_" + stem + ".csv"), traj);
      octo::write_escape_csv(tracker.claim("escape_" + stem + ".csv"), rep);
      if (spec.write_points) octo::write_points_csv(tracker.claim("points_" + stem + ".csv"), traj);
    };

    if (do_gd) {
      octo::GDConfig cfg;
      cfg.eta = eta;
      cfg.max_iters = spec.max_iters > 0 ? spec.max_iters : gd_default_iters(params, eta);
      if (!spec.run_to_max) cfg.stop_dist_to_min = stop_dist;
      cfg.record_stride = std::max<std::int64_t>(1, cfg.max_iters / spec.csv_rows);
      if (!spec.write_points) cfg.point_stride = std::max<std::int64_t>(1, cfg.max_iters);
      summarize(octo::run_gd(landscape, x0, cfg), "gd", gd_sum[static_cast<std::size_t>(ri)]);
    }
    if (do_pgd) {
      octo::PGDConfig cfg;
      cfg.gd.eta = eta;
      cfg.gd.max_iters = spec.max_iters > 0 ? spec.max_iters : 1'000'000;
      if (!spec.run_to_max) cfg.gd.stop_dist_to_min = stop_dist;
      cfg.gd.record_stride = std::max<std::int64_t>(1, cfg.gd.max_iters / spec.csv_rows);
      if (!spec.write_points) cfg.gd.point_stride = std::max<std::int64_t>(1, cfg.gd.max_iters);
      cfg.t_thres = spec.tthres;
      cfg.g_thres = spec.gthres > 0.0 ? spec.gthres : spec.gamma * kE / 100.0;
      cfg.r = spec.r;
      cfg.seed = derive_seed(spec.seed, run.flat * 2 + 1);
      summarize(octo::run_pgd(landscape, x0, cfg), "pgd", pgd_sum[static_cast<std::size_t>(ri)]);
    }
  };

  try {
    octo::parallel_for(static_cast<std::int64_t>(runs.size()), spec.jobs, run_one);
  } catch (...) {
    tracker.remove_all();  // no partial outputs
    throw;
  }

  // Aggregate medians per (d, L, algo).
  std::ofstream summary(tracker.claim("summary.csv"));
  std::ofstream saddles(tracker.claim("summary_saddles.csv"));
  summary << "d,L,algo,trials,eta,reached_min_count,median_total_iters\n";
  saddles << "d,L,algo,saddle_index,median_escape_iters,escaped_count\n";
  for (int d : spec.ds) {
    for (double L : spec.Ls) {
      for (const char* algo : {"gd", "pgd"}) {
        if ((std::string(algo) == "gd" && !do_gd) || (std::string(algo) == "pgd" && !do_pgd))
          continue;
        const auto& all = std::string(algo) == "gd" ? gd_sum : pgd_sum;
        std::vector<double> totals;
        int reached = 0;
        std::vector<std::vector<double>> per_saddle(static_cast<std::size_t>(d));
        for (const auto& s : all) {
          if (s.algo != algo || s.d != d || s.L != L) continue;
          totals.push_back(static_cast<double>(s.total_iters));
          reached += s.reached_min ? 1 : 0;
          for (std::size_t k = 0; k < s.per_saddle.size(); ++k)
            if (s.per_saddle[k]) per_saddle[k].push_back(static_cast<double>(*s.per_saddle[k]));
        }
        if (totals.empty()) continue;
        const double eta = spec.eta > 0.0 ? spec.eta : 1.0 / (4.0 * L);
        summary << d << ',' << format_L(L) << ',' << algo << ',' << totals.size() << ','
                << octo::format_double(eta) << ',' << reached << ','
                << octo::format_double(median(totals)) << '\n';
        for (int k = 0; k < d; ++k) {
          saddles << d << ',' << format_L(L) << ',' << algo << ',' << (k + 1) << ','
                  << octo::format_double(median(per_saddle[static_cast<std::size_t>(k)])) << ','
                  << per_saddle[static_cast<std::size_t>(k)].size() << '\n';
        }
      }
    }
  }
  std::cout << "wrote results to " << spec.out << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, const octo::VerifyOptions& opt) {
  json report = json::array();
  bool all_pass = true;
  std::vector<octo::SuiteResult> results;
  try {
    results = octo::run_suites(suite, opt);
  } catch (const octo::ParameterError&) {
    throw;  // usage problem: unknown suite name
  }
  for (const auto& res : results) {
    json item;
    item["suite"] = res.suite;
    item["pass"] = res.pass;
    json violations = json::array();
    for (const auto& c : res.checks) {
      if (!c.pass) violations.push_back(c.name + (c.detail.empty() ? "" : ": " + c.detail));
    }
    item["violations"] = violations;
    json checks = json::array();
    for (const auto& c : res.checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    item["checks"] = checks;
    report.push_back(item);
    all_pass = all_pass && res.pass;
  }
  std::cout << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"octopus landscape escape-time experiments"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string d_list, L_list, config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--d", d_list, "dimension(s), comma separated");
    cmd->add_option("--L", L_list, "steep curvature value(s), comma separated");
    cmd->add_option("--gamma", spec.gamma, "escape curvature");
    cmd->add_option("--tau", spec.tau, "region length scale");
    cmd->add_option("--eta", spec.eta, "step size (default 1/(4L))");
    cmd->add_option("--algo", spec.algo, "gd | pgd | both");
    cmd->add_option("--trials", spec.trials, "trials per configuration");
    cmd->add_option("--seed", spec.seed, "master seed");
    cmd->add_option("--init", spec.init, "unitcube | gaussian:<sigma> | cube:<lo>,<hi>");
    cmd->add_option("--tthres", spec.tthres, "PGD: min iterations between perturbations");
    cmd->add_option("--gthres", spec.gthres, "PGD: gradient threshold (default gamma*e/100)");
    cmd->add_option("--r", spec.r, "PGD: perturbation radius (default e/100)");
    cmd->add_option("--max-iters", spec.max_iters, "iteration budget (default per algorithm)");
    cmd->add_option("--out", spec.out, "output directory");
    cmd->add_option("--jobs", spec.jobs, "worker threads (default: hardware)");
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_flag("--points", spec.write_points, "also write full-iterate CSVs");
    cmd->add_flag("--run-to-max", spec.run_to_max, "do not stop at convergence");
    cmd->add_option("--stop-dist", spec.stop_dist, "convergence stop distance (default tau/20)");
    cmd->add_option("--csv-rows", spec.csv_rows, "target rows per trajectory CSV");
  };

  CLI::App* run = app.add_subcommand("run", "run GD/PGD experiments and write CSVs");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "cartesian product over d and L lists");
  add_common(sweep);

  CLI::App* verify = app.add_subcommand("verify", "run verification suites, print JSON report");
  std::string suite = "all";
  int verify_d = 5;
  double verify_L = kE, verify_gamma = 1.0, verify_tau = kE, verify_eta = 0.0;
  int verify_trials = 100;
  std::uint64_t verify_seed = 20250809;
  verify->add_option("--suite", suite, "spline|boundary|gradient|lemma8|sosp|smoothness|all");
  verify->add_option("--d", verify_d, "dimension");
  verify->add_option("--L", verify_L, "steep curvature (default e)");
  verify->add_option("--gamma", verify_gamma, "escape curvature");
  verify->add_option("--tau", verify_tau, "region length scale (default e)");
  verify->add_option("--eta", verify_eta, "step size for lemma8 (default 1/(2L))");
  verify->add_option("--trials", verify_trials, "trials for lemma8");
  verify->add_option("--seed", verify_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      octo::VerifyOptions opt;
      opt.params.dim = verify_d;
      opt.params.L = verify_L;
      opt.params.gamma = verify_gamma;
      opt.params.tau = verify_tau;
      opt.eta = verify_eta;
      opt.lemma8_trials = verify_trials;
      opt.seed = verify_seed;
      return cmd_verify(suite, opt);
    }

    // run / sweep share the experiment machinery; sweep is the explicit
    // cartesian product form, run defaults to the standard matrix.
    CLI::App* cmd = run->parsed() ? run : sweep;
    if (cmd->count("--d")) spec.ds = parse_ints(d_list);
    if (cmd->count("--L")) spec.Ls = parse_doubles(L_list);
    if (!config_path.empty()) apply_config_file(spec, config_path, cmd);
    return cmd_run(spec);
  } catch (const octo::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}
