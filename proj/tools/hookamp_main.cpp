#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hookamp/amplitude.hpp"
#include "hookamp/conjectures.hpp"
#include "hookamp/oracle.hpp"
#include "hookamp/reinhardt.hpp"

using nlohmann::json;
using namespace hookamp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 1;
constexpr int kExitConsistency = 2;
constexpr int kExitCounterexample = 3;

constexpr int kUnset = -1;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
  return buf;
}

// Report envelope. The timestamp is excluded from the hash, so identical
// command lines yield reports that differ in that one field only.
json make_report(const std::string& command, json config, json result,
                 std::uint64_t seed = 0) {
  json report{{"schema", "hookamp/1"},
              {"version", kVersion},
              {"command", command},
              {"config", std::move(config)},
              {"seed", seed},
              {"result", std::move(result)}};
  report["config_hash"] =
      fnv1a_hex(json{{"command", command}, {"config", report["config"]}}.dump());
  report["timestamp"] = utc_timestamp();
  return report;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  require(out.good(), errc::precondition, "cannot open output file '" + path + "'");
  out << text << "\n";
}

struct CommonOpts {
  std::string output;
  std::string format = "json";
  int threads = 0;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  bool unsafe_range = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_seed = true) {
  cmd->add_option("--output", opts.output, "Write the report to this file instead of stdout");
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", opts.threads,
                  "Worker threads (0 = hardware parallelism, 1 = serial)");
  cmd->add_option("--tolerance", opts.tolerance, "Numeric tolerance for checks");
  if (with_seed) cmd->add_option("--seed", opts.seed, "RNG seed (HOOKAMP_SEED overrides)");
  cmd->add_flag("--unsafe-range", opts.unsafe_range,
                "Disable the n <= 16, t <= 64 double-precision range guard");
}

void apply_env_seed(CommonOpts& opts) {
  if (const char* env = std::getenv("HOOKAMP_SEED"); env && *env)
    opts.seed = std::stoull(env);
}

void check_range_guard(int n, int t, bool unsafe) {
  if (unsafe) return;
  require(n <= kDefaultMaxOrder, errc::precondition,
          "n exceeds the default range guard (" + std::to_string(kDefaultMaxOrder) +
              "); pass --unsafe-range to override");
  require(t <= kDefaultMaxTime, errc::precondition,
          "t exceeds the default range guard (" + std::to_string(kDefaultMaxTime) +
              "); pass --unsafe-range to override");
}

json complex_list(const std::vector<cplx>& zs) {
  json out = json::array();
  for (const cplx& z : zs) out.push_back({z.real(), z.imag()});
  return out;
}

void write_trajectory_csv(const std::string& path, const std::vector<cplx>& x) {
  std::ofstream out(path);
  require(out.good(), errc::precondition, "cannot open trajectory file '" + path + "'");
  out << "t,re,im,abs\n";
  out.precision(17);
  for (std::size_t t = 0; t < x.size(); ++t)
    out << t << "," << x[t].real() << "," << x[t].imag() << "," << std::abs(x[t]) << "\n";
}

// ---------------------------------------------------------------- compute --

int cmd_compute(const CommonOpts& opts, int n, int t, const std::vector<double>& radii,
                const std::vector<double>& weights, double theta,
                const std::string& trajectory_out) {
  require(n >= 1, errc::precondition, "compute: n must be >= 1");
  require(static_cast<int>(radii.size()) == n && static_cast<int>(weights.size()) == n,
          errc::precondition, "compute: radii and weights must have n entries");
  check_range_guard(n, t, opts.unsafe_range);
  require(opts.format == "json", errc::precondition,
          "compute: CSV is limited to --trajectory-out");

  const AmplitudeQuery query{t, radii, weights};
  const double value = max_amplitude_polydisc(query);

  // Extremal pair at theta: cophase roots and the matching initialization.
  const cplx phase(std::cos(theta), std::sin(theta));
  std::vector<cplx> roots(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) roots[j] = phase * radii[j];
  const auto init = optimal_initialization(n, weights, theta);
  const auto x = simulate(char_poly_from_roots(roots), init, t);
  const double attained = std::abs(x[static_cast<std::size_t>(t)]);
  const double attain_err = std::abs(attained - value) / std::max(1.0, value);

  double rmax = 0.0, wmax = 0.0;
  for (double r : radii) rmax = std::max(rmax, r);
  for (double w : weights) wmax = std::max(wmax, w);

  const json result{
      {"m_t", value},
      {"extremal_roots", complex_list(roots)},
      {"extremal_initialization", complex_list(init)},
      {"attainment", {{"simulated_amplitude", attained}, {"relative_error", attain_err}}},
      {"bounds",
       {{"exact_uniform_r", repeated_root_closed_form(n, rmax, t) * wmax},
        {"refined", refined_bound(n, rmax, t) * wmax},
        {"crude", crude_bound(n, rmax, t) * wmax},
        {"fourier_psi_l1", fourier_bound(n, t)},
        {"r_uniform", rmax},
        {"weight_scale", wmax}}}};

  const json config{{"n", n},       {"t", t},         {"radii", radii},
                    {"weights", weights}, {"theta", theta}, {"tolerance", opts.tolerance}};
  write_output(opts.output, make_report("compute", config, result).dump(2));
  if (!trajectory_out.empty()) write_trajectory_csv(trajectory_out, x);

  if (attain_err > opts.tolerance) {
    std::cerr << "compute: attainment self-check failed (relative error " << attain_err << ")\n";
    return kExitConsistency;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- verify --

int cmd_verify(const CommonOpts& opts, int n, int t, const std::vector<double>& radii,
               const std::vector<double>& weights, int phase_grid, int radial_grid, int trials) {
  require(static_cast<int>(radii.size()) == n && static_cast<int>(weights.size()) == n,
          errc::precondition, "verify: radii and weights must have n entries");
  check_range_guard(n, t, opts.unsafe_range);

  OracleConfig cfg;
  cfg.phase_grid = phase_grid;
  cfg.radial_grid = radial_grid;
  cfg.random_trials = trials;
  cfg.seed = opts.seed;
  cfg.tolerance = opts.tolerance;
  cfg.threads = opts.threads;
  const VerifyResult verdict = verify_cophase(t, radii, weights, cfg);

  const json config{{"n", n},
                    {"t", t},
                    {"radii", radii},
                    {"weights", weights},
                    {"phase_grid", phase_grid},
                    {"radial_grid", radial_grid},
                    {"trials", trials},
                    {"seed", opts.seed},
                    {"tolerance", opts.tolerance}};
  write_output(opts.output, make_report("verify", config, to_json(verdict), opts.seed).dump(2));
  return verdict.ok ? kExitOk : kExitConsistency;
}

// -------------------------------------------------------------- reinhardt --

int cmd_reinhardt(const CommonOpts& opts, const std::string& domain_path) {
  std::ifstream in(domain_path);
  require(in.good(), errc::precondition, "reinhardt: cannot open '" + domain_path + "'");
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    fail(errc::precondition, std::string("reinhardt: invalid JSON: ") + e.what());
  }
  auto problem = load_reinhardt_problem(spec);
  check_range_guard(problem.n, problem.t, opts.unsafe_range);
  const auto solution =
      vertex_method(problem.domain, *problem.init_oracle, problem.t, opts.threads);
  const json config{{"domain_file", domain_path}, {"domain", spec}};
  write_output(opts.output, make_report("reinhardt", config, to_json(solution)).dump(2));
  return kExitOk;
}

// ------------------------------------------------------------------- scan --

struct ScanOpts {
  std::string conjecture;
  int n = 2;
  int t = kUnset;
  int t_max = kUnset;
  int k = kUnset;
  int trials = 1000;
  std::string region = "unit-disc";
  double p_real = 0.2;
  int z_grid = kDefaultZResolution;
  int m_max = kUnset;
  std::string counterexample_log = "hookamp_counterexamples.ndjson";
};

SampleRegion parse_region(const std::string& name) {
  if (name == "unit-disc") return SampleRegion::unit_disc;
  if (name == "right-half-disc") return SampleRegion::right_half_disc;
  if (name == "unit-circle") return SampleRegion::unit_circle;
  fail(errc::precondition, "scan: unknown region '" + name + "'");
}

std::vector<int> scan_t_values(const ScanOpts& s) {
  if (s.t != kUnset) return {s.t};
  const int hi = s.t_max != kUnset ? s.t_max : s.n + 6;
  std::vector<int> ts;
  for (int t = s.n; t <= hi; ++t) ts.push_back(t);
  return ts;
}

std::vector<int> scan_k_values(const ScanOpts& s) {
  if (s.k != kUnset) return {s.k};
  std::vector<int> ks;
  for (int k = 0; k < s.n; ++k) ks.push_back(k);
  return ks;
}

long long append_counterexamples(const std::string& path, const std::vector<QReport>& reports,
                                 std::uint64_t seed) {
  long long count = 0;
  std::ofstream log;
  for (const auto& rep : reports) {
    for (const auto& rec : rep.counterexamples) {
      if (!log.is_open()) {
        log.open(path, std::ios::app);
        require(log.good(), errc::precondition, "scan: cannot open counterexample log");
      }
      json line = to_json(rec);
      line["seed"] = seed;
      log << line.dump() << "\n";
      ++count;
    }
  }
  return count;
}

int cmd_scan(const CommonOpts& opts, const ScanOpts& s) {
  require(s.n >= 1, errc::precondition, "scan: n must be >= 1");
  const int t_hi = s.t != kUnset ? s.t : (s.t_max != kUnset ? s.t_max : s.n + 6);
  check_range_guard(s.n, t_hi, opts.unsafe_range);
  require(opts.format == "json" || s.conjecture == "kallioniemi", errc::precondition,
          "scan: CSV output is limited to the kallioniemi membership table");

  ScanConfig cfg;
  cfg.trials = s.trials;
  cfg.seed = opts.seed;
  cfg.region = parse_region(s.region);
  cfg.p_real = s.p_real;
  cfg.threads = opts.threads;

  json config{{"conjecture", s.conjecture}, {"n", s.n},           {"trials", s.trials},
              {"seed", opts.seed},          {"region", s.region}, {"p_real", s.p_real}};
  if (s.t != kUnset) config["t"] = s.t;
  if (s.t_max != kUnset) config["t_max"] = s.t_max;
  if (s.k != kUnset) config["k"] = s.k;

  if (s.conjecture == "pointwise-z1" || s.conjecture == "pointwise-z0" ||
      s.conjecture == "t-equals-n") {
    const PointwiseBranch branch =
        s.conjecture == "pointwise-z0" ? PointwiseBranch::z_zero : PointwiseBranch::z_one;
    const std::vector<int> ts =
        s.conjecture == "t-equals-n" ? std::vector<int>{s.n} : scan_t_values(s);
    const std::vector<int> ks = scan_k_values(s);
    const auto reports = scan_pointwise(ts, s.n, ks, branch, cfg);
    json results = json::array();
    for (const auto& rep : reports) results.push_back(to_json(rep));
    write_output(opts.output, make_report("scan", config, results, opts.seed).dump(2));
    const long long ce = append_counterexamples(s.counterexample_log, reports, opts.seed);
    if (ce > 0) {
      std::cerr << "scan: " << ce << " counterexample record(s) appended to "
                << s.counterexample_log << "\n";
      return kExitCounterexample;
    }
    return kExitOk;
  }

  if (s.conjecture == "special-np1") {
    require(s.n % 2 == 0, errc::precondition, "scan: special-np1 needs even n");
    std::vector<int> ks;
    if (s.k != kUnset) {
      require((s.n - s.k) % 2 == 0, errc::precondition, "scan: special-np1 needs n-k even");
      ks.push_back(s.k);
    } else {
      for (int k = s.n % 2; k < s.n; k += 2) ks.push_back(k);
    }
    long long violations = 0, skipped = 0, checked = 0;
    for (int k : ks) {
      for (int i = 0; i < s.trials; ++i) {
        Rng rng(Rng::mix(opts.seed, static_cast<std::uint64_t>(i) + 1));
        auto grid = sample_self_conjugate(s.n, cfg.region, rng, cfg.p_real);
        for (cplx& z : grid.nodes) z += 1.0;
        const auto flags = special_case_np1(s.n, k, grid.nodes);
        if (!flags) {
          ++skipped;
          continue;
        }
        ++checked;
        if (!flags->lower_ok || !flags->upper_ok) ++violations;
      }
    }
    const json result{
        {"checked", checked}, {"singular_skipped", skipped}, {"violations", violations}};
    write_output(opts.output, make_report("scan", config, result, opts.seed).dump(2));
    // the paper proves this case; a violation signals a bug
    return violations == 0 ? kExitOk : kExitConsistency;
  }

  if (s.conjecture == "kallioniemi") {
    require(s.n % 2 == 0, errc::precondition, "scan: kallioniemi sampling needs even n");
    const int k = s.k != kUnset ? s.k : 0;
    const int m_max = s.m_max != kUnset ? s.m_max : default_m_max(s.n);
    config["k"] = k;
    config["m_max"] = m_max;
    config["z_grid"] = s.z_grid;
    json results = json::array();
    std::ostringstream csv;
    csv << "grid,z,member\n";
    csv.precision(17);
    for (int i = 0; i < s.trials; ++i) {
      Rng rng(Rng::mix(opts.seed, static_cast<std::uint64_t>(i) + 1));
      const auto grid = sample_self_conjugate(s.n, cfg.region, rng, cfg.p_real);
      const auto est = kallioniemi_estimate(grid.nodes, k, s.z_grid, m_max, opts.threads);
      results.push_back(to_json(est));
      if (opts.format == "csv")
        for (std::size_t j = 0; j < est.z_samples.size(); ++j)
          csv << i << "," << est.z_samples[j] << "," << int(est.membership[j]) << "\n";
    }
    if (opts.format == "csv")
      write_output(opts.output, csv.str());
    else
      write_output(opts.output, make_report("scan", config, results, opts.seed).dump(2));
    return kExitOk;
  }

  if (s.conjecture == "uniform") {
    require(s.n % 2 == 0, errc::precondition, "scan: uniform sampling needs even n");
    const int k = s.k != kUnset ? s.k : 0;
    const int t_max = s.t_max != kUnset ? s.t_max : s.n + 20;
    config["k"] = k;
    config["t_max"] = t_max;
    config["z_grid"] = s.z_grid;
    json results = json::array();
    long long exceedances = 0;
    for (int i = 0; i < s.trials; ++i) {
      Rng rng(Rng::mix(opts.seed, static_cast<std::uint64_t>(i) + 1));
      const auto grid = sample_self_conjugate(s.n, cfg.region, rng, cfg.p_real);
      const auto res = scan_uniform(grid.nodes, k, t_max, s.z_grid, opts.threads);
      json entry = to_json(res);
      entry["nodes"] = complex_list(grid.nodes);
      const bool exceeded = res.sup_over_t > res.rhs + 1e-6 * std::max(1.0, res.rhs);
      entry["exceeded"] = exceeded;
      if (exceeded) ++exceedances;
      results.push_back(entry);
    }
    write_output(opts.output, make_report("scan", config, results, opts.seed).dump(2));
    return exceedances == 0 ? kExitOk : kExitCounterexample;
  }

  fail(errc::precondition, "scan: unknown conjecture '" + s.conjecture + "'");
}

// --------------------------------------------------------------- selftest --

int cmd_selftest(const CommonOpts& opts) {
  json checks = json::array();
  bool all_ok = true;
  const auto record = [&](const std::string& name, bool ok, double detail) {
    checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    std::cerr << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    all_ok = all_ok && ok;
  };

  {
    const double v = max_amplitude_polydisc(AmplitudeQuery{3, {1.0, 1.0}, {1.0, 1.0}});
    record("polydisc closed form (n=2,t=3) == 5", std::abs(v - 5.0) < 1e-12, v);
  }
  {
    Rng rng(1);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<cplx> roots(3);
      for (auto& z : roots) z = rng.in_disc(1.0);
      if (min_pairwise_distance(roots) < 0.05) continue;
      worst = std::max(worst, cross_check_interp(roots, 12));
    }
    record("interp route agreement <= 1e-7", worst <= 1e-7, worst);
  }
  {
    const double sum_form = repeated_root_closed_form(4, 0.8, 17);
    const double poly = max_amplitude_polydisc(
        AmplitudeQuery{17, std::vector<double>(4, 0.8), std::vector<double>(4, 1.0)});
    record("repeated-root form matches polydisc value",
           std::abs(sum_form - poly) <= 1e-10 * std::max(1.0, poly), sum_form - poly);
  }
  {
    Rng rng(2);
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
      const auto grid = sample_self_conjugate(4, SampleRegion::unit_disc, rng);
      std::vector<cplx> zeta(grid.nodes);
      for (cplx& z : zeta) z += 1.0;
      for (int k = 0; k < 4; ++k) {
        try {
          ok = ok && std::abs(q_eval(4, 4, k, zeta) - 1.0) < 1e-12;
        } catch (const Error&) {
        }
      }
    }
    record("Q ratio == 1 at t = n", ok, 0.0);
  }

  const json config{{"tolerance", opts.tolerance}};
  write_output(opts.output, make_report("selftest", config, checks).dump(2));
  return all_ok ? kExitOk : kExitConsistency;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hookamp: worst-case amplitudes of stable linear difference equations via "
               "hook Schur polynomials"};
  app.set_version_flag("--version", std::string("hookamp ") + kVersion);
  app.require_subcommand(1);

  CommonOpts common;

  auto* compute = app.add_subcommand("compute", "Closed-form amplitude and bound chain");
  int c_n = 1, c_t = 1;
  std::vector<double> c_radii, c_weights;
  double c_theta = 0.0;
  std::string c_traj;
  compute->add_option("--n", c_n, "Recurrence order")->required();
  compute->add_option("--t", c_t, "Time index")->required();
  compute->add_option("--radii", c_radii, "Root radii r_1..r_n")->required()->delimiter(',');
  compute->add_option("--weights", c_weights, "Initialization bounds w_1..w_n")
      ->required()
      ->delimiter(',');
  compute->add_option("--theta", c_theta, "Common root phase for the extremal pair");
  compute->add_option("--trajectory-out", c_traj, "Write the extremal trajectory CSV here");
  add_common(compute, common, false);

  auto* verify = app.add_subcommand("verify", "Brute-force check of the cophase optimality");
  int v_n = 1, v_t = 1, v_phase = 64, v_radial = 4, v_trials = 0;
  std::vector<double> v_radii, v_weights;
  verify->add_option("--n", v_n)->required();
  verify->add_option("--t", v_t)->required();
  verify->add_option("--radii", v_radii)->required()->delimiter(',');
  verify->add_option("--weights", v_weights)->required()->delimiter(',');
  verify->add_option("--phase-grid", v_phase, "Phases per root");
  verify->add_option("--radial-grid", v_radial, "Radii per root");
  verify->add_option("--trials", v_trials, "Extra random root samples");
  add_common(verify, common);

  auto* reinhardt = app.add_subcommand("reinhardt", "Vertex procedure for log-affine domains");
  std::string r_domain;
  reinhardt->add_option("--domain", r_domain, "Domain spec JSON file")->required();
  add_common(reinhardt, common, false);

  auto* scan = app.add_subcommand("scan", "Conjecture scans and estimators");
  ScanOpts s;
  scan->add_option("--conjecture", s.conjecture,
                   "pointwise-z1 | pointwise-z0 | t-equals-n | special-np1 | kallioniemi | "
                   "uniform")
      ->required();
  scan->add_option("--n", s.n, "Grid size (even for self-conjugate sampling)")->required();
  scan->add_option("--t", s.t, "Single time index");
  scan->add_option("--t-max", s.t_max, "Scan t from n to this bound");
  scan->add_option("--k", s.k, "Derivative order (default: all valid k)");
  scan->add_option("--trials", s.trials, "Random grids per (t,k) pair");
  scan->add_option("--region", s.region, "unit-disc | right-half-disc | unit-circle");
  scan->add_option("--p-real", s.p_real, "Probability of a doubled-real pair");
  scan->add_option("--z-grid", s.z_grid, "Equispaced test points on [-1,1]");
  scan->add_option("--m-max", s.m_max, "Monomial truncation degree (default 4n+40)");
  scan->add_option("--counterexample-log", s.counterexample_log,
                   "NDJSON file for counterexample records");
  add_common(scan, common);

  auto* selftest = app.add_subcommand("selftest", "Quick internal consistency battery");
  add_common(selftest, common, false);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_env_seed(common);
    if (compute->parsed())
      return cmd_compute(common, c_n, c_t, c_radii, c_weights, c_theta, c_traj);
    if (verify->parsed())
      return cmd_verify(common, v_n, v_t, v_radii, v_weights, v_phase, v_radial, v_trials);
    if (reinhardt->parsed()) return cmd_reinhardt(common, r_domain);
    if (scan->parsed()) return cmd_scan(common, s);
    if (selftest->parsed()) return cmd_selftest(common);
  } catch (const Error& e) {
    std::cerr << "hookamp: " << e.what() << "\n";
    return e.kind() == errc::consistency ? kExitConsistency : kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "hookamp: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitPrecondition;
}
