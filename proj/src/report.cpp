#include "weakdep/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "weakdep/summation.hpp"

namespace weakdep {

using nlohmann::json;

std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

constexpr std::uint64_t kPilotStream = 0x70696c6f74ULL;   // "pilot"
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;   // "probe"
constexpr std::uint64_t kPathStream = 0x70617468ULL;      // "path"

// Distance estimates below this multiple of the R^(-1/2) noise floor carry no
// rate information (the DKW deviation of an exact fit is ~0.87 R^(-1/2), so
// this cull sits near three noise standard deviations).
constexpr double kNoiseFloorCull = 2.5;

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path fresh_run_dir(const std::filesystem::path& out_root, const std::string& name) {
  std::filesystem::create_directories(out_root);
  const std::string base = name + "_" + utc_stamp();
  std::filesystem::path dir = out_root / base;
  for (int k = 1; std::filesystem::exists(dir); ++k) dir = out_root / (base + "_" + std::to_string(k));
  std::filesystem::create_directory(dir);
  return dir;
}

void write_csv(const std::filesystem::path& dir, const CsvTable& table) {
  std::ofstream out(dir / table.filename, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / table.filename).string());
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::string substream_range(std::size_t R) { return "0.." + std::to_string(R - 1); }

// Shared by the clt and rate checks.
struct DistanceRow {
  std::size_t n = 0;
  std::size_t R = 0;
  double distance = 0.0;
  double noise_floor = 0.0;
};

std::vector<DistanceRow> clt_distance_rows(const ExperimentConfig& config, unsigned threads,
                                           double sigma) {
  std::vector<DistanceRow> rows;
  rows.reserve(config.n_grid.size());
  const std::size_t R = config.replicates;
  const double floor = 1.0 / std::sqrt(static_cast<double>(R));
  for (std::size_t n : config.n_grid) {
    const auto set =
        replicate_partial_sums(config.process, n, R, derive_stream(config.master_seed, n), threads);
    rows.push_back({n, R, kolmogorov_distance(set, sigma), floor});
  }
  return rows;
}

CsvTable distance_table(const std::vector<DistanceRow>& rows, const SigmaChoice& sigma,
                        const std::string& filename) {
  CsvTable t;
  t.filename = filename;
  t.columns = {"n", "R", "substreams", "sigma_used", "sigma_source", "distance", "noise_floor"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.n), std::to_string(r.R), substream_range(r.R),
                      csv_double(std::sqrt(sigma.sigma2)), sigma.source, csv_double(r.distance),
                      csv_double(r.noise_floor)});
  return t;
}

CheckOutcome clt_outcome_from_rows(const std::vector<DistanceRow>& rows, const SigmaChoice& sigma) {
  CheckOutcome out;
  out.check = Check::clt;
  out.tables.push_back(distance_table(rows, sigma, "clt.csv"));

  // Pass when distances trend down (at most one rise exceeding the noise
  // floor) and the final distance is small at this replicate count.
  std::size_t violations = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].distance > rows[i - 1].distance + rows[i].noise_floor) ++violations;
  const double final_distance = rows.back().distance;
  const double final_threshold = std::max(0.05, 5.0 * rows.back().noise_floor);
  const bool ok = violations <= 1 && final_distance <= final_threshold;
  out.verdict = ok ? "pass" : "fail";
  out.detail = {{"sigma_used", std::sqrt(sigma.sigma2)},
                {"sigma_source", sigma.source},
                {"monotonicity_violations", violations},
                {"final_distance", final_distance},
                {"final_threshold", final_threshold}};
  return out;
}

double theory_moment_exponent(const TheoryBlock& theory) {
  return moment_exponent(theory.m, theory.family, theory.decay_exp);
}

}  // namespace

SigmaChoice sigma_for_limit(const ExperimentConfig& config, unsigned threads) {
  (void)threads;
  if (const auto analytic = analytic_longrun_variance(config.process))
    return {*analytic, "analytic"};
  std::size_t n_max = 0;
  for (std::size_t n : config.n_grid) n_max = std::max(n_max, n);
  const std::size_t n_pilot = std::max<std::size_t>(4 * n_max, 1024);
  const SamplePath pilot =
      simulate(config.process, n_pilot, derive_stream(config.master_seed, kPilotStream));
  return {longrun_variance(pilot.values, default_taper_window(n_pilot)), "pilot"};
}

CheckOutcome run_clt_check(const ExperimentConfig& config, unsigned threads) {
  const SigmaChoice sigma = sigma_for_limit(config, threads);
  if (!(sigma.sigma2 > 1e-10)) {
    CheckOutcome out;
    out.check = Check::clt;
    out.verdict = "fail";
    out.detail = {{"diagnostic", "degenerate sigma"},
                  {"sigma2", sigma.sigma2},
                  {"sigma_source", sigma.source}};
    return out;
  }
  return clt_outcome_from_rows(clt_distance_rows(config, threads, std::sqrt(sigma.sigma2)), sigma);
}

CheckOutcome run_moments_check(const ExperimentConfig& config, unsigned threads) {
  CheckOutcome out;
  out.check = Check::moments;

  double delta;
  std::optional<double> admissible;
  if (config.theory) admissible = theory_moment_exponent(*config.theory);
  if (config.moment_delta)
    delta = *config.moment_delta;
  else if (admissible)
    delta = 2.0 + 0.9 * *admissible;
  else
    throw ConfigError("moments check needs moment_delta or a theory block");

  const auto points =
      moment_ratio(config.process, delta, config.n_grid, config.replicates, config.master_seed,
                   threads);

  CsvTable t;
  t.filename = "moments.csv";
  t.columns = {"n", "R", "substreams", "delta", "ratio"};
  std::vector<RatePoint> fit_points;
  for (const auto& p : points) {
    t.rows.push_back({std::to_string(p.n), std::to_string(config.replicates),
                      substream_range(config.replicates), csv_double(delta), csv_double(p.ratio)});
    fit_points.push_back({static_cast<double>(p.n), p.ratio});
  }
  out.tables.push_back(std::move(t));

  // Flat log-log ratios mean ||S_n||_Delta grows like sqrt(n).
  const RateFit fit = fit_rate(fit_points);
  const bool bounded = std::abs(fit.slope) <= 0.05;
  out.verdict = bounded ? "pass" : "fail";
  out.detail = {{"delta", delta},
                {"ratio_log_slope", fit.slope},
                {"slope_stderr", fit.slope_stderr},
                {"verdict_rule", "|slope| <= 0.05 means bounded, consistent with sqrt(n) scaling"}};
  if (admissible) {
    out.detail["delta_admissible_sup"] = 2.0 + *admissible;
    if (delta >= 2.0 + *admissible)
      out.detail["warning"] = "Delta is outside the admissible open interval; boundedness is not guaranteed";
  }
  return out;
}

CheckOutcome run_rate_check(const ExperimentConfig& config, unsigned threads) {
  if (!config.theory) throw ConfigError("rate check needs a theory block");
  const RateProfile profile =
      rate_profile(config.theory->m, config.theory->family, config.theory->decay_exp);

  const SigmaChoice sigma = sigma_for_limit(config, threads);
  if (!(sigma.sigma2 > 1e-10)) {
    CheckOutcome out;
    out.check = Check::rate;
    out.verdict = "fail";
    out.detail = {{"diagnostic", "degenerate sigma"}, {"sigma2", sigma.sigma2}};
    return out;
  }
  const auto rows = clt_distance_rows(config, threads, std::sqrt(sigma.sigma2));

  CheckOutcome out;
  out.check = Check::rate;
  out.tables.push_back(distance_table(rows, sigma, "rate_points.csv"));

  // Only points clear of the Monte Carlo noise floor carry rate information.
  std::vector<RatePoint> usable;
  for (const auto& r : rows)
    if (r.distance > kNoiseFloorCull * r.noise_floor)
      usable.push_back({static_cast<double>(r.n), r.distance});

  out.detail = {{"theory_c_prime", profile.c_prime},
                {"noise_floor", rows.front().noise_floor},
                {"usable_points", usable.size()},
                {"note",
                 "the theoretical rate is an upper bound on the distance decay, so the fitted rate "
                 "is checked one-sidedly and only above the noise floor"}};
  if (usable.size() < 3) {
    out.verdict = "inconclusive";
    out.detail["diagnostic"] = "insufficient above-floor points at this R";
    return out;
  }
  const RateFit fit = fit_rate(usable);
  const double fitted = -fit.slope;
  out.detail["fitted_rate"] = fitted;
  out.detail["slope_stderr"] = fit.slope_stderr;
  out.verdict = fitted >= profile.c_prime - 3.0 * fit.slope_stderr ? "pass" : "fail";
  return out;
}

CheckOutcome run_bounds_check(const ExperimentConfig& config) {
  if (!config.theory) throw ConfigError("bounds check needs a theory block");
  const TheoryBlock& theory = *config.theory;

  CheckOutcome out;
  out.check = Check::bounds;
  const CltCondition clt = clt_condition(theory.m, theory.family, theory.decay_exp);
  out.detail = {{"family", family_name(theory.family)},
                {"m", theory.m},
                {"decay_exp", theory.decay_exp},
                {"clt_threshold", clt.threshold},
                {"clt_satisfied", clt.satisfied}};

  bool ok = clt.satisfied;
  if (clt.satisfied) {
    const RateProfile p = rate_profile(theory.m, theory.family, theory.decay_exp);
    out.detail["profile"] = {{"moment_exponent", p.moment_exp}, {"c_star", p.c_star},
                             {"c_prime", p.c_prime},           {"a_star", p.a_star},
                             {"b_star", p.b_star},             {"delta_max", p.delta_max},
                             {"zeta", p.zeta}};
  }

  if (theory.heredity) {
    const HeredityConfig& h = *theory.heredity;
    const Family branch = h.problem.input_coeff.family;

    if (h.problem.ell > 0.0) {
      // the polynomial-Lipschitz heredity needs m' >= (ell+1) m
      const double required = (h.problem.ell + 1.0) * theory.m;
      const bool moments_ok = h.problem.m_prime >= required;
      out.detail["heredity_moment_condition"] = {
          {"required_m_prime", required},
          {"m_prime", std::isfinite(h.problem.m_prime) ? json(h.problem.m_prime) : json("inf")},
          {"satisfied", moments_ok}};
      ok = ok && moments_ok;
    }

    CsvTable t;
    t.filename = "heredity.csv";
    t.columns = {"k", "family", "bound", "best_r", "up_to_constant"};
    for (std::int64_t k = 0; k <= h.lag_max; ++k) {
      const HeredityBound b = h.problem.ell == 0.0 ? heredity_lipschitz(k, h.problem, branch)
                                                   : heredity_general(k, h.problem, branch);
      t.rows.push_back({std::to_string(k), family_name(branch), csv_double(b.value),
                        std::to_string(b.best_r), b.up_to_constant ? "1" : "0"});
    }
    out.tables.push_back(std::move(t));

    const auto b_kind = h.problem.b.kind();
    const auto in_kind = h.problem.input_coeff.law.kind();
    if (b_kind != DecayLaw::Kind::tabulated && in_kind != DecayLaw::Kind::tabulated) {
      const DonskerCondition cond = donsker_condition(h.problem.ell, h.problem.b.rate(), theory.m,
                                                      h.problem.m_prime, b_kind, in_kind);
      const bool d_ok = cond.satisfied(h.problem.input_coeff.law.rate());
      json dj = {{"satisfied", d_ok}};
      if (cond.always_satisfied && !cond.required_a && !cond.required_b)
        dj["case"] = "satisfied (geometric case)";
      if (cond.required_a) dj["required_a"] = *cond.required_a;
      if (cond.required_b) dj["required_b"] = *cond.required_b;
      out.detail["donsker"] = std::move(dj);
      ok = ok && d_ok;

      if (h.problem.ell > 0.0 || (b_kind == DecayLaw::Kind::riemannian && h.problem.b.rate() > 2.0)) {
        const DecayEnvelope env =
            classify_decay(b_kind, in_kind, branch, h.problem.b.rate(),
                           h.problem.input_coeff.law.rate(), h.problem.ell, h.problem.m_prime);
        const char* form = env.form == EnvelopeForm::power ? "k^p"
                           : env.form == EnvelopeForm::power_log ? "k^p*log^s(k)"
                                                                 : "k^p*exp(-q*k)";
        out.detail["envelope"] = {{"base", form},
                                  {"power", env.power},
                                  {"log_power", env.log_power},
                                  {"exp_rate", env.exp_rate},
                                  {"headline", env.headline}};
      }
    }
  }
  out.verdict = ok ? "pass" : "fail";
  return out;
}

CheckOutcome run_decay_probe(const ExperimentConfig& config, unsigned threads) {
  (void)threads;
  std::size_t n = config.probe.n;
  if (n == 0)
    for (std::size_t g : config.n_grid) n = std::max(n, g);
  if (n == 0) throw ConfigError("decay_probe needs n_grid or probe.n");
  const std::size_t block = config.probe.block;

  std::vector<std::size_t> gaps = config.probe.gaps;
  if (gaps.empty())
    for (std::size_t g = 1; g <= std::min<std::size_t>(64, n / 4); g *= 2) gaps.push_back(g);

  const SamplePath path = simulate(config.process, n, derive_stream(config.master_seed, kProbeStream));
  const auto points = cov_decay_probe(path.values, gaps, block);

  CheckOutcome out;
  out.check = Check::decay_probe;
  CsvTable t;
  t.filename = "decay_probe.csv";
  t.columns = {"gap", "abs_cov", "n", "block"};
  for (const auto& p : points)
    t.rows.push_back({std::to_string(p.gap), csv_double(p.abs_cov), std::to_string(n),
                      std::to_string(block)});
  out.tables.push_back(std::move(t));
  // The probe is a descriptive shadow of the dependence coefficients, not an
  // estimator of them; it never passes or fails on its own.
  out.verdict = "inconclusive";
  out.detail = {{"note", "descriptive probe; inspect decay against the noise floor"},
                {"noise_floor", 4.0 / std::sqrt(static_cast<double>(n))}};
  return out;
}

CheckOutcome run_check(Check check, const ExperimentConfig& config, unsigned threads) {
  switch (check) {
    case Check::clt: return run_clt_check(config, threads);
    case Check::moments: return run_moments_check(config, threads);
    case Check::rate: return run_rate_check(config, threads);
    case Check::bounds: return run_bounds_check(config);
    case Check::decay_probe: return run_decay_probe(config, threads);
  }
  throw std::logic_error("run_check: bad enum");
}

namespace {

json report_skeleton(const ExperimentConfig& config) {
  json report;
  report["schema"] = kSchemaVersion;
  report["version"] = kVersion;
  report["timestamp"] = iso_timestamp();
  report["master_seed"] = std::to_string(config.master_seed);
  report["config"] = config_to_json(config);
  report["notes"] = json::array({
      "rate and distance claims are asymptotic and one-sided: fitted decays are compared "
      "against the theoretical bound only above the Monte Carlo noise floor ~R^(-1/2)",
  });
  if (config.theory) {
    json t = theory_to_json(*config.theory);
    try {
      const CltCondition clt =
          clt_condition(config.theory->m, config.theory->family, config.theory->decay_exp);
      t["clt_threshold"] = clt.threshold;
      t["clt_satisfied"] = clt.satisfied;
      if (clt.satisfied) {
        const RateProfile p =
            rate_profile(config.theory->m, config.theory->family, config.theory->decay_exp);
        t["profile"] = {{"moment_exponent", p.moment_exp}, {"c_star", p.c_star},
                        {"c_prime", p.c_prime},           {"a_star", p.a_star},
                        {"b_star", p.b_star},             {"delta_max", p.delta_max}};
      }
    } catch (const std::exception& e) {
      t["profile_error"] = e.what();
    }
    report["theory"] = std::move(t);
  }
  return report;
}

int exit_code_from_checks(const json& checks) {
  std::size_t errors = 0, fails = 0;
  for (const auto& c : checks) {
    const auto v = c.at("verdict").get<std::string>();
    if (v == "error") ++errors;
    if (v == "fail") ++fails;
  }
  if (!checks.empty() && errors == checks.size()) return 2;
  return (fails > 0 || errors > 0) ? 1 : 0;
}

}  // namespace

RunResult run_full_report(const ExperimentConfig& config, unsigned threads,
                          const std::filesystem::path& out_root) {
  validate_config(config);
  if (config.checks.empty()) throw ConfigError("full-report needs a nonempty checks list");

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.run_dir = fresh_run_dir(out_root, config.name);

  json report = report_skeleton(config);
  report["checks"] = json::array();
  for (Check check : config.checks) {
    json entry;
    entry["check"] = check_name(check);
    try {
      CheckOutcome outcome = run_check(check, config, threads);
      entry["verdict"] = outcome.verdict;
      entry["detail"] = std::move(outcome.detail);
      entry["tables"] = json::array();
      for (const auto& table : outcome.tables) {
        write_csv(result.run_dir, table);
        entry["tables"].push_back(table.filename);
      }
    } catch (const std::exception& e) {
      entry["verdict"] = "error";
      entry["detail"] = {{"diagnostic", e.what()}};
    }
    report["checks"].push_back(std::move(entry));
  }

  result.exit_code = exit_code_from_checks(report["checks"]);
  report["exit_code"] = result.exit_code;
  report["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(result.run_dir / "report.json", report);
  result.report = std::move(report);
  return result;
}

RunResult run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_root) {
  validate_config(config);
  if (config.n_grid.empty()) throw ConfigError("simulate needs a nonempty n_grid");

  RunResult result;
  result.run_dir = fresh_run_dir(out_root, config.name);
  json index = report_skeleton(config);
  index["paths"] = json::array();
  for (std::size_t n : config.n_grid) {
    const std::uint64_t seed = derive_stream(config.master_seed, kPathStream ^ n);
    const SamplePath path = simulate(config.process, n, seed);
    CsvTable t;
    t.filename = "path_n" + std::to_string(n) + ".csv";
    t.columns = {"t_index", "value"};
    for (std::size_t i = 0; i < path.values.size(); ++i)
      t.rows.push_back({std::to_string(i), csv_double(path.values[i])});
    write_csv(result.run_dir, t);

    char digest[20];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(path.spec_digest));
    json sidecar = {{"schema", kSchemaVersion}, {"n", n},
                    {"seed", std::to_string(seed)}, {"spec_digest", digest},
                    {"error_bound", path.error_bound}, {"csv", t.filename}};
    write_json(result.run_dir / ("path_n" + std::to_string(n) + ".json"), sidecar);
    index["paths"].push_back(std::move(sidecar));
  }
  write_json(result.run_dir / "report.json", index);
  result.report = std::move(index);
  result.exit_code = 0;
  return result;
}

RunResult run_single_check(Check check, const ExperimentConfig& config, unsigned threads,
                           const std::filesystem::path& out_root) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.run_dir = fresh_run_dir(out_root, config.name);

  json report = report_skeleton(config);
  report["checks"] = json::array();
  json entry;
  entry["check"] = check_name(check);
  CheckOutcome outcome = run_check(check, config, threads);  // errors propagate (exit 2)
  entry["verdict"] = outcome.verdict;
  entry["detail"] = std::move(outcome.detail);
  entry["tables"] = json::array();
  for (const auto& table : outcome.tables) {
    write_csv(result.run_dir, table);
    entry["tables"].push_back(table.filename);
  }
  report["checks"].push_back(std::move(entry));
  result.exit_code = exit_code_from_checks(report["checks"]);
  report["exit_code"] = result.exit_code;
  report["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(result.run_dir / "report.json", report);
  result.report = std::move(report);
  return result;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"simulation and verification laboratory for weakly dependent stationary sequences"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  std::string seed_override;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides config and WEAKDEP_OUT)");
  app.add_option("--threads", threads, "worker threads (default: all cores)");
  app.add_option("--seed", seed_override, "master seed override (unsigned decimal)");
  app.fallthrough();

  auto* cmd_simulate = app.add_subcommand("simulate", "write sample paths as CSV");
  auto* cmd_bounds = app.add_subcommand("bounds", "thresholds, heredity curves and rate exponents");
  auto* cmd_clt = app.add_subcommand("verify-clt", "Kolmogorov distance of S_n/sqrt(n) to its limit");
  auto* cmd_moments = app.add_subcommand("verify-moments", "moment-ratio scaling check");
  auto* cmd_rate = app.add_subcommand("rate-fit", "fit the distance decay rate");
  auto* cmd_full = app.add_subcommand("full-report", "run all configured checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig config = load_config(config_path);
    if (!seed_override.empty()) {
      std::size_t pos = 0;
      config.master_seed = std::stoull(seed_override, &pos);
      if (pos != seed_override.size()) throw ConfigError("invalid --seed value");
    }
    std::filesystem::path out_root;
    if (!out_dir.empty())
      out_root = out_dir;
    else if (!config.output_dir.empty())
      out_root = config.output_dir;
    else if (const char* env = std::getenv("WEAKDEP_OUT"); env && *env)
      out_root = env;
    else
      out_root = "runs";

    RunResult result;
    if (cmd_simulate->parsed())
      result = run_simulate(config, out_root);
    else if (cmd_bounds->parsed())
      result = run_single_check(Check::bounds, config, threads, out_root);
    else if (cmd_clt->parsed())
      result = run_single_check(Check::clt, config, threads, out_root);
    else if (cmd_moments->parsed())
      result = run_single_check(Check::moments, config, threads, out_root);
    else if (cmd_rate->parsed())
      result = run_single_check(Check::rate, config, threads, out_root);
    else if (cmd_full->parsed())
      result = run_full_report(config, threads, out_root);

    std::fprintf(stdout, "run dir: %s\n", result.run_dir.string().c_str());
    for (const auto& c : result.report.value("checks", json::array()))
      std::fprintf(stdout, "%-12s %s\n", c.at("check").get<std::string>().c_str(),
                   c.at("verdict").get<std::string>().c_str());
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace weakdep
