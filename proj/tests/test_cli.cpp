#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "weakdep/report.hpp"

using namespace weakdep;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("weakdep_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig small_clt_config() {
  ExperimentConfig c;
  c.name = "iid-clt";
  c.process.family = ProcessFamily::iid;
  c.process.innovation = InnovationSpec::gaussian(1.0);
  c.n_grid = {256};
  c.replicates = 500;
  c.master_seed = 321;
  c.checks = {Check::clt};
  return c;
}

std::filesystem::path write_config(const TempDir& dir, const ExperimentConfig& c,
                                   const std::string& file = "config.json") {
  const auto p = dir.path / file;
  std::ofstream out(p);
  out << config_to_json(c).dump(2);
  return p;
}

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> argv_s = {"weakdep-lab"};
  argv_s.insert(argv_s.end(), args);
  std::vector<const char*> argv;
  for (const auto& a : argv_s) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config JSON round-trips") {
  ExperimentConfig c;
  c.name = "roundtrip";
  c.process.family = ProcessFamily::linear;
  c.process.innovation.reset();
  {
    ProcessSpec larch;
    larch.family = ProcessFamily::larch_causal;
    larch.innovation = InnovationSpec::student(4.5);
    larch.coeffs = CoeffWindow::causal({0.3, 0.1});
    larch.intercept = 1.0;
    larch.burn_in = 12;
    larch.larch_moment_order = 3.0;
    larch.seed = 99;
    c.process.input = std::make_shared<const ProcessSpec>(std::move(larch));
  }
  c.process.coeffs = CoeffWindow(-1, {0.5, 1.0, 0.25}, 1e-9);
  c.process.seed = 7;
  c.n_grid = {128, 256, 1024};
  c.replicates = 2000;
  c.master_seed = 18446744073709551615ULL;  // top of the u64 range survives
  c.checks = {Check::clt, Check::bounds, Check::rate};
  TheoryBlock t;
  t.m = 4.0;
  t.family = Family::kappa;
  t.decay_exp = 3.0;
  HeredityConfig h;
  h.problem.b = DecayLaw::geometric(1.0, 0.5);
  h.problem.ell = 0.0;
  h.problem.m_prime = kInf;
  h.problem.y_norm1 = 0.79788456080286541;
  h.problem.input_coeff = {Family::lambda, DecayLaw::tabulated({2.0, 0.0})};
  h.lag_max = 32;
  t.heredity = h;
  c.theory = t;
  c.moment_delta = 2.5;
  c.probe = {{1, 2, 4}, 2, 4096};
  c.output_dir = "some/dir";

  const json j = config_to_json(c);
  const ExperimentConfig back = config_from_json(j);
  CHECK(back == c);

  // a second hop is bit-stable
  CHECK(config_to_json(back) == j);
  CHECK(j.at("master_seed").get<std::string>() == "18446744073709551615");
}

TEST_CASE("config validation") {
  auto c = small_clt_config();
  SUBCASE("n_grid must increase strictly") {
    c.n_grid = {256, 256};
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("statistical checks need replicates") {
    c.replicates = 10;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("rate and bounds need theory") {
    c.checks = {Check::rate};
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("Delta must exceed 2") {
    c.moment_delta = 2.0;
    CHECK_THROWS_WITH_AS(validate_config(c), "Delta must exceed 2", ConfigError);
  }
}

TEST_CASE("simulate command writes deterministic paths") {
  TempDir out("sim");
  ExperimentConfig c;
  c.name = "paths";
  c.process.family = ProcessFamily::iid;
  c.process.innovation = InnovationSpec::rademacher();
  c.n_grid = {8};
  c.master_seed = 5;

  const auto r1 = run_simulate(c, out.path);
  CHECK(r1.exit_code == 0);
  const auto csv = slurp(r1.run_dir / "path_n8.csv");
  std::size_t rows = 0;
  for (char ch : csv) rows += ch == '\n';
  CHECK(rows == 9);  // header + 8 values
  for (const auto& line : {std::string("0,"), std::string("7,")})
    CHECK(csv.find(line) != std::string::npos);
  CHECK((csv.find(",1\n") != std::string::npos || csv.find(",-1\n") != std::string::npos));

  const auto r2 = run_simulate(c, out.path);
  CHECK(r2.run_dir != r1.run_dir);  // append-only artifacts
  CHECK(slurp(r2.run_dir / "path_n8.csv") == csv);

  const json sidecar = json::parse(slurp(r1.run_dir / "path_n8.json"));
  CHECK(sidecar.at("spec_digest").get<std::string>().size() == 16);

  SUBCASE("zero-coefficient linear model writes a zero column") {
    ExperimentConfig z = c;
    z.name = "zeros";
    z.process.family = ProcessFamily::linear;
    z.process.innovation = InnovationSpec::gaussian(1.0);
    z.process.coeffs = CoeffWindow::two_sided(1, {0.0, 0.0, 0.0});
    const auto rz = run_simulate(z, out.path);
    const auto zcsv = slurp(rz.run_dir / "path_n8.csv");
    CHECK(zcsv.find("0,0\n") != std::string::npos);
    CHECK(zcsv.find("7,0\n") != std::string::npos);
  }
}

TEST_CASE("full report exit codes") {
  TempDir out("full");
  SUBCASE("empty checks are a config error") {
    auto c = small_clt_config();
    c.checks.clear();
    CHECK_THROWS_AS(run_full_report(c, 2, out.path), ConfigError);
  }
  SUBCASE("passing iid pipeline exits zero") {
    const auto r = run_full_report(small_clt_config(), 2, out.path);
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("checks")[0].at("verdict") == "pass");
    CHECK(std::filesystem::exists(r.run_dir / "clt.csv"));
    CHECK(std::filesystem::exists(r.run_dir / "report.json"));
  }
  SUBCASE("one failing check dominates a passing one") {
    auto c = small_clt_config();
    c.name = "degenerate";
    c.process.family = ProcessFamily::linear;
    c.process.innovation = InnovationSpec::gaussian(1.0);
    c.process.coeffs = CoeffWindow::two_sided(1, {0.0, 0.0, 0.0});  // sigma = 0
    c.checks = {Check::clt, Check::bounds};
    TheoryBlock t;
    t.m = 4.0;
    t.family = Family::kappa;
    t.decay_exp = 3.0;
    c.theory = t;
    const auto r = run_full_report(c, 2, out.path);
    CHECK(r.exit_code == 1);
    CHECK(r.report.at("checks")[0].at("verdict") == "fail");
    CHECK(r.report.at("checks")[0].at("detail").at("diagnostic") == "degenerate sigma");
    CHECK(r.report.at("checks")[1].at("verdict") == "pass");
  }
  SUBCASE("reruns write byte-identical tables into fresh directories") {
    const auto a = run_full_report(small_clt_config(), 1, out.path);
    const auto b = run_full_report(small_clt_config(), 2, out.path);
    CHECK(a.run_dir != b.run_dir);
    CHECK(slurp(a.run_dir / "clt.csv") == slurp(b.run_dir / "clt.csv"));
  }
  SUBCASE("a run where every check errors exits 2") {
    auto c = small_clt_config();
    c.name = "all-error";
    c.checks = {Check::rate};  // hypotheses fail: lambda exponent at the threshold
    TheoryBlock t;
    t.m = 4.0;
    t.family = Family::lambda;
    t.decay_exp = 5.0;
    c.theory = t;
    const auto r = run_full_report(c, 1, out.path);
    CHECK(r.exit_code == 2);
    CHECK(r.report.at("checks")[0].at("verdict") == "error");
  }
}

TEST_CASE("bounds check report values") {
  TempDir out("bounds");
  auto c = small_clt_config();
  c.checks = {Check::bounds};
  TheoryBlock t;
  t.m = 4.0;
  t.family = Family::kappa;
  t.decay_exp = 3.0;
  HeredityConfig h;
  h.problem.b = DecayLaw::geometric(1.0, 0.5);
  h.problem.input_coeff = {Family::lambda, DecayLaw::geometric(1.0, 0.25)};
  h.lag_max = 16;
  t.heredity = h;
  c.theory = t;

  const auto r = run_single_check(Check::bounds, c, 1, out.path);
  CHECK(r.exit_code == 0);
  const auto& detail = r.report.at("checks")[0].at("detail");
  CHECK(detail.at("clt_satisfied") == true);
  CHECK(detail.at("profile").at("moment_exponent").get<double>() ==
        doctest::Approx(0.61803398874989485).epsilon(1e-9));
  CHECK(detail.at("profile").at("c_star").get<double>() ==
        doctest::Approx(0.11970167518184113).epsilon(1e-9));
  CHECK(detail.at("donsker").at("case") == "satisfied (geometric case)");
  CHECK(std::filesystem::exists(r.run_dir / "heredity.csv"));

  SUBCASE("boundary decay exponent fails strictly") {
    auto cb = c;
    cb.theory->family = Family::lambda;
    cb.theory->decay_exp = 5.0;  // threshold for m = 4 exactly
    cb.theory->heredity.reset();
    const auto rb = run_single_check(Check::bounds, cb, 1, out.path);
    CHECK(rb.exit_code == 1);
    CHECK(rb.report.at("checks")[0].at("detail").at("clt_satisfied") == false);
  }
}

TEST_CASE("moments check derives Delta from the theory block") {
  TempDir out("mom");
  auto c = small_clt_config();
  c.name = "moments";
  c.process.innovation = InnovationSpec::rademacher();
  c.checks = {Check::moments};
  c.n_grid = {256, 512, 1024, 2048};
  c.replicates = 800;
  TheoryBlock t;
  t.m = 4.0;
  t.family = Family::kappa;
  t.decay_exp = 3.0;
  c.theory = t;

  const auto r = run_single_check(Check::moments, c, 2, out.path);
  const auto& detail = r.report.at("checks")[0].at("detail");
  CHECK(detail.at("delta").get<double>() ==
        doctest::Approx(2.0 + 0.9 * 0.61803398874989485).epsilon(1e-12));
  CHECK(r.exit_code == 0);
  CHECK(detail.at("ratio_log_slope").get<double>() == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("rate check is honest about the noise floor") {
  TempDir out("rate");
  auto c = small_clt_config();
  c.name = "rate-iid-gaussian";
  c.checks = {Check::rate};
  c.n_grid = {256, 512, 1024};
  c.replicates = 2000;
  TheoryBlock t;
  t.m = 4.0;
  t.family = Family::kappa;
  t.decay_exp = 6.0;
  c.theory = t;
  // gaussian partial sums are exactly normal: every distance sits at the
  // noise floor, so the fit must refuse to conclude
  const auto r = run_single_check(Check::rate, c, 2, out.path);
  CHECK(r.report.at("checks")[0].at("verdict") == "inconclusive");
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("checks")[0].at("detail").at("usable_points").get<std::size_t>() < 3);
}

TEST_CASE("command line entry point") {
  TempDir out("cli");
  TempDir cfgdir("cfg");
  const auto cfg = write_config(cfgdir, small_clt_config());

  CHECK(cli({"full-report", "--config", cfg.string(), "--out", out.path.string(), "--threads",
             "2"}) == 0);
  CHECK(cli({"verify-clt", "--config", cfg.string(), "--out", out.path.string()}) == 0);

  SUBCASE("missing subcommand or config is a usage error") {
    CHECK(cli({"--config", cfg.string()}) == 2);
    CHECK(cli({"full-report", "--config", (cfgdir.path / "absent.json").string(), "--out",
               out.path.string()}) == 2);
  }
  SUBCASE("empty checks list is a config error") {
    auto c = small_clt_config();
    c.checks.clear();
    const auto empty_cfg = write_config(cfgdir, c, "empty_checks.json");
    CHECK(cli({"full-report", "--config", empty_cfg.string(), "--out", out.path.string()}) == 2);
  }
  SUBCASE("malformed JSON is a config error") {
    const auto bad = cfgdir.path / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(cli({"full-report", "--config", bad.string(), "--out", out.path.string()}) == 2);
  }
  SUBCASE("seed override changes the tables") {
    const int rc1 = cli({"verify-clt", "--config", cfg.string(), "--out", out.path.string(),
                         "--seed", "777"});
    CHECK(rc1 == 0);
    // find the freshest run dirs and compare their tables
    std::vector<std::filesystem::path> dirs;
    for (const auto& e : std::filesystem::directory_iterator(out.path)) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    REQUIRE(dirs.size() >= 2);
    const auto last = slurp(dirs.back() / "clt.csv");
    const auto prev = slurp(dirs[dirs.size() - 2] / "clt.csv");
    CHECK(last != prev);
  }
  SUBCASE("WEAKDEP_OUT is the output fallback") {
    TempDir env_out("envout");
    setenv("WEAKDEP_OUT", env_out.path.c_str(), 1);
    CHECK(cli({"verify-clt", "--config", cfg.string()}) == 0);
    unsetenv("WEAKDEP_OUT");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(env_out.path))
      ++entries;
    CHECK(entries == 1);
  }
}

}  // TEST_SUITE
