#include "weakdep/config.hpp"

#include <fstream>

#include <json.hpp>

namespace weakdep {

using nlohmann::json;

namespace {

double number_or_inf(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw ConfigError("expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

json inf_aware(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

std::uint64_t seed_from_json(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_string()) throw ConfigError("seed must be an unsigned decimal string");
  const auto s = j.get<std::string>();
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters in seed \"" + s + "\"");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("invalid seed \"" + s + "\"");
  }
}

}  // namespace

std::string check_name(Check c) {
  switch (c) {
    case Check::clt: return "clt";
    case Check::moments: return "moments";
    case Check::rate: return "rate";
    case Check::bounds: return "bounds";
    case Check::decay_probe: return "decay_probe";
  }
  throw std::logic_error("check_name: bad enum");
}

Check check_from_name(const std::string& name) {
  if (name == "clt") return Check::clt;
  if (name == "moments") return Check::moments;
  if (name == "rate") return Check::rate;
  if (name == "bounds") return Check::bounds;
  if (name == "decay_probe") return Check::decay_probe;
  throw ConfigError("unknown check: " + name);
}

bool HeredityConfig::operator==(const HeredityConfig& o) const {
  return problem.b == o.problem.b && problem.ell == o.problem.ell &&
         problem.m_prime == o.problem.m_prime && problem.y_norm1 == o.problem.y_norm1 &&
         problem.y_normmp == o.problem.y_normmp && problem.input_coeff == o.problem.input_coeff &&
         lag_max == o.lag_max;
}

bool TheoryBlock::operator==(const TheoryBlock& o) const {
  return m == o.m && family == o.family && decay_exp == o.decay_exp && heredity == o.heredity;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return name == o.name && process == o.process && n_grid == o.n_grid &&
         replicates == o.replicates && master_seed == o.master_seed && checks == o.checks &&
         theory == o.theory && moment_delta == o.moment_delta && probe == o.probe &&
         output_dir == o.output_dir;
}

// ---------------------------------------------------------------------------

json decay_law_to_json(const DecayLaw& law) {
  json j;
  j["kind"] = decay_kind_name(law.kind());
  if (law.kind() == DecayLaw::Kind::tabulated)
    j["table"] = law.table();
  else {
    j["C"] = law.amplitude();
    j["a"] = law.rate();
  }
  return j;
}

DecayLaw decay_law_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "geometric") return DecayLaw::geometric(j.at("C").get<double>(), j.at("a").get<double>());
  if (kind == "riemannian")
    return DecayLaw::riemannian(j.at("C").get<double>(), j.at("a").get<double>());
  if (kind == "tabulated") return DecayLaw::tabulated(j.at("table").get<std::vector<double>>());
  throw ConfigError("unknown decay-law kind: " + kind);
}

json innovation_to_json(const InnovationSpec& innov) {
  json j;
  j["law"] = innovation_law_name(innov.law);
  switch (innov.law) {
    case InnovationLaw::gaussian: j["sd"] = innov.param; break;
    case InnovationLaw::uniform: j["half_width"] = innov.param; break;
    case InnovationLaw::rademacher: break;
    case InnovationLaw::student: j["dof"] = innov.param; break;
    case InnovationLaw::pareto_symmetric: j["tail_index"] = innov.param; break;
  }
  return j;
}

InnovationSpec innovation_from_json(const json& j) {
  const auto law = j.at("law").get<std::string>();
  if (law == "gaussian") return InnovationSpec::gaussian(j.value("sd", 1.0));
  if (law == "uniform") return InnovationSpec::uniform(j.value("half_width", 1.0));
  if (law == "rademacher") return InnovationSpec::rademacher();
  if (law == "student") return InnovationSpec::student(j.at("dof").get<double>());
  if (law == "pareto_symmetric")
    return InnovationSpec::pareto_symmetric(j.at("tail_index").get<double>());
  throw ConfigError("unknown innovation law: " + law);
}

json coeff_window_to_json(const CoeffWindow& w) {
  json j;
  j["kind"] = w.lo() == 1 ? "causal" : "two_sided";
  j["lo"] = w.lo();
  j["values"] = w.values();
  if (w.l1_tail_beyond_window() != 0.0) j["tail_beyond"] = w.l1_tail_beyond_window();
  return j;
}

CoeffWindow coeff_window_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "causal") return CoeffWindow::causal(j.at("values").get<std::vector<double>>());
  if (kind == "two_sided")
    return CoeffWindow(j.at("lo").get<int>(), j.at("values").get<std::vector<double>>(),
                       j.value("tail_beyond", 0.0));
  if (kind == "decay")
    return CoeffWindow::from_decay(decay_law_from_json(j.at("law")), j.value("rel_tol", 1e-8));
  throw ConfigError("unknown coefficient-window kind: " + kind);
}

json process_to_json(const ProcessSpec& spec) {
  json j;
  j["family"] = process_family_name(spec.family);
  j["seed"] = std::to_string(spec.seed);
  if (spec.innovation) j["innovation"] = innovation_to_json(*spec.innovation);
  if (spec.input) j["input"] = process_to_json(*spec.input);
  switch (spec.family) {
    case ProcessFamily::iid:
      break;
    case ProcessFamily::linear:
      j["coefficients"] = coeff_window_to_json(spec.coeffs);
      break;
    case ProcessFamily::linear_abs:
      j["coefficients"] = coeff_window_to_json(spec.coeffs);
      j["centering_mc"] = spec.centering_mc;
      break;
    case ProcessFamily::larch_causal:
      j["coefficients"] = coeff_window_to_json(spec.coeffs);
      j["intercept"] = spec.intercept;
      j["burn_in"] = spec.burn_in;
      j["moment_order"] = spec.larch_moment_order;
      break;
    case ProcessFamily::larch_noncausal:
      j["coefficients"] = coeff_window_to_json(spec.coeffs);
      j["intercept"] = spec.intercept;
      j["picard_iters"] = spec.picard_iters;
      break;
    case ProcessFamily::volterra: {
      json chaos;
      chaos["constant"] = spec.chaos.constant;
      chaos["terms"] = json::array();
      for (const auto& t : spec.chaos.terms)
        chaos["terms"].push_back({{"lags", t.lags}, {"coeff", t.coeff}});
      j["chaos"] = std::move(chaos);
      j["lag_window"] = spec.lag_window;
      break;
    }
    case ProcessFamily::markov_ar:
      j["contraction"] = spec.contraction;
      j["burn_in"] = spec.burn_in;
      break;
  }
  return j;
}

ProcessSpec process_from_json(const json& j) {
  ProcessSpec spec;
  const auto fam = j.at("family").get<std::string>();
  spec.innovation.reset();
  if (j.contains("innovation")) spec.innovation = innovation_from_json(j.at("innovation"));
  if (j.contains("input"))
    spec.input = std::make_shared<const ProcessSpec>(process_from_json(j.at("input")));
  if (j.contains("seed")) spec.seed = seed_from_json(j.at("seed"));

  if (fam == "iid") {
    spec.family = ProcessFamily::iid;
    if (!spec.innovation) throw ConfigError("iid process needs \"innovation\"");
  } else if (fam == "linear" || fam == "linear_abs") {
    spec.family = fam == "linear" ? ProcessFamily::linear : ProcessFamily::linear_abs;
    spec.coeffs = coeff_window_from_json(j.at("coefficients"));
    if (!spec.innovation && !spec.input)
      throw ConfigError(fam + " process needs \"innovation\" or \"input\"");
    if (spec.family == ProcessFamily::linear_abs)
      spec.centering_mc = j.value("centering_mc", std::size_t{10000});
  } else if (fam == "larch_causal") {
    spec.family = ProcessFamily::larch_causal;
    spec.coeffs = coeff_window_from_json(j.at("coefficients"));
    spec.intercept = j.at("intercept").get<double>();
    spec.burn_in = j.value("burn_in", std::size_t{0});
    spec.larch_moment_order = j.value("moment_order", 2.0);
    if (!spec.innovation) throw ConfigError("larch_causal process needs \"innovation\"");
  } else if (fam == "larch_noncausal") {
    spec.family = ProcessFamily::larch_noncausal;
    spec.coeffs = coeff_window_from_json(j.at("coefficients"));
    spec.intercept = j.at("intercept").get<double>();
    spec.picard_iters = j.value("picard_iters", std::size_t{0});
    if (!spec.innovation) throw ConfigError("larch_noncausal process needs \"innovation\"");
  } else if (fam == "volterra") {
    spec.family = ProcessFamily::volterra;
    const json& chaos = j.at("chaos");
    spec.chaos.constant = chaos.value("constant", 0.0);
    if (chaos.contains("terms"))
      for (const auto& t : chaos.at("terms"))
        spec.chaos.terms.push_back(
            {t.at("lags").get<std::vector<int>>(), t.at("coeff").get<double>()});
    spec.lag_window = j.value("lag_window", 0);
    if (!spec.innovation && !spec.input)
      throw ConfigError("volterra process needs \"innovation\" or \"input\"");
  } else if (fam == "markov_ar") {
    spec.family = ProcessFamily::markov_ar;
    spec.contraction = j.at("contraction").get<double>();
    spec.burn_in = j.value("burn_in", std::size_t{0});
    if (!spec.innovation) throw ConfigError("markov_ar process needs \"innovation\"");
  } else {
    throw ConfigError("unknown process family: " + fam);
  }
  return spec;
}

json theory_to_json(const TheoryBlock& theory) {
  json j;
  j["m"] = theory.m;
  j["family"] = family_name(theory.family);
  j["decay_exp"] = theory.decay_exp;
  if (theory.heredity) {
    const auto& h = *theory.heredity;
    json hj;
    hj["b"] = decay_law_to_json(h.problem.b);
    hj["ell"] = h.problem.ell;
    hj["m_prime"] = inf_aware(h.problem.m_prime);
    hj["y_norm1"] = h.problem.y_norm1;
    hj["y_normmp"] = h.problem.y_normmp;
    hj["input"] = {{"family", family_name(h.problem.input_coeff.family)},
                   {"law", decay_law_to_json(h.problem.input_coeff.law)}};
    hj["lag_max"] = h.lag_max;
    j["heredity"] = std::move(hj);
  }
  return j;
}

TheoryBlock theory_from_json(const json& j) {
  TheoryBlock t;
  t.m = j.at("m").get<double>();
  t.family = family_from_name(j.at("family").get<std::string>());
  t.decay_exp = j.at("decay_exp").get<double>();
  if (j.contains("heredity")) {
    const json& hj = j.at("heredity");
    HeredityConfig h;
    h.problem.b = decay_law_from_json(hj.at("b"));
    h.problem.ell = hj.value("ell", 0.0);
    h.problem.m_prime = hj.contains("m_prime") ? number_or_inf(hj.at("m_prime")) : kInf;
    h.problem.y_norm1 = hj.value("y_norm1", 1.0);
    h.problem.y_normmp = hj.value("y_normmp", 1.0);
    h.problem.input_coeff.family = family_from_name(hj.at("input").at("family").get<std::string>());
    h.problem.input_coeff.law = decay_law_from_json(hj.at("input").at("law"));
    h.lag_max = hj.value("lag_max", std::int64_t{64});
    t.heredity = std::move(h);
  }
  return t;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["schema"] = kSchemaVersion;
  j["name"] = config.name;
  j["process"] = process_to_json(config.process);
  j["n_grid"] = config.n_grid;
  j["replicates"] = config.replicates;
  j["master_seed"] = std::to_string(config.master_seed);
  j["checks"] = json::array();
  for (Check c : config.checks) j["checks"].push_back(check_name(c));
  if (config.theory) j["theory"] = theory_to_json(*config.theory);
  if (config.moment_delta) j["moment_delta"] = *config.moment_delta;
  if (!config.probe.gaps.empty() || config.probe.block != 1 || config.probe.n != 0) {
    j["probe"] = {{"gaps", config.probe.gaps}, {"block", config.probe.block}, {"n", config.probe.n}};
  }
  if (!config.output_dir.empty()) j["output_dir"] = config.output_dir.string();
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema version");
  c.name = j.at("name").get<std::string>();
  try {
    c.process = process_from_json(j.at("process"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid process spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid process spec: ") + e.what());
  }
  c.n_grid = j.value("n_grid", std::vector<std::size_t>{});
  c.replicates = j.value("replicates", std::size_t{0});
  if (j.contains("master_seed")) c.master_seed = seed_from_json(j.at("master_seed"));
  if (j.contains("checks"))
    for (const auto& name : j.at("checks")) c.checks.push_back(check_from_name(name.get<std::string>()));
  if (j.contains("theory")) c.theory = theory_from_json(j.at("theory"));
  if (j.contains("moment_delta")) c.moment_delta = j.at("moment_delta").get<double>();
  if (j.contains("probe")) {
    const json& p = j.at("probe");
    c.probe.gaps = p.value("gaps", std::vector<std::size_t>{});
    c.probe.block = p.value("block", std::size_t{1});
    c.probe.n = p.value("n", std::size_t{0});
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file: " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

void validate_config(const ExperimentConfig& config) {
  if (config.name.empty()) throw ConfigError("config needs a nonempty name");
  for (std::size_t i = 1; i < config.n_grid.size(); ++i)
    if (config.n_grid[i] <= config.n_grid[i - 1])
      throw ConfigError("n_grid must be strictly increasing");

  const bool statistical =
      std::find_if(config.checks.begin(), config.checks.end(), [](Check c) {
        return c == Check::clt || c == Check::moments || c == Check::rate || c == Check::decay_probe;
      }) != config.checks.end();
  if (statistical) {
    if (config.n_grid.empty()) throw ConfigError("statistical checks need a nonempty n_grid");
    if (config.replicates < 100)
      throw ConfigError("statistical checks need replicates >= 100");
  }
  for (Check c : config.checks) {
    if ((c == Check::bounds || c == Check::rate) && !config.theory)
      throw ConfigError(check_name(c) + " check needs a theory block");
    if (c == Check::moments && !config.moment_delta && !config.theory)
      throw ConfigError("moments check needs moment_delta or a theory block");
  }
  if (config.moment_delta && !(*config.moment_delta > 2.0))
    throw ConfigError("Delta must exceed 2");
}

}  // namespace weakdep
