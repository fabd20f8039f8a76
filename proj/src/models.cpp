#include "weakdep/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "weakdep/summation.hpp"

namespace weakdep {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// InnovationSpec

InnovationSpec InnovationSpec::gaussian(double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian innovation: sd must be positive");
  return {InnovationLaw::gaussian, sd};
}

InnovationSpec InnovationSpec::uniform(double half_width) {
  if (!(half_width > 0.0)) throw std::invalid_argument("uniform innovation: half_width must be positive");
  return {InnovationLaw::uniform, half_width};
}

InnovationSpec InnovationSpec::rademacher() { return {InnovationLaw::rademacher, 1.0}; }

InnovationSpec InnovationSpec::student(double dof) {
  if (!(dof > 2.0)) throw std::invalid_argument("student innovation: dof must exceed 2");
  return {InnovationLaw::student, dof};
}

InnovationSpec InnovationSpec::pareto_symmetric(double tail_index) {
  if (!(tail_index > 2.0))
    throw std::invalid_argument("pareto innovation: tail_index must exceed 2");
  return {InnovationLaw::pareto_symmetric, tail_index};
}

double InnovationSpec::sup_norm() const {
  switch (law) {
    case InnovationLaw::uniform: return param;
    case InnovationLaw::rademacher: return 1.0;
    default: return kInf;
  }
}

double InnovationSpec::max_moment_order() const {
  switch (law) {
    case InnovationLaw::student: return param;
    case InnovationLaw::pareto_symmetric: return param;
    default: return kInf;
  }
}

double InnovationSpec::abs_moment(double order) const {
  if (!(order > 0.0)) throw std::invalid_argument("abs_moment: order must be positive");
  if (order >= max_moment_order())
    throw std::domain_error("abs_moment: order " + fmt_double(order) + " not integrable for " +
                            innovation_law_name(law));
  switch (law) {
    case InnovationLaw::gaussian:
      // E|N(0,1)|^m = 2^(m/2) Gamma((m+1)/2) / sqrt(pi)
      return std::pow(param, order) *
             std::exp(0.5 * order * std::log(2.0) + std::lgamma(0.5 * (order + 1.0))) /
             std::sqrt(kPi);
    case InnovationLaw::uniform:
      return std::pow(param, order) / (order + 1.0);
    case InnovationLaw::rademacher:
      return 1.0;
    case InnovationLaw::student: {
      const double nu = param;
      return std::exp(0.5 * order * std::log(nu) + std::lgamma(0.5 * (order + 1.0)) +
                      std::lgamma(0.5 * (nu - order)) - std::lgamma(0.5 * nu)) /
             std::sqrt(kPi);
    }
    case InnovationLaw::pareto_symmetric:
      return param / (param - order);
  }
  throw std::logic_error("abs_moment: bad enum");
}

double InnovationSpec::lm_norm(double order) const { return std::pow(abs_moment(order), 1.0 / order); }

double InnovationSpec::sample(CounterRng& rng) const {
  switch (law) {
    case InnovationLaw::gaussian: return param * rng.next_gaussian();
    case InnovationLaw::uniform: return param * (2.0 * rng.next_unit() - 1.0);
    case InnovationLaw::rademacher: return rng.next_unit() < 0.5 ? -1.0 : 1.0;
    case InnovationLaw::student: return rng.next_student(param);
    case InnovationLaw::pareto_symmetric: {
      const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      return sign * std::pow(rng.next_unit_pos(), -1.0 / param);
    }
  }
  throw std::logic_error("sample: bad enum");
}

std::string innovation_law_name(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::gaussian: return "gaussian";
    case InnovationLaw::uniform: return "uniform";
    case InnovationLaw::rademacher: return "rademacher";
    case InnovationLaw::student: return "student";
    case InnovationLaw::pareto_symmetric: return "pareto_symmetric";
  }
  throw std::logic_error("innovation_law_name: bad enum");
}

// ---------------------------------------------------------------------------
// CoeffWindow

CoeffWindow::CoeffWindow(int lo, std::vector<double> values, double tail_beyond)
    : lo_(lo), values_(std::move(values)), tail_beyond_(tail_beyond) {
  if (values_.empty()) throw std::invalid_argument("CoeffWindow: empty window");
  if (!(tail_beyond_ >= 0.0)) throw std::invalid_argument("CoeffWindow: negative tail");
}

CoeffWindow CoeffWindow::causal(std::vector<double> a1_to_aJ) {
  return CoeffWindow(1, std::move(a1_to_aJ));
}

CoeffWindow CoeffWindow::two_sided(int radius, std::vector<double> values) {
  if (radius < 0) throw std::invalid_argument("CoeffWindow: negative radius");
  if (values.size() != static_cast<std::size_t>(2 * radius + 1))
    throw std::invalid_argument("CoeffWindow: two_sided expects 2*radius+1 values");
  return CoeffWindow(-radius, std::move(values));
}

CoeffWindow CoeffWindow::from_decay(const DecayLaw& law, double rel_tol) {
  const double total = law.sum_all();
  if (!std::isfinite(total)) throw std::invalid_argument("CoeffWindow: decay law is not summable");
  int radius = 0;
  while (law.sum_abs_tail(radius + 1) > rel_tol * total && radius < 1 << 22) ++radius;
  std::vector<double> vals(2 * static_cast<std::size_t>(radius) + 1);
  for (int i = -radius; i <= radius; ++i)
    vals[static_cast<std::size_t>(i + radius)] = law.eval(std::abs(i));
  return CoeffWindow(-radius, std::move(vals), law.sum_abs_tail(radius + 1));
}

double CoeffWindow::at(int i) const {
  if (i < lo_ || i > hi()) return 0.0;
  return values_[static_cast<std::size_t>(i - lo_)];
}

double CoeffWindow::l1_norm() const {
  NeumaierAcc acc;
  for (double v : values_) acc.add(std::abs(v));
  return acc.value() + tail_beyond_;
}

double CoeffWindow::l1_tail(int beyond) const {
  NeumaierAcc acc;
  for (int i = lo_; i <= hi(); ++i)
    if (std::abs(i) > beyond) acc.add(std::abs(at(i)));
  return acc.value() + tail_beyond_;
}

double CoeffWindow::sum() const {
  NeumaierAcc acc;
  for (double v : values_) acc.add(v);
  return acc.value();
}

double CoeffWindow::sum_squares() const {
  NeumaierAcc acc;
  for (double v : values_) acc.add(v * v);
  return acc.value();
}

// ---------------------------------------------------------------------------
// ChaosExpansion

int ChaosExpansion::order() const {
  std::size_t k = 0;
  for (const auto& t : terms) k = std::max(k, t.lags.size());
  return static_cast<int>(k);
}

std::map<int, double> ChaosExpansion::lipschitz_weights() const {
  std::map<int, double> b;
  for (const auto& t : terms)
    for (int lag : t.lags) b[lag] += std::abs(t.coeff);
  return b;
}

double ChaosExpansion::l1_total() const {
  NeumaierAcc acc;
  acc.add(std::abs(constant));
  for (const auto& t : terms) acc.add(std::abs(t.coeff));
  return acc.value();
}

int ChaosExpansion::min_lag() const {
  int m = 0;
  for (const auto& t : terms)
    for (int lag : t.lags) m = std::min(m, lag);
  return m;
}

int ChaosExpansion::max_lag() const {
  int m = 0;
  for (const auto& t : terms)
    for (int lag : t.lags) m = std::max(m, lag);
  return m;
}

// ---------------------------------------------------------------------------
// ProcessSpec

std::string process_family_name(ProcessFamily f) {
  switch (f) {
    case ProcessFamily::iid: return "iid";
    case ProcessFamily::linear: return "linear";
    case ProcessFamily::linear_abs: return "linear_abs";
    case ProcessFamily::larch_causal: return "larch_causal";
    case ProcessFamily::larch_noncausal: return "larch_noncausal";
    case ProcessFamily::volterra: return "volterra";
    case ProcessFamily::markov_ar: return "markov_ar";
  }
  throw std::logic_error("process_family_name: bad enum");
}

std::string ProcessSpec::canonical_key() const {
  std::ostringstream os;
  os << process_family_name(family) << '(';
  if (innovation)
    os << "innov=" << innovation_law_name(innovation->law) << ':' << fmt_double(innovation->param);
  if (input) os << ";input=" << input->canonical_key();
  if (!coeffs.empty()) {
    os << ";coeffs[lo=" << coeffs.lo() << "]=";
    for (double v : coeffs.values()) os << fmt_double(v) << ',';
    os << "tail=" << fmt_double(coeffs.l1_tail_beyond_window());
  }
  if (family == ProcessFamily::volterra) {
    os << ";chaos=" << fmt_double(chaos.constant);
    for (const auto& t : chaos.terms) {
      os << "|(";
      for (int lag : t.lags) os << lag << ',';
      os << ")*" << fmt_double(t.coeff);
    }
    os << ";lag_window=" << lag_window;
  }
  os << ";a=" << fmt_double(intercept) << ";contr=" << fmt_double(contraction)
     << ";mord=" << fmt_double(larch_moment_order) << ";burn=" << burn_in
     << ";picard=" << picard_iters << ";cmc=" << centering_mc << ";seed=" << seed << ')';
  return os.str();
}

std::uint64_t ProcessSpec::digest() const { return fnv1a64(canonical_key()); }

bool ProcessSpec::operator==(const ProcessSpec& other) const {
  const bool inputs_equal =
      (input == other.input) || (input && other.input && *input == *other.input);
  return family == other.family && innovation == other.innovation && inputs_equal &&
         coeffs == other.coeffs && chaos == other.chaos && intercept == other.intercept &&
         contraction == other.contraction && larch_moment_order == other.larch_moment_order &&
         burn_in == other.burn_in && picard_iters == other.picard_iters &&
         centering_mc == other.centering_mc && lag_window == other.lag_window &&
         seed == other.seed;
}

// ---------------------------------------------------------------------------
// Simulators

namespace {

std::vector<double> simulate_values(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Input sequence of a filter as a process: either the nested spec or the bare
// innovation wrapped as an iid family.
ProcessSpec input_process(const std::optional<InnovationSpec>& innovation,
                          const std::shared_ptr<const ProcessSpec>& input) {
  if (input) return *input;
  if (!innovation) throw std::invalid_argument("filter family needs an innovation or a nested input");
  ProcessSpec p;
  p.family = ProcessFamily::iid;
  p.innovation = *innovation;
  return p;
}

std::vector<double> iid_values(const InnovationSpec& innovation, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<double> out(n);
  for (double& x : out) x = innovation.sample(rng);
  return out;
}

std::size_t default_geometric_burn_in(double contraction_factor) {
  if (contraction_factor <= 0.0) return 1;
  const double b = std::ceil(std::log(1e-10) / std::log(contraction_factor));
  return static_cast<std::size_t>(std::max(1.0, b));
}

}  // namespace

SamplePath simulate_iid(const InnovationSpec& innovation, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_iid: n must be >= 1");
  SamplePath path;
  path.values = iid_values(innovation, n, seed);
  path.seed = seed;
  return path;
}

std::vector<double> filter_window(const CoeffWindow& coeffs, std::span<const double> padded_input,
                                  std::size_t n) {
  const int lo = coeffs.lo(), hi = coeffs.hi();
  const std::size_t span = static_cast<std::size_t>(hi - lo);
  if (padded_input.size() < n + span)
    throw std::invalid_argument("filter_window: window exceeds available input length");
  std::vector<double> out(n);
  const auto& alpha = coeffs.values();
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    // Y_{t-i} lives at padded index (t - i) + hi.
    for (int i = lo; i <= hi; ++i)
      acc += alpha[static_cast<std::size_t>(i - lo)] *
             padded_input[t + static_cast<std::size_t>(hi - i)];
    out[t] = acc;
  }
  return out;
}

SamplePath simulate_linear(const CoeffWindow& coeffs, const ProcessSpec& input, std::size_t n,
                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_linear: n must be >= 1");
  const std::size_t span = static_cast<std::size_t>(coeffs.hi() - coeffs.lo());
  const auto padded = simulate_values(input, n + span, derive_stream(seed, 1));
  SamplePath path;
  path.values = filter_window(coeffs, padded, n);
  path.seed = seed;
  // L1 truncation error of a decay-built window: tail * E|Y_0|, with the
  // sample mean standing in for E|Y_0| when no closed form exists.
  double mean_abs;
  if (const auto analytic = analytic_mean_abs(input)) {
    mean_abs = *analytic;
  } else {
    NeumaierAcc acc;
    for (double y : padded) acc.add(std::abs(y));
    mean_abs = acc.value() / static_cast<double>(padded.size());
  }
  path.error_bound = coeffs.l1_tail_beyond_window() * mean_abs;
  return path;
}

SamplePath simulate_linear_abs(const CoeffWindow& coeffs, const ProcessSpec& input, std::size_t n,
                               std::uint64_t seed, std::size_t centering_mc) {
  if (centering_mc < 10000)
    throw std::invalid_argument("simulate_linear_abs: centering_mc must be >= 10^4");
  SamplePath path = simulate_linear(coeffs, input, n, seed);
  const std::size_t span = static_cast<std::size_t>(coeffs.hi() - coeffs.lo());
  const auto aux = simulate_values(input, centering_mc + span, derive_stream(seed, 2));
  const auto windows = filter_window(coeffs, aux, centering_mc);
  NeumaierAcc acc;
  for (double w : windows) acc.add(std::abs(w));
  const double centering = acc.value() / static_cast<double>(centering_mc);
  for (double& x : path.values) x = std::abs(x) - centering;
  return path;
}

double larch_contraction(const InnovationSpec& innovation, const CoeffWindow& coeffs, double order) {
  NeumaierAcc acc;
  for (int j = coeffs.lo(); j <= coeffs.hi(); ++j)
    if (j != 0) acc.add(std::abs(coeffs.at(j)));
  const double norm = std::isfinite(order) ? innovation.lm_norm(order) : innovation.sup_norm();
  return norm * acc.value();
}

SamplePath simulate_larch_causal(double intercept, const CoeffWindow& coeffs,
                                 const InnovationSpec& innovation, std::size_t n, std::uint64_t seed,
                                 std::size_t burn_in, double moment_order) {
  if (n < 1) throw std::invalid_argument("simulate_larch_causal: n must be >= 1");
  if (coeffs.lo() < 1) throw std::invalid_argument("simulate_larch_causal: window must start at lag 1");
  const double contraction = larch_contraction(innovation, coeffs, moment_order);
  if (!(contraction < 1.0))
    throw std::domain_error("larch contraction violated: Lambda = " + fmt_double(contraction) +
                            " >= 1");
  if (burn_in == 0) burn_in = default_geometric_burn_in(contraction);

  const int J = coeffs.hi();
  CounterRng rng(seed, 0);
  std::vector<double> y(burn_in + n);
  const auto& a = coeffs.values();
  for (std::size_t t = 0; t < y.size(); ++t) {
    double feedback = 0.0;
    for (int j = 1; j <= J; ++j)
      if (t >= static_cast<std::size_t>(j)) feedback += a[static_cast<std::size_t>(j - 1)] * y[t - static_cast<std::size_t>(j)];
    y[t] = innovation.sample(rng) * (intercept + feedback);
  }
  SamplePath path;
  path.values.assign(y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end());
  path.seed = seed;
  path.error_bound = std::pow(contraction, static_cast<double>(burn_in));
  return path;
}

SamplePath simulate_larch_noncausal(double intercept, const CoeffWindow& coeffs,
                                    const InnovationSpec& innovation, std::size_t n,
                                    std::uint64_t seed, std::size_t picard_iters) {
  if (n < 1) throw std::invalid_argument("simulate_larch_noncausal: n must be >= 1");
  if (!std::isfinite(innovation.sup_norm()))
    throw std::invalid_argument("simulate_larch_noncausal: innovation must be bounded");
  if (coeffs.at(0) != 0.0)
    throw std::invalid_argument("simulate_larch_noncausal: lag-0 coefficient must be absent");
  const double xi_sup = innovation.sup_norm();
  const double contraction = larch_contraction(innovation, coeffs, kInf);
  if (!(contraction < 1.0))
    throw std::domain_error("larch contraction violated: Lambda = " + fmt_double(contraction) +
                            " >= 1");
  std::size_t iters = picard_iters;
  if (iters == 0) {
    iters = 1;
    // smallest N with Lambda^N / (1 - Lambda) <= 1e-10
    while (contraction > 0.0 &&
           std::pow(contraction, static_cast<double>(iters)) / (1.0 - contraction) > 1e-10 &&
           iters < 4096)
      ++iters;
  }

  const std::size_t width =
      static_cast<std::size_t>(std::max(std::abs(coeffs.lo()), std::abs(coeffs.hi())));
  const std::size_t pad = iters * width;
  const std::size_t len = n + 2 * pad;

  // Innovations are keyed by absolute time position, so the (internal)
  // padding width never shifts the stream: the same (spec, seed) yields the
  // same central values whatever the iteration count.
  const std::uint64_t stream = derive_stream(seed, 0);
  constexpr std::int64_t kOrigin = std::int64_t{1} << 40;
  std::vector<double> xi(len);
  for (std::size_t idx = 0; idx < len; ++idx) {
    const std::int64_t position = static_cast<std::int64_t>(idx) - static_cast<std::int64_t>(pad);
    CounterRng rng(stream, static_cast<std::uint64_t>(position + kOrigin));
    xi[idx] = innovation.sample(rng);
  }

  std::vector<double> cur(len, 0.0), next(len, 0.0);
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t t = 0; t < len; ++t) {
      double feedback = 0.0;
      for (int j = coeffs.lo(); j <= coeffs.hi(); ++j) {
        if (j == 0) continue;
        const std::int64_t src = static_cast<std::int64_t>(t) - j;
        if (src >= 0 && src < static_cast<std::int64_t>(len))
          feedback += coeffs.at(j) * cur[static_cast<std::size_t>(src)];
      }
      next[t] = xi[t] * (intercept + feedback);
    }
    cur.swap(next);
  }

  SamplePath path;
  path.values.assign(cur.begin() + static_cast<std::ptrdiff_t>(pad),
                     cur.begin() + static_cast<std::ptrdiff_t>(pad + n));
  path.seed = seed;
  path.error_bound = contraction == 0.0
                         ? 0.0
                         : std::pow(contraction, static_cast<double>(iters)) *
                               std::abs(intercept) * xi_sup / (1.0 - contraction);
  return path;
}

VolterraResult simulate_volterra(const ChaosExpansion& chaos, const ProcessSpec& input,
                                 std::size_t n, std::uint64_t seed, int lag_window) {
  if (n < 1) throw std::invalid_argument("simulate_volterra: n must be >= 1");
  for (const auto& t : chaos.terms) {
    if (t.lags.empty()) throw std::invalid_argument("simulate_volterra: empty term");
    if (lag_window > 0)
      for (int lag : t.lags)
        if (std::abs(lag) > lag_window)
          throw std::invalid_argument("simulate_volterra: lag outside window");
  }
  const int K = chaos.order();
  if (K >= 1 && input.family == ProcessFamily::iid && input.innovation) {
    const double have = input.innovation->max_moment_order();
    if (have < 2.0 * static_cast<double>(K))
      throw std::domain_error("simulate_volterra: declared input moments insufficient (need order >= " +
                              fmt_double(2.0 * K) + ", have < " + fmt_double(have) + ")");
  }

  const int lo = chaos.min_lag(), hi = chaos.max_lag();
  const std::size_t span = static_cast<std::size_t>(hi - lo);
  const auto padded = simulate_values(input, n + span, derive_stream(seed, 1));

  VolterraResult res;
  res.path.values.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = chaos.constant;
    for (const auto& term : chaos.terms) {
      double prod = term.coeff;
      for (int lag : term.lags) prod *= padded[t + static_cast<std::size_t>(hi - lag)];
      acc += prod;
    }
    res.path.values[t] = acc;
  }
  res.path.seed = seed;
  res.lipschitz_weights = chaos.lipschitz_weights();
  res.l1_total = chaos.l1_total();
  return res;
}

SamplePath simulate_markov_ar(double contraction, const InnovationSpec& innovation, std::size_t n,
                              std::uint64_t seed, std::size_t burn_in) {
  if (n < 1) throw std::invalid_argument("simulate_markov_ar: n must be >= 1");
  if (!(std::abs(contraction) < 1.0))
    throw std::domain_error("simulate_markov_ar: |a| must be < 1, got " + fmt_double(contraction));
  if (burn_in == 0)
    burn_in = static_cast<std::size_t>(std::ceil(10.0 / (1.0 - std::abs(contraction))));
  CounterRng rng(seed, 0);
  double y = 0.0;
  for (std::size_t t = 0; t < burn_in; ++t) y = contraction * y + innovation.sample(rng);
  SamplePath path;
  path.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    y = contraction * y + innovation.sample(rng);
    path.values[t] = y;
  }
  path.seed = seed;
  path.error_bound = std::pow(std::abs(contraction), static_cast<double>(burn_in));
  return path;
}

namespace {

std::vector<double> simulate_values(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  const bool accepts_input = spec.family == ProcessFamily::linear ||
                             spec.family == ProcessFamily::linear_abs ||
                             spec.family == ProcessFamily::volterra;
  if (spec.input && !accepts_input)
    throw std::invalid_argument(process_family_name(spec.family) +
                                " does not accept a dependent input process");
  switch (spec.family) {
    case ProcessFamily::iid:
      if (!spec.innovation) throw std::invalid_argument("iid process needs an innovation");
      return iid_values(*spec.innovation, n, seed);
    case ProcessFamily::linear:
      return simulate_linear(spec.coeffs, input_process(spec.innovation, spec.input), n, seed)
          .values;
    case ProcessFamily::linear_abs:
      return simulate_linear_abs(spec.coeffs, input_process(spec.innovation, spec.input), n, seed,
                                 spec.centering_mc)
          .values;
    case ProcessFamily::larch_causal:
      if (!spec.innovation) throw std::invalid_argument("larch process needs an innovation");
      return simulate_larch_causal(spec.intercept, spec.coeffs, *spec.innovation, n, seed,
                                   spec.burn_in, spec.larch_moment_order)
          .values;
    case ProcessFamily::larch_noncausal:
      if (!spec.innovation) throw std::invalid_argument("larch process needs an innovation");
      return simulate_larch_noncausal(spec.intercept, spec.coeffs, *spec.innovation, n, seed,
                                      spec.picard_iters)
          .values;
    case ProcessFamily::volterra:
      return simulate_volterra(spec.chaos, input_process(spec.innovation, spec.input), n, seed,
                               spec.lag_window)
          .path.values;
    case ProcessFamily::markov_ar:
      if (!spec.innovation) throw std::invalid_argument("markov_ar process needs an innovation");
      return simulate_markov_ar(spec.contraction, *spec.innovation, n, seed, spec.burn_in).values;
  }
  throw std::logic_error("simulate_values: bad enum");
}

}  // namespace

SamplePath simulate(const ProcessSpec& spec, std::size_t n) { return simulate(spec, n, spec.seed); }

SamplePath simulate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  SamplePath path;
  path.values = simulate_values(spec, n, seed);
  path.seed = seed;
  path.spec_digest = spec.digest();
  return path;
}

std::optional<double> analytic_longrun_variance(const ProcessSpec& spec) {
  switch (spec.family) {
    case ProcessFamily::iid:
      if (spec.innovation) return spec.innovation->variance();
      return std::nullopt;
    case ProcessFamily::linear: {
      std::optional<InnovationSpec> innov;
      if (spec.innovation && !spec.input)
        innov = spec.innovation;
      else if (spec.input && spec.input->family == ProcessFamily::iid)
        innov = spec.input->innovation;
      if (!innov) return std::nullopt;
      const double s = spec.coeffs.sum();
      return innov->variance() * s * s;
    }
    case ProcessFamily::markov_ar: {
      if (!spec.innovation) return std::nullopt;
      const double d = 1.0 - spec.contraction;
      return spec.innovation->variance() / (d * d);
    }
    case ProcessFamily::larch_causal: {
      // The solution is white noise (a martingale difference), so the
      // long-run variance is Var(Y_0) = s2 a^2 / (1 - s2 sum a_j^2).
      if (!spec.innovation) return std::nullopt;
      const double s2 = spec.innovation->variance();
      const double denom = 1.0 - s2 * spec.coeffs.sum_squares();
      if (!(denom > 0.0)) return std::nullopt;
      return s2 * spec.intercept * spec.intercept / denom;
    }
    default:
      return std::nullopt;
  }
}

std::optional<double> analytic_mean_abs(const ProcessSpec& spec) {
  if (spec.family == ProcessFamily::iid && spec.innovation)
    return spec.innovation->abs_moment(1.0);
  return std::nullopt;
}

}  // namespace weakdep
