#pragma once

// Simulators for the stationary model families: iid noise, two-sided linear
// filters and their absolute-value variant, causal and non-causal LARCH
// recursions, finite Volterra chaos expansions, and a contracting AR(1)
// Markov input.  Families that accept dependent inputs (linear, linear_abs,
// volterra) compose: the nested process's output feeds the outer one.
//
// Every simulator is pure given (spec, seed); identical inputs reproduce
// bit-identical paths regardless of how many worker threads run elsewhere.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weakdep/core.hpp"
#include "weakdep/rng.hpp"

namespace weakdep {

// ---------------------------------------------------------------------------
// Innovations

enum class InnovationLaw { gaussian, uniform, rademacher, student, pareto_symmetric };

// A centered, symmetric innovation distribution.
//   gaussian(sd), uniform(half_width), rademacher, student(dof),
//   pareto_symmetric(tail_index): sign * U^(-1/tail_index), magnitude >= 1.
struct InnovationSpec {
  InnovationLaw law = InnovationLaw::gaussian;
  double param = 1.0;

  static InnovationSpec gaussian(double sd = 1.0);
  static InnovationSpec uniform(double half_width = 1.0);
  static InnovationSpec rademacher();
  static InnovationSpec student(double dof);
  static InnovationSpec pareto_symmetric(double tail_index);

  // +inf for unbounded laws.
  double sup_norm() const;
  // Open supremum of finite moment orders: +inf for bounded laws and the
  // gaussian, dof for student, tail_index for pareto.
  double max_moment_order() const;
  double abs_moment(double order) const;  // E|xi|^order, requires order < max
  double variance() const { return abs_moment(2.0); }
  double lm_norm(double order) const;  // ||xi||_order

  double sample(CounterRng& rng) const;
  bool operator==(const InnovationSpec&) const = default;
};

std::string innovation_law_name(InnovationLaw law);

// ---------------------------------------------------------------------------
// Coefficient windows

// A finite window of filter coefficients alpha_i for i in [lo, lo+len), with
// lo = -I for two-sided windows and lo = 1 for causal ones.  Windows built
// from a DecayLaw carry the truncated L1 tail for error reporting.
class CoeffWindow {
 public:
  CoeffWindow() = default;
  CoeffWindow(int lo, std::vector<double> values, double tail_beyond = 0.0);

  static CoeffWindow causal(std::vector<double> a1_to_aJ);
  static CoeffWindow two_sided(int radius, std::vector<double> values);
  // Symmetric window alpha_i = law.eval(|i|), radius chosen so the dropped L1
  // tail is <= rel_tol * l1_norm.
  static CoeffWindow from_decay(const DecayLaw& law, double rel_tol = 1e-8);
  static CoeffWindow identity() { return CoeffWindow(0, {1.0}); }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(values_.size()) - 1; }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }
  double at(int i) const;

  double l1_norm() const;
  double l1_tail(int beyond) const;  // sum_{|i| > beyond} |alpha_i| within the window
  double l1_tail_beyond_window() const { return tail_beyond_; }
  double sum() const;
  double sum_squares() const;

  bool operator==(const CoeffWindow&) const = default;

 private:
  int lo_ = 0;
  std::vector<double> values_;
  double tail_beyond_ = 0.0;
};

// ---------------------------------------------------------------------------
// Volterra chaos

struct VolterraTerm {
  std::vector<int> lags;  // j_1..j_k, order k = lags.size() >= 1
  double coeff = 0.0;
  bool operator==(const VolterraTerm&) const = default;
};

// H(x) = constant + sum over terms of coeff * x_{j_1} * ... * x_{j_k}.
struct ChaosExpansion {
  double constant = 0.0;
  std::vector<VolterraTerm> terms;

  int order() const;  // K: largest term order, 0 for a bare constant
  // Coordinatewise Lipschitz weights b_s: each term contributes |coeff| once
  // per position where the lag equals s.
  std::map<int, double> lipschitz_weights() const;
  double l1_total() const;  // L: |constant| + sum |coeff|
  int min_lag() const;
  int max_lag() const;
  bool operator==(const ChaosExpansion&) const = default;
};

// ---------------------------------------------------------------------------
// Process specification

enum class ProcessFamily { iid, linear, linear_abs, larch_causal, larch_noncausal, volterra, markov_ar };

std::string process_family_name(ProcessFamily f);

// Full recipe for one stationary model.  `innovation` drives families that
// consume iid noise; `input` nests another process as the input sequence
// (linear, linear_abs, volterra only).  Exactly one of the two must be set
// for those families.
struct ProcessSpec {
  ProcessFamily family = ProcessFamily::iid;
  std::optional<InnovationSpec> innovation = InnovationSpec::gaussian(1.0);
  std::shared_ptr<const ProcessSpec> input;

  CoeffWindow coeffs;                  // linear, linear_abs, larch_*
  ChaosExpansion chaos;                // volterra
  double intercept = 0.0;              // larch_*: the additive constant a
  double contraction = 0.0;            // markov_ar: |a| < 1
  double larch_moment_order = 2.0;     // moment order for the contraction check
  std::size_t burn_in = 0;             // 0 = family default
  std::size_t picard_iters = 0;        // 0 = default from the contraction factor
  std::size_t centering_mc = 10000;    // linear_abs auxiliary Monte Carlo size
  int lag_window = 0;                  // volterra: admissible |lag| bound (0 = any)
  std::uint64_t seed = 0;

  // Stable textual identity (used for digests and sidecar files).
  std::string canonical_key() const;
  std::uint64_t digest() const;
  bool operator==(const ProcessSpec& other) const;
};

struct SamplePath {
  std::vector<double> values;
  std::uint64_t spec_digest = 0;
  std::uint64_t seed = 0;
  // Reported numerical error bound: L1 truncation error for decay-built
  // linear filters, sup-norm fixed-point error for Picard iteration; 0 when
  // the construction is exact.
  double error_bound = 0.0;
};

// ---------------------------------------------------------------------------
// Simulators
//
// Substream layout within one path seed: stream 0 drives the family's own
// innovations, stream 1 the nested input process, stream 2 auxiliary Monte
// Carlo (linear_abs centering).

SamplePath simulate_iid(const InnovationSpec& innovation, std::size_t n, std::uint64_t seed);

// X_t = sum_i alpha_i * Y_{t-i}.  The input path must supply n + (hi - lo)
// values laid out as Y_{-hi}..Y_{n-1-lo}.
std::vector<double> filter_window(const CoeffWindow& coeffs, std::span<const double> padded_input,
                                  std::size_t n);
SamplePath simulate_linear(const CoeffWindow& coeffs, const ProcessSpec& input, std::size_t n,
                           std::uint64_t seed);

// |sum_i alpha_i Y_{t-i}| minus a centering constant estimated by an
// auxiliary Monte Carlo run of `centering_mc` window evaluations on an
// independent substream of the same input process.
SamplePath simulate_linear_abs(const CoeffWindow& coeffs, const ProcessSpec& input, std::size_t n,
                               std::uint64_t seed, std::size_t centering_mc);

// Contraction factor of a LARCH recursion: ||xi||_order * sum |a_j|.
double larch_contraction(const InnovationSpec& innovation, const CoeffWindow& coeffs, double order);

// Y_t = xi_t (a + sum_{j=1..J} a_j Y_{t-j}) iterated from zero state; the
// first `burn_in` values are discarded (burn_in = 0 picks the default with
// contraction_factor^B <= 1e-10).
SamplePath simulate_larch_causal(double intercept, const CoeffWindow& coeffs,
                                 const InnovationSpec& innovation, std::size_t n, std::uint64_t seed,
                                 std::size_t burn_in = 0, double moment_order = 2.0);

// Picard iteration for Y_t = xi_t (a + sum_{j != 0} a_j Y_{t-j}) with bounded
// innovations; the reported error bound is contraction^N |a| ||xi||_inf /
// (1 - contraction).  picard_iters = 0 picks the default with bound <= 1e-10.
SamplePath simulate_larch_noncausal(double intercept, const CoeffWindow& coeffs,
                                    const InnovationSpec& innovation, std::size_t n,
                                    std::uint64_t seed, std::size_t picard_iters = 0);

struct VolterraResult {
  SamplePath path;
  std::map<int, double> lipschitz_weights;  // induced b_s
  double l1_total = 0.0;                    // induced L
};

// X_t = constant + sum over terms coeff * Y_{t-j_1} ... Y_{t-j_k}; output is
// not recentered.  When the input declares finite moments they must reach
// order >= 2K (K = chaos order), matching the heredity requirement at m = 2.
VolterraResult simulate_volterra(const ChaosExpansion& chaos, const ProcessSpec& input,
                                 std::size_t n, std::uint64_t seed, int lag_window = 0);

// Y_t = a Y_{t-1} + xi_t from zero start (burn_in = 0 picks 10 / (1 - |a|)).
SamplePath simulate_markov_ar(double contraction, const InnovationSpec& innovation, std::size_t n,
                              std::uint64_t seed, std::size_t burn_in = 0);

// Dispatch on the family; `seed` overrides spec.seed.
SamplePath simulate(const ProcessSpec& spec, std::size_t n);
SamplePath simulate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Analytic long-run variance sum_k Cov(X_0, X_k) for families that admit a
// closed form: iid, linear over iid innovations, markov_ar, larch_causal.
std::optional<double> analytic_longrun_variance(const ProcessSpec& spec);

// E|Y_0| for the input sequence of a filter, when analytic (iid innovations).
std::optional<double> analytic_mean_abs(const ProcessSpec& spec);

}  // namespace weakdep
