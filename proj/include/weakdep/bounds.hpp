#pragma once

// Closed-form bounds and exponents for weakly dependent sequences: covariance
// and long-run-variance bounds, heredity of weak dependence through Lipschitz
// and polynomially-Lipschitz functionals, decay-envelope classification,
// invariance-principle hypothesis checks, and the convergence-rate exponents.
//
// Multiplicative constants the theory leaves unspecified are set to 1 and the
// results flagged `up_to_constant`; exponents and monotone comparisons are the
// meaningful content.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "weakdep/core.hpp"

namespace weakdep {

// ---------------------------------------------------------------------------
// Covariance and variance bounds

// |Cov(X_0, X_k)| bound at lag k:
//   kappa:   law.eval(k)
//   lambda:  9 mu^(1/(m-1)) law.eval(k)^((m-2)/(m-1))
// Other families have no covariance bound here and are rejected.
double cov_bound(Family family, std::int64_t k, const DecayLaw& law, const MomentSpec& moments);

struct Sigma2Bound {
  double partial_sum = 0.0;              // sum_{|k| <= K} cov_bound(k)
  std::optional<bool> converges;         // nullopt for tabulated laws
  double summability_exponent = 0.0;     // effective p-series exponent; +inf geometric, NaN tabulated
};

// Partial sums of the covariance-bound series and the analytic summability
// verdict: geometric laws always converge; a riemannian kappa law needs
// exponent > 1 and a riemannian lambda law needs exponent*(m-2)/(m-1) > 1.
Sigma2Bound sigma2_bound(Family family, const DecayLaw& law, const MomentSpec& moments,
                         std::int64_t horizon);

// ---------------------------------------------------------------------------
// Heredity of weak dependence through a coordinatewise-Lipschitz functional
//
// The functional H satisfies |H(x) - H(y)| <= b_s (||z||^ell v 1) |x_s - y_s|
// when x, y differ only at coordinate s.  `b` is the weight sequence accessed
// by |j| (symmetric two-sided); `input_coeff` is the dependence bound of the
// input sequence (family eta or lambda).

struct HeredityProblem {
  DecayLaw b = DecayLaw::geometric(1.0, 1.0);
  double ell = 0.0;
  double m_prime = kInf;  // input moment order
  double y_norm1 = 1.0;   // E|Y_0|
  double y_normmp = 1.0;  // ||Y_0||_{m'} (bookkeeping)
  CoefficientBound input_coeff;

  double L() const { return b.sum_all(); }
  double plain_tail(std::int64_t r) const { return b.sum_abs_tail(r); }
  double weighted_tail(std::int64_t r) const { return b.sum_weighted_tail(r); }
};

struct HeredityBound {
  double value = 0.0;
  bool up_to_constant = false;  // true when the theory only fixes the value up to c > 0
  std::int64_t best_r = 0;      // argmin of the scanned infimum
};

// Folds signed Lipschitz weights (such as the ones a Volterra expansion
// induces) into a nonincreasing tabulated law accessed by |j|: at each |j|
// the larger of the two sides, monotonized from the right.  The result is a
// valid upper envelope for heredity tails.
DecayLaw weight_envelope_by_abs_lag(const std::map<int, double>& weights);

// ell = 0 case.  Exhaustive scan over integer r with 0 <= 2r <= k of
//   lambda branch: 2 plain_tail(r) ||Y||_1 + (2r+1)^2 L^2 lambda_Y(k-2r)
//   eta branch:    2 plain_tail(r) ||Y||_1 + (2r+1)   L   eta_Y(k-2r)
HeredityBound heredity_lipschitz(std::int64_t k, const HeredityProblem& prob, Family out_family);

// ell > 0 case (requires m' > 1 + ell and summable |j| b_j).  Scan of
//   lambda: weighted_tail(r) + (2r+1)^2        lambda_Y(k-2r)^((m'-1-ell)/(m'-1+ell))
//   eta:    weighted_tail(r) + (2r+1)^(1+ell/(m'-1)) eta_Y(k-2r)^((m'-1-ell)/(m'-1))
// returned up to a constant (set to 1).
HeredityBound heredity_general(std::int64_t k, const HeredityProblem& prob, Family out_family);

// ---------------------------------------------------------------------------
// Decay classification for the composed process

enum class EnvelopeForm { power, power_log, power_exp };

// Symbolic decay envelope c * k^power * log(k)^log_power * exp(-exp_rate * k),
// with c unspecified.  `headline` is the case's principal printed exponent:
// the power-law decay exponent for power and power_log forms (envelope
// k^(-headline) resp. k^(-headline) log^s k), the raw signed power 2-b for
// riemannian-weights/geometric-input, and the exponential rate for the
// all-geometric form.
struct DecayEnvelope {
  EnvelopeForm form = EnvelopeForm::power;
  double power = 0.0;     // signed exponent of k
  double log_power = 0.0; // exponent of log k
  double exp_rate = 0.0;  // q in exp(-q k)
  double headline = 0.0;
};

// Envelope of the output dependence coefficient when the functional weights
// b_j decay with exponent b_exp (geometric e^{-b|j|} or riemannian |j|^{-b})
// and the input coefficients decay with exponent input_exp, for ell > 0 and
// input moment order m'.  Riemannian weights require b_exp > 2.
DecayEnvelope classify_decay(DecayLaw::Kind b_kind, DecayLaw::Kind input_kind, Family family,
                             double b_exp, double input_exp, double ell, double m_prime);

// ---------------------------------------------------------------------------
// Hypothesis checks

struct CltCondition {
  double threshold = 0.0;
  bool satisfied = false;
};

// Riemannian-decay hypothesis of the invariance principle: decay_exp must
// strictly exceed 2 + 1/(m-2) under kappa and 4 + 2/(m-2) under lambda.
CltCondition clt_condition(double m, Family family, double decay_exp);

struct DonskerCondition {
  std::optional<double> required_a;  // strict lower bound on the input decay exponent
  std::optional<double> required_b;  // strict lower bound on b (riemannian-b / geometric-input)
  bool always_satisfied = false;     // all-geometric case

  bool satisfied(double decay_a) const {
    if (always_satisfied) return true;
    if (required_b) return false;  // the caller's b failed its own strict bound
    return decay_a > *required_a;
  }
};

// Case-matched sufficient condition for the invariance principle of a shift
// with dependent inputs:
//   riem b / riem input, ell = 0 (b > 1):  a > (1+b)/(b-1) (4 + 2/(m-2))
//   riem b / riem input, ell > 0 (b > 2):  a > b(m'-1+ell)/((b-2)(m'-1-ell)) (4 + 2/(m-2))
//   geo  b / riem input, ell > 0:          a > (m'-1+ell)/(m'-1-ell) (4 + 2/(m-2))
//   riem b / geo input:                    b > (6m-10)/(m-2)   (condition on b itself)
//   geo  b / geo input:                    always satisfied
// For the riemannian-b / geometric-input case, required_b is set and
// satisfied() reports whether b_exp already exceeds it.
DonskerCondition donsker_condition(double ell, double b_exp, double m, double m_prime,
                                   DecayLaw::Kind b_kind, DecayLaw::Kind input_kind);

// ---------------------------------------------------------------------------
// LARCH input coefficient bounds

// Dependence-coefficient envelope of a LARCH solution, tabulated on lags
// 0..grid_len-1 (clamped beyond) and monotonized from the right so the result
// is a valid nonincreasing law; values are up to a constant (set to 1).
//   causal:     r^(1-a_exp) log(r)^(a_exp-1)
//   noncausal:  (||xi||_inf sum_{k>=1, 2k<r} k Lambda^(k-1) A(r/(2k))
//                + Lambda^(r/2) / (1 - Lambda)) E|xi| |a|
struct LarchMoments {
  double xi_sup = 1.0;   // ||xi_0||_inf
  double xi_mean_abs = 1.0;  // E|xi_0|
  double intercept = 1.0;    // |a|
};

DecayLaw larch_causal_input_bound(double a_exp, std::size_t grid_len = 256);
DecayLaw larch_noncausal_input_bound(const std::vector<double>& coeff_abs_tail,  // A(x) at x=0,1,2,..
                                     double contraction, const LarchMoments& moments,
                                     std::size_t grid_len = 256);

// eta(r) <= 2 delta(floor(r/2)) for a shift of iid inputs with regularity
// sequence delta.
double iid_shift_eta(const DecayLaw& delta, std::int64_t r);

// ---------------------------------------------------------------------------
// Rate exponents

// Open supremum of the admissible extra moment order delta (Delta = 2 + delta
// keeps ||S_n||_Delta <= C sqrt(n)); the quantity A under kappa-dependence or
// B under lambda-dependence.  Requires the matching clt_condition; a negative
// radicand or nonpositive root signals hypothesis failure and is refused.
double moment_exponent(double m, Family family, double decay_exp);

struct RateProfile {
  double m = 0.0;
  double zeta = 0.0;
  Family family = Family::kappa;
  double decay_exp = 0.0;
  double moment_exp = 0.0;  // A or B
  double c_star = 0.0;      // characteristic-function distance exponent
  double c_prime = 0.0;     // Kolmogorov distance exponent, c*/(3 + A or B)
  double a_star = 0.0;      // big-block exponent, evaluated at delta = A or B
  double b_star = 0.0;      // gap-block exponent
  double delta_max = 0.0;   // open supremum of admissible delta
};

// Full exponent bundle:
//   kappa:  c* = (kappa-1)A / (A + 2 kappa (1+A))
//           a* = (2 + d + 2 kappa d) / (d + 2 kappa (1+d)),  b* = (2 + a*) / (1 + 2 kappa)
//   lambda: c* = (lambda+1)B / (2 + B + 2 lambda (1+B))
//           a* = (3 + d + 2 lambda d) / (2 + d + 2 lambda (1+d))
//           b* = (3 + 2d) / (2 + d + 2 lambda (1+d))
// with d set to the limiting (open-supremum) value A or B.
RateProfile rate_profile(double m, Family family, double decay_exp);

}  // namespace weakdep
