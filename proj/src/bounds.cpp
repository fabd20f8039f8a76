#include "weakdep/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace weakdep {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Covariance and variance bounds

double cov_bound(Family family, std::int64_t k, const DecayLaw& law, const MomentSpec& moments) {
  switch (family) {
    case Family::kappa:
      return law.eval(k);
    case Family::lambda: {
      const double m = moments.m;
      const double eps = law.eval(k);
      if (eps == 0.0) return 0.0;
      return 9.0 * std::pow(moments.mu, 1.0 / (m - 1.0)) * std::pow(eps, (m - 2.0) / (m - 1.0));
    }
    default:
      throw std::invalid_argument("cov_bound: no covariance bound for family " +
                                  family_name(family));
  }
}

Sigma2Bound sigma2_bound(Family family, const DecayLaw& law, const MomentSpec& moments,
                         std::int64_t horizon) {
  if (horizon < 0) throw std::invalid_argument("sigma2_bound: negative horizon");
  Sigma2Bound out;
  double sum = cov_bound(family, 0, law, moments);
  for (std::int64_t k = 1; k <= horizon; ++k) sum += 2.0 * cov_bound(family, k, law, moments);
  out.partial_sum = sum;

  switch (law.kind()) {
    case DecayLaw::Kind::geometric:
      out.converges = true;
      out.summability_exponent = kInf;
      break;
    case DecayLaw::Kind::riemannian: {
      const double exponent = family == Family::kappa
                                  ? law.rate()
                                  : law.rate() * (moments.m - 2.0) / (moments.m - 1.0);
      out.converges = exponent > 1.0;
      out.summability_exponent = exponent;
      break;
    }
    case DecayLaw::Kind::tabulated:
      out.converges = std::nullopt;
      out.summability_exponent = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heredity

namespace {

// Running maximum from the right turns an eventually-decreasing envelope
// into a valid nonincreasing majorant.
DecayLaw right_monotonized(std::vector<double> values) {
  for (std::size_t i = values.size() - 1; i-- > 0;)
    values[i] = std::max(values[i], values[i + 1]);
  return DecayLaw::tabulated(std::move(values));
}

}  // namespace

DecayLaw weight_envelope_by_abs_lag(const std::map<int, double>& weights) {
  int radius = 0;
  for (const auto& [lag, w] : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weight_envelope_by_abs_lag: negative weight");
    radius = std::max(radius, std::abs(lag));
  }
  std::vector<double> table(static_cast<std::size_t>(radius) + 2, 0.0);  // ends in 0
  for (const auto& [lag, w] : weights) {
    auto& slot = table[static_cast<std::size_t>(std::abs(lag))];
    slot = std::max(slot, w);
  }
  return right_monotonized(std::move(table));
}

HeredityBound heredity_lipschitz(std::int64_t k, const HeredityProblem& prob, Family out_family) {
  if (k < 0) throw std::invalid_argument("heredity_lipschitz: negative lag");
  if (prob.ell != 0.0)
    throw std::invalid_argument("heredity_lipschitz: ell must be 0 (use heredity_general)");
  if (out_family != Family::eta && out_family != Family::lambda)
    throw std::invalid_argument("heredity_lipschitz: output family must be eta or lambda");
  if (prob.input_coeff.family != out_family)
    throw std::invalid_argument("heredity_lipschitz: input family must match the requested branch");
  const double L = prob.L();
  if (!std::isfinite(L)) throw std::invalid_argument("heredity_lipschitz: sum of b_j diverges");

  const DecayLaw& input = prob.input_coeff.law;
  HeredityBound best{kInf, false, 0};
  for (std::int64_t r = 0; 2 * r <= k; ++r) {
    const double tail = 2.0 * prob.plain_tail(r) * prob.y_norm1;
    const double w = static_cast<double>(2 * r + 1);
    const double eps = input.eval(k - 2 * r);
    const double candidate =
        out_family == Family::lambda ? tail + w * w * L * L * eps : tail + w * L * eps;
    if (candidate < best.value) best = {candidate, false, r};
  }
  return best;
}

HeredityBound heredity_general(std::int64_t k, const HeredityProblem& prob, Family out_family) {
  if (k < 0) throw std::invalid_argument("heredity_general: negative lag");
  if (!(prob.ell > 0.0))
    throw std::invalid_argument("heredity_general: ell must be positive (use heredity_lipschitz)");
  if (out_family != Family::eta && out_family != Family::lambda)
    throw std::invalid_argument("heredity_general: output family must be eta or lambda");
  if (prob.input_coeff.family != out_family)
    throw std::invalid_argument("heredity_general: input family must match the requested branch");
  if (!(prob.m_prime > 1.0 + prob.ell))
    throw std::domain_error("heredity_general: need m' > 1 + ell, got m' = " + fmt(prob.m_prime) +
                            ", ell = " + fmt(prob.ell));
  if (!std::isfinite(prob.weighted_tail(0)))
    throw std::invalid_argument("heredity_general: sum of |j| b_j diverges");

  const double mp = prob.m_prime;
  const double ell = prob.ell;
  // m' = inf is admitted as a surrogate for bounded inputs; both exponents
  // then collapse to 1.
  const double lambda_pow = std::isfinite(mp) ? (mp - 1.0 - ell) / (mp - 1.0 + ell) : 1.0;
  const double eta_pow = std::isfinite(mp) ? (mp - 1.0 - ell) / (mp - 1.0) : 1.0;
  const double count_pow = std::isfinite(mp) ? 1.0 + ell / (mp - 1.0) : 1.0;

  const DecayLaw& input = prob.input_coeff.law;
  HeredityBound best{kInf, true, 0};
  for (std::int64_t r = 0; r <= k / 2; ++r) {
    const double tail = prob.weighted_tail(r);
    const double w = static_cast<double>(2 * r + 1);
    const double eps = input.eval(k - 2 * r);
    double candidate;
    if (out_family == Family::lambda)
      candidate = tail + w * w * std::pow(eps, lambda_pow);
    else
      candidate = tail + std::pow(w, count_pow) * std::pow(eps, eta_pow);
    if (candidate < best.value) {
      best.value = candidate;
      best.best_r = r;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Decay classification

DecayEnvelope classify_decay(DecayLaw::Kind b_kind, DecayLaw::Kind input_kind, Family family,
                             double b_exp, double input_exp, double ell, double m_prime) {
  if (family != Family::eta && family != Family::lambda)
    throw std::invalid_argument("classify_decay: family must be eta or lambda");
  if (!(b_exp > 0.0) || !(input_exp > 0.0))
    throw std::invalid_argument("classify_decay: exponents must be positive");
  if (b_kind == DecayLaw::Kind::tabulated || input_kind == DecayLaw::Kind::tabulated)
    throw std::invalid_argument("classify_decay: tabulated laws have no symbolic envelope");
  if (b_kind == DecayLaw::Kind::riemannian && !(b_exp > 2.0))
    throw std::invalid_argument("classify_decay: riemannian weights need b > 2");
  if (!(m_prime > 1.0 + ell))
    throw std::invalid_argument("classify_decay: need m' > 1 + ell");

  const bool lam = family == Family::lambda;
  const double mp = m_prime;
  const double lam_pow = std::isfinite(mp) ? (mp - 1.0 - ell) / (mp - 1.0 + ell) : 1.0;
  const double eta_pow = std::isfinite(mp) ? (mp - 2.0) / (mp - 1.0) : 1.0;

  DecayEnvelope env;
  if (b_kind == DecayLaw::Kind::riemannian && input_kind == DecayLaw::Kind::riemannian) {
    // k^{-input_exp (1 - 2/b) lam_pow}  /  k^{-input_exp (b-2)(m'-2) / ((b-1)(m'-1) - ell)}
    env.form = EnvelopeForm::power;
    double p;
    if (lam)
      p = input_exp * (1.0 - 2.0 / b_exp) * lam_pow;
    else
      p = std::isfinite(mp)
              ? input_exp * (b_exp - 2.0) * (mp - 2.0) / ((b_exp - 1.0) * (mp - 1.0) - ell)
              : input_exp * (b_exp - 2.0) / (b_exp - 1.0);
    env.power = -p;
    env.headline = p;
  } else if (b_kind == DecayLaw::Kind::geometric && input_kind == DecayLaw::Kind::geometric) {
    // k^s exp(-q k) with the printed rate q; the slowly varying power is
    // k^2 (lambda branch) or k^{(m'-1-ell)/(m'-1)} (eta branch).
    env.form = EnvelopeForm::power_exp;
    if (lam) {
      env.power = 2.0;
      env.exp_rate = input_exp * b_exp * (mp - 1.0 - ell) /
                     (b_exp * (mp - 1.0 + ell) + 2.0 * input_exp * (mp - 1.0 - ell));
      if (!std::isfinite(mp)) env.exp_rate = input_exp * b_exp / (b_exp + 2.0 * input_exp);
    } else {
      env.power = std::isfinite(mp) ? (mp - 1.0 - ell) / (mp - 1.0) : 1.0;
      env.exp_rate = input_exp * b_exp * (mp - 2.0) /
                     (b_exp * (mp - 1.0) + 2.0 * input_exp * (mp - 2.0));
      if (!std::isfinite(mp)) env.exp_rate = input_exp * b_exp / (b_exp + 2.0 * input_exp);
    }
    env.headline = env.exp_rate;
  } else if (b_kind == DecayLaw::Kind::geometric && input_kind == DecayLaw::Kind::riemannian) {
    // k^{-p} log^s k
    env.form = EnvelopeForm::power_log;
    const double p = lam ? input_exp * lam_pow : input_exp * eta_pow;
    env.power = -p;
    env.log_power = lam ? 2.0 : (std::isfinite(mp) ? 1.0 + ell / (mp - 1.0) : 1.0);
    env.headline = p;
  } else {
    // riemannian weights, geometric input: k^{2-b} in both branches.
    env.form = EnvelopeForm::power;
    env.power = 2.0 - b_exp;
    env.headline = 2.0 - b_exp;
  }
  return env;
}

// ---------------------------------------------------------------------------
// Hypothesis checks

CltCondition clt_condition(double m, Family family, double decay_exp) {
  if (!(m > 2.0)) throw std::invalid_argument("clt_condition: m must exceed 2");
  double threshold;
  switch (family) {
    case Family::kappa: threshold = 2.0 + 1.0 / (m - 2.0); break;
    case Family::lambda: threshold = 4.0 + 2.0 / (m - 2.0); break;
    default:
      throw std::invalid_argument("clt_condition: family must be kappa or lambda");
  }
  return {threshold, decay_exp > threshold};
}

DonskerCondition donsker_condition(double ell, double b_exp, double m, double m_prime,
                                   DecayLaw::Kind b_kind, DecayLaw::Kind input_kind) {
  if (!(m > 2.0)) throw std::invalid_argument("donsker_condition: m must exceed 2");
  if (b_kind == DecayLaw::Kind::tabulated || input_kind == DecayLaw::Kind::tabulated)
    throw std::invalid_argument("donsker_condition: tabulated laws are not classified");
  const double base = 4.0 + 2.0 / (m - 2.0);
  DonskerCondition cond;

  if (b_kind == DecayLaw::Kind::geometric && input_kind == DecayLaw::Kind::geometric) {
    cond.always_satisfied = true;
    return cond;
  }
  if (b_kind == DecayLaw::Kind::riemannian && input_kind == DecayLaw::Kind::riemannian) {
    if (ell == 0.0) {
      if (!(b_exp > 1.0)) throw std::invalid_argument("donsker_condition: ell = 0 needs b > 1");
      cond.required_a = (1.0 + b_exp) / (b_exp - 1.0) * base;
    } else {
      if (!(b_exp > 2.0)) throw std::invalid_argument("donsker_condition: ell > 0 needs b > 2");
      if (!(m_prime > 1.0 + ell))
        throw std::invalid_argument("donsker_condition: need m' > 1 + ell");
      const double ratio = std::isfinite(m_prime)
                               ? (m_prime - 1.0 + ell) / (m_prime - 1.0 - ell)
                               : 1.0;
      cond.required_a = b_exp * ratio / (b_exp - 2.0) * base;
    }
    return cond;
  }
  if (b_kind == DecayLaw::Kind::geometric && input_kind == DecayLaw::Kind::riemannian) {
    if (!(ell > 0.0))
      throw std::invalid_argument("donsker_condition: mixed geometric-b case is stated for ell > 0");
    if (!(m_prime > 1.0 + ell)) throw std::invalid_argument("donsker_condition: need m' > 1 + ell");
    const double ratio =
        std::isfinite(m_prime) ? (m_prime - 1.0 + ell) / (m_prime - 1.0 - ell) : 1.0;
    cond.required_a = ratio * base;
    return cond;
  }
  // riemannian weights, geometric input: the requirement lands on b itself.
  const double need_b = (6.0 * m - 10.0) / (m - 2.0);
  if (b_exp > need_b)
    cond.always_satisfied = true;
  else
    cond.required_b = need_b;
  return cond;
}

// ---------------------------------------------------------------------------
// LARCH input coefficient bounds

DecayLaw larch_causal_input_bound(double a_exp, std::size_t grid_len) {
  if (!(a_exp > 1.0)) throw std::invalid_argument("larch_causal_input_bound: need a > 1");
  if (grid_len < 4) throw std::invalid_argument("larch_causal_input_bound: grid too short");
  std::vector<double> values(grid_len);
  for (std::size_t r = 0; r < grid_len; ++r) {
    if (r < 2) continue;  // filled by monotonization
    const double rr = static_cast<double>(r);
    values[r] = std::pow(rr, 1.0 - a_exp) * std::pow(std::log(rr), a_exp - 1.0);
  }
  return right_monotonized(std::move(values));
}

DecayLaw larch_noncausal_input_bound(const std::vector<double>& coeff_abs_tail, double contraction,
                                     const LarchMoments& moments, std::size_t grid_len) {
  if (!(contraction >= 0.0 && contraction < 1.0))
    throw std::domain_error("larch_noncausal_input_bound: need 0 <= Lambda < 1, got " +
                            fmt(contraction));
  if (grid_len < 2) throw std::invalid_argument("larch_noncausal_input_bound: grid too short");
  auto tail_at = [&](double x) -> double {
    // A(x) = sum_{|j| >= x} |a_j|, clamped at the end of the supplied table.
    if (coeff_abs_tail.empty()) return 0.0;
    const std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(std::ceil(x)), coeff_abs_tail.size() - 1);
    return coeff_abs_tail[idx];
  };
  std::vector<double> values(grid_len);
  for (std::size_t r = 0; r < grid_len; ++r) {
    double sum = 0.0;
    for (std::size_t k = 1; 2 * k < r; ++k)
      sum += static_cast<double>(k) * std::pow(contraction, static_cast<double>(k) - 1.0) *
             tail_at(static_cast<double>(r) / (2.0 * static_cast<double>(k)));
    const double geo = contraction == 0.0 && r > 0
                           ? 0.0
                           : std::pow(contraction, static_cast<double>(r) / 2.0) / (1.0 - contraction);
    values[r] = (moments.xi_sup * sum + geo) * moments.xi_mean_abs * std::abs(moments.intercept);
  }
  return right_monotonized(std::move(values));
}

double iid_shift_eta(const DecayLaw& delta, std::int64_t r) {
  if (r < 0) throw std::invalid_argument("iid_shift_eta: negative lag");
  return 2.0 * delta.eval(r / 2);
}

// ---------------------------------------------------------------------------
// Rate exponents

double moment_exponent(double m, Family family, double decay_exp) {
  if (!(m > 2.0)) throw std::invalid_argument("moment_exponent: m must exceed 2");
  const double zeta = m - 2.0;
  double radicand, shift;
  switch (family) {
    case Family::kappa:
      radicand = (2.0 * decay_exp - 3.0 - zeta) * (2.0 * decay_exp - 3.0 - zeta) +
                 4.0 * (decay_exp * zeta - 2.0 * zeta - 1.0);
      shift = zeta + 3.0 - 2.0 * decay_exp;
      break;
    case Family::lambda:
      radicand = (2.0 * decay_exp - 6.0 - zeta) * (2.0 * decay_exp - 6.0 - zeta) +
                 4.0 * (decay_exp * zeta - 4.0 * zeta - 2.0);
      shift = zeta + 6.0 - 2.0 * decay_exp;
      break;
    default:
      throw std::invalid_argument("moment_exponent: family must be kappa or lambda");
  }
  if (radicand < 0.0)
    throw std::domain_error("moment_exponent: hypothesis failure (negative radicand " +
                            fmt(radicand) + " at m = " + fmt(m) + ", decay = " + fmt(decay_exp) +
                            ")");
  const double root = 0.5 * (std::sqrt(radicand) + shift);
  if (!(root > 0.0))
    throw std::domain_error("moment_exponent: hypothesis failure (no admissible delta at m = " +
                            fmt(m) + ", decay = " + fmt(decay_exp) + ")");
  return std::min(1.0, root);
}

RateProfile rate_profile(double m, Family family, double decay_exp) {
  const auto clt = clt_condition(m, family, decay_exp);
  if (!clt.satisfied)
    throw std::domain_error("rate_profile: decay exponent " + fmt(decay_exp) +
                            " does not exceed the threshold " + fmt(clt.threshold));
  RateProfile p;
  p.m = m;
  p.zeta = m - 2.0;
  p.family = family;
  p.decay_exp = decay_exp;
  p.moment_exp = moment_exponent(m, family, decay_exp);
  p.delta_max = p.moment_exp;

  const double d = p.moment_exp;
  const double e = decay_exp;
  if (family == Family::kappa) {
    p.c_star = (e - 1.0) * d / (d + 2.0 * e * (1.0 + d));
    p.a_star = (2.0 + d + 2.0 * e * d) / (d + 2.0 * e * (1.0 + d));
    p.b_star = (2.0 + p.a_star) / (1.0 + 2.0 * e);
  } else {
    p.c_star = (e + 1.0) * d / (2.0 + d + 2.0 * e * (1.0 + d));
    p.a_star = (3.0 + d + 2.0 * e * d) / (2.0 + d + 2.0 * e * (1.0 + d));
    p.b_star = (3.0 + 2.0 * d) / (2.0 + d + 2.0 * e * (1.0 + d));
  }
  p.c_prime = p.c_star / (3.0 + d);
  return p;
}

}  // namespace weakdep
