#pragma once

// Shared domain types for weakly dependent stationary sequences: decay laws
// bounding dependence coefficients, the psi forms that define each dependence
// family, and moment bookkeeping.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace weakdep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dependence family, identified by the psi form it plugs into the covariance
// inequality |Cov(f(past), g(future))| <= psi(u, v, Lip f, Lip g) * eps(gap):
//   kappa        u*v*a*b
//   kappa_prime  v*a*b      (causal counterpart of kappa)
//   eta          u*a + v*b
//   theta        v*b        (causal counterpart of eta)
//   lambda       u*v*a*b + u*a + v*b   (dominates kappa and eta)
enum class Family { kappa, kappa_prime, eta, theta, lambda };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// psi(u, v, a, b) for the given family. u, v are block sizes (>= 1), a, b the
// Lipschitz constants (>= 0).
double psi(Family f, std::uint64_t u, std::uint64_t v, double a, double b);

// A nonincreasing bound r -> eps(r) on a dependence-coefficient sequence.
//
//   geometric:   eval(r) = C * exp(-a*r)
//   riemannian:  eval(r) = C * (1+r)^(-a)    (finite at r = 0)
//   tabulated:   eval(r) = table[min(r, len-1)]   (clamped, never extrapolated)
//
// Rates a >= 0 are accepted so that constant laws can be expressed; tail sums
// of such laws are infinite and reported as +inf.
class DecayLaw {
 public:
  enum class Kind { geometric, riemannian, tabulated };

  static DecayLaw geometric(double amplitude, double rate);
  static DecayLaw riemannian(double amplitude, double rate);
  // `table` must be nonincreasing and nonnegative.
  static DecayLaw tabulated(std::vector<double> table);

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double rate() const { return rate_; }
  const std::vector<double>& table() const { return table_; }

  double eval(std::int64_t r) const;

  // Tail sums over the symmetric two-sided sequence j -> eval(|j|):
  //   sum_abs_tail(r)      = sum_{|j| >= r} eval(|j|)
  //   sum_weighted_tail(r) = sum_{|j| >= r} |j| * eval(|j|)
  // Geometric laws use closed forms.  Riemannian laws use a partial sum plus
  // an integral-midpoint remainder (relative accuracy ~1e-9; +inf when the
  // series diverges).  Tabulated laws are exact finite sums when the table
  // ends in 0 and +inf otherwise, because eval clamps to the last entry.
  double sum_abs_tail(std::int64_t r) const;
  double sum_weighted_tail(std::int64_t r) const;
  double sum_all() const { return sum_abs_tail(0); }

  bool operator==(const DecayLaw&) const = default;

 private:
  DecayLaw(Kind kind, double amplitude, double rate, std::vector<double> table);

  Kind kind_;
  double amplitude_ = 1.0;
  double rate_ = 1.0;
  std::vector<double> table_;
};

std::string decay_kind_name(DecayLaw::Kind k);

// Moment bookkeeping for the observed process: order m > 2, mu = E|X_0|^m,
// and the derived zeta = m - 2.
struct MomentSpec {
  double m = 3.0;
  double mu = 1.0;

  MomentSpec(double m_, double mu_) : m(m_), mu(mu_) {
    if (!(m > 2.0)) throw std::invalid_argument("MomentSpec: m must exceed 2");
    if (!(mu > 0.0)) throw std::invalid_argument("MomentSpec: mu must be positive");
  }
  double zeta() const { return m - 2.0; }
  bool operator==(const MomentSpec&) const = default;
};

// A dependence-coefficient bound: which family, and the decay law.
struct CoefficientBound {
  Family family = Family::lambda;
  DecayLaw law = DecayLaw::geometric(1.0, 1.0);
  bool operator==(const CoefficientBound&) const = default;
};

}  // namespace weakdep
