#include "weakdep/core.hpp"

#include <cmath>

namespace weakdep {

std::string family_name(Family f) {
  switch (f) {
    case Family::kappa: return "kappa";
    case Family::kappa_prime: return "kappa_prime";
    case Family::eta: return "eta";
    case Family::theta: return "theta";
    case Family::lambda: return "lambda";
  }
  throw std::logic_error("family_name: bad enum");
}

Family family_from_name(const std::string& name) {
  if (name == "kappa") return Family::kappa;
  if (name == "kappa_prime") return Family::kappa_prime;
  if (name == "eta") return Family::eta;
  if (name == "theta") return Family::theta;
  if (name == "lambda") return Family::lambda;
  throw std::invalid_argument("unknown dependence family: " + name);
}

double psi(Family f, std::uint64_t u, std::uint64_t v, double a, double b) {
  if (u < 1 || v < 1) throw std::invalid_argument("psi: block sizes must be >= 1");
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("psi: Lipschitz constants must be >= 0");
  const double du = static_cast<double>(u);
  const double dv = static_cast<double>(v);
  switch (f) {
    case Family::kappa: return du * dv * a * b;
    case Family::kappa_prime: return dv * a * b;
    case Family::eta: return du * a + dv * b;
    case Family::theta: return dv * b;
    case Family::lambda: return du * dv * a * b + du * a + dv * b;
  }
  throw std::logic_error("psi: bad enum");
}

DecayLaw::DecayLaw(Kind kind, double amplitude, double rate, std::vector<double> table)
    : kind_(kind), amplitude_(amplitude), rate_(rate), table_(std::move(table)) {}

DecayLaw DecayLaw::geometric(double amplitude, double rate) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("DecayLaw: amplitude must be positive");
  if (rate < 0.0) throw std::invalid_argument("DecayLaw: rate must be nonnegative");
  return DecayLaw(Kind::geometric, amplitude, rate, {});
}

DecayLaw DecayLaw::riemannian(double amplitude, double rate) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("DecayLaw: amplitude must be positive");
  if (rate < 0.0) throw std::invalid_argument("DecayLaw: rate must be nonnegative");
  return DecayLaw(Kind::riemannian, amplitude, rate, {});
}

DecayLaw DecayLaw::tabulated(std::vector<double> table) {
  if (table.empty()) throw std::invalid_argument("DecayLaw: empty table");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i] >= 0.0)) throw std::invalid_argument("DecayLaw: table entries must be nonnegative");
    if (i > 0 && table[i] > table[i - 1])
      throw std::invalid_argument("DecayLaw: table must be nonincreasing");
  }
  return DecayLaw(Kind::tabulated, 0.0, 0.0, std::move(table));
}

double DecayLaw::eval(std::int64_t r) const {
  if (r < 0) throw std::invalid_argument("DecayLaw::eval: negative lag");
  switch (kind_) {
    case Kind::geometric:
      return amplitude_ * std::exp(-rate_ * static_cast<double>(r));
    case Kind::riemannian:
      return amplitude_ * std::pow(1.0 + static_cast<double>(r), -rate_);
    case Kind::tabulated: {
      const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(r), table_.size() - 1);
      return table_[idx];
    }
  }
  throw std::logic_error("DecayLaw::eval: bad enum");
}

namespace {

// One-sided tails sum_{j>=r} f(j) for each law kind; the two-sided versions
// below fold them with the symmetry convention.
double geometric_tail(double C, double a, std::int64_t r) {
  if (a == 0.0) return kInf;
  const double x = std::exp(-a);
  return C * std::pow(x, static_cast<double>(r)) / (1.0 - x);
}

double geometric_weighted_tail(double C, double a, std::int64_t r) {
  // sum_{j>=r} j x^j = x^r (r - (r-1) x) / (1-x)^2
  if (a == 0.0) return kInf;
  const double x = std::exp(-a);
  const double rr = static_cast<double>(r);
  return C * std::pow(x, rr) * (rr - (rr - 1.0) * x) / ((1.0 - x) * (1.0 - x));
}

constexpr std::int64_t kRiemannPartialTerms = 200000;

double riemannian_tail(double C, double a, std::int64_t r) {
  // sum_{j>=r} (1+j)^(-a), partial sum plus midpoint integral remainder.
  if (a <= 1.0) return kInf;
  double s = 0.0;
  const std::int64_t stop = r + kRiemannPartialTerms;
  for (std::int64_t j = stop - 1; j >= r; --j) s += std::pow(1.0 + static_cast<double>(j), -a);
  const double edge = 0.5 + static_cast<double>(stop);  // integral from stop-1/2, shifted by 1
  s += std::pow(edge, 1.0 - a) / (a - 1.0);
  return C * s;
}

double riemannian_weighted_tail(double C, double a, std::int64_t r) {
  // sum_{j>=r} j (1+j)^(-a); remainder via int_J^inf x(1+x)^(-a) dx
  //   = (1+J)^(2-a)/(a-2) - (1+J)^(1-a)/(a-1).
  if (a <= 2.0) return kInf;
  double s = 0.0;
  const std::int64_t stop = r + kRiemannPartialTerms;
  for (std::int64_t j = stop - 1; j >= r; --j)
    s += static_cast<double>(j) * std::pow(1.0 + static_cast<double>(j), -a);
  const double edge = 0.5 + static_cast<double>(stop);
  s += std::pow(edge, 2.0 - a) / (a - 2.0) - std::pow(edge, 1.0 - a) / (a - 1.0);
  return C * s;
}

}  // namespace

double DecayLaw::sum_abs_tail(std::int64_t r) const {
  if (r < 0) r = 0;
  const std::int64_t r1 = std::max<std::int64_t>(r, 1);
  switch (kind_) {
    case Kind::geometric: {
      const double one_sided = geometric_tail(amplitude_, rate_, r1);
      return (r == 0 ? eval(0) : 0.0) + 2.0 * one_sided;
    }
    case Kind::riemannian: {
      const double one_sided = riemannian_tail(amplitude_, rate_, r1);
      return (r == 0 ? eval(0) : 0.0) + 2.0 * one_sided;
    }
    case Kind::tabulated: {
      if (table_.back() != 0.0) return kInf;
      double s = 0.0;
      for (std::int64_t j = static_cast<std::int64_t>(table_.size()) - 1; j >= r1; --j)
        s += table_[static_cast<std::size_t>(j)];
      return (r == 0 ? table_[0] : 0.0) + 2.0 * s;
    }
  }
  throw std::logic_error("DecayLaw::sum_abs_tail: bad enum");
}

double DecayLaw::sum_weighted_tail(std::int64_t r) const {
  if (r < 0) r = 0;
  const std::int64_t r1 = std::max<std::int64_t>(r, 1);
  switch (kind_) {
    case Kind::geometric:
      return 2.0 * geometric_weighted_tail(amplitude_, rate_, r1);
    case Kind::riemannian:
      return 2.0 * riemannian_weighted_tail(amplitude_, rate_, r1);
    case Kind::tabulated: {
      if (table_.back() != 0.0) return kInf;
      double s = 0.0;
      for (std::int64_t j = static_cast<std::int64_t>(table_.size()) - 1; j >= r1; --j)
        s += static_cast<double>(j) * table_[static_cast<std::size_t>(j)];
      return 2.0 * s;
    }
  }
  throw std::logic_error("DecayLaw::sum_weighted_tail: bad enum");
}

std::string decay_kind_name(DecayLaw::Kind k) {
  switch (k) {
    case DecayLaw::Kind::geometric: return "geometric";
    case DecayLaw::Kind::riemannian: return "riemannian";
    case DecayLaw::Kind::tabulated: return "tabulated";
  }
  throw std::logic_error("decay_kind_name: bad enum");
}

}  // namespace weakdep
