#include <doctest.h>

#include <cmath>
#include <random>

#include "weakdep/core.hpp"

using namespace weakdep;

TEST_SUITE("core") {

TEST_CASE("decay law evaluation") {
  SUBCASE("geometric identity case") {
    const auto law = DecayLaw::geometric(1.0, 0.0);
    for (int r : {0, 1, 7, 1000}) CHECK(law.eval(r) == 1.0);
  }
  SUBCASE("riemannian hand value") {
    const auto law = DecayLaw::riemannian(1.0, 2.0);
    CHECK(law.eval(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(law.eval(0) == doctest::Approx(1.0));
  }
  SUBCASE("tabulated clamps to the last entry") {
    const auto law = DecayLaw::tabulated({0.5, 0.1});
    CHECK(law.eval(7) == 0.1);
    CHECK(law.eval(0) == 0.5);
    CHECK(law.eval(1) == 0.1);
  }
  SUBCASE("tabulated rejects increasing tables") {
    CHECK_THROWS_AS(DecayLaw::tabulated({0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DecayLaw::tabulated({0.1, -0.2}), std::invalid_argument);
  }
}

TEST_CASE("decay law is nonincreasing in the lag") {
  std::mt19937_64 gen(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    DecayLaw law = [&] {
      switch (trial % 3) {
        case 0: return DecayLaw::geometric(0.1 + 5.0 * unit(gen), 3.0 * unit(gen));
        case 1: return DecayLaw::riemannian(0.1 + 5.0 * unit(gen), 4.0 * unit(gen));
        default: {
          std::vector<double> table(1 + static_cast<std::size_t>(unit(gen) * 20));
          double cur = 10.0 * unit(gen);
          for (auto& v : table) {
            v = cur;
            cur *= unit(gen);
          }
          return DecayLaw::tabulated(std::move(table));
        }
      }
    }();
    for (std::int64_t r = 0; r < 40; ++r) CHECK(law.eval(r) >= law.eval(r + 1));
  }
}

TEST_CASE("geometric tail sums match direct summation") {
  const auto law = DecayLaw::geometric(2.0, 0.7);
  for (std::int64_t r : {0, 1, 2, 5, 11}) {
    double plain = 0.0, weighted = 0.0;
    for (std::int64_t j = r; j < 400; ++j) {
      const double v = law.eval(std::abs(j));
      plain += (j == 0 ? 1.0 : 2.0) * v;  // two-sided by |j|
      if (j > 0) weighted += 2.0 * static_cast<double>(j) * v;
    }
    if (r == 0) {
      CHECK(law.sum_abs_tail(0) == doctest::Approx(plain).epsilon(1e-12));
    } else {
      CHECK(law.sum_abs_tail(r) == doctest::Approx(plain).epsilon(1e-12));
    }
    CHECK(law.sum_weighted_tail(r) == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("riemannian tail sums match a long direct sum") {
  const auto law = DecayLaw::riemannian(1.0, 3.0);
  double direct = law.eval(0);
  for (std::int64_t j = 1; j < 3000000; ++j) direct += 2.0 * law.eval(j);
  CHECK(law.sum_abs_tail(0) == doctest::Approx(direct).epsilon(1e-8));

  // divergent cases are reported as +inf
  CHECK(DecayLaw::riemannian(1.0, 0.9).sum_abs_tail(0) == kInf);
  CHECK(DecayLaw::riemannian(1.0, 1.8).sum_weighted_tail(1) == kInf);
  CHECK(DecayLaw::geometric(1.0, 0.0).sum_abs_tail(0) == kInf);
}

TEST_CASE("tabulated tails are exact finite sums when the table ends at 0") {
  const auto law = DecayLaw::tabulated({0.5, 0.25, 0.125, 0.0});
  CHECK(law.sum_abs_tail(0) == 0.5 + 2 * (0.25 + 0.125));
  CHECK(law.sum_abs_tail(2) == 2 * 0.125);
  CHECK(law.sum_weighted_tail(0) == 2 * (1 * 0.25 + 2 * 0.125));
  CHECK(DecayLaw::tabulated({0.5, 0.1}).sum_abs_tail(0) == kInf);
}

TEST_CASE("psi forms") {
  SUBCASE("lambda direct substitution") { CHECK(psi(Family::lambda, 1, 1, 1.0, 1.0) == 3.0); }
  SUBCASE("kappa hand value") { CHECK(psi(Family::kappa, 2, 3, 0.5, 2.0) == 6.0); }
  SUBCASE("theta ignores u and a") { CHECK(psi(Family::theta, 99, 4, 7.0, 0.25) == 1.0); }
  SUBCASE("kappa_prime and eta") {
    CHECK(psi(Family::kappa_prime, 9, 2, 0.5, 3.0) == 3.0);
    CHECK(psi(Family::eta, 2, 3, 0.5, 2.0) == doctest::Approx(7.0));
  }
}

TEST_CASE("psi is nondecreasing in each argument and lambda dominates") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 4.0);
  std::uniform_int_distribution<std::uint64_t> count(1, 20);
  const Family fams[] = {Family::kappa, Family::kappa_prime, Family::eta, Family::theta,
                         Family::lambda};
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t u = count(gen), v = count(gen);
    const double a = unit(gen), b = unit(gen);
    for (Family f : fams) {
      const double base = psi(f, u, v, a, b);
      CHECK(psi(f, u + 3, v, a, b) >= base);
      CHECK(psi(f, u, v + 2, a, b) >= base);
      CHECK(psi(f, u, v, a + 0.5, b) >= base);
      CHECK(psi(f, u, v, a, b + 1.5) >= base);
    }
    CHECK(psi(Family::lambda, u, v, a, b) >= psi(Family::kappa, u, v, a, b));
    CHECK(psi(Family::lambda, u, v, a, b) >= psi(Family::eta, u, v, a, b));
  }
}

TEST_CASE("moment spec invariants") {
  const MomentSpec ms(3.5, 2.0);
  CHECK(ms.zeta() == 1.5);
  CHECK_THROWS_AS(MomentSpec(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MomentSpec(3.0, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
