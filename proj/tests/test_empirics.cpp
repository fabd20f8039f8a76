#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "weakdep/empirics.hpp"
#include "weakdep/summation.hpp"

using namespace weakdep;

namespace {

ProcessSpec iid_spec(InnovationSpec innov) {
  ProcessSpec s;
  s.family = ProcessFamily::iid;
  s.innovation = innov;
  return s;
}

// Inverse standard-normal CDF by bisection; test-only oracle.
double probit(double p) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("empirics") {

TEST_CASE("partial-sum process") {
  SamplePath path;
  path.values = {1.0, 1.0, 1.0, 1.0};
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  const auto w = partial_sum_process(path, grid);
  CHECK(w[0] == 0.0);                       // empty sum
  CHECK(w[1] == doctest::Approx(1.0));      // floor(4 * 0.5) = 2 terms over sqrt(4)
  CHECK(w[2] == doctest::Approx(2.0));      // full sum
  CHECK_THROWS_AS(partial_sum_process(path, std::vector<double>{1.5}), std::invalid_argument);
  CHECK_THROWS_AS(partial_sum_process(path, std::vector<double>{-0.1}), std::invalid_argument);

  SUBCASE("unsorted grids are evaluated per point") {
    const std::vector<double> shuffled = {1.0, 0.0, 0.5};
    const auto v = partial_sum_process(path, shuffled);
    CHECK(v[0] == doctest::Approx(2.0));
    CHECK(v[1] == 0.0);
    CHECK(v[2] == doctest::Approx(1.0));
  }
  SUBCASE("compensated summation tracks a long-double reference") {
    const std::size_t n = 1 << 20;
    SamplePath big;
    big.values.resize(n);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& v : big.values) v = unit(gen) * 1e6;
    long double ref = 0.0;
    for (double v : big.values) ref += static_cast<long double>(v);
    ref /= std::sqrt(static_cast<long double>(n));
    const double got = partial_sum_process(big, std::vector<double>{1.0})[0];
    CHECK(std::abs(got - static_cast<double>(ref)) <=
          1e-10 * std::max(1.0, std::abs(static_cast<double>(ref))));
  }
}

TEST_CASE("autocovariance") {
  SUBCASE("lag zero is the biased sample variance") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(autocovariance(xs, 0) == doctest::Approx(1.25));
  }
  SUBCASE("constant paths have zero autocovariance") {
    const std::vector<double> xs(16, 3.7);
    for (std::size_t k = 0; k < 4; ++k) CHECK(autocovariance(xs, k) == doctest::Approx(0.0));
  }
  SUBCASE("alternating path hand value") {
    const std::vector<double> xs = {1.0, -1.0, 1.0, -1.0};
    CHECK(autocovariance(xs, 1) == doctest::Approx(-0.75));
  }
  SUBCASE("lag must stay below the length") {
    const std::vector<double> xs = {1.0, 2.0};
    CHECK_THROWS_AS(autocovariance(xs, 2), std::invalid_argument);
  }
}

TEST_CASE("long-run variance") {
  SUBCASE("window of one is the sample variance") {
    const std::vector<double> xs = {0.5, -1.0, 2.0, 0.25, -0.5};
    CHECK(longrun_variance(xs, 1) == doctest::Approx(autocovariance(xs, 0)).epsilon(1e-14));
  }
  SUBCASE("white noise long-run variance is the variance") {
    const std::size_t n = 1 << 16;
    const auto path = simulate_iid(InnovationSpec::gaussian(1.0), n, 8);
    const double est = longrun_variance(path.values, default_taper_window(n));
    CHECK(est == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("equals the direct tapered double sum exhaustively on short paths") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    for (std::size_t n = 2; n <= 64; n += 7) {
      std::vector<double> xs(n);
      for (auto& v : xs) v = unit(gen);
      for (std::size_t p = 1; p <= n; p += 3) {
        double direct = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          const double w = 1.0 - static_cast<double>(i) / static_cast<double>(p);
          direct += (i == 0 ? 1.0 : 2.0) * w * autocovariance(xs, i);
        }
        CHECK(longrun_variance(xs, p) == doctest::Approx(direct).epsilon(1e-12));
      }
    }
  }
  SUBCASE("window bounds are enforced") {
    const std::vector<double> xs = {1.0, 2.0};
    CHECK_THROWS_AS(longrun_variance(xs, 0), std::invalid_argument);
    CHECK_THROWS_AS(longrun_variance(xs, 3), std::invalid_argument);
  }
}

TEST_CASE("replicate sets") {
  const auto spec = iid_spec(InnovationSpec::rademacher());
  SUBCASE("unit-length paths live on the support") {
    const auto set = replicate_partial_sums(spec, 1, 256, 7);
    for (double v : set.values) CHECK(std::abs(v) == 1.0);
    CHECK(set.substream_ids.front() == 0);
    CHECK(set.substream_ids.back() == 255);
  }
  SUBCASE("deterministic across reruns and worker counts") {
    const auto spec2 = iid_spec(InnovationSpec::gaussian(1.0));
    const auto a = replicate_partial_sums(spec2, 128, 300, 42, 1);
    const auto b = replicate_partial_sums(spec2, 128, 300, 42, 2);
    const auto c = replicate_partial_sums(spec2, 128, 300, 42, 8);
    const auto d = replicate_partial_sums(spec2, 128, 300, 42, 8);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);
    CHECK(a.values == d.values);
    const auto e = replicate_partial_sums(spec2, 128, 300, 43, 8);
    CHECK(a.values != e.values);
  }
  SUBCASE("at least two replicates") {
    CHECK_THROWS_AS(replicate_partial_sums(spec, 4, 1, 3), std::invalid_argument);
  }
}

TEST_CASE("kolmogorov distance") {
  SUBCASE("single point at the origin") {
    const std::vector<double> one = {0.0};
    CHECK(kolmogorov_distance(one, 1.0) == doctest::Approx(0.5));
  }
  SUBCASE("quantile-interleaved points achieve 1/(2R)") {
    const std::size_t R = 40;
    std::vector<double> xs(R);
    for (std::size_t i = 0; i < R; ++i)
      xs[i] = probit((static_cast<double>(i) + 0.5) / static_cast<double>(R));
    CHECK(kolmogorov_distance(xs, 1.0) == doctest::Approx(1.0 / (2.0 * R)).epsilon(1e-6));
  }
  SUBCASE("iid standard normals sit under the DKW envelope") {
    const auto set = replicate_partial_sums(iid_spec(InnovationSpec::gaussian(1.0)), 1, 10000, 12);
    CHECK(kolmogorov_distance(set, 1.0) < 2.5 / std::sqrt(10000.0));
  }
  SUBCASE("invariant under permutation of the values") {
    auto set = replicate_partial_sums(iid_spec(InnovationSpec::gaussian(1.0)), 16, 500, 3);
    const double before = kolmogorov_distance(set, 1.0);
    std::mt19937_64 gen(1);
    std::shuffle(set.values.begin(), set.values.end(), gen);
    CHECK(kolmogorov_distance(set, 1.0) == before);
  }
  SUBCASE("degenerate sigma is refused") {
    const std::vector<double> xs = {0.1, 0.2};
    CHECK_THROWS_AS(kolmogorov_distance(xs, 0.0), std::domain_error);
  }
}

TEST_CASE("moment ratios") {
  SUBCASE("rademacher at n = 1 is exactly one") {
    const std::vector<std::size_t> grid = {1};
    const auto pts = moment_ratio(iid_spec(InnovationSpec::rademacher()), 3.0, grid, 500, 5);
    CHECK(pts[0].ratio == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("gaussian absolute third moment") {
    // S_n / sqrt(n) is exactly N(0,1), so the ratio is E|N|^3 = 2 sqrt(2/pi)
    // at every n; MC standard error at R = 20000 is ~0.025.
    const std::vector<std::size_t> grid = {64};
    const auto pts = moment_ratio(iid_spec(InnovationSpec::gaussian(1.0)), 3.0, grid, 20000, 31);
    CHECK(pts[0].ratio ==
          doctest::Approx(2.0 * std::sqrt(2.0 / 3.14159265358979324)).epsilon(0.05));
  }
  SUBCASE("ratios are flat across the grid") {
    const std::vector<std::size_t> grid = {256, 512, 1024, 2048, 4096, 8192, 16384};
    const auto pts = moment_ratio(iid_spec(InnovationSpec::gaussian(1.0)), 3.0, grid, 2000, 9);
    std::vector<RatePoint> fitpts;
    for (const auto& p : pts) fitpts.push_back({static_cast<double>(p.n), p.ratio});
    const auto fit = fit_rate(fitpts);
    CHECK(std::abs(fit.slope) <= 0.05);
  }
  SUBCASE("near-two surrogate recovers the variance") {
    const std::vector<std::size_t> grid = {512};
    const auto pts =
        moment_ratio(iid_spec(InnovationSpec::gaussian(1.0)), 2.0 + 1e-9, grid, 20000, 17);
    CHECK(pts[0].ratio == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("Delta at or below two is refused") {
    const std::vector<std::size_t> grid = {8};
    CHECK_THROWS_AS(moment_ratio(iid_spec(InnovationSpec::rademacher()), 2.0, grid, 100, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("rate fitting") {
  SUBCASE("exact inverse-square-root law") {
    std::vector<RatePoint> pts;
    for (double n : {256.0, 512.0, 1024.0, 2048.0}) pts.push_back({n, 1.0 / std::sqrt(n)});
    const auto fit = fit_rate(pts);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("amplitude does not bias the slope") {
    std::vector<RatePoint> pts;
    for (double n : {100.0, 400.0, 1600.0, 6400.0}) pts.push_back({n, 7.0 * std::pow(n, -0.119)});
    CHECK(fit_rate(pts).slope == doctest::Approx(-0.119).epsilon(1e-12));
  }
  SUBCASE("multiplicative jitter keeps the slope within three stderr") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<RatePoint> pts;
    for (double n = 128.0; n <= 65536.0; n *= 2.0)
      pts.push_back({n, 0.8 * std::pow(n, -0.37) * (1.0 + jitter(gen))});
    const auto fit = fit_rate(pts);
    CHECK(std::abs(fit.slope + 0.37) <= 3.0 * fit.slope_stderr + 1e-12);
  }
  SUBCASE("guards") {
    std::vector<RatePoint> two = {{10.0, 0.1}, {20.0, 0.05}};
    CHECK_THROWS_AS(fit_rate(two), std::invalid_argument);
    std::vector<RatePoint> bad = {{10.0, 0.1}, {20.0, 0.0}, {40.0, 0.1}};
    CHECK_THROWS_AS(fit_rate(bad), std::invalid_argument);
  }
}

TEST_CASE("covariance decay probe") {
  const std::vector<std::size_t> gaps = {1, 2, 4, 8, 16};
  SUBCASE("iid paths sit at the noise floor") {
    const std::size_t n = 1 << 14;
    const auto path = simulate_iid(InnovationSpec::gaussian(1.0), n, 3);
    for (const auto& pt : cov_decay_probe(path.values, gaps, 1))
      CHECK(pt.abs_cov < 4.0 / std::sqrt(static_cast<double>(n)));
  }
  SUBCASE("AR(1) correlation decays toward the floor") {
    const std::size_t n = 1 << 16;
    const auto path = simulate_markov_ar(0.5, InnovationSpec::gaussian(1.0), n, 77);
    const auto pts = cov_decay_probe(path.values, gaps, 1);
    CHECK(pts[0].abs_cov > 2.0 * pts[2].abs_cov);  // ~0.5^3 decay between gaps 1 and 4
    CHECK(pts[0].abs_cov > pts[4].abs_cov);
  }
  SUBCASE("constant paths are degenerate") {
    const std::vector<double> xs(256, 2.0);
    for (const auto& pt : cov_decay_probe(xs, gaps, 4)) CHECK(pt.abs_cov == 0.0);
  }
  SUBCASE("short paths are rejected") {
    const std::vector<double> xs(16, 1.0);
    CHECK_THROWS_AS(cov_decay_probe(xs, std::vector<std::size_t>{15}, 1), std::invalid_argument);
  }
}

}  // TEST_SUITE
