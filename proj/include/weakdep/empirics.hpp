#pragma once

// Monte Carlo verification machinery: partial-sum processes, covariance and
// long-run-variance estimators, replicate generation with deterministic
// substreams, exact Kolmogorov distance to a centered Gaussian, moment-ratio
// scaling checks, and power-law rate regression.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weakdep/models.hpp"

namespace weakdep {

// W_n(t) = n^{-1/2} sum_{i=1}^{floor(n t)} X_i for each t in `grid`; grid
// values must lie in [0, 1].
std::vector<double> partial_sum_process(const SamplePath& path, std::span<const double> grid);

// Biased (1/n) autocovariance at lag k: (1/n) sum (X_t - mean)(X_{t+k} - mean).
double autocovariance(std::span<const double> values, std::size_t k);

// Bartlett-tapered long-run variance: gamma(0) + 2 sum_{i<p} (1 - i/p) gamma(i).
double longrun_variance(std::span<const double> values, std::size_t p);

// Default taper window p = ceil(n^(1/3)).
std::size_t default_taper_window(std::size_t n);

// R independent realizations of S_n / sqrt(n); replicate i uses the
// substream derived from (master_seed, i), so results do not depend on the
// worker count.  threads = 0 uses the hardware concurrency.
struct ReplicateSet {
  std::size_t n = 0;
  std::vector<double> values;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> substream_ids;
};

ReplicateSet replicate_partial_sums(const ProcessSpec& spec, std::size_t n, std::size_t R,
                                    std::uint64_t master_seed, unsigned threads = 0);

// Exact sup-distance between the empirical distribution of `values` and
// N(0, sigma^2), via the order-statistic formula.
double kolmogorov_distance(std::span<const double> values, double sigma);
double kolmogorov_distance(const ReplicateSet& set, double sigma);

// Standard normal CDF.
double normal_cdf(double x);

// For each n in n_grid: Monte Carlo estimate of E|S_n|^Delta / n^(Delta/2)
// from R replicates.  Bounded ratios across n are the moment-scaling
// signature of sqrt(n) growth of ||S_n||_Delta.
struct MomentRatioPoint {
  std::size_t n = 0;
  double ratio = 0.0;
};
std::vector<MomentRatioPoint> moment_ratio(const ProcessSpec& spec, double delta,
                                           std::span<const std::size_t> n_grid, std::size_t R,
                                           std::uint64_t master_seed, unsigned threads = 0);

// Least-squares fit of log(distance) against log(n).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};
struct RatePoint {
  double n = 0.0;
  double distance = 0.0;
};
RateFit fit_rate(std::span<const RatePoint> points);

// Empirical covariance-decay probe: for each gap r, the absolute empirical
// covariance between f(X_t..X_{t+block-1}) and f(X_{t+block+r}..) over
// sliding t, with f the block average clamped to [-1, 1].
struct CovProbePoint {
  std::size_t gap = 0;
  double abs_cov = 0.0;
};
std::vector<CovProbePoint> cov_decay_probe(std::span<const double> values,
                                           std::span<const std::size_t> gaps, std::size_t block);

// Run `count` indexed jobs on up to `threads` workers with a deterministic
// index split (results must be written by index, never appended).
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace weakdep
