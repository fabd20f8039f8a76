#include "weakdep/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "weakdep/summation.hpp"

namespace weakdep {

std::vector<double> partial_sum_process(const SamplePath& path, std::span<const double> grid) {
  const std::size_t n = path.values.size();
  std::vector<std::size_t> cut(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("partial_sum_process: t must lie in [0, 1]");
    cut[g] = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
  }
  // One compensated pass, sampled at every requested cut point.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cut[a] < cut[b]; });

  std::vector<double> out(grid.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  NeumaierAcc acc;
  std::size_t i = 0;
  for (std::size_t g : order) {
    while (i < cut[g]) acc.add(path.values[i++]);
    out[g] = acc.value() * scale;
  }
  return out;
}

double autocovariance(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (k >= n) throw std::invalid_argument("autocovariance: lag must be smaller than the length");
  const double mean = compensated_sum(values) / static_cast<double>(n);
  NeumaierAcc acc;
  for (std::size_t t = 0; t + k < n; ++t) acc.add((values[t] - mean) * (values[t + k] - mean));
  return acc.value() / static_cast<double>(n);
}

double longrun_variance(std::span<const double> values, std::size_t p) {
  const std::size_t n = values.size();
  if (p < 1 || p > n) throw std::invalid_argument("longrun_variance: window out of range");
  // Single centering pass shared by all lags.
  const double mean = compensated_sum(values) / static_cast<double>(n);
  NeumaierAcc total;
  for (std::size_t i = 0; i < p; ++i) {
    NeumaierAcc acc;
    for (std::size_t t = 0; t + i < n; ++t) acc.add((values[t] - mean) * (values[t + i] - mean));
    const double gamma = acc.value() / static_cast<double>(n);
    const double w = 1.0 - static_cast<double>(i) / static_cast<double>(p);
    total.add(i == 0 ? gamma : 2.0 * w * gamma);
  }
  return total.value();
}

std::size_t default_taper_window(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n))));
}

void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / threads;
      const std::size_t end = count * (w + 1) / threads;
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

ReplicateSet replicate_partial_sums(const ProcessSpec& spec, std::size_t n, std::size_t R,
                                    std::uint64_t master_seed, unsigned threads) {
  if (R < 2) throw std::invalid_argument("replicate_partial_sums: need R >= 2");
  ReplicateSet set;
  set.n = n;
  set.master_seed = master_seed;
  set.values.assign(R, 0.0);
  set.substream_ids.resize(R);
  for (std::size_t i = 0; i < R; ++i) set.substream_ids[i] = i;

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for_index(R, threads, [&](std::size_t i) {
    const SamplePath path = simulate(spec, n, derive_stream(master_seed, i));
    set.values[i] = compensated_sum(path.values) * scale;
  });
  return set;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_distance(std::span<const double> values, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("kolmogorov_distance: degenerate limit, sigma <= 0");
  if (values.empty()) throw std::invalid_argument("kolmogorov_distance: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double R = static_cast<double>(sorted.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i] / sigma);
    const double hi = static_cast<double>(i + 1) / R - phi;
    const double lo = phi - static_cast<double>(i) / R;
    dist = std::max(dist, std::max(hi, lo));
  }
  return dist;
}

double kolmogorov_distance(const ReplicateSet& set, double sigma) {
  return kolmogorov_distance(std::span<const double>(set.values), sigma);
}

std::vector<MomentRatioPoint> moment_ratio(const ProcessSpec& spec, double delta,
                                           std::span<const std::size_t> n_grid, std::size_t R,
                                           std::uint64_t master_seed, unsigned threads) {
  if (!(delta > 2.0)) throw std::invalid_argument("moment_ratio: Delta must exceed 2");
  std::vector<MomentRatioPoint> out;
  out.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    // Per-size substream family, so grid points are mutually independent.
    const auto set = replicate_partial_sums(spec, n, R, derive_stream(master_seed, n), threads);
    NeumaierAcc acc;
    for (double v : set.values) acc.add(std::pow(std::abs(v), delta));
    // values are S_n / sqrt(n), so the mean of |value|^Delta is already the
    // ratio E|S_n|^Delta / n^(Delta/2).
    out.push_back({n, acc.value() / static_cast<double>(R)});
  }
  return out;
}

RateFit fit_rate(std::span<const RatePoint> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  for (const auto& p : points)
    if (!(p.distance > 0.0)) throw std::invalid_argument("fit_rate: distances must be positive");

  const double N = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += std::log(p.n);
    sy += std::log(p.distance);
  }
  const double mx = sx / N, my = sy / N;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.distance) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: degenerate abscissae");

  RateFit fit;
  fit.points = points.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (const auto& p : points) {
    const double resid = std::log(p.distance) - (fit.intercept + fit.slope * std::log(p.n));
    rss += resid * resid;
  }
  fit.slope_stderr = std::sqrt(std::max(0.0, rss / (N - 2.0)) / sxx);
  return fit;
}

std::vector<CovProbePoint> cov_decay_probe(std::span<const double> values,
                                           std::span<const std::size_t> gaps, std::size_t block) {
  const std::size_t n = values.size();
  if (block < 1) throw std::invalid_argument("cov_decay_probe: block must be >= 1");
  std::size_t max_gap = 0;
  for (std::size_t g : gaps) max_gap = std::max(max_gap, g);
  if (2 * block + max_gap > n) throw std::invalid_argument("cov_decay_probe: path too short");

  // Clamped block averages f_t for every feasible start t.
  const std::size_t starts = n - block + 1;
  std::vector<double> f(starts);
  NeumaierAcc window;
  for (std::size_t i = 0; i < block; ++i) window.add(values[i]);
  for (std::size_t t = 0;; ++t) {
    f[t] = std::clamp(window.value() / static_cast<double>(block), -1.0, 1.0);
    if (t + 1 >= starts) break;
    window.add(-values[t]);
    window.add(values[t + block]);
  }

  std::vector<CovProbePoint> out;
  out.reserve(gaps.size());
  for (std::size_t gap : gaps) {
    const std::size_t count = n - 2 * block - gap + 1;
    NeumaierAcc su, sv, suv;
    for (std::size_t t = 0; t < count; ++t) {
      const double u = f[t];
      const double v = f[t + block + gap];
      su.add(u);
      sv.add(v);
      suv.add(u * v);
    }
    const double c = static_cast<double>(count);
    const double cov = suv.value() / c - (su.value() / c) * (sv.value() / c);
    out.push_back({gap, std::abs(cov)});
  }
  return out;
}

}  // namespace weakdep
