#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "relaydmt/schemes.hpp"

namespace relaydmt {

enum class Scheme {
  PointToPoint,  // direct m -> n channel, no relay
  TraditionalAf,
  RsTwoHop,
  RsMultiHop,
  RsParallel,
  Naf,
  ModifiedNaf,
};

struct SchemeConfig {
  Scheme scheme = Scheme::PointToPoint;
  int m = 1;
  int n = 1;
  int p = 1;
  int slots = 1;                  // L for the two-hop and multi-hop schemes
  int relays = 1;                 // K for the parallel scheme
  int rounds = 1;                 // B for the parallel and NAF schemes
  std::vector<int> hop_antennas;  // N_0..N_h for the multi-hop scheme
  AlphaPolicy alpha_policy = AlphaPolicy::PowerNormalized;
  bool with_unitary = true;

  void validate() const {
    if (m < 1 || n < 1 || p < 1) {
      throw std::invalid_argument("SchemeConfig: antennas must be >= 1");
    }
    if (slots < 1 || relays < 1 || rounds < 1) {
      throw std::invalid_argument("SchemeConfig: L, K, B must be >= 1");
    }
    if (scheme == Scheme::RsMultiHop && hop_antennas.size() < 2) {
      throw std::invalid_argument("SchemeConfig: multi-hop needs hop_antennas");
    }
  }
};

/// Platform-stable derivation of a per-trial seed from (master, index):
/// the splitmix64 finalizer is a bijection, so distinct indices always map
/// to distinct seeds regardless of worker count or execution order.
inline std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t trial_index) {
  return splitmix64_mix(splitmix64_mix(master) +
                        0x9e3779b97f4a7c15ULL * (trial_index + 1));
}

/// One channel realization of the configured scheme and its per-slot
/// mutual information in bits.
inline double sample_per_slot_mutual_info(const SchemeConfig& c, double power, Rng& rng) {
  auto alpha_for = [&](const ComplexMatrix& incoming, int tx_antennas) {
    return c.alpha_policy == AlphaPolicy::Unit
               ? 1.0
               : alpha_coefficient(incoming, power, tx_antennas);
  };
  switch (c.scheme) {
    case Scheme::PointToPoint: {
      ComplexMatrix f = sample_gaussian_channel(c.n, c.m, rng);
      return log_det_i_plus(power / c.m, f);
    }
    case Scheme::TraditionalAf: {
      ComplexMatrix h = sample_gaussian_channel(c.p, c.m, rng);
      ComplexMatrix g = sample_gaussian_channel(c.n, c.p, rng);
      return mutual_info_traditional_af(h, g, power, c.m, alpha_for(h, c.m));
    }
    case Scheme::RsTwoHop: {
      ComplexMatrix h = sample_gaussian_channel(c.p, c.m, rng);
      ComplexMatrix g = sample_gaussian_channel(c.n, c.p, rng);
      double alpha = alpha_for(h, c.m);
      auto blocks = build_rs_two_hop_blocks(h, g, c.slots, rng, c.with_unitary);
      return mutual_info_rs(blocks, power, c.m, alpha);
    }
    case Scheme::RsMultiHop: {
      const auto& ants = c.hop_antennas;
      std::vector<ComplexMatrix> hops;
      double alpha = 1.0;
      for (std::size_t j = 1; j < ants.size(); ++j) {
        hops.push_back(sample_gaussian_channel(ants[j], ants[j - 1], rng));
        if (j + 1 < ants.size()) {
          // amplification at the relay terminating hop j
          alpha *= alpha_for(hops.back(), ants[j - 1]);
        }
      }
      double total = 0.0;
      for (int l = 0; l < c.slots; ++l) {
        ComplexMatrix a = build_multihop_block(hops, rng, c.with_unitary);
        total += log_det_i_plus(alpha * alpha * power / ants.front(), a);
      }
      return total / c.slots;
    }
    case Scheme::RsParallel: {
      RsSchedule schedule{c.relays, c.rounds};
      std::vector<ComplexMatrix> h_list, g_list;
      std::vector<double> alphas;
      for (int k = 0; k < c.relays; ++k) {
        h_list.push_back(sample_gaussian_channel(c.p, c.m, rng));
        g_list.push_back(sample_gaussian_channel(c.n, c.p, rng));
        alphas.push_back(alpha_for(h_list.back(), c.m));
      }
      return mutual_info_rs_parallel(h_list, g_list, schedule, power, c.m, alphas, rng,
                                     c.with_unitary);
    }
    case Scheme::Naf:
    case Scheme::ModifiedNaf: {
      ComplexMatrix f = sample_gaussian_channel(c.n, c.m, rng);
      ComplexMatrix h = sample_gaussian_channel(c.p, c.m, rng);
      ComplexMatrix g = sample_gaussian_channel(c.n, c.p, rng);
      bool unitary = c.scheme == Scheme::ModifiedNaf && c.with_unitary;
      return mutual_info_modified_naf(f, h, g, c.rounds, power, c.m, alpha_for(h, c.m),
                                      rng, unitary);
    }
  }
  throw std::logic_error("sample_per_slot_mutual_info: unknown scheme");
}

struct ConfidenceInterval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval for a binomial proportion.
inline ConfidenceInterval wilson_interval(long long failures, long long trials,
                                          double z = 1.959963984540054) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  double n = static_cast<double>(trials);
  double p_hat = static_cast<double>(failures) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p_hat + z2 / (2.0 * n)) / denom;
  double half = (z / denom) * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
  // pin the degenerate endpoints exactly; sqrt rounding can leave them one
  // ulp off the analytic value
  double low = failures == 0 ? 0.0 : std::max(0.0, center - half);
  double high = failures == trials ? 1.0 : std::min(1.0, center + half);
  return ConfidenceInterval{low, high};
}

struct OutageEstimate {
  SchemeConfig scheme;
  double r = 0.0;       // multiplexing gain
  double power = 0.0;   // linear SNR
  long long trials = 0;
  long long failures = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

/// Outage probability at one (scheme, rate, SNR) point. Each trial draws
/// its own seed from (master, trial_index), so the result is identical for
/// any thread count.
inline OutageEstimate estimate_outage(const SchemeConfig& config, double r, double power,
                                      long long trials, std::uint64_t master,
                                      int threads = 1, std::uint64_t trial_offset = 0) {
  config.validate();
  if (trials < 1) throw std::invalid_argument("estimate_outage: trials must be >= 1");
  if (power <= 1.0) throw std::invalid_argument("estimate_outage: requires P > 1");
  const double threshold = r * std::log2(power);
  threads = std::max(1, threads);
  std::vector<long long> partial(static_cast<std::size_t>(threads), 0);
  auto worker = [&](int tid) {
    long long begin = trials * tid / threads;
    long long end = trials * (tid + 1) / threads;
    long long fails = 0;
    for (long long i = begin; i < end; ++i) {
      Rng rng(derive_trial_seed(master, trial_offset + static_cast<std::uint64_t>(i)));
      if (sample_per_slot_mutual_info(config, power, rng) < threshold) ++fails;
    }
    partial[static_cast<std::size_t>(tid)] = fails;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  long long failures = 0;
  for (long long f : partial) failures += f;
  OutageEstimate est;
  est.scheme = config;
  est.r = r;
  est.power = power;
  est.trials = trials;
  est.failures = failures;
  est.p_hat = static_cast<double>(failures) / static_cast<double>(trials);
  auto ci = wilson_interval(failures, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

/// One estimate per grid point, with disjoint trial-seed ranges so the
/// whole sweep is a pure function of (config, r, grid, trials, master).
inline std::vector<OutageEstimate> snr_sweep(const SchemeConfig& config, double r,
                                             const std::vector<double>& power_grid,
                                             long long trials_per_point,
                                             std::uint64_t master, int threads = 1) {
  for (std::size_t i = 0; i + 1 < power_grid.size(); ++i) {
    if (power_grid[i + 1] <= power_grid[i]) {
      throw std::invalid_argument("snr_sweep: grid must be strictly increasing");
    }
  }
  std::vector<OutageEstimate> out;
  for (std::size_t i = 0; i < power_grid.size(); ++i) {
    out.push_back(estimate_outage(config, r, power_grid[i], trials_per_point, master,
                                  threads,
                                  static_cast<std::uint64_t>(i) *
                                      static_cast<std::uint64_t>(trials_per_point)));
  }
  return out;
}

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (log10 P, -log10 p_hat)
  double slope = 0.0;      // empirical diversity exponent
  double stderr_ = 0.0;
  int points_used = 0;
  int points_dropped = 0;  // upper-half points with too few failures
};

/// Weighted least-squares slope of -log10 p_hat against log10 P over the
/// upper half of the grid. The diversity exponent is asymptotic, so
/// low-SNR points are excluded; points with fewer than 10 failures are
/// dropped as statistically unusable.
inline SlopeFit fit_diversity_slope(const std::vector<OutageEstimate>& sweep) {
  if (sweep.size() < 4) {
    throw std::invalid_argument("fit_diversity_slope: need at least 4 grid points");
  }
  constexpr double kLn10 = 2.302585092994046;
  SlopeFit fit;
  std::vector<double> xs, ys, ws;
  std::size_t start = sweep.size() / 2;
  for (std::size_t i = start; i < sweep.size(); ++i) {
    const OutageEstimate& e = sweep[i];
    if (e.failures < 10) {
      ++fit.points_dropped;
      continue;
    }
    double x = std::log10(e.power);
    double y = -std::log10(e.p_hat);
    double p = std::min(e.p_hat, 1.0 - 1e-12);
    // delta method: var(log10 p_hat) = (1 - p) / (trials * p * ln^2 10)
    double var = (1.0 - p) / (static_cast<double>(e.trials) * p * kLn10 * kLn10);
    xs.push_back(x);
    ys.push_back(y);
    ws.push_back(1.0 / std::max(var, 1e-300));
    fit.points.emplace_back(x, y);
  }
  if (xs.size() < 2) {
    throw std::runtime_error("fit_diversity_slope: insufficient usable points");
  }
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    swx += ws[i] * xs[i];
    swy += ws[i] * ys[i];
  }
  double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx <= 0.0) throw std::runtime_error("fit_diversity_slope: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.stderr_ = std::sqrt(1.0 / sxx);
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

}  // namespace relaydmt
