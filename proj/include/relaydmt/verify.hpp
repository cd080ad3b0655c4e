#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaydmt/schemes.hpp"

namespace relaydmt {

/// High-SNR exponents of one channel realization: delta for the relay
/// gain, gammas for the ordered eigenvalues, chis for the smallest
/// min(p, q) eigenvalues in reverse order, psi/phi for per-slot combined
/// exponents.
struct HighSnrExponents {
  double delta = 0.0;
  std::vector<double> gammas;
  std::vector<double> chis;
  std::vector<double> psi;
  std::vector<double> phi;
};

/// gamma_j = -log lambda_j / log P for each ordered eigenvalue.
inline std::vector<double> eigenvalue_exponents(const std::vector<double>& eigs, double power) {
  if (power <= 1.0) throw std::invalid_argument("eigenvalue_exponents: requires P > 1");
  std::vector<double> gammas;
  gammas.reserve(eigs.size());
  double logp = std::log(power);
  for (double lam : eigs) {
    gammas.push_back(lam > 0.0 ? -std::log(lam) / logp
                               : std::numeric_limits<double>::infinity());
  }
  return gammas;
}

/// chi_i: the exponents of the `count` smallest eigenvalues, reversed so
/// chi_1 belongs to the smallest.
inline std::vector<double> reverse_tail_exponents(const std::vector<double>& gammas, int count) {
  if (count < 0 || count > static_cast<int>(gammas.size())) {
    throw std::invalid_argument("reverse_tail_exponents: bad count");
  }
  std::vector<double> chis(gammas.end() - count, gammas.end());
  std::reverse(chis.begin(), chis.end());
  return chis;
}

struct BoundCheckReport {
  std::string name;
  long long samples = 0;
  long long violations = 0;
  double worst_margin = 0.0;
  bool pass = false;
  long long conditioning_failures = 0;  // draws excluded by the check's side condition
};

namespace detail {

inline void require_unitary(const ComplexMatrix& theta, const char* who) {
  if (theta.rows() != theta.cols()) {
    throw std::invalid_argument(std::string(who) + ": theta must be square");
  }
  ComplexMatrix gram = theta.adjoint() * theta;
  gram -= ComplexMatrix::Identity(theta.rows(), theta.rows());
  if (gram.norm() > 1e-8 * std::max<double>(1.0, static_cast<double>(theta.rows()))) {
    throw std::invalid_argument(std::string(who) + ": theta is not unitary");
  }
}

inline double eigenvalue_or_zero(const std::vector<double>& eigs, int i) {
  return i <= static_cast<int>(eigs.size()) ? eigs[static_cast<std::size_t>(i - 1)] : 0.0;
}

/// Margin with separately chosen unitaries in the composite product and in
/// the frame term. Equal arguments give the genuine bound; mismatched ones
/// serve as a negative control that must produce violations.
inline double lemma3_margin_pair(const ComplexMatrix& g, const ComplexMatrix& h,
                                 const ComplexMatrix& theta_lhs,
                                 const ComplexMatrix& theta_rhs, int i) {
  std::vector<double> comp = ordered_eigenvalues(g * theta_lhs * h);
  double lhs = eigenvalue_or_zero(comp, i);
  double lam_g = eigenvalue_or_zero(ordered_eigenvalues(g), i);
  double lam_h = eigenvalue_or_zero(ordered_eigenvalues(h), i);
  double rhs = 0.0;
  if (lam_g > 0.0 && lam_h > 0.0) {
    // both factors nonzero forces i <= p, so the i-column frames exist
    SvdResult sg = svd(g);
    SvdResult sh = svd(h);
    ComplexMatrix psi = sg.v.leftCols(i).adjoint() * theta_rhs * sh.u.leftCols(i);
    rhs = lam_g * lam_h * ordered_eigenvalues(psi).back();
  }
  return lhs - rhs;
}

}  // namespace detail

/// Margin of the i-th eigenvalue lower bound for the composite channel
/// G Theta H: lambda_i(G Theta H) minus
/// lambda_i(G) * lambda_i(H) * lambda_min(V_(1,i)(G)^H Theta U_(1,i)(H)),
/// with eigenvalues beyond rank read as zero. Nonnegative for every
/// realization.
inline double check_lemma3(const ComplexMatrix& g, const ComplexMatrix& h,
                           const ComplexMatrix& theta, int i) {
  if (i < 1) throw std::invalid_argument("check_lemma3: i must be >= 1");
  if (g.cols() != theta.rows() || theta.cols() != h.rows()) {
    throw std::invalid_argument("check_lemma3: dimension mismatch");
  }
  detail::require_unitary(theta, "check_lemma3");
  return detail::lemma3_margin_pair(g, h, theta, theta, i);
}

/// Smallest eigenvalue of Psi^H Psi with Psi = V^H Theta U, where U and V
/// are independent isotropic p x i frames and Theta is Haar. One draw.
inline double sample_lambda_min(int p, int i, Rng& rng) {
  if (i < 1 || i > p) throw std::invalid_argument("sample_lambda_min: need 1 <= i <= p");
  ComplexMatrix u = sample_haar_frame(p, i, rng);
  ComplexMatrix v = sample_haar_frame(p, i, rng);
  ComplexMatrix theta = sample_haar_unitary(p, rng);
  ComplexMatrix psi = v.adjoint() * theta * u;
  return ordered_eigenvalues(psi).back();
}

/// Sorted samples of lambda_min(Psi^H Psi); the raw material for CDF and
/// Kolmogorov-Smirnov checks.
inline std::vector<double> lambda_min_samples(int p, int i, long long samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("lambda_min_samples: samples must be >= 1");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(samples));
  for (long long s = 0; s < samples; ++s) xs.push_back(sample_lambda_min(p, i, rng));
  std::sort(xs.begin(), xs.end());
  return xs;
}

/// Paired draws sharing the same frames (U, V) but fresh Theta in each
/// slot; used to check independence of lambda_min across slots.
inline std::vector<std::pair<double, double>> lambda_min_pair_samples(int p, int i,
                                                                      long long pairs,
                                                                      Rng& rng) {
  if (i < 1 || i > p) {
    throw std::invalid_argument("lambda_min_pair_samples: need 1 <= i <= p");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(pairs));
  for (long long s = 0; s < pairs; ++s) {
    ComplexMatrix u = sample_haar_frame(p, i, rng);
    ComplexMatrix v = sample_haar_frame(p, i, rng);
    ComplexMatrix psi1 = v.adjoint() * sample_haar_unitary(p, rng) * u;
    ComplexMatrix psi2 = v.adjoint() * sample_haar_unitary(p, rng) * u;
    out.emplace_back(ordered_eigenvalues(psi1).back(), ordered_eigenvalues(psi2).back());
  }
  return out;
}

struct EmpiricalCdf {
  std::vector<double> grid;  // epsilon values, log-spaced
  std::vector<double> cdf;   // fraction of samples <= epsilon
};

/// Empirical CDF of lambda_min(Psi^H Psi) evaluated on a log-spaced grid
/// over [eps_lo, eps_hi].
inline EmpiricalCdf lambda_min_tail(int p, int i, long long samples, Rng& rng,
                                    double eps_lo = 1e-6, double eps_hi = 1e-2,
                                    int grid_points = 41) {
  if (eps_lo <= 0.0 || eps_hi <= eps_lo || grid_points < 2) {
    throw std::invalid_argument("lambda_min_tail: bad grid");
  }
  std::vector<double> xs = lambda_min_samples(p, i, samples, rng);
  EmpiricalCdf out;
  double lg_lo = std::log10(eps_lo), lg_hi = std::log10(eps_hi);
  for (int k = 0; k < grid_points; ++k) {
    double eps = std::pow(10.0, lg_lo + (lg_hi - lg_lo) * k / (grid_points - 1));
    auto it = std::upper_bound(xs.begin(), xs.end(), eps);
    out.grid.push_back(eps);
    out.cdf.push_back(static_cast<double>(it - xs.begin()) /
                      static_cast<double>(xs.size()));
  }
  return out;
}

/// Analytic tail-bound coefficient for lambda_min: the CDF satisfies
/// F(eps) <= eta * eps^{1/i} with eta = i (p - (i+1)/2) kappa^{1/i},
/// kappa = (i^2/(i-1))^{i-1}; for i = 1 the empty product gives kappa = 1
/// and eta = p - 1.
inline double lambda_min_tail_coefficient(int p, int i) {
  if (i < 1 || i > p) {
    throw std::invalid_argument("lambda_min_tail_coefficient: need 1 <= i <= p");
  }
  if (i == 1) return static_cast<double>(p - 1);
  double kappa = std::pow(static_cast<double>(i) * i / (i - 1), i - 1);
  return i * (p - (i + 1) / 2.0) * std::pow(kappa, 1.0 / i);
}

/// Tail of ||H||^2 (a Gamma(mp, 1) variate) against its high-SNR
/// asymptote x^{mp} e^{-x} / (mp)! at x = P^{delta0/2}, with a slack
/// factor 10 because the asymptote is not a finite-P inequality.
inline BoundCheckReport check_chi_square_tail(int m, int p, double delta0, double power,
                                              long long samples, Rng& rng) {
  if (delta0 <= 0.0 || power <= 1.0) {
    throw std::invalid_argument("check_chi_square_tail: need delta0 > 0 and P > 1");
  }
  if (m < 1 || p < 1 || samples < 1) {
    throw std::invalid_argument("check_chi_square_tail: bad counts");
  }
  const double x = std::pow(power, delta0 / 2.0);
  long long exceed = 0;
  for (long long s = 0; s < samples; ++s) {
    ComplexMatrix h = sample_gaussian_channel(p, m, rng);
    if (h.squaredNorm() > x) ++exceed;
  }
  double empirical = static_cast<double>(exceed) / static_cast<double>(samples);
  double log_bound = m * p * std::log(x) - x - std::lgamma(m * p + 1.0);
  double bound = 10.0 * std::exp(log_bound);
  BoundCheckReport rep;
  rep.name = "chi_square_tail";
  rep.samples = samples;
  rep.violations = exceed;
  rep.worst_margin = bound - empirical;
  rep.pass = empirical <= bound + 1e-12;
  return rep;
}

/// Empirical q-quantile of delta = -log_P alpha^2 over random channels.
inline double alpha_delta_quantile(int m, int p, double power, long long samples,
                                   Rng& rng, double q = 0.999) {
  if (power <= 1.0) throw std::invalid_argument("alpha_delta_quantile: requires P > 1");
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("alpha_delta_quantile: bad q");
  std::vector<double> deltas;
  deltas.reserve(static_cast<std::size_t>(samples));
  double logp = std::log(power);
  for (long long s = 0; s < samples; ++s) {
    ComplexMatrix h = sample_gaussian_channel(p, m, rng);
    double alpha = alpha_coefficient(h, power, m);
    deltas.push_back(-2.0 * std::log(alpha) / logp);
  }
  std::sort(deltas.begin(), deltas.end());
  auto idx = static_cast<std::size_t>(q * (deltas.size() - 1));
  return deltas[idx];
}

/// The relay-gain exponent delta vanishes at high SNR: the 99.9th
/// percentile of delta must be non-increasing along the SNR grid (within
/// Monte Carlo noise) and strictly smaller at the top than at the bottom.
inline BoundCheckReport check_alpha_high_snr(int m, int p, const std::vector<double>& p_grid,
                                             long long samples, Rng& rng) {
  if (p_grid.size() < 2) {
    throw std::invalid_argument("check_alpha_high_snr: need at least two SNR points");
  }
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i) {
    if (p_grid[i + 1] <= p_grid[i]) {
      throw std::invalid_argument("check_alpha_high_snr: grid must be increasing");
    }
  }
  BoundCheckReport rep;
  rep.name = "alpha_high_snr";
  rep.samples = samples * static_cast<long long>(p_grid.size());
  constexpr double kNoise = 0.01;
  double prev = std::numeric_limits<double>::infinity();
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    double qv = alpha_delta_quantile(m, p, p_grid[i], samples, rng);
    if (i == 0) first = qv;
    last = qv;
    if (qv > prev + kNoise) ++rep.violations;
    prev = qv;
  }
  rep.worst_margin = first - last;
  rep.pass = rep.violations == 0 && last < first;
  return rep;
}

/// Per-realization mutual-information sandwich: whenever ||G||^2 does not
/// exceed c log2 P, the noise-inflated lower bound and relay-noise-free
/// upper bound bracket the exact value. dims = {m, n, p}.
inline BoundCheckReport check_mi_sandwich(long long samples, double power, double c,
                                          const std::vector<int>& dims, Rng& rng) {
  if (dims.size() != 3) throw std::invalid_argument("check_mi_sandwich: dims must be {m,n,p}");
  const int m = dims[0], n = dims[1], p = dims[2];
  BoundCheckReport rep;
  rep.name = "mi_sandwich";
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const double g_cap = c * std::log2(power);
  for (long long s = 0; s < samples; ++s) {
    ComplexMatrix h = sample_gaussian_channel(p, m, rng);
    ComplexMatrix g = sample_gaussian_channel(n, p, rng);
    if (g.squaredNorm() > g_cap) {
      ++rep.conditioning_failures;
      continue;
    }
    double alpha = alpha_coefficient(h, power, m);
    double exact = mutual_info_traditional_af(h, g, power, m, alpha);
    double upper = mutual_info_af_upper(h, g, power, m, alpha);
    double lower = mutual_info_af_lower(h, g, power, m, alpha, c);
    double slack = 1e-9 * (1.0 + std::abs(exact));
    double margin = std::min(exact - lower, upper - exact);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -slack) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace relaydmt
