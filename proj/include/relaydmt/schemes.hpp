#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "relaydmt/matrix_rand.hpp"

namespace relaydmt {

enum class AlphaPolicy { PowerNormalized, Unit };

/// Relay amplification coefficient: alpha^2 = min(1, P / ((P/m)||H||^2 + m)).
/// Never exceeds 1, so the relay cannot boost its received power.
inline double alpha_coefficient(const ComplexMatrix& h, double power, int m) {
  if (power <= 0.0 || m < 1) {
    throw std::invalid_argument("alpha_coefficient: need P > 0 and m >= 1");
  }
  double h2 = h.squaredNorm();
  if (!std::isfinite(h2)) throw std::runtime_error("alpha_coefficient: non-finite channel");
  double alpha2 = std::min(1.0, power / ((power / m) * h2 + m));
  return std::sqrt(alpha2);
}

/// Exact whitened mutual information of the single-path amplify-and-forward
/// chain: log2 |I + alpha^2 (P/m) G H H^H G^H (I + alpha^2 G G^H)^{-1}|.
inline double mutual_info_traditional_af(const ComplexMatrix& h, const ComplexMatrix& g,
                                         double power, int m, double alpha) {
  if (g.cols() != h.rows()) {
    throw std::invalid_argument("mutual_info_traditional_af: dimension mismatch");
  }
  ComplexMatrix a = g * h;
  ComplexMatrix noise = ComplexMatrix::Identity(g.rows(), g.rows());
  noise.noalias() += (alpha * alpha) * g * g.adjoint();
  return log_det_i_plus(alpha * alpha * power / m, a, &noise);
}

/// Relay-noise-free upper bound: log2 |I + alpha^2 (P/m) G H H^H G^H|.
inline double mutual_info_af_upper(const ComplexMatrix& h, const ComplexMatrix& g,
                                   double power, int m, double alpha) {
  if (g.cols() != h.rows()) {
    throw std::invalid_argument("mutual_info_af_upper: dimension mismatch");
  }
  ComplexMatrix a = g * h;
  return log_det_i_plus(alpha * alpha * power / m, a);
}

/// Noise-inflated lower bound: same system at the reduced power
/// P' = P / (c log2 P + 1).
inline double mutual_info_af_lower(const ComplexMatrix& h, const ComplexMatrix& g,
                                   double power, int m, double alpha, double c) {
  if (power <= 1.0) {
    throw std::domain_error("mutual_info_af_lower: requires P > 1");
  }
  if (c <= 0.0) throw std::invalid_argument("mutual_info_af_lower: c must be positive");
  if (g.cols() != h.rows()) {
    throw std::invalid_argument("mutual_info_af_lower: dimension mismatch");
  }
  ComplexMatrix a = g * h;
  double p_eff = power / (c * std::log2(power) + 1.0);
  return log_det_i_plus(alpha * alpha * p_eff / m, a);
}

/// Per-slot end-to-end matrices A_l = G Theta_l H of the sequential
/// two-hop scheme; with_unitary = false freezes Theta_l = I (the
/// traditional-AF degenerate variant).
inline std::vector<ComplexMatrix> build_rs_two_hop_blocks(const ComplexMatrix& h,
                                                          const ComplexMatrix& g,
                                                          int slots, Rng& rng,
                                                          bool with_unitary = true) {
  if (slots < 1) throw std::invalid_argument("build_rs_two_hop_blocks: L must be >= 1");
  if (g.cols() != h.rows()) {
    throw std::invalid_argument("build_rs_two_hop_blocks: dimension mismatch");
  }
  int p = static_cast<int>(h.rows());
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(slots));
  for (int l = 0; l < slots; ++l) {
    if (with_unitary) {
      blocks.push_back(g * sample_haar_unitary(p, rng) * h);
    } else {
      blocks.push_back(g * h);
    }
  }
  return blocks;
}

/// Per-slot mutual information of the block-diagonal sequential system:
/// (1/L) sum_l log2 |I + alpha^2 (P/m) A_l A_l^H|. Outage at rate r and
/// SNR P is the event per-slot MI < r log2 P.
inline double mutual_info_rs(const std::vector<ComplexMatrix>& blocks, double power, int m,
                             double alpha) {
  if (blocks.empty()) throw std::invalid_argument("mutual_info_rs: no blocks");
  double total = 0.0;
  for (const ComplexMatrix& a : blocks) {
    if (a.rows() != blocks.front().rows() || a.cols() != blocks.front().cols()) {
      throw std::invalid_argument("mutual_info_rs: inconsistent block dimensions");
    }
    total += log_det_i_plus(alpha * alpha * power / m, a);
  }
  return total / static_cast<double>(blocks.size());
}

/// One end-to-end block of the multi-hop chain: G_h Theta_{h-1} ... Theta_1 G_1
/// with a fresh Haar unitary between consecutive hops.
inline ComplexMatrix build_multihop_block(const std::vector<ComplexMatrix>& hop_channels,
                                          Rng& rng, bool with_unitary = true) {
  if (hop_channels.empty()) {
    throw std::invalid_argument("build_multihop_block: no hop channels");
  }
  ComplexMatrix acc = hop_channels.front();
  for (std::size_t j = 1; j < hop_channels.size(); ++j) {
    const ComplexMatrix& next = hop_channels[j];
    if (next.cols() != acc.rows()) {
      throw std::invalid_argument("build_multihop_block: dimension mismatch");
    }
    if (with_unitary) {
      acc = next * sample_haar_unitary(static_cast<int>(acc.rows()), rng) * acc;
    } else {
      acc = next * acc;
    }
  }
  return acc;
}

/// Round-robin schedule of the sequential scheme over K parallel relays:
/// L = BK paths, S = L + 1 slots, path i served by relay ((i-1) mod K) + 1,
/// hop j of path i transmitted in slot i + j - 1.
struct RsSchedule {
  int relay_count = 1;  // K
  long long rounds = 1; // B

  long long path_count() const { return rounds * relay_count; }    // L
  long long slot_count() const { return path_count() + 1; }        // S
  int relay_for_path(long long i) const {                          // i in 1..L
    return static_cast<int>((i - 1) % relay_count) + 1;
  }
  long long slot_of_hop(long long i, int j) const { return i + j - 1; }

  void validate() const {
    if (relay_count < 1 || rounds < 1) {
      throw std::invalid_argument("RsSchedule: K and B must be >= 1");
    }
  }
};

/// Per-slot mutual information of the diagonal-block lower-bound system for
/// the parallel relay network: each path contributes
/// log2 |I + alpha_k^2 (P/m) A_{k,b} A_{k,b}^H| with A_{k,b} = G_k Theta H_k,
/// normalized by the S = L + 1 slot count.
inline double mutual_info_rs_parallel(const std::vector<ComplexMatrix>& h_list,
                                      const std::vector<ComplexMatrix>& g_list,
                                      const RsSchedule& schedule, double power, int m,
                                      const std::vector<double>& alpha_list, Rng& rng,
                                      bool with_unitary = true) {
  schedule.validate();
  const auto k_count = static_cast<std::size_t>(schedule.relay_count);
  if (h_list.size() != k_count || g_list.size() != k_count || alpha_list.size() != k_count) {
    throw std::invalid_argument("mutual_info_rs_parallel: list sizes must equal K");
  }
  double total = 0.0;
  const long long paths = schedule.path_count();
  for (long long i = 1; i <= paths; ++i) {
    const std::size_t k = static_cast<std::size_t>(schedule.relay_for_path(i) - 1);
    const ComplexMatrix& h = h_list[k];
    const ComplexMatrix& g = g_list[k];
    if (g.cols() != h.rows()) {
      throw std::invalid_argument("mutual_info_rs_parallel: dimension mismatch");
    }
    ComplexMatrix a;
    if (with_unitary) {
      a = g * sample_haar_unitary(static_cast<int>(h.rows()), rng) * h;
    } else {
      a = g * h;
    }
    double alpha = alpha_list[k];
    total += log_det_i_plus(alpha * alpha * power / m, a);
  }
  return total / static_cast<double>(schedule.slot_count());
}

/// Per-slot mutual information of the half-duplex single-relay scheme over
/// B two-slot blocks. Each block has the 2n x 2m lower-triangular signal
/// matrix [[F, 0], [alpha G Theta_b H, F]] and noise covariance
/// diag(I, I + alpha^2 G G^H); Theta_b cancels in the covariance.
/// with_unitary = false fixes Theta_b = I (the baseline scheme).
inline double mutual_info_modified_naf(const ComplexMatrix& f, const ComplexMatrix& h,
                                       const ComplexMatrix& g, int blocks, double power,
                                       int m, double alpha, Rng& rng,
                                       bool with_unitary = true) {
  if (blocks < 1) throw std::invalid_argument("mutual_info_modified_naf: B must be >= 1");
  const auto n = f.rows();
  const auto mm = f.cols();
  if (h.cols() != mm || g.rows() != n || g.cols() != h.rows()) {
    throw std::invalid_argument("mutual_info_modified_naf: dimension mismatch");
  }
  ComplexMatrix noise = ComplexMatrix::Zero(2 * n, 2 * n);
  noise.topLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
  noise.bottomRightCorner(n, n) = ComplexMatrix::Identity(n, n);
  noise.bottomRightCorner(n, n).noalias() += (alpha * alpha) * g * g.adjoint();
  double total = 0.0;
  for (int b = 0; b < blocks; ++b) {
    ComplexMatrix relay_path;
    if (with_unitary) {
      relay_path = alpha * g * sample_haar_unitary(static_cast<int>(h.rows()), rng) * h;
    } else {
      relay_path = alpha * g * h;
    }
    ComplexMatrix sig = ComplexMatrix::Zero(2 * n, 2 * mm);
    sig.topLeftCorner(n, mm) = f;
    sig.bottomLeftCorner(n, mm) = relay_path;
    sig.bottomRightCorner(n, mm) = f;
    total += log_det_i_plus(power / m, sig, &noise);
  }
  return total / (2.0 * blocks);
}

}  // namespace relaydmt
