#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relaydmt/topology.hpp"

namespace relaydmt {

/// Convex decreasing piecewise-linear diversity-multiplexing tradeoff,
/// stored as its vertex list. Vertices are always integers or simple
/// fractions, so double arithmetic on them is exact.
struct DmtCurve {
  std::vector<std::pair<double, double>> vertices;  // (r, d), r strictly increasing

  double r_max() const { return vertices.back().first; }
  double max_diversity() const { return vertices.front().second; }

  /// Piecewise-linear interpolant; r must lie in [0, r_max].
  double eval(double r) const {
    constexpr double kTol = 1e-12;
    if (r < -kTol || r > r_max() + kTol) {
      throw std::domain_error("DmtCurve::eval: r outside [0, r_max]");
    }
    r = std::clamp(r, 0.0, r_max());
    auto it = std::upper_bound(
        vertices.begin(), vertices.end(), r,
        [](double x, const std::pair<double, double>& v) { return x < v.first; });
    if (it == vertices.begin()) return vertices.front().second;
    if (it == vertices.end()) return vertices.back().second;
    const auto& [r1, d1] = *(it - 1);
    const auto& [r2, d2] = *it;
    double t = (r - r1) / (r2 - r1);
    return d1 + t * (d2 - d1);
  }

  /// As eval, but diversity is zero beyond the maximum multiplexing gain.
  double eval_clamped(double r) const {
    if (r > r_max()) return 0.0;
    return eval(r);
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    b.reserve(vertices.size());
    for (const auto& [r, d] : vertices) b.push_back(r);
    return b;
  }
};

namespace detail {

/// Drop repeated abscissae and interior collinear vertices.
inline std::vector<std::pair<double, double>> simplify_vertices(
    std::vector<std::pair<double, double>> v) {
  constexpr double kTol = 1e-12;
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& p : v) {
    if (!out.empty() && std::abs(p.first - out.back().first) < kTol) continue;
    out.push_back(p);
  }
  if (out.size() < 3) return out;
  std::vector<std::pair<double, double>> slim;
  slim.push_back(out[0]);
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    const auto& [xa, ya] = slim.back();
    const auto& [xb, yb] = out[i];
    const auto& [xc, yc] = out[i + 1];
    double cross = (xb - xa) * (yc - ya) - (xc - xa) * (yb - ya);
    double scale = std::max({1.0, std::abs(ya), std::abs(yc)});
    if (std::abs(cross) > 1e-9 * scale) slim.push_back(out[i]);
  }
  slim.push_back(out.back());
  return slim;
}

}  // namespace detail

/// Builds a DmtCurve from raw vertices and checks the type invariants:
/// starts at r = 0, diversity non-increasing and terminally zero, convex.
inline DmtCurve make_dmt_curve(std::vector<std::pair<double, double>> vertices) {
  constexpr double kTol = 1e-9;
  auto v = detail::simplify_vertices(std::move(vertices));
  if (v.size() < 2) throw std::invalid_argument("DmtCurve: need at least two vertices");
  if (std::abs(v.front().first) > kTol) {
    throw std::invalid_argument("DmtCurve: first vertex must be at r = 0");
  }
  if (std::abs(v.back().second) > kTol) {
    throw std::invalid_argument("DmtCurve: last vertex must have d = 0");
  }
  double prev_slope = -1e300;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double dr = v[i].first - v[i - 1].first;
    double dd = v[i].second - v[i - 1].second;
    if (dd > kTol) throw std::invalid_argument("DmtCurve: d must be non-increasing");
    double slope = dd / dr;
    if (slope < prev_slope - kTol) {
      throw std::invalid_argument("DmtCurve: slopes must be non-decreasing (convexity)");
    }
    prev_slope = slope;
  }
  return DmtCurve{std::move(v)};
}

/// Optimum DMT of an m x n point-to-point Rayleigh channel: the
/// piecewise-linear curve through (k, (m-k)(n-k)), k = 0..min(m,n).
inline DmtCurve dmt_point_to_point(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("dmt_point_to_point: antennas must be >= 1");
  std::vector<std::pair<double, double>> v;
  int kmax = std::min(m, n);
  for (int k = 0; k <= kmax; ++k) {
    v.emplace_back(static_cast<double>(k),
                   static_cast<double>(m - k) * static_cast<double>(n - k));
  }
  return make_dmt_curve(std::move(v));
}

/// The transcription of the product-channel penalty term is ambiguous in
/// its source; both readings live here so every dependent computation
/// shares one switch. HalvedFloor is the literal transcription.
enum class ProductPenaltyReading { HalvedFloor, FloorOnly };

/// Penalty subtracted from (p-r)(q-r) in the product-channel DMT.
inline double product_penalty(int p, int delta, double r,
                              ProductPenaltyReading reading = ProductPenaltyReading::HalvedFloor) {
  double x = std::max(0.0, static_cast<double>(p - delta) - r);
  double f = std::floor(x * x / 2.0);
  return reading == ProductPenaltyReading::HalvedFloor ? 0.5 * f : f;
}

/// DMT of the product channel G H of an m -> p -> n two-hop chain
/// (traditional amplify-and-forward); requires m, n >= p.
inline DmtCurve dmt_product(int m, int p, int n,
                            ProductPenaltyReading reading = ProductPenaltyReading::HalvedFloor) {
  if (m < p || n < p) {
    throw std::invalid_argument("dmt_product: requires m >= p and n >= p");
  }
  if (p < 1) throw std::invalid_argument("dmt_product: p must be >= 1");
  int q = std::min(m, n);
  int delta = std::abs(m - n);
  std::vector<std::pair<double, double>> v;
  for (int r = 0; r <= p; ++r) {
    double d = static_cast<double>(p - r) * static_cast<double>(q - r) -
               product_penalty(p, delta, static_cast<double>(r), reading);
    v.emplace_back(static_cast<double>(r), d);
  }
  return make_dmt_curve(std::move(v));
}

/// min over nu of curve1(nu) + curve2(2r - nu). The objective is convex
/// piecewise-linear in nu, so scanning breakpoints and interval endpoints
/// is exact.
inline double dmt_min_sum(const DmtCurve& c1, const DmtCurve& c2, double r) {
  constexpr double kTol = 1e-12;
  double lo = std::max(0.0, 2.0 * r - c2.r_max());
  double hi = std::min(2.0 * r, c1.r_max());
  if (lo > hi + kTol) {
    throw std::domain_error("dmt_min_sum: empty feasible interval");
  }
  hi = std::max(lo, hi);
  std::vector<double> candidates{lo, hi};
  for (double b : c1.breakpoints()) {
    if (b > lo && b < hi) candidates.push_back(b);
  }
  for (double b : c2.breakpoints()) {
    double nu = 2.0 * r - b;
    if (nu > lo && nu < hi) candidates.push_back(nu);
  }
  double best = 1e300;
  for (double nu : candidates) {
    double val = c1.eval_clamped(nu) + c2.eval_clamped(2.0 * r - nu);
    best = std::min(best, val);
  }
  return best;
}

/// The min-sum of two curves as a curve in r. Breakpoints of this infimal
/// convolution lie on pairwise sums of the component breakpoints.
inline DmtCurve dmt_min_sum_curve(const DmtCurve& c1, const DmtCurve& c2) {
  std::vector<std::pair<double, double>> v;
  double r_end = 0.5 * (c1.r_max() + c2.r_max());
  for (double b1 : c1.breakpoints()) {
    for (double b2 : c2.breakpoints()) {
      double r = 0.5 * (b1 + b2);
      if (r <= r_end) v.emplace_back(r, dmt_min_sum(c1, c2, r));
    }
  }
  v.emplace_back(0.0, dmt_min_sum(c1, c2, 0.0));
  v.emplace_back(r_end, dmt_min_sum(c1, c2, r_end));
  return make_dmt_curve(std::move(v));
}

/// d(r) = c1(s1 * r) + c2(s2 * r) with clamped evaluation of each term.
inline DmtCurve curve_sum_scaled(const DmtCurve& c1, double s1, const DmtCurve& c2,
                                 double s2) {
  double r_end = std::max(c1.r_max() / s1, c2.r_max() / s2);
  std::vector<double> breaks{0.0, r_end};
  for (double b : c1.breakpoints()) {
    double r = b / s1;
    if (r < r_end) breaks.push_back(r);
  }
  for (double b : c2.breakpoints()) {
    double r = b / s2;
    if (r < r_end) breaks.push_back(r);
  }
  std::vector<std::pair<double, double>> v;
  for (double r : breaks) {
    v.emplace_back(r, c1.eval_clamped(s1 * r) + c2.eval_clamped(s2 * r));
  }
  return make_dmt_curve(std::move(v));
}

namespace detail {

/// Pointwise minimum of clamped curves on [0, max r_max], as raw vertices
/// (possibly non-convex).
inline std::vector<std::pair<double, double>> pointwise_min_vertices(
    const std::vector<DmtCurve>& curves) {
  double r_end = 0.0;
  for (const DmtCurve& c : curves) r_end = std::max(r_end, c.r_max());
  std::vector<double> breaks{0.0, r_end};
  for (const DmtCurve& c : curves) {
    for (double b : c.breakpoints()) {
      if (b > 0.0 && b < r_end) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  auto value = [&](double r) {
    double m = 1e300;
    for (const DmtCurve& c : curves) m = std::min(m, c.eval_clamped(r));
    return m;
  };
  // Add crossings of curve pairs inside each linear piece.
  std::vector<double> rs = breaks;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (b - a < 1e-12) continue;
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      for (std::size_t cj = ci + 1; cj < curves.size(); ++cj) {
        double fa = curves[ci].eval_clamped(a) - curves[cj].eval_clamped(a);
        double fb = curves[ci].eval_clamped(b) - curves[cj].eval_clamped(b);
        if (fa * fb < 0.0) {
          double t = fa / (fa - fb);
          rs.push_back(a + t * (b - a));
        }
      }
    }
  }
  std::sort(rs.begin(), rs.end());
  std::vector<std::pair<double, double>> v;
  for (double r : rs) v.emplace_back(r, value(r));
  return v;
}

/// Lower convex envelope (lower hull of the graph vertices).
inline std::vector<std::pair<double, double>> lower_convex_envelope(
    std::vector<std::pair<double, double>> pts) {
  pts = simplify_vertices(std::move(pts));
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      double cross = (b.first - a.first) * (p.second - a.second) -
                     (p.first - a.first) * (b.second - a.second);
      if (cross < 1e-12) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

}  // namespace detail

/// Pointwise minimum of convex curves, convexified by its lower envelope
/// so the DmtCurve invariants hold. The envelope coincides with the raw
/// minimum whenever that minimum is already convex.
inline DmtCurve dmt_pointwise_min(const std::vector<DmtCurve>& curves) {
  if (curves.empty()) throw std::invalid_argument("dmt_pointwise_min: no curves");
  auto v = detail::pointwise_min_vertices(curves);
  return make_dmt_curve(detail::lower_convex_envelope(std::move(v)));
}

struct RsParallelDmt {
  DmtCurve curve;
  bool hypothesis_met = true;  // finite B satisfies B >= min^2(p,q) max(p,q)
};

/// Achievable DMT of the sequential scheme over K parallel p-antenna
/// relays: K * d_{p x q}((1 + 1/(BK)) r), with q = min(m, n).
/// B = 0 encodes the B -> infinity limit K * d_{p x q}(r).
inline RsParallelDmt dmt_rs_parallel(int m, int n, int p, int relays, long long rounds) {
  if (relays < 1) throw std::invalid_argument("dmt_rs_parallel: K must be >= 1");
  if (m < 1 || n < 1 || p < 1) {
    throw std::invalid_argument("dmt_rs_parallel: antennas must be >= 1");
  }
  int q = std::min(m, n);
  int a = std::min(p, q), b = std::max(p, q);
  long long required = static_cast<long long>(a) * a * b;
  RsParallelDmt out;
  out.hypothesis_met = (rounds == 0) || (rounds >= required);
  double stretch =
      rounds == 0 ? 1.0
                  : 1.0 + 1.0 / (static_cast<double>(rounds) * static_cast<double>(relays));
  std::vector<std::pair<double, double>> v;
  for (int k = 0; k <= a; ++k) {
    v.emplace_back(static_cast<double>(k) / stretch,
                   static_cast<double>(relays) * static_cast<double>(p - k) *
                       static_cast<double>(q - k));
  }
  out.curve = make_dmt_curve(std::move(v));
  return out;
}

/// Achievable DMT of the half-duplex single-relay scheme with per-block
/// random unitaries at the relay: d_{m x n}(r) + d_{p x q}(2r).
inline DmtCurve dmt_modified_naf(int m, int n, int p) {
  int q = std::min(m, n);
  return curve_sum_scaled(dmt_point_to_point(m, n), 1.0, dmt_point_to_point(p, q), 2.0);
}

/// Baseline non-orthogonal AF achievable DMT: d_{m x n}(r) + d_{GH}(2r),
/// the second term being the product-channel curve.
inline DmtCurve dmt_naf_baseline(int m, int n, int p,
                                 ProductPenaltyReading reading = ProductPenaltyReading::HalvedFloor) {
  return curve_sum_scaled(dmt_point_to_point(m, n), 1.0, dmt_product(m, p, n, reading), 2.0);
}

struct MultiHopDmt {
  DmtCurve curve;
  int bottleneck_hop = 0;     // 1-based hop index m, 0 when no hop qualifies
  bool condition_met = false;
  long long l_required = 0;   // min^2 * max of the bottleneck pair
  bool l_sufficient = false;  // supplied path count reaches l_required
};

/// Single-relay-per-hop chain with antenna counts N_0..N_h. Searches for a
/// hop m whose antenna pair is dominated by every other node; if found the
/// optimum DMT is the point-to-point curve of that pair. Otherwise only
/// the per-hop cut-set minimum is returned, flagged as an upper bound.
inline MultiHopDmt dmt_multi_hop(const std::vector<int>& antennas, long long paths = 0) {
  if (antennas.size() < 2) {
    throw TopologyError("dmt_multi_hop: need at least source and destination");
  }
  for (int n : antennas) {
    if (n < 1) throw std::invalid_argument("dmt_multi_hop: antennas must be >= 1");
  }
  const int h = static_cast<int>(antennas.size()) - 1;
  MultiHopDmt out;
  for (int m = 1; m <= h; ++m) {
    int pair_max = std::max(antennas[static_cast<std::size_t>(m)],
                            antennas[static_cast<std::size_t>(m - 1)]);
    int rest_min = 1 << 30;
    for (int i = 0; i <= h; ++i) {
      if (i == m || i == m - 1) continue;
      rest_min = std::min(rest_min, antennas[static_cast<std::size_t>(i)]);
    }
    bool ok = (rest_min == (1 << 30)) || pair_max <= rest_min;
    if (ok) {
      int a = antennas[static_cast<std::size_t>(m)];
      int b = antennas[static_cast<std::size_t>(m - 1)];
      out.bottleneck_hop = m;
      out.condition_met = true;
      int lo = std::min(a, b), hi = std::max(a, b);
      out.l_required = static_cast<long long>(lo) * lo * hi;
      out.l_sufficient = paths >= out.l_required;
      out.curve = dmt_point_to_point(a, b);
      return out;
    }
  }
  std::vector<DmtCurve> hops;
  for (int j = 1; j <= h; ++j) {
    hops.push_back(dmt_point_to_point(antennas[static_cast<std::size_t>(j)],
                                      antennas[static_cast<std::size_t>(j - 1)]));
  }
  out.curve = dmt_pointwise_min(hops);  // cut-set upper bound only
  return out;
}

/// Achievable DMT of the sequential scheme on a uniform-antenna DAG:
/// (min-cut weight / N^2) * d_{N x N}(r).
inline DmtCurve dmt_general_network(const NetworkTopology& t) {
  validate(t);
  int n_ant = t.antennas.front();
  for (int a : t.antennas) {
    if (a != n_ant) {
      throw std::invalid_argument("dmt_general_network: antenna counts must be uniform");
    }
  }
  double scale = static_cast<double>(min_cut_weight(t)) /
                 (static_cast<double>(n_ant) * static_cast<double>(n_ant));
  std::vector<std::pair<double, double>> v;
  for (int k = 0; k <= n_ant; ++k) {
    v.emplace_back(static_cast<double>(k),
                   scale * static_cast<double>(n_ant - k) * static_cast<double>(n_ant - k));
  }
  return make_dmt_curve(std::move(v));
}

/// Cut-set DMT upper bound: per cut, aggregate the transmit antennas on the
/// source side and the receive antennas on the sink side of crossing edges
/// into an equivalent point-to-point curve, then take the minimum over cuts.
inline DmtCurve dmt_upper_bound_general(const NetworkTopology& t) {
  validate(t);
  std::vector<DmtCurve> per_cut;
  for (const CutSet& cut : enumerate_cuts(t)) {
    std::vector<char> in_s(static_cast<std::size_t>(t.node_count), 0);
    for (int v : cut.members) in_s[static_cast<std::size_t>(v)] = 1;
    std::vector<char> tx(static_cast<std::size_t>(t.node_count), 0);
    std::vector<char> rx(static_cast<std::size_t>(t.node_count), 0);
    for (const auto& [a, b] : t.edges) {
      if (in_s[static_cast<std::size_t>(a)] && !in_s[static_cast<std::size_t>(b)]) {
        tx[static_cast<std::size_t>(a)] = 1;
        rx[static_cast<std::size_t>(b)] = 1;
      }
    }
    int m = 0, n = 0;
    for (int v = 0; v < t.node_count; ++v) {
      if (tx[static_cast<std::size_t>(v)]) m += t.antennas[static_cast<std::size_t>(v)];
      if (rx[static_cast<std::size_t>(v)]) n += t.antennas[static_cast<std::size_t>(v)];
    }
    if (m == 0 || n == 0) continue;  // cannot happen for a valid topology
    per_cut.push_back(dmt_point_to_point(m, n));
  }
  if (per_cut.empty()) throw TopologyError("dmt_upper_bound_general: no crossing cut");
  return dmt_pointwise_min(per_cut);
}

}  // namespace relaydmt
