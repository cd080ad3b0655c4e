#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relaydmt/dmt.hpp"
#include "relaydmt/matrix_rand.hpp"

using namespace relaydmt;

namespace {

// independent oracle: brute-force the min-sum objective on a dense nu grid
double min_sum_oracle(const DmtCurve& c1, const DmtCurve& c2, double r, double step) {
  double lo = std::max(0.0, 2.0 * r - c2.r_max());
  double hi = std::min(2.0 * r, c1.r_max());
  double best = 1e300;
  for (double nu = lo; nu <= hi + step / 2; nu += step) {
    double x = std::min(nu, hi);
    best = std::min(best, c1.eval_clamped(x) + c2.eval_clamped(2.0 * r - x));
  }
  return best;
}

DmtCurve random_curve(Rng& rng) {
  int kmax = 1 + static_cast<int>(rng.next_u64() % 4);
  // random convex decreasing vertex chain on integer abscissae
  std::vector<double> slopes;
  for (int k = 0; k < kmax; ++k) {
    slopes.push_back(1.0 + static_cast<double>(rng.next_u64() % 8));
  }
  std::sort(slopes.begin(), slopes.end(), std::greater<>());
  double d = 0.0;
  for (double s : slopes) d += s;
  std::vector<std::pair<double, double>> v;
  double r = 0.0;
  v.emplace_back(r, d);
  for (double s : slopes) {
    r += 1.0;
    d -= s;
    v.emplace_back(r, d);
  }
  return make_dmt_curve(std::move(v));
}

}  // namespace

TEST_CASE("point-to-point vertices follow the (k,(m-k)(n-k)) rule") {
  DmtCurve c = dmt_point_to_point(2, 2);
  REQUIRE(c.vertices ==
          std::vector<std::pair<double, double>>{{0, 4}, {1, 1}, {2, 0}});
  DmtCurve s = dmt_point_to_point(1, 1);
  REQUIRE(s.vertices == std::vector<std::pair<double, double>>{{0, 1}, {1, 0}});
  DmtCurve t = dmt_point_to_point(3, 3);
  REQUIRE(t.vertices ==
          std::vector<std::pair<double, double>>{{0, 9}, {1, 4}, {2, 1}, {3, 0}});
}

TEST_CASE("point-to-point vertices for all m,n <= 6") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= 6; ++n) {
      DmtCurve c = dmt_point_to_point(m, n);
      int kmax = std::min(m, n);
      REQUIRE(static_cast<int>(c.vertices.size()) == kmax + 1);
      for (int k = 0; k <= kmax; ++k) {
        REQUIRE(c.vertices[static_cast<std::size_t>(k)].first == static_cast<double>(k));
        REQUIRE(c.vertices[static_cast<std::size_t>(k)].second ==
                static_cast<double>((m - k) * (n - k)));
      }
    }
  }
}

TEST_CASE("curve evaluation interpolates linearly") {
  DmtCurve c22 = dmt_point_to_point(2, 2);
  REQUIRE(c22.eval(0.5) == Catch::Approx(2.5));
  REQUIRE(c22.eval(0.0) == Catch::Approx(4.0));
  DmtCurve c33 = dmt_point_to_point(3, 3);
  REQUIRE(c33.eval(1.5) == Catch::Approx(2.5));
  REQUIRE_THROWS_AS(c33.eval(3.5), std::domain_error);
  REQUIRE(c33.eval_clamped(5.0) == 0.0);
}

TEST_CASE("curve construction rejects invariant violations") {
  REQUIRE_THROWS_AS(make_dmt_curve({{0.5, 1.0}, {1.0, 0.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(make_dmt_curve({{0.0, 1.0}, {1.0, 0.5}}), std::invalid_argument);
  REQUIRE_THROWS_AS(make_dmt_curve({{0.0, 1.0}, {1.0, 2.0}, {2.0, 0.0}}),
                    std::invalid_argument);
  // concave chain: slopes decrease
  REQUIRE_THROWS_AS(make_dmt_curve({{0.0, 4.0}, {1.0, 3.0}, {2.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("product channel at equal antennas") {
  DmtCurve c = dmt_product(3, 3, 3);
  REQUIRE(c.eval(0.0) == Catch::Approx(7.0));  // 9 - floor(9/2)/2
  REQUIRE(c.eval(3.0) == Catch::Approx(0.0).margin(1e-12));
  // the alternative grouping subtracts the full floor
  DmtCurve alt = dmt_product(3, 3, 3, ProductPenaltyReading::FloorOnly);
  REQUIRE(alt.eval(0.0) == Catch::Approx(5.0));
}

TEST_CASE("product channel penalty vanishes when the antenna gap covers p") {
  DmtCurve c = dmt_product(4, 2, 2);  // delta = 2 = p, penalty always 0
  DmtCurve ref = dmt_point_to_point(2, 2);
  for (double r : {0.0, 0.5, 1.0, 1.7, 2.0}) {
    REQUIRE(c.eval(r) == Catch::Approx(ref.eval(r)));
  }
  REQUIRE_THROWS_AS(dmt_product(1, 2, 3), std::invalid_argument);
}

TEST_CASE("product channel matches point-to-point above p - delta, below at 0") {
  for (int p = 1; p <= 5; ++p) {
    for (int m = p; m <= 5; ++m) {
      for (int n = p; n <= 5; ++n) {
        DmtCurve prod = dmt_product(m, p, n);
        DmtCurve ref = dmt_point_to_point(p, std::min(m, n));
        int delta = std::abs(m - n);
        double threshold = std::max(0, p - delta);
        for (double r = 0.0; r <= p + 1e-9; r += 0.125) {
          double a = prod.eval_clamped(r);
          double b = ref.eval_clamped(r);
          REQUIRE(a <= b + 1e-12);
          if (r >= threshold) REQUIRE(a == Catch::Approx(b).margin(1e-12));
        }
        // the floor erases the penalty unless p - delta is at least 2
        if (threshold >= 2) REQUIRE(prod.eval(0.0) < ref.eval(0.0));
      }
    }
  }
}

TEST_CASE("min-sum matches hand values for twin 3x3 curves") {
  DmtCurve c = dmt_point_to_point(3, 3);
  REQUIRE(dmt_min_sum(c, c, 0.0) == Catch::Approx(18.0));
  REQUIRE(dmt_min_sum(c, c, 1.0) == Catch::Approx(8.0));
  REQUIRE(dmt_min_sum(c, c, 3.0) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("min-sum agrees with a dense-grid oracle on random curve pairs") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    DmtCurve c1 = random_curve(rng);
    DmtCurve c2 = random_curve(rng);
    double r_end = 0.5 * (c1.r_max() + c2.r_max());
    for (double frac : {0.0, 0.21, 0.5, 0.77, 1.0}) {
      double r = frac * r_end;
      double exact = dmt_min_sum(c1, c2, r);
      double oracle = min_sum_oracle(c1, c2, r, 1e-3);
      REQUIRE(exact <= oracle + 1e-9);
      REQUIRE(exact >= oracle - 5e-3);  // grid resolution slack
    }
  }
}

TEST_CASE("min-sum curve reproduces pointwise min-sum values") {
  DmtCurve c = dmt_point_to_point(3, 3);
  DmtCurve ms = dmt_min_sum_curve(c, c);
  for (double r = 0.0; r <= 3.0; r += 0.05) {
    REQUIRE(ms.eval(r) == Catch::Approx(dmt_min_sum(c, c, r)).margin(1e-9));
  }
  REQUIRE(ms.eval(0.5) == Catch::Approx(13.0));
}

TEST_CASE("parallel relay curve: infinite-round limit and finite rounds") {
  RsParallelDmt inf = dmt_rs_parallel(1, 1, 1, 2, 0);
  REQUIRE(inf.curve.vertices ==
          std::vector<std::pair<double, double>>{{0, 2}, {1, 0}});
  REQUIRE(inf.hypothesis_met);

  RsParallelDmt b1 = dmt_rs_parallel(1, 1, 1, 2, 1);
  REQUIRE(b1.curve.eval(0.0) == Catch::Approx(2.0));
  REQUIRE(b1.curve.r_max() == Catch::Approx(2.0 / 3.0));
  REQUIRE(b1.curve.eval(0.5) == Catch::Approx(2.0 * (1.0 - 1.5 * 0.5)));
  REQUIRE(b1.hypothesis_met);  // 1 >= min^2 * max = 1

  RsParallelDmt big = dmt_rs_parallel(3, 3, 3, 2, 4);
  REQUIRE_FALSE(big.hypothesis_met);  // needs B >= 27
  REQUIRE(big.curve.eval(0.0) == Catch::Approx(2.0 * 9.0));
}

TEST_CASE("parallel relay curve is monotone in rounds toward the limit") {
  DmtCurve limit = dmt_rs_parallel(2, 2, 2, 3, 0).curve;
  double prev_at_half = -1.0;
  for (long long b : {1, 2, 4, 8, 16, 64, 1024}) {
    DmtCurve c = dmt_rs_parallel(2, 2, 2, 3, b).curve;
    double v = c.eval_clamped(0.5);
    REQUIRE(v <= limit.eval_clamped(0.5) + 1e-12);
    REQUIRE(v >= prev_at_half - 1e-12);
    prev_at_half = v;
  }
  REQUIRE(prev_at_half == Catch::Approx(limit.eval_clamped(0.5)).margin(1e-2));
}

TEST_CASE("modified NAF curve values") {
  DmtCurve c = dmt_modified_naf(3, 3, 3);
  REQUIRE(c.eval(0.0) == Catch::Approx(18.0));
  REQUIRE(c.eval(1.5) == Catch::Approx(2.5));
  DmtCurve s = dmt_modified_naf(1, 1, 1);
  REQUIRE(s.eval(0.25) == Catch::Approx(1.25));
}

TEST_CASE("NAF baseline values and ordering against modified NAF") {
  DmtCurve naf = dmt_naf_baseline(3, 3, 3);
  REQUIRE(naf.eval(0.0) == Catch::Approx(16.0));
  DmtCurve d33 = dmt_point_to_point(3, 3);
  for (double r = 1.5; r <= 3.0; r += 0.25) {
    REQUIRE(naf.eval(r) == Catch::Approx(d33.eval(r)).margin(1e-12));
  }
  DmtCurve scalar = dmt_naf_baseline(1, 1, 1);
  REQUIRE(scalar.eval(0.0) == Catch::Approx(2.0));

  DmtCurve mnaf = dmt_modified_naf(3, 3, 3);
  for (double r = 0.0; r <= 3.0; r += 0.1) {
    REQUIRE(mnaf.eval(r) >= naf.eval(r) - 1e-12);
  }
}

TEST_CASE("multi-hop bottleneck search") {
  MultiHopDmt uniform = dmt_multi_hop({2, 2, 2, 2});
  REQUIRE(uniform.condition_met);
  REQUIRE(uniform.l_required == 8);  // N^3
  REQUIRE(uniform.curve.vertices ==
          std::vector<std::pair<double, double>>{{0, 4}, {1, 1}, {2, 0}});

  MultiHopDmt mid = dmt_multi_hop({3, 2, 2, 3});
  REQUIRE(mid.condition_met);
  REQUIRE(mid.bottleneck_hop == 2);
  REQUIRE(mid.curve.vertices == dmt_point_to_point(2, 2).vertices);

  MultiHopDmt bad = dmt_multi_hop({2, 3, 2, 3});
  REQUIRE_FALSE(bad.condition_met);

  REQUIRE_THROWS_AS(dmt_multi_hop({3}), TopologyError);
}

TEST_CASE("multi-hop path-count sufficiency flag") {
  MultiHopDmt c = dmt_multi_hop({3, 3, 3}, 27);
  REQUIRE(c.l_sufficient);
  MultiHopDmt d = dmt_multi_hop({3, 3, 3}, 26);
  REQUIRE_FALSE(d.l_sufficient);
}

TEST_CASE("general network curve scales the square curve by min-cut weight") {
  NetworkTopology chain;
  chain.node_count = 3;
  chain.antennas = {2, 2, 2};
  chain.edges = {{0, 1}, {1, 2}};
  DmtCurve c = dmt_general_network(chain);
  REQUIRE(c.vertices == dmt_point_to_point(2, 2).vertices);

  NetworkTopology single;
  single.node_count = 2;
  single.antennas = {1, 1};
  single.edges = {{0, 1}};
  REQUIRE(dmt_general_network(single).vertices == dmt_point_to_point(1, 1).vertices);

  NetworkTopology mixed = chain;
  mixed.antennas = {2, 3, 2};
  REQUIRE_THROWS_AS(dmt_general_network(mixed), std::invalid_argument);
}

TEST_CASE("general network with min-cut 8 doubles the 2x2 curve") {
  // two relay chains in parallel: cut weight 8 everywhere
  NetworkTopology t;
  t.node_count = 4;
  t.antennas = {2, 2, 2, 2};
  t.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  REQUIRE(min_cut_weight(t) == 8);
  DmtCurve c = dmt_general_network(t);
  REQUIRE(c.vertices ==
          std::vector<std::pair<double, double>>{{0, 8}, {1, 2}, {2, 0}});
}

TEST_CASE("cut-set upper bound on simple topologies") {
  NetworkTopology chain;
  chain.node_count = 3;
  chain.antennas = {2, 2, 2};
  chain.edges = {{0, 1}, {1, 2}};
  REQUIRE(dmt_upper_bound_general(chain).vertices == dmt_point_to_point(2, 2).vertices);

  NetworkTopology single;
  single.node_count = 2;
  single.antennas = {1, 1};
  single.edges = {{0, 1}};
  REQUIRE(dmt_upper_bound_general(single).vertices == dmt_point_to_point(1, 1).vertices);
}

TEST_CASE("achievable general-network curve never exceeds the cut-set bound") {
  NetworkTopology t;
  t.node_count = 4;
  t.antennas = {2, 2, 2, 2};
  t.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  DmtCurve lo = dmt_general_network(t);
  DmtCurve hi = dmt_upper_bound_general(t);
  for (double r = 0.0; r <= 2.0; r += 0.05) {
    REQUIRE(lo.eval_clamped(r) <= hi.eval_clamped(r) + 1e-12);
  }
  REQUIRE(lo.eval(0.0) == Catch::Approx(hi.eval(0.0)));
  REQUIRE(lo.eval_clamped(2.0) == Catch::Approx(hi.eval_clamped(2.0)).margin(1e-12));
}

TEST_CASE("pointwise minimum of convex curves stays convex and below inputs") {
  DmtCurve a = dmt_point_to_point(3, 2);
  DmtCurve b = dmt_point_to_point(2, 4);
  DmtCurve m = dmt_pointwise_min({a, b});
  for (double r = 0.0; r <= m.r_max(); r += 0.05) {
    REQUIRE(m.eval(r) <= a.eval_clamped(r) + 1e-9);
    REQUIRE(m.eval(r) <= b.eval_clamped(r) + 1e-9);
  }
}
