#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relaydmt/verify.hpp"

using namespace relaydmt;

TEST_CASE("eigenvalue exponents and reverse ordering") {
  std::vector<double> eigs{100.0, 1.0, 0.01};
  auto gammas = eigenvalue_exponents(eigs, 10.0);
  REQUIRE(gammas[0] == Catch::Approx(-2.0));
  REQUIRE(gammas[1] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(gammas[2] == Catch::Approx(2.0));
  auto chis = reverse_tail_exponents(gammas, 2);
  REQUIRE(chis[0] == Catch::Approx(2.0));
  REQUIRE(chis[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("composite eigenvalue bound holds with equality at identity") {
  ComplexMatrix eye = ComplexMatrix::Identity(3, 3);
  for (int i = 1; i <= 3; ++i) {
    REQUIRE(check_lemma3(eye, eye, eye, i) == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("composite eigenvalue bound beyond rank has zero right side") {
  Rng rng(5);
  ComplexMatrix h = sample_gaussian_channel(2, 3, rng);
  ComplexMatrix g = sample_gaussian_channel(3, 2, rng);
  ComplexMatrix theta = sample_haar_unitary(2, rng);
  double margin = check_lemma3(g, h, theta, 3);  // beyond min rank 2
  REQUIRE(margin >= -1e-12);
  REQUIRE(margin == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("composite eigenvalue bound rejects a non-unitary rotation") {
  ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  REQUIRE_THROWS_AS(check_lemma3(eye, eye, 2.0 * eye, 1), std::invalid_argument);
}

TEST_CASE("composite eigenvalue bound on random draws") {
  Rng rng(7);
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      for (int p = 1; p <= 3; ++p) {
        for (int i = 1; i <= 3; ++i) {
          for (int s = 0; s < 20; ++s) {
            ComplexMatrix h = sample_gaussian_channel(p, m, rng);
            ComplexMatrix g = sample_gaussian_channel(n, p, rng);
            ComplexMatrix theta = sample_haar_unitary(p, rng);
            double margin = check_lemma3(g, h, theta, i);
            double lhs = detail::eigenvalue_or_zero(ordered_eigenvalues(g * theta * h), i);
            REQUIRE(margin >= -1e-9 * (1.0 + std::abs(lhs)));
          }
        }
      }
    }
  }
}

TEST_CASE("mismatched rotations break the bound (negative control)") {
  Rng rng(11);
  int violations = 0;
  for (int s = 0; s < 500; ++s) {
    ComplexMatrix h = sample_gaussian_channel(3, 3, rng);
    ComplexMatrix g = sample_gaussian_channel(3, 3, rng);
    ComplexMatrix theta = sample_haar_unitary(3, rng);
    double margin = detail::lemma3_margin_pair(g, h, theta.transpose(), theta, 2);
    if (margin < -1e-9) ++violations;
  }
  REQUIRE(violations > 0);
}

TEST_CASE("smallest frame eigenvalue is uniform for i=1, p=2") {
  Rng rng(13);
  std::vector<double> xs = lambda_min_samples(2, 1, 20000, rng);
  double ks = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    // model CDF F(z) = z
    ks = std::max({ks, std::abs(xs[k] - static_cast<double>(k) / xs.size()),
                   std::abs(xs[k] - static_cast<double>(k + 1) / xs.size())});
  }
  REQUIRE(ks < 0.02);
}

TEST_CASE("smallest frame eigenvalue CDF for i=1, p=3 is 1-(1-z)^2") {
  Rng rng(17);
  std::vector<double> xs = lambda_min_samples(3, 1, 20000, rng);
  double ks = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double model = 1.0 - (1.0 - xs[k]) * (1.0 - xs[k]);
    ks = std::max({ks, std::abs(model - static_cast<double>(k) / xs.size()),
                   std::abs(model - static_cast<double>(k + 1) / xs.size())});
  }
  REQUIRE(ks < 0.02);
}

TEST_CASE("frame eigenvalue tail bound for i=2, p=3") {
  Rng rng(19);
  EmpiricalCdf cdf = lambda_min_tail(3, 2, 50000, rng);
  double eta = lambda_min_tail_coefficient(3, 2);
  REQUIRE(eta == Catch::Approx(2.0 * 1.5 * 2.0));  // i(p-(i+1)/2) sqrt(kappa), kappa=4
  for (std::size_t k = 0; k < cdf.grid.size(); ++k) {
    REQUIRE(cdf.cdf[k] <= eta * std::sqrt(cdf.grid[k]));
  }
}

TEST_CASE("tail coefficient degenerates to p-1 at i=1") {
  REQUIRE(lambda_min_tail_coefficient(4, 1) == 3.0);
  REQUIRE_THROWS_AS(lambda_min_tail_coefficient(2, 3), std::invalid_argument);
}

TEST_CASE("slot samples sharing frames stay uncorrelated") {
  Rng rng(23);
  auto pairs = lambda_min_pair_samples(3, 2, 20000, rng);
  // Spearman rank correlation
  auto rank = [](std::vector<double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return v[a] < v[b];
    });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  std::vector<double> xs, ys;
  for (const auto& [a, b] : pairs) {
    xs.push_back(a);
    ys.push_back(b);
  }
  auto rx = rank(xs), ry = rank(ys);
  double n = static_cast<double>(rx.size());
  double mean = (n - 1.0) / 2.0;
  double cov = 0.0, var = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    cov += (rx[k] - mean) * (ry[k] - mean);
    var += (rx[k] - mean) * (rx[k] - mean);
  }
  REQUIRE(std::abs(cov / var) < 0.05);
}

TEST_CASE("squared-norm tail stays below its asymptote") {
  Rng rng(29);
  // 1x1 at P=10^4, threshold 10: exact tail e^{-10}
  BoundCheckReport rep = check_chi_square_tail(1, 1, 0.5, 1e4, 200000, rng);
  REQUIRE(rep.pass);
  // threshold beyond machine reach: no exceedances at all
  BoundCheckReport none = check_chi_square_tail(1, 1, 2.0, 1e4, 100000, rng);
  REQUIRE(none.violations == 0);
  REQUIRE(none.pass);
}

TEST_CASE("squared-norm tail matches the gamma closed form for m=2, p=1") {
  Rng rng(31);
  const double x = std::pow(1e3, 0.2);
  const long long samples = 400000;
  long long exceed = 0;
  for (long long s = 0; s < samples; ++s) {
    if (sample_gaussian_channel(1, 2, rng).squaredNorm() > x) ++exceed;
  }
  double truth = (1.0 + x) * std::exp(-x);  // Gamma(2,1) upper tail
  double p_hat = static_cast<double>(exceed) / samples;
  double se = std::sqrt(truth * (1.0 - truth) / samples);
  REQUIRE(std::abs(p_hat - truth) < 3.0 * se);
}

TEST_CASE("relay-gain exponent shrinks along the SNR grid") {
  Rng rng(37);
  BoundCheckReport rep = check_alpha_high_snr(1, 1, {1e2, 1e3, 1e4, 1e5, 1e6}, 20000, rng);
  REQUIRE(rep.violations == 0);
  REQUIRE(rep.pass);
}

TEST_CASE("zero channel gives unit gain and zero exponent") {
  double alpha = alpha_coefficient(ComplexMatrix::Zero(1, 1), 100.0, 1);
  REQUIRE(alpha == 1.0);
  REQUIRE(-2.0 * std::log(alpha) / std::log(100.0) == 0.0);
}

TEST_CASE("mutual-information sandwich holds on conditioned draws") {
  Rng rng(41);
  BoundCheckReport rep = check_mi_sandwich(20000, 1e3, 7.0, {2, 2, 2}, rng);
  REQUIRE(rep.violations == 0);
  REQUIRE(rep.pass);
  REQUIRE(rep.conditioning_failures < rep.samples / 10);
}

TEST_CASE("conditioning failures match the exponential tail for scalars") {
  Rng rng(43);
  BoundCheckReport rep = check_mi_sandwich(200000, 1e3, 1.0, {1, 1, 1}, rng);
  double truth = std::exp(-std::log2(1e3));  // P{Exp(1) > log2 P}
  double p_hat = static_cast<double>(rep.conditioning_failures) / rep.samples;
  double se = std::sqrt(truth * (1.0 - truth) / rep.samples);
  REQUIRE(std::abs(p_hat - truth) < 3.0 * se);
}
