#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracle/oracle.hpp"
#include "support/synthetic.hpp"
#include "tscanon/stats.hpp"

using Catch::Approx;

TEST_CASE("autocorr of a sinusoid at a quarter period") {
  const auto acf = tscanon::autocorr(support::ts(support::sine(1000, 20)), 10);
  CHECK(acf[0] == 1.0);
  CHECK(std::abs(acf[5]) < 0.01);
}

TEST_CASE("autocorr of an alternating series at lag 1") {
  const auto acf = tscanon::autocorr(support::ts(support::alternating(100)), 1);
  CHECK(acf[1] == Approx(-1.0).margin(0.02));
  const auto expected = oracle::acf(support::alternating(100), 1);
  CHECK(acf[1] == Approx(expected[1]).margin(1e-14));
}

TEST_CASE("autocorr lag 0 is exactly one and bounded") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = support::random_series(257, seed);
    const auto acf = tscanon::autocorr(support::ts(x), 256);
    CHECK(acf[0] == 1.0);
    for (double v : acf.values) CHECK(std::abs(v) <= 1.0 + 1e-9);
  }
}

TEST_CASE("direct and FFT autocorrelation agree with the oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = support::random_series(300 + 37 * seed, seed);
    const auto d = tscanon::autocorr_direct(x, x.size() - 1);
    const auto f = tscanon::autocorr_fft(x, x.size() - 1);
    const auto o = oracle::acf(x, x.size() - 1);
    for (std::size_t k = 0; k < x.size(); ++k) {
      CHECK(std::abs(d[k] - f[k]) < 1e-10);
      CHECK(std::abs(d[k] - o[k]) < 1e-12);
    }
  }
}

TEST_CASE("autocorr is affine invariant") {
  const auto x = support::random_series(500, 3);
  auto y = x;
  for (double& v : y) v = 13.0 * v - 4.0;
  const auto a = tscanon::autocorr(support::ts(x), 100);
  const auto b = tscanon::autocorr(support::ts(y), 100);
  for (std::size_t k = 0; k <= 100; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
}

TEST_CASE("autocorr rejects constant series") {
  CHECK_THROWS_AS(tscanon::autocorr(support::ts({2, 2, 2, 2}), 2), tscanon::Error);
}

TEST_CASE("first_zero_ac examples") {
  // The biased estimate at lag 5 is +0.003 from the edge terms, so the first
  // non-positive lag is 6.
  const auto s = support::sine(1000, 20);
  CHECK(tscanon::first_zero_ac(support::ts(s)) == 6);
  CHECK(oracle::first_zero(s) == 6);
  CHECK(tscanon::first_zero_ac(support::ts(support::alternating(50))) == 1);
  int small = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (tscanon::first_zero_ac(support::ts(support::white_noise(10000, seed))) <= 5) ++small;
  }
  CHECK(small >= 95);
}

TEST_CASE("first_zero_ac falls back to length minus one") {
  CHECK(tscanon::first_zero_ac(support::ts({0, 0, 0, 0, 10, 10, 10})) ==
        oracle::first_zero({0, 0, 0, 0, 10, 10, 10}));
}

TEST_CASE("welch_psd on white noise is flat") {
  const auto s = tscanon::welch_psd(support::ts(support::white_noise(10000, 1)));
  const std::size_t per = s.power.size() / 10;
  std::vector<double> coarse;
  for (std::size_t b = 0; b < 10; ++b) {
    double sum = 0.0;
    for (std::size_t k = b * per; k < (b + 1) * per; ++k) sum += s.power[k];
    coarse.push_back(sum);
  }
  const auto [mn, mx] = std::minmax_element(coarse.begin(), coarse.end());
  CHECK(*mx / *mn < 3.0);
}

TEST_CASE("welch_psd peak of a sinusoid") {
  const auto s = tscanon::welch_psd(support::ts(support::sine(2000, 20)));
  const auto k = static_cast<std::size_t>(std::max_element(s.power.begin(), s.power.end()) - s.power.begin());
  CHECK(std::abs(s.frequencies[k] - 2.0 * std::numbers::pi / 20.0) <= s.bin_width() * 1.0001);
}

TEST_CASE("welch_psd grid and power invariants") {
  const auto s = tscanon::welch_psd(support::ts(support::random_series(1000, 2)));
  REQUIRE(s.frequencies.size() == s.power.size());
  CHECK(s.frequencies.front() == 0.0);
  CHECK(s.frequencies.back() == Approx(std::numbers::pi));
  for (std::size_t k = 1; k < s.frequencies.size(); ++k) CHECK(s.frequencies[k] > s.frequencies[k - 1]);
  for (double p : s.power) CHECK(p >= 0.0);
}

TEST_CASE("welch_psd integrates to the variance") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = support::random_series(500 + 10 * seed, seed);
    const auto s = tscanon::welch_psd(support::ts(x));
    double integral = 0.0;
    for (double p : s.power) integral += p * s.bin_width();
    const double var = tscanon::sample_variance(x);
    CHECK(std::abs(integral - var) / var < 0.05);
  }
}

TEST_CASE("welch_psd errors") {
  CHECK_THROWS_AS(tscanon::welch_psd(support::ts(std::vector<double>(32, 1.0))), tscanon::Error);
  CHECK_THROWS_AS(tscanon::welch_psd(support::ts(support::white_noise(15, 0))), tscanon::Error);
}

TEST_CASE("histogram counts and edges") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const auto h = tscanon::histogram(x, 4);
  REQUIRE(h.edges.size() == 5);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 4.0);
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 1, 2});
}

TEST_CASE("quantile_symbolize examples") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  CHECK(tscanon::quantile_symbolize(a, 3) == std::vector<int>{0, 0, 1, 1, 2, 2});
  const std::vector<double> b{1, 2, 3, 1, 2, 3};
  CHECK(tscanon::quantile_symbolize(b, 3) == std::vector<int>{0, 1, 2, 0, 1, 2});
  const std::vector<double> c{1, 1, 2, 2};
  CHECK_THROWS_AS(tscanon::quantile_symbolize(c, 3), tscanon::Error);
}

TEST_CASE("quantile_symbolize on uniform samples is equiprobable") {
  tscanon::Rng rng(5);
  std::vector<double> x(10000);
  for (double& v : x) v = rng.uniform();
  const auto s = tscanon::quantile_symbolize(x, 3);
  std::array<int, 3> counts{};
  for (int v : s) ++counts[static_cast<std::size_t>(v)];
  for (int c : counts) CHECK(std::abs(c / 10000.0 - 1.0 / 3.0) < 0.02);
  CHECK(s == oracle::symbolize(x, 3));
}

TEST_CASE("quantile_symbolize is invariant under increasing transforms") {
  const auto x = support::random_series(400, 9);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i]) * 3.0 + 1.0;
  CHECK(tscanon::quantile_symbolize(x, 3) == tscanon::quantile_symbolize(y, 3));
  CHECK(tscanon::quantile_symbolize(x, 4) == oracle::symbolize(x, 4));
}

TEST_CASE("ols_linfit examples") {
  const std::vector<double> xs{0, 1, 2};
  const std::vector<double> ys{1, 3, 5};
  const auto f = tscanon::ols_linfit(xs, ys);
  CHECK(f.slope == Approx(2.0));
  CHECK(f.intercept == Approx(1.0));
  CHECK(f.rss == Approx(0.0).margin(1e-24));
  const std::vector<double> x2{0, 1};
  const std::vector<double> y2{0, 0};
  const auto g = tscanon::ols_linfit(x2, y2);
  CHECK(g.slope == 0.0);
  CHECK(g.intercept == 0.0);
  CHECK(g.rss == 0.0);
  const std::vector<double> flat{1, 1, 1};
  CHECK_THROWS_AS(tscanon::ols_linfit(flat, ys), tscanon::Error);
}

TEST_CASE("ols_linfit matches normal equations on a random cloud") {
  tscanon::Rng rng(11);
  std::vector<double> xs(100);
  std::vector<double> ys(100);
  for (std::size_t i = 0; i < 100; ++i) {
    xs[i] = rng.uniform() * 10.0;
    ys[i] = 0.7 * xs[i] - 2.0 + rng.normal();
  }
  const auto f = tscanon::ols_linfit(xs, ys);
  const auto o = oracle::fit_line(xs, ys);
  CHECK(std::abs(f.slope - o.slope) < 1e-10);
  CHECK(std::abs(f.intercept - o.intercept) < 1e-10);
  CHECK(std::abs(f.rss - o.rss) < 1e-10 * o.rss);
}

TEST_CASE("normal_sf values") {
  CHECK(tscanon::normal_sf(0.0) == Approx(0.5).margin(1e-15));
  CHECK(std::abs(tscanon::normal_sf(2.0) - 0.022750131948179) < 1e-10);
  CHECK(std::abs(tscanon::normal_sf(-40.0) - 1.0) <= 1e-15);
  for (double z = -8.0; z <= 8.0; z += 0.25) CHECK(std::abs(tscanon::normal_sf(z) - oracle::normal_sf(z)) < 1e-10);
}

TEST_CASE("chi2_sf values") {
  CHECK(tscanon::chi2_sf(0.0, 3) == 1.0);
  CHECK(tscanon::chi2_sf(4.605, 2) == Approx(0.100).margin(0.001));
  CHECK(tscanon::chi2_sf(2.7726, 4) == Approx(0.5966).margin(0.001));
  for (double x = 0.0; x <= 50.0; x += 0.5) {
    CHECK(std::abs(tscanon::chi2_sf(x, 2) - std::exp(-x / 2.0)) < 1e-12);
    CHECK(std::abs(tscanon::chi2_sf(x, 4) - (1.0 + x / 2.0) * std::exp(-x / 2.0)) < 1e-10);
  }
}

TEST_CASE("chi2_sf with 20 degrees of freedom") {
  // Closed form for even dof: exp(-x/2) * sum_{k<10} (x/2)^k / k!
  const double x = 59.91;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 10; ++k) {
    term *= (x / 2.0) / k;
    sum += term;
  }
  CHECK(std::abs(tscanon::chi2_sf(x, 20) - std::exp(-x / 2.0) * sum) < 1e-12);
}
