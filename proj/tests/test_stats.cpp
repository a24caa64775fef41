#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "recoil/errors.hpp"
#include "recoil/rng.hpp"
#include "recoil/stats.hpp"

using namespace recoil;

namespace {

std::vector<Quantity> white_noise_series(int n, double mu, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Quantity> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.emplace_back(mu + sigma * rng.normal(), sigma, "m^2 s^-1");
  return v;
}

}  // namespace

TEST_CASE("constant series: zero chi2, undefined acf") {
  std::vector<Quantity> v(5, Quantity(3.0, 0.1, "Hz"));
  auto s = series_stats(v, 2);
  CHECK(s.chi2_per_dof == 0.0);
  CHECK_FALSE(s.acf_defined);
  CHECK(s.acf.empty());
  CHECK(s.mean.value == 3.0);
}

TEST_CASE("alternating series: acf(1) near -1") {
  std::vector<Quantity> v;
  for (int i = 0; i < 50; ++i) v.emplace_back(i % 2 ? 1.0 : -1.0, 1.0, "1");
  auto s = series_stats(v, 3);
  REQUIRE(s.acf_defined);
  CHECK(s.acf[0].second == 1.0);
  CHECK(s.acf[1].second == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("weighted mean and its uncertainty") {
  std::vector<Quantity> v{Quantity(1.0, 1.0, "Hz"), Quantity(3.0, 1.0, "Hz")};
  auto s = series_stats(v, 1);
  CHECK(s.mean.value == doctest::Approx(2.0));
  CHECK(s.mean.sigma == doctest::Approx(1.0 / std::sqrt(2.0)));

  // unequal weights pull toward the tighter value
  std::vector<Quantity> u{Quantity(1.0, 0.1, "Hz"), Quantity(3.0, 1.0, "Hz")};
  auto t = series_stats(u, 1);
  CHECK(t.mean.value < 1.1);
}

TEST_CASE("sigma bands are 1/sqrt(n) and 2/sqrt(n)") {
  auto v = white_noise_series(170, 0.0, 1.0, 5);
  auto s = series_stats(v, 10);
  CHECK(s.one_sigma_band == doctest::Approx(1.0 / std::sqrt(170.0)));
  CHECK(s.two_sigma_band == doctest::Approx(2.0 / std::sqrt(170.0)));
  CHECK(s.n == 170);
}

TEST_CASE("white-noise oracle: chi2/(n-1) near 1 and acf inside the bands") {
  auto v = white_noise_series(170, 4.59e-9, 2e-17, 12345);
  auto s = series_stats(v, 20);
  CHECK(s.chi2_per_dof > 0.7);
  CHECK(s.chi2_per_dof < 1.3);
  int inside = 0;
  for (int lag = 1; lag <= 20; ++lag)
    if (std::fabs(s.acf[lag].second) < s.two_sigma_band) ++inside;
  CHECK(inside >= 17);  // ~95% expected, 20 lags
}

TEST_CASE("acf(0) is exactly 1 and the acf is reversal symmetric") {
  auto v = white_noise_series(64, 1.0, 0.2, 99);
  auto s = series_stats(v, 15);
  CHECK(s.acf[0].second == 1.0);

  auto r = v;
  std::reverse(r.begin(), r.end());
  auto sr = series_stats(r, 15);
  for (int lag = 0; lag <= 15; ++lag)
    CHECK(s.acf[lag].second == doctest::Approx(sr.acf[lag].second).epsilon(1e-12));
}

TEST_CASE("error paths") {
  std::vector<Quantity> one{Quantity(1.0, 0.1, "Hz")};
  CHECK_THROWS_AS(series_stats(one, 0), ValidationError);

  std::vector<Quantity> dispersed{Quantity(1.0, 0.0, "Hz"), Quantity(2.0, 0.1, "Hz")};
  CHECK_THROWS_AS(series_stats(dispersed, 1), ValidationError);

  std::vector<Quantity> mixed{Quantity(1.0, 0.1, "Hz"), Quantity(2.0, 0.1, "m")};
  CHECK_THROWS_AS(series_stats(mixed, 1), UnitError);

  auto v = white_noise_series(10, 0.0, 1.0, 1);
  CHECK_THROWS_AS(series_stats(v, 10), ValidationError);  // max_lag >= n
}
