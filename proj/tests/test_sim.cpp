#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsrm/info.hpp"
#include "fsrm/sim.hpp"
#include "test_util.hpp"

using namespace fsrm;

TEST_CASE("fgn closed-form autocovariance") {
  // gamma(0) = C^2 dt^2H, gamma(1) = C^2 dt^2H (2^2H - 2)/2
  CHECK(fgn_autocovariance(0.5, 1.0, 1.0, 0) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(0.5, 1.0, 1.0, 1) == doctest::Approx(0.0));
  CHECK(fgn_autocovariance(0.7, 1.0, 1.0, 1) ==
        doctest::Approx((std::pow(2.0, 1.4) - 2.0) / 2.0));
  CHECK(fgn_autocovariance(0.3, 0.5, 2.0, 0) ==
        doctest::Approx(4.0 * std::pow(0.5, 0.6)));
}

TEST_CASE("gen_fgn rejects invalid arguments") {
  CHECK_THROWS_AS(gen_fgn(0.0, 10, 1.0, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(gen_fgn(1.0, 10, 1.0, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(gen_fgn(0.5, 0, 1.0, 1.0, 1), ConfigError);
}

TEST_CASE("gen_fgn sample autocovariance matches gamma within 4 standard errors") {
  const std::size_t n = 20000;
  for (double hurst : {0.2, 0.5, 0.8}) {
    const auto x = gen_fgn(hurst, n, 1.0, 1.0, 424242);
    // se of the lag-k autocovariance of a Gaussian sequence:
    // (1/n) sum_m (gamma_m^2 + gamma_{m+k} gamma_{m-k})
    for (std::size_t lag = 0; lag <= 5; ++lag) {
      double var_est = 0.0;
      const long m_max = 4000;
      for (long m = -m_max; m <= m_max; ++m) {
        const double gm = fgn_autocovariance(hurst, 1.0, 1.0, std::labs(m));
        const double gp = fgn_autocovariance(hurst, 1.0, 1.0, std::labs(m + (long)lag));
        const double gq = fgn_autocovariance(hurst, 1.0, 1.0, std::labs(m - (long)lag));
        var_est += gm * gm + gp * gq;
      }
      const double se = std::sqrt(var_est / static_cast<double>(n));
      const double observed = testutil::autocovariance(x, lag);
      const double expected = fgn_autocovariance(hurst, 1.0, 1.0, lag);
      INFO("H=", hurst, " lag=", lag, " obs=", observed, " exp=", expected, " se=", se);
      CHECK(std::fabs(observed - expected) < 4.0 * se);
    }
  }
}

TEST_CASE("gen_fgn variance of one increment equals C^2 dt^2H") {
  const std::size_t n = 200000;
  const auto x = gen_fgn(0.7, n, 0.5, 1.5, 7);
  const double expected = 1.5 * 1.5 * std::pow(0.5, 1.4);
  CHECK(testutil::variance_known_mean(x, 0.0) ==
        doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("gen_fgn H=0.5 lag-1 autocorrelation vanishes") {
  const auto x = gen_fgn(0.5, 100000, 1.0, 1.0, 99);
  CHECK(std::fabs(testutil::autocorrelation(x, 1)) < 0.02);
}

TEST_CASE("gen_fgn H=0.7 lag-1 autocorrelation near (2^1.4-2)/2") {
  const std::size_t n = 100000;
  const auto x = gen_fgn(0.7, n, 1.0, 1.0, 1234);
  const double expected = (std::pow(2.0, 1.4) - 2.0) / 2.0;  // ~0.3195
  // 3 standard errors, se ~ sqrt(1/n) inflated for dependence
  CHECK(std::fabs(testutil::autocorrelation(x, 1) - expected) < 3.0 * 0.01);
}

TEST_CASE("gen_fbm is the running sum of gen_fgn") {
  const std::size_t n = 1000;
  const auto path = gen_fbm(0.3, n, 0.25, 2.0, 555);
  const auto incr = gen_fgn(0.3, n - 1, 0.25, 2.0, 555);
  CHECK(path.values[0] == 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    acc += incr[k];
    CHECK(path.values[k + 1] == acc);  // bit-identical running sum
  }
}

TEST_CASE("gen_fbm single sample is the zero path") {
  const auto path = gen_fbm(0.5, 1, 1.0, 1.0, 1);
  REQUIRE(path.values.size() == 1);
  CHECK(path.values[0] == 0.0);
}

TEST_CASE("gen_fbm marginal variance follows C^2 (k dt)^2H") {
  const std::size_t n = 257;
  const std::size_t reps = 400;
  for (double hurst : {0.4, 0.8}) {
    std::vector<double> terminal(reps);
    for (std::size_t rep = 0; rep < reps; ++rep)
      terminal[rep] = gen_fbm(hurst, n, 1.0, 1.0, Rng::derive(1000, rep)).values[n - 1];
    const double expected = std::pow(static_cast<double>(n - 1), 2.0 * hurst);
    const double observed = testutil::variance_known_mean(terminal, 0.0);
    // relative se of a variance over `reps` replicas ~ sqrt(2/reps) ~ 7%
    CHECK(observed == doctest::Approx(expected).epsilon(0.25));
  }
}

TEST_CASE("gen_fbm H=0.5 quadratic variation approximates C^2 T") {
  const std::size_t n = 100001;
  const auto path = gen_fbm(0.5, n, 0.01, 1.0, 31);
  double qv = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = path.values[k] - path.values[k - 1];
    qv += d * d;
  }
  CHECK(qv == doctest::Approx(0.01 * (n - 1)).epsilon(0.02));
}

TEST_CASE("determinism: identical seeds give identical outputs") {
  const auto a = gen_fgn(0.6, 5000, 1.0, 1.0, 2024);
  const auto b = gen_fgn(0.6, 5000, 1.0, 1.0, 2024);
  CHECK(a == b);
  const auto c = gen_fgn(0.6, 5000, 1.0, 1.0, 2025);
  CHECK(a != c);

  const auto f1 = gen_fou(FouParams{0.4, 1.0, 0.3, 0.5}, 2000, 0.1, 9, 1000);
  const auto f2 = gen_fou(FouParams{0.4, 1.0, 0.3, 0.5}, 2000, 0.1, 9, 1000);
  CHECK(f1.values == f2.values);
}

TEST_CASE("durbin-levinson fallback agrees with covariance structure") {
  const std::size_t n = 3000;
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(0.8, 1.0, 1.0, k);
  Rng rng(515);
  const auto x = detail::durbin_levinson_path(gamma, n, rng);
  CHECK(std::fabs(testutil::autocovariance(x, 0) - gamma[0]) < 0.12);
  CHECK(std::fabs(testutil::autocovariance(x, 1) - gamma[1]) < 0.12);
}

TEST_CASE("gen_fou stability guard and burn-in default") {
  CHECK_THROWS_AS(gen_fou(FouParams{0.5, 1.0, 1.0, 0.0}, 10, 0.6, 1), ConfigError);
  CHECK(default_burn_in(1.0, 0.1) == 10000);
  CHECK(default_burn_in(0.001, 0.1) == 100000);
}

TEST_CASE("gen_fou H=0.5 long-run variance near eta^2/(2 lambda)") {
  const auto p = gen_fou(FouParams{0.5, 1.0, 1.0, 0.5}, 400000, 0.05, 77, 20000);
  CHECK(testutil::variance_known_mean(p.values, 0.5) ==
        doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("gen_fou H=0.3 long-run variance near Gamma(1.6)/2") {
  const auto p = gen_fou(FouParams{0.3, 1.0, 1.0, 0.5}, 400000, 0.05, 78, 20000);
  CHECK(testutil::variance_known_mean(p.values, 0.5) ==
        doctest::Approx(std::tgamma(1.6) / 2.0).epsilon(0.05));
}

TEST_CASE("gen_fou H=0.5 matches exact OU autocorrelation at lags 1,2,5") {
  const double dt = 0.05;
  const std::size_t n = 1000000;
  const auto p = gen_fou(FouParams{0.5, 1.0, 1.0, 0.0}, n, dt, 123, 20000);
  for (double s : {1.0, 2.0, 5.0}) {
    const auto lag = static_cast<std::size_t>(s / dt);
    const double obs = testutil::autocorrelation(p.values, lag);
    INFO("s=", s, " obs=", obs, " expected=", std::exp(-s));
    CHECK(std::fabs(obs - std::exp(-s)) < 0.02);
  }
}

TEST_CASE("gen_fou lambda->0 behaves like eta * fBm over short horizons") {
  // With tiny lambda the increments match the driving fGn scale.
  const auto p = gen_fou(FouParams{0.5, 2.0, 1e-4, 0.0}, 50000, 0.1, 5, 1000);
  std::vector<double> incr(p.values.size() - 1);
  for (std::size_t i = 0; i + 1 < p.values.size(); ++i)
    incr[i] = p.values[i + 1] - p.values[i];
  // Var of one increment ~ eta^2 dt^2H = 4 * 0.1
  CHECK(testutil::variance_known_mean(incr, 0.0) ==
        doctest::Approx(4.0 * 0.1).epsilon(0.05));
}

TEST_CASE("gen_fsrm_prices shapes and config validation") {
  FsrmConfig cfg;
  cfg.fou = FouParams{0.8, 0.02, 0.05, 0.5};
  cfg.obs_per_day = 39;
  cfg.days = 40;
  cfg.seed = 3;
  const auto out = gen_fsrm_prices(cfg);
  CHECK(out.log_prices.values.size() == 39u * 40u);
  CHECK(out.true_hurst.size() == 40u);
  for (double h : out.true_hurst) CHECK((h > 0.0 && h < 1.0));
  CHECK(out.log_prices.dt == doctest::Approx(1.0 / 39.0));

  FsrmConfig bad = cfg;
  bad.obs_per_day = 3;
  CHECK_THROWS_AS(gen_fsrm_prices(bad), ConfigError);
  bad = cfg;
  bad.days = 1;
  CHECK_THROWS_AS(gen_fsrm_prices(bad), ConfigError);
}

TEST_CASE("gen_fsrm_prices with eta->0 reduces to a plain fBm day scale") {
  FsrmConfig cfg;
  cfg.fou = FouParams{0.5, 1e-9, 0.05, 0.5};
  cfg.scale_c = 1.0;
  cfg.obs_per_day = 64;
  cfg.days = 300;
  cfg.seed = 11;
  const auto out = gen_fsrm_prices(cfg);
  for (double h : out.true_hurst) CHECK(h == doctest::Approx(0.5).epsilon(1e-4));

  // Daily increments of a BM day: variance C^2 * 1 day, signs a fair coin.
  std::vector<double> daily(cfg.days);
  for (int d = 0; d < cfg.days; ++d) {
    const std::size_t end = (static_cast<std::size_t>(d) + 1) * 64 - 1;
    const std::size_t start = static_cast<std::size_t>(d) * 64;
    daily[d] = out.log_prices.values[end] -
               (d == 0 ? 0.0 : out.log_prices.values[start - 1]);
  }
  CHECK(testutil::variance_known_mean(daily, 0.0) == doctest::Approx(1.0).epsilon(0.25));
  int pos = 0;
  for (double v : daily) pos += (v > 0.0);
  CHECK(std::fabs(pos / 300.0 - 0.5) < 3.0 * std::sqrt(0.25 / 300.0));
  // Consecutive daily signs uncorrelated for H = 1/2.
  CHECK(std::fabs(testutil::autocorrelation(daily, 1)) < 0.15);
}

TEST_CASE("gen_fsrm_prices carries increment correlation across days for high H") {
  FsrmConfig cfg;
  cfg.fou = FouParams{0.8, 1e-9, 0.05, 0.75};  // effectively constant H = 0.75
  cfg.obs_per_day = 64;
  cfg.days = 400;
  cfg.seed = 21;
  const auto out = gen_fsrm_prices(cfg);
  std::vector<double> daily(cfg.days);
  for (int d = 0; d < cfg.days; ++d) {
    const std::size_t end = (static_cast<std::size_t>(d) + 1) * 64 - 1;
    daily[d] = out.log_prices.values[end] -
               (d == 0 ? 0.0 : out.log_prices.values[static_cast<std::size_t>(d) * 64 - 1]);
  }
  // Consecutive-day fBm increment correlation (2^(2H)-2)/2 ~ 0.4142 at H=0.75.
  const double expected = (std::pow(2.0, 1.5) - 2.0) / 2.0;
  CHECK(testutil::autocorrelation(daily, 1) == doctest::Approx(expected).epsilon(0.45));
}
