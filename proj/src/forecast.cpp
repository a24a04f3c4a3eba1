#include "fsrm/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsrm/analytics.hpp"
#include "fsrm/info.hpp"

namespace fsrm {

namespace {

struct DailyData {
  RegularitySeries hurst;
  std::vector<double> closes;  // last intraday log price of each day
};

DailyData daily_from_intraday(const SamplePath& intraday, int obs_per_day) {
  DailyData d;
  d.hurst = hurst_series(intraday, obs_per_day);
  const std::size_t r = static_cast<std::size_t>(obs_per_day);
  const std::size_t days = d.hurst.values.size();
  d.closes.reserve(days);
  for (std::size_t i = 0; i < days; ++i) d.closes.push_back(intraday.values[i * r + r - 1]);
  return d;
}

// Forecast probabilities for every non-gap day of the evaluation half.
struct TauContext {
  FouEstimate fou;
  double rho = 0.0;
  std::vector<long> days;
  std::vector<double> probs;
  std::vector<int> past_signs;
};

TauContext tau_context(const RegularitySeries& hs, std::span<const double> log_closes,
                       int tau, double tol) {
  if (tau < 1) throw ConfigError("run_forecast: tau must be >= 1");
  const std::size_t R = hs.values.size();
  if (log_closes.size() != R)
    throw ConfigError("run_forecast: closes and regularity series lengths differ");
  const std::size_t half = R / 2;
  if (half < 2 || R < half + static_cast<std::size_t>(tau) + 1)
    throw DataError("run_forecast: need at least 2 days in each half");

  TauContext ctx;
  // Step 2: fit the fOU on the first half only.
  RegularitySeries first;
  first.window = hs.window;
  first.values.assign(hs.values.begin(), hs.values.begin() + static_cast<long>(half));
  ctx.fou = estimate_fou(first);

  if (!(ctx.fou.hurst_hat > 0.0 && ctx.fou.hurst_hat < 1.0))
    throw NumericalError(
        "run_forecast: estimated global Hurst outside (0,1); autocorrelation undefined");

  ctx.rho = fou_autocorrelation(ctx.fou.hurst_hat,
                                static_cast<double>(tau) * ctx.fou.lambda_hat, tol);

  FouParams params{ctx.fou.hurst_hat, ctx.fou.eta_hat, ctx.fou.lambda_hat, 0.5};
  const double mlambda = static_cast<double>(tau) * ctx.fou.lambda_hat;

  // Step 3: conditional probability on the second half. The arctan
  // normalization composed with its inverse cancels, so the probability is
  // evaluated at the raw estimate directly.
  for (std::size_t i = half; i + static_cast<std::size_t>(tau) < R; ++i) {
    const double h_i = hs.values[i];
    if (is_gap(h_i)) continue;
    ctx.days.push_back(static_cast<long>(i));
    ctx.probs.push_back(conditional_prob_up(h_i, params, mlambda, tol));
    ctx.past_signs.push_back(sgn(log_closes[i] - log_closes[i - 1]));
  }
  if (ctx.days.empty())
    throw DataError("run_forecast: all evaluation-half days are degenerate");
  return ctx;
}

std::vector<ForecastSignal> signals_for_beta(const TauContext& ctx, double beta) {
  std::vector<ForecastSignal> out;
  out.reserve(ctx.days.size());
  for (std::size_t k = 0; k < ctx.days.size(); ++k) {
    ForecastSignal s;
    s.day = ctx.days[k];
    s.prob_up = ctx.probs[k];
    s.state = filter_state(ctx.probs[k], beta);
    s.past_sign = ctx.past_signs[k];
    s.predicted_sign = s.past_sign * s.state;
    out.push_back(s);
  }
  return out;
}

double sample_stddev(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

int filter_state(double prob, double beta) {
  if (!(beta >= 0.5 && beta <= 1.0))
    throw ConfigError("filter_state: beta must lie in [1/2, 1]");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw ConfigError("filter_state: prob must lie in [0, 1]");
  if (prob > beta) return 1;
  if (prob < 1.0 - beta) return -1;
  return 0;
}

ForecastResult run_forecast(const RegularitySeries& hurst, std::span<const double> log_closes,
                            int tau, double beta, double tol) {
  if (!(beta >= 0.5 && beta <= 1.0))
    throw ConfigError("run_forecast: beta must lie in [1/2, 1]");
  const auto ctx = tau_context(hurst, log_closes, tau, tol);
  ForecastResult res;
  res.signals = signals_for_beta(ctx, beta);
  res.fou = ctx.fou;
  res.rho = ctx.rho;
  res.tau = tau;
  res.beta = beta;
  return res;
}

ForecastResult run_forecast(const SamplePath& intraday_log_prices, int obs_per_day, int tau,
                            double beta, double tol) {
  const auto d = daily_from_intraday(intraday_log_prices, obs_per_day);
  return run_forecast(d.hurst, d.closes, tau, beta, tol);
}

std::vector<int> realized_signs(std::span<const double> log_closes, int tau) {
  if (tau < 1) throw ConfigError("realized_signs: tau must be >= 1");
  if (log_closes.size() <= static_cast<std::size_t>(tau))
    throw DataError("realized_signs: series shorter than tau+1");
  std::vector<int> out(log_closes.size() - static_cast<std::size_t>(tau));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = sgn(log_closes[i + static_cast<std::size_t>(tau)] - log_closes[i]);
  return out;
}

HitRateResult hit_rate(std::span<const ForecastSignal> signals, std::span<const int> realized,
                       int tau) {
  if (tau < 1) throw ConfigError("hit_rate: tau must be >= 1");
  std::vector<const ForecastSignal*> active;
  for (const auto& s : signals)
    if (s.predicted_sign != 0) active.push_back(&s);

  HitRateResult res;
  res.n_active = active.size();
  if (active.empty()) throw DataError("hit_rate: no active predictions");
  if (active.size() <= static_cast<std::size_t>(tau))
    throw DataError("hit_rate: fewer active predictions than tau");

  // The last tau active days are excluded, matching the displayed
  // 1/(n(beta)-tau) normalization.
  const std::size_t n_eff = active.size() - static_cast<std::size_t>(tau);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_eff; ++k) {
    const auto& s = *active[k];
    if (s.day < 0 || static_cast<std::size_t>(s.day) >= realized.size())
      throw ConfigError("hit_rate: realized sign missing for an active day");
    if (s.predicted_sign == realized[static_cast<std::size_t>(s.day)]) ++hits;
  }
  res.hits = hits;
  res.rate = static_cast<double>(hits) / static_cast<double>(n_eff);
  return res;
}

double binomial_test(std::size_t hits, std::size_t n) {
  if (n == 0) throw ConfigError("binomial_test: n must be >= 1");
  if (hits > n) throw ConfigError("binomial_test: hits must not exceed n");
  if (hits == 0) return 1.0;

  // Upper tail sum from k = hits with the binomial recurrence, long double.
  const long double log_c0 =
      lgammal(static_cast<long double>(n) + 1.0L) -
      lgammal(static_cast<long double>(hits) + 1.0L) -
      lgammal(static_cast<long double>(n - hits) + 1.0L);
  long double term = expl(log_c0 - static_cast<long double>(n) * logl(2.0L));
  long double sum = 0.0L;
  for (std::size_t k = hits; k <= n; ++k) {
    sum += term;
    if (k < n) {
      term *= static_cast<long double>(n - k) / static_cast<long double>(k + 1);
      if (term < 1e-30L * sum) break;
    }
  }
  return static_cast<double>(std::min(sum, 1.0L));
}

namespace {

// Correlation sum machinery shared by bds_statistics. Pair indicators are
// packed into 64-bit words per pair offset so the joint m-fold products
// reduce to shifted ANDs and popcounts.
struct BdsCore {
  std::size_t n;
  double eps;
  double c1_full;  // first-order correlation sum, full sample
  double k_stat;
  std::vector<double> cm;  // correlation sums for m = 2..max_dim
};

double pair_fraction(std::span<const double> x, double eps) {
  // Ordered-pair fraction via sorting: h_i counts |x_j - x_i| < eps incl. self.
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  long double sum_h = 0.0L;
  const double n = static_cast<double>(x.size());
  for (double v : x) {
    const auto lo = std::upper_bound(sorted.begin(), sorted.end(), v - eps);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), v + eps);
    sum_h += static_cast<long double>(hi - lo);
  }
  return static_cast<double>((sum_h - static_cast<long double>(x.size())) /
                             (static_cast<long double>(n) * (n - 1.0)));
}

BdsCore bds_core(std::span<const double> x, int max_dim, double eps) {
  BdsCore core;
  core.n = x.size();
  core.eps = eps;
  const std::size_t n = x.size();

  // h_i over the full indicator matrix (diagonal included) for C1 and K.
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  long double sum_h = 0.0L, sum_h2 = 0.0L;
  for (double v : x) {
    const auto lo = std::upper_bound(sorted.begin(), sorted.end(), v - eps);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), v + eps);
    const long double h = static_cast<long double>(hi - lo);
    sum_h += h;
    sum_h2 += h * h;
  }
  const long double nl = static_cast<long double>(n);
  core.c1_full = static_cast<double>((sum_h - nl) / (nl * (nl - 1.0L)));
  core.k_stat = static_cast<double>((sum_h2 - 3.0L * sum_h + 2.0L * nl) /
                                    (nl * (nl - 1.0L) * (nl - 2.0L)));

  // C_m via per-offset bit rows: row d holds b_s = 1{|x_s - x_{s+d}| < eps}.
  core.cm.assign(static_cast<std::size_t>(max_dim) - 1, 0.0);
  std::vector<long double> counts(static_cast<std::size_t>(max_dim) - 1, 0.0L);
  std::vector<std::uint64_t> row, acc;
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t len = n - d;
    const std::size_t words = (len + 63) / 64;
    row.assign(words, 0);
    for (std::size_t s = 0; s < len; ++s)
      if (std::fabs(x[s] - x[s + d]) < eps) row[s >> 6] |= (1ULL << (s & 63));

    acc = row;
    for (int m = 2; m <= max_dim; ++m) {
      // acc &= row >> (m-1), then count bits s = 0..n-m-d.
      const std::size_t shift = static_cast<std::size_t>(m - 1);
      if (len <= shift) break;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t shifted = row[w] >> shift;
        if (w + 1 < words && shift) shifted |= row[w + 1] << (64 - shift);
        acc[w] &= shifted;
      }
      const std::size_t limit = len - shift;  // valid anchors for this offset
      long double cnt = 0.0L;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t word = acc[w];
        const std::size_t base = w * 64;
        if (base >= limit) break;
        if (base + 64 > limit) word &= (limit - base == 64) ? ~0ULL : ((1ULL << (limit - base)) - 1);
        cnt += static_cast<long double>(__builtin_popcountll(word));
      }
      counts[static_cast<std::size_t>(m) - 2] += cnt;
    }
  }
  for (int m = 2; m <= max_dim; ++m) {
    const long double nm = static_cast<long double>(n) - m + 1;
    core.cm[static_cast<std::size_t>(m) - 2] =
        static_cast<double>(counts[static_cast<std::size_t>(m) - 2] / (nm * (nm - 1.0L) / 2.0L));
  }
  return core;
}

}  // namespace

std::vector<BdsResult> bds_statistics(std::span<const double> series, int dim,
                                      double eps_factor) {
  if (dim < 2) throw ConfigError("bds_test: dim must be >= 2");
  if (series.size() < 50) throw DataError("bds_test: need at least 50 observations");
  if (static_cast<std::size_t>(dim) >= series.size())
    throw ConfigError("bds_test: dim must be smaller than the series length");
  if (!(eps_factor > 0.0)) throw ConfigError("bds_test: eps_factor must be > 0");

  const double eps = eps_factor * sample_stddev(series);
  if (!(eps > 0.0)) throw DataError("bds_test: degenerate series (zero variance)");

  const auto core = bds_core(series, dim, eps);
  const double c = core.c1_full;
  const double k = core.k_stat;
  if (c <= 0.0 || c >= 1.0 - 1e-12)
    throw DataError("bds_test: correlation integral degenerate");

  std::vector<BdsResult> out;
  for (int m = 2; m <= dim; ++m) {
    double tmp = 0.0;
    for (int j = 1; j < m; ++j) tmp += std::pow(k, m - j) * std::pow(c, 2 * j);
    const double var =
        4.0 * (std::pow(k, m) + 2.0 * tmp +
               (m - 1.0) * (m - 1.0) * std::pow(c, 2 * m) -
               m * static_cast<double>(m) * k * std::pow(c, 2 * m - 2));
    if (!(var > 0.0)) throw DataError("bds_test: nonpositive variance estimate");

    const std::size_t ninitial = static_cast<std::size_t>(m) - 1;
    const double c1m =
        pair_fraction(series.subspan(ninitial), eps);
    const double effect = core.cm[static_cast<std::size_t>(m) - 2] - std::pow(c1m, m);
    const double nobs = static_cast<double>(series.size() - ninitial);

    BdsResult r;
    r.dim = m;
    r.epsilon = eps;
    r.statistic = std::sqrt(nobs) * effect / std::sqrt(var);
    r.pvalue = std::erfc(std::fabs(r.statistic) / std::sqrt(2.0));
    out.push_back(r);
  }
  return out;
}

BdsResult bds_test(std::span<const double> series, int dim, double eps_factor) {
  return bds_statistics(series, dim, eps_factor).back();
}

std::vector<EvaluationReport> evaluate(const RegularitySeries& hurst,
                                       std::span<const double> log_closes,
                                       std::span<const int> taus,
                                       std::span<const double> betas, double eps_factor,
                                       double tol) {
  if (taus.empty() || betas.empty())
    throw ConfigError("evaluate: need at least one tau and one beta");
  for (double b : betas)
    if (!(b >= 0.5 && b <= 1.0)) throw ConfigError("evaluate: beta grid must lie in [1/2, 1]");

  std::vector<EvaluationReport> reports;
  for (int tau : taus) {
    const auto ctx = tau_context(hurst, log_closes, tau, tol);
    const auto realized = realized_signs(log_closes, tau);
    for (double beta : betas) {
      EvaluationReport rep;
      rep.tau = tau;
      rep.beta = beta;
      const auto signals = signals_for_beta(ctx, beta);
      std::size_t n_active = 0;
      for (const auto& s : signals)
        if (s.predicted_sign != 0) ++n_active;
      rep.n_active = n_active;
      try {
        const auto hr = hit_rate(signals, realized, tau);
        rep.hit_rate = hr.rate;
        const std::size_t n_eff = hr.n_active - static_cast<std::size_t>(tau);
        rep.binom_pvalue = binomial_test(hr.hits, n_eff);

        // BDS on the hit-variable sequence of the evaluated active days.
        std::vector<double> hit_vars;
        hit_vars.reserve(n_eff);
        std::size_t seen = 0;
        for (const auto& s : signals) {
          if (s.predicted_sign == 0) continue;
          if (seen >= n_eff) break;
          hit_vars.push_back(
              s.predicted_sign == realized[static_cast<std::size_t>(s.day)] ? 1.0 : 0.0);
          ++seen;
        }
        try {
          rep.bds_pvalue = bds_test(hit_vars, 3, eps_factor).pvalue;
        } catch (const Error&) {
          // Too short or degenerate; the cell keeps a NaN BDS p-value.
        }
      } catch (const Error&) {
        // Undefined hit rate for this cell; metrics stay NaN.
      }
      reports.push_back(rep);
    }
  }
  return reports;
}

std::vector<EvaluationReport> evaluate(const SamplePath& intraday_log_prices, int obs_per_day,
                                       std::span<const int> taus, std::span<const double> betas,
                                       double eps_factor, double tol) {
  const auto d = daily_from_intraday(intraday_log_prices, obs_per_day);
  return evaluate(d.hurst, d.closes, taus, betas, eps_factor, tol);
}

}  // namespace fsrm
