#include "fsrm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fsrm/fft.hpp"
#include "fsrm/info.hpp"

namespace fsrm {

namespace {

constexpr std::size_t kLevinsonFallbackCap = 65536;

// Covariance of the increment process of an fBm sampled at step dt.
// Long double keeps |k+1|^2H - 2|k|^2H + |k-1|^2H usable at large lags,
// where the three terms cancel almost completely.
long double fgn_gamma_ld(double hurst, double dt, double scale_c, std::size_t lag) {
  const long double h2 = 2.0L * static_cast<long double>(hurst);
  const long double scale =
      static_cast<long double>(scale_c) * static_cast<long double>(scale_c) *
      powl(static_cast<long double>(dt), h2);
  if (lag == 0) return scale;
  const long double k = static_cast<long double>(lag);
  const long double v = powl(k + 1.0L, h2) - 2.0L * powl(k, h2) + powl(k - 1.0L, h2);
  return scale * v / 2.0L;
}

std::vector<double> gamma_table(double hurst, double dt, double scale_c, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k)
    g[k] = static_cast<double>(fgn_gamma_ld(hurst, dt, scale_c, k));
  return g;
}

// Davies-Harte synthesis on a circulant of size m (power of two, >= 2(n-1)).
// Returns false when the embedding has meaningfully negative eigenvalues.
bool davies_harte(const std::vector<double>& gamma, std::size_t n, std::size_t m, Rng& rng,
                  std::vector<double>& out) {
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= m / 2; ++j) c[j] = gamma[j];
  for (std::size_t j = m / 2 + 1; j < m; ++j) c[j] = gamma[m - j];

  detail::fft_inplace(c, false);

  double max_eig = 0.0, min_eig = 0.0;
  for (const auto& e : c) {
    max_eig = std::max(max_eig, e.real());
    min_eig = std::min(min_eig, e.real());
  }
  if (min_eig < -1e-10 * max_eig) return false;

  std::vector<std::complex<double>> a(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  a[0] = std::sqrt(std::max(0.0, c[0].real()) * inv_m) * rng.gaussian();
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double s = std::sqrt(std::max(0.0, c[k].real()) * inv_m * 0.5);
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    a[k] = {s * re, s * im};
    a[m - k] = std::conj(a[k]);
  }
  a[m / 2] = std::sqrt(std::max(0.0, c[m / 2].real()) * inv_m) * rng.gaussian();

  detail::fft_inplace(a, false);
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real();
  return true;
}

// Durbin-Levinson state; advance() raises the prediction order by one.
class LevinsonState {
 public:
  explicit LevinsonState(std::vector<double> gamma)
      : gamma_(std::move(gamma)), v_(gamma_[0]) {}

  std::size_t order() const { return phi_.size(); }
  double innovation_variance() const { return std::max(v_, 0.0); }
  const std::vector<double>& coefficients() const { return phi_; }
  std::size_t capacity() const { return gamma_.size() - 1; }

  void advance() {
    const std::size_t t = phi_.size() + 1;
    double acc = gamma_[t];
    for (std::size_t j = 1; j < t; ++j) acc -= phi_[j - 1] * gamma_[t - j];
    const double k = v_ > 0.0 ? acc / v_ : 0.0;
    tmp_.assign(phi_.begin(), phi_.end());
    phi_.push_back(k);
    for (std::size_t j = 1; j < t; ++j) phi_[j - 1] = tmp_[j - 1] - k * tmp_[t - 1 - j];
    v_ *= (1.0 - k * k);
  }

  // Conditional mean given the most recent order() values (hist back = most recent).
  double predict(const std::vector<double>& hist) const {
    double m = 0.0;
    const std::size_t p = phi_.size();
    const std::size_t end = hist.size();
    for (std::size_t j = 1; j <= p; ++j) m += phi_[j - 1] * hist[end - j];
    return m;
  }

 private:
  std::vector<double> gamma_;
  std::vector<double> phi_, tmp_;
  double v_;
};

double clamp_hurst_open_unit(double h) {
  if (h > 0.0 && h < 1.0) return h;
  return normalize_hurst(h);
}

}  // namespace

double fgn_autocovariance(double hurst, double dt, double scale_c, std::size_t lag) {
  return static_cast<double>(fgn_gamma_ld(hurst, dt, scale_c, lag));
}

std::vector<double> gen_fgn(double hurst, std::size_t n, double dt, double scale_c,
                            std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw ConfigError("gen_fgn: hurst must lie in (0,1)");
  if (n == 0) throw ConfigError("gen_fgn: n must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("gen_fgn: dt must be > 0");
  if (!(scale_c > 0.0)) throw ConfigError("gen_fgn: scale_c must be > 0");

  Rng rng(seed);
  if (n == 1) return {std::sqrt(fgn_autocovariance(hurst, dt, scale_c, 0)) * rng.gaussian()};

  std::vector<double> out;
  std::size_t m = detail::next_pow2(2 * (n - 1));
  for (int attempt = 0; attempt < 3; ++attempt, m *= 2) {
    const auto gamma = gamma_table(hurst, dt, scale_c, m / 2 + 1);
    Rng trial(seed);
    if (davies_harte(gamma, n, m, trial, out)) return out;
  }

  if (n <= kLevinsonFallbackCap) {
    const auto gamma = gamma_table(hurst, dt, scale_c, n);
    return detail::durbin_levinson_path(gamma, n, rng);
  }
  throw NumericalError("gen_fgn: circulant embedding not nonnegative-definite");
}

SamplePath gen_fbm(double hurst, std::size_t n, double dt, double scale_c,
                   std::uint64_t seed) {
  if (n == 0) throw ConfigError("gen_fbm: n must be >= 1");
  SamplePath path;
  path.dt = dt;
  path.values.assign(n, 0.0);
  if (n == 1) return path;
  const auto incr = gen_fgn(hurst, n - 1, dt, scale_c, seed);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    acc += incr[k];
    path.values[k + 1] = acc;
  }
  return path;
}

std::size_t default_burn_in(double lambda, double dt) {
  const double by_decay = 10.0 / (lambda * dt);
  return static_cast<std::size_t>(std::ceil(std::max(by_decay, 1e4)));
}

SamplePath gen_fou(const FouParams& params, std::size_t n, double dt, std::uint64_t seed,
                   std::optional<std::size_t> burn_in) {
  params.validate();
  if (n == 0) throw ConfigError("gen_fou: n must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("gen_fou: dt must be > 0");
  if (!(dt * params.lambda < 0.5))
    throw ConfigError("gen_fou: stability guard dt*lambda < 0.5 violated");

  const std::size_t burn = burn_in.value_or(default_burn_in(params.lambda, dt));
  const std::size_t total = n + burn;
  const auto noise = gen_fgn(params.hurst, total, dt, 1.0, seed);

  // Exponential-Euler step: exact AR(1) drift, diffusion coefficient matched
  // so the H = 1/2 chain has the exact stationary OU law at grid points.
  const double a = std::exp(-params.lambda * dt);
  const double c = std::sqrt((1.0 - a * a) / (2.0 * params.lambda * dt));

  SamplePath path;
  path.dt = dt;
  path.values.resize(n);
  double y = params.mean;
  for (std::size_t k = 0; k < total; ++k) {
    y = params.mean + a * (y - params.mean) + params.eta * c * noise[k];
    if (k >= burn) path.values[k - burn] = y;
  }
  return path;
}

void FsrmConfig::validate() const {
  fou.validate();
  if (!(scale_c > 0.0)) throw ConfigError("FsrmConfig: scale_c must be > 0");
  if (obs_per_day < 4) throw ConfigError("FsrmConfig: obs_per_day must be >= 4");
  if (days < 2) throw ConfigError("FsrmConfig: days must be >= 2");
  const std::size_t n = static_cast<std::size_t>(obs_per_day) * static_cast<std::size_t>(days);
  if (n > max_samples) throw ConfigError("FsrmConfig: obs_per_day*days exceeds max_samples");
}

FsrmPaths gen_fsrm_prices(const FsrmConfig& cfg) {
  cfg.validate();
  const std::size_t r = static_cast<std::size_t>(cfg.obs_per_day);
  const std::size_t days = static_cast<std::size_t>(cfg.days);
  const double dt = 1.0 / static_cast<double>(r);

  // Daily regularity from the fOU; simulate on a finer grid when the
  // stability guard would otherwise reject large mean reversion.
  const std::size_t stride =
      cfg.fou.lambda < 0.25 ? 1 : static_cast<std::size_t>(std::ceil(cfg.fou.lambda / 0.25));
  const auto hpath = gen_fou(cfg.fou, days * stride, 1.0 / static_cast<double>(stride),
                             Rng::derive(cfg.seed, 0));

  std::vector<double> true_h(days);
  for (std::size_t d = 0; d < days; ++d)
    true_h[d] = clamp_hurst_open_unit(hpath.values[(d + 1) * stride - 1]);

  // Intraday increments: exact fGn for the current day's exponent,
  // conditioned on the last K increments so correlation carries across
  // day boundaries (tangent-fBm with piecewise-constant daily H).
  const std::size_t K = std::min<std::size_t>(r, 512);
  Rng rng(Rng::derive(cfg.seed, 1));

  std::vector<double> incr;
  incr.reserve(days * r);
  for (std::size_t d = 0; d < days; ++d) {
    LevinsonState lev(gamma_table(true_h[d], dt, cfg.scale_c, K + 1));
    while (lev.order() < std::min(K, incr.size())) lev.advance();
    for (std::size_t j = 0; j < r; ++j) {
      if (lev.order() < std::min(K, incr.size())) lev.advance();
      const double x =
          lev.predict(incr) + std::sqrt(lev.innovation_variance()) * rng.gaussian();
      incr.push_back(x);
    }
  }

  FsrmPaths out;
  out.log_prices.dt = dt;
  out.log_prices.values.resize(days * r);
  double acc = 0.0;
  for (std::size_t k = 0; k < incr.size(); ++k) {
    acc += incr[k];
    out.log_prices.values[k] = acc;
  }
  out.true_hurst = std::move(true_h);
  return out;
}

namespace detail {

std::vector<double> durbin_levinson_path(const std::vector<double>& gamma, std::size_t n,
                                         Rng& rng) {
  if (gamma.size() < n) throw NumericalError("durbin_levinson_path: gamma too short");
  std::vector<double> x;
  x.reserve(n);
  LevinsonState lev(gamma);
  x.push_back(std::sqrt(std::max(gamma[0], 0.0)) * rng.gaussian());
  for (std::size_t t = 1; t < n; ++t) {
    lev.advance();
    x.push_back(lev.predict(x) + std::sqrt(lev.innovation_variance()) * rng.gaussian());
  }
  return x;
}

}  // namespace detail

}  // namespace fsrm
