#include "fsrm/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace fsrm {

namespace {

// QUADPACK dqk15 nodes and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {0.129484966168870, 0.279705391489277,
                                       0.381830050505119, 0.417959183673469};

struct PanelResult {
  double integral;
  double error;
};

template <typename F>
PanelResult gk15(const F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  return {resk * half, std::fabs((resk - resg) * half)};
}

template <typename F>
double adaptive_gk(const F& f, double lo, double hi, double tol_abs, double& err_acc,
                   int depth = 0) {
  const auto r = gk15(f, lo, hi);
  if (r.error <= tol_abs || depth >= 28) {
    err_acc += r.error;
    return r.integral;
  }
  const double mid = 0.5 * (lo + hi);
  return adaptive_gk(f, lo, mid, 0.5 * tol_abs, err_acc, depth + 1) +
         adaptive_gk(f, mid, hi, 0.5 * tol_abs, err_acc, depth + 1);
}

// Wynn epsilon acceleration of the partial sums of an alternating series.
// diag_[j] holds eps_j on the current table diagonal; even orders are the
// series estimates.
class EpsilonTable {
 public:
  // Returns the current best extrapolation after appending one partial sum.
  double append(double partial_sum) {
    std::vector<double> fresh(diag_.size() + 1);
    fresh[0] = partial_sum;
    for (std::size_t j = 1; j < fresh.size(); ++j) {
      const double denom = fresh[j - 1] - diag_[j - 1];
      const double lower = (j >= 2) ? diag_[j - 2] : 0.0;
      if (std::fabs(denom) < 1e-300) {
        fresh.resize(j);  // converged exactly; stop deepening the table
        break;
      }
      fresh[j] = lower + 1.0 / denom;
    }
    diag_ = std::move(fresh);
    const std::size_t top = diag_.size() - 1;
    best_ = diag_[top - (top % 2)];
    return best_;
  }

  double best() const { return best_; }

 private:
  std::vector<double> diag_;
  double best_ = 0.0;
};

double head_tail_quadrature(double hurst, double a, double tol_abs) {
  const double q = 1.0 / (2.0 - 2.0 * hurst);
  const auto integrand = [&](double x) {
    return std::cos(a * x) * std::pow(x, 1.0 - 2.0 * hurst) / (1.0 + x * x);
  };

  double err_acc = 0.0;
  double total = 0.0;

  // Head [0, s_end]: substitution x = u^q removes the x^(1-2H) endpoint
  // singularity (bounded integrand for every H in (0,1)).
  const double first_zero = M_PI / (2.0 * a);
  const double s_end = std::min(1.0, first_zero);
  const auto head = [&](double u) {
    const double x = std::pow(u, q);
    return q * std::cos(a * x) / (1.0 + x * x);
  };
  total += adaptive_gk(head, 0.0, std::pow(s_end, 2.0 - 2.0 * hurst), 0.25 * tol_abs, err_acc);

  // Non-oscillatory middle [s_end, B] in dyadic panels when the first cosine
  // zero lies beyond 1.
  const double B = std::max(1.0, first_zero);
  double lo = s_end;
  while (lo < B) {
    const double hi = std::min(2.0 * lo, B);
    total += adaptive_gk(integrand, lo, hi, 0.125 * tol_abs, err_acc);
    lo = hi;
  }

  // Alignment stretch [B, x_k0] up to the next half-period boundary.
  const std::size_t k0 = static_cast<std::size_t>(
      std::ceil(std::max(0.0, (a * B - M_PI / 2.0) / M_PI)));
  const double tail_start = (M_PI / 2.0 + static_cast<double>(k0) * M_PI) / a;
  if (tail_start > B)
    total += adaptive_gk(integrand, B, tail_start, 0.125 * tol_abs, err_acc);

  if (err_acc > 0.5 * tol_abs)
    throw NumericalError("fou_autocorrelation: panel quadrature did not reach tolerance");

  // Alternating half-period panels accelerated with Wynn's epsilon algorithm.
  EpsilonTable eps;
  double partial = 0.0;
  double prev_best = 0.0;
  bool have_prev = false;
  const double tail_tol = 0.5 * tol_abs;
  for (std::size_t k = 0; k < 64; ++k) {
    const double x0 = tail_start + static_cast<double>(k) * M_PI / a;
    const double x1 = x0 + M_PI / a;
    double panel_err = 0.0;
    partial += adaptive_gk(integrand, x0, x1, tail_tol / 64.0, panel_err);
    const double best = eps.append(partial);
    if (have_prev && std::fabs(best - prev_best) < 0.5 * tail_tol && k >= 4)
      return total + best;
    prev_best = best;
    have_prev = true;
  }
  throw NumericalError("fou_autocorrelation: oscillatory tail did not converge");
}

}  // namespace

double fou_variance(const FouParams& params) {
  params.validate();
  return params.eta * params.eta * std::tgamma(2.0 * params.hurst + 1.0) /
         (2.0 * std::pow(params.lambda, 2.0 * params.hurst));
}

namespace detail {

long double autocorrelation_series(double hurst, double slambda) {
  const long double a = slambda;
  const long double h2 = 2.0L * static_cast<long double>(hurst);
  if (a == 0.0L) return 1.0L;

  if (a <= 20.0L) {
    // Mittag-Leffler-type series; the recursion for the term ratio avoids
    // explicit gammas and has no intermediate overflow for a <= 20.
    long double term = 1.0L / tgammal(h2 + 1.0L);
    long double sum = term;
    const long double a2 = a * a;
    for (int j = 0; j < 400; ++j) {
      const long double d = h2 + 1.0L + 2.0L * j;
      term *= a2 / (d * (d + 1.0L));
      sum += term;
      if (term < 1e-24L * sum && j > 2) break;
    }
    return coshl(a) - powl(a, h2) * sum;
  }

  // Matched asymptotic branch: sin^2(pi H) e^-a plus the algebraic series
  // sum_k a^(2H-2k)/Gamma(2H+1-2k), truncated at its smallest term.
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double s = sinl(pi * static_cast<long double>(hurst));
  long double result = s * s * expl(-a);
  long double term = -sinl(2.0L * pi * static_cast<long double>(hurst)) / pi *
                     tgammal(2.0L - h2) * powl(a, h2 - 2.0L);
  long double prev_mag = fabsl(term) * 10.0L;
  for (int k = 1; k <= 40; ++k) {
    if (fabsl(term) >= prev_mag) break;  // asymptotic series started diverging
    result += term;
    prev_mag = fabsl(term);
    const long double two_k = 2.0L * k;
    term *= (two_k - h2) * (two_k + 1.0L - h2) / (a * a);
    if (fabsl(term) < 1e-26L) break;
  }
  return result;
}

}  // namespace detail

double fou_autocorrelation(double hurst, double slambda, double tol) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw ConfigError("fou_autocorrelation: hurst must lie in (0,1)");
  if (!(slambda >= 0.0)) throw ConfigError("fou_autocorrelation: slambda must be >= 0");
  if (!(tol > 0.0)) throw ConfigError("fou_autocorrelation: tol must be > 0");

  if (slambda == 0.0) return 1.0;

  double rho;
  if (slambda < 1e-3) {
    // Non-oscillatory regime: the series identity is exact here and cheaper
    // than panel quadrature over the enormous first half-period.
    rho = static_cast<double>(detail::autocorrelation_series(hurst, slambda));
  } else {
    const double prefactor = 2.0 * std::sin(M_PI * hurst) / M_PI;
    const double tol_abs = std::max(tol, 1e-13) / prefactor;
    rho = prefactor * head_tail_quadrature(hurst, slambda, tol_abs);
  }

  if (!(std::fabs(rho) <= 1.0 + 1e-9))
    throw NumericalError("fou_autocorrelation: result outside [-1, 1+1e-9]");
  return std::clamp(rho, -1.0, 1.0);
}

double fou_autocovariance(const FouParams& params, double s, double tol) {
  if (!(s >= 0.0)) throw ConfigError("fou_autocovariance: s must be >= 0");
  return fou_variance(params) * fou_autocorrelation(params.hurst, params.lambda * s, tol);
}

LagMinResult min_autocorrelation(double hurst, double s_max, double step, double tol) {
  if (!(step > 0.0 && step < s_max))
    throw ConfigError("min_autocorrelation: require 0 < step < s_max");

  const auto rho_at = [&](double s) { return fou_autocorrelation(hurst, s, tol); };

  const std::size_t n = static_cast<std::size_t>(std::floor(s_max / step)) + 1;
  double best_s = 0.0, best_rho = 1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::min(static_cast<double>(i) * step, s_max);
    const double r = rho_at(s);
    if (r < best_rho) {
      best_rho = r;
      best_s = s;
      best_i = i;
    }
  }

  if (best_i == 0 || best_i + 1 >= n) return {best_s, best_rho};

  // Bisection on the numerical derivative inside the bracketing interval.
  const double h = std::max(1e-6, step * 1e-3);
  const auto deriv = [&](double s) { return (rho_at(s + h) - rho_at(s - h)) / (2.0 * h); };
  double lo = best_s - step, hi = best_s + step;
  double dlo = deriv(lo), dhi = deriv(hi);
  if (!(dlo < 0.0 && dhi > 0.0)) return {best_s, best_rho};
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dm = deriv(mid);
    if (dm < 0.0) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
      dhi = dm;
    }
  }
  const double s_star = 0.5 * (lo + hi);
  const double r_star = rho_at(s_star);
  if (r_star < best_rho) return {s_star, r_star};
  return {best_s, best_rho};
}

CorrelationCurve correlation_curve(double hurst, double slambda_min, double slambda_max,
                                   double step, double tol) {
  if (!(step > 0.0) || !(slambda_max >= slambda_min) || !(slambda_min >= 0.0))
    throw ConfigError("correlation_curve: invalid grid");
  CorrelationCurve curve;
  curve.hurst = hurst;
  for (double s = slambda_min; s <= slambda_max + 0.5 * step; s += step) {
    const double sl = std::min(s, slambda_max);
    curve.product_grid.push_back(sl);
    curve.rho.push_back(fou_autocorrelation(hurst, sl, tol));
    if (sl >= slambda_max) break;
  }
  return curve;
}

}  // namespace fsrm
