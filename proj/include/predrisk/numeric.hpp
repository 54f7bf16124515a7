#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace predrisk {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Binomial(n, p) pmf at integer t, safe at p = 0 and p = 1.
inline double binomial_pmf(int n, double p, int t) {
  if (t < 0 || t > n) return 0.0;
  if (p <= 0.0) return t == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return t == n ? 1.0 : 0.0;
  return std::exp(log_binomial(n, t) + t * std::log(p) +
                  (n - t) * std::log1p(-p));
}

/// Poisson(lambda) pmf at integer t, safe at lambda = 0.
inline double poisson_pmf(double lambda, int t) {
  if (t < 0) return 0.0;
  if (lambda <= 0.0) return t == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + t * std::log(lambda) - std::lgamma(t + 1.0));
}

inline double normal_pdf(double x, double mean, double variance) {
  const double z = (x - mean) / std::sqrt(variance);
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi * variance);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement; accurate to ~1e-15 over (0, 1)).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against erfc-based CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

/// E|X - c| for X ~ Normal(mean, variance), in closed form.
inline double normal_mean_abs_dev(double c, double mean, double variance) {
  const double sd = std::sqrt(variance);
  if (sd == 0.0) return std::abs(c - mean);
  const double z = (c - mean) / sd;
  return sd * (std::sqrt(2.0 / kPi) * std::exp(-0.5 * z * z) +
               z * (2.0 * normal_cdf(z) - 1.0));
}

// ---------------------------------------------------------------------------
// Deterministic random draws
// ---------------------------------------------------------------------------

/// Seeded generator with portable derived draws. All library sampling takes
/// an explicit seed; there is no global generator state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1].
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal draw (Box-Muller).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double variance) {
    return mean + std::sqrt(variance) * normal();
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double gamma(double shape, double rate) { return gamma(shape) / rate; }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  /// Binomial(n, p) by inverse-CDF scan over the pmf recurrence.
  int binomial(int n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double u = uniform();
    double pmf = std::pow(1.0 - p, n);
    double cdf = pmf;
    int t = 0;
    while (cdf <= u && t < n) {
      pmf *= (static_cast<double>(n - t) / (t + 1)) * (p / (1.0 - p));
      ++t;
      cdf += pmf;
    }
    return t;
  }

  /// Poisson(lambda), exact in distribution: additive splitting keeps the
  /// inverse-CDF scan numerically safe for large lambda.
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    int total = 0;
    while (lambda > 30.0) {
      total += poisson_block(30.0);
      lambda -= 30.0;
    }
    return total + poisson_block(lambda);
  }

 private:
  int poisson_block(double lambda) {
    const double u = uniform();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    int t = 0;
    while (cdf <= u && t < 1000) {
      pmf *= lambda / (t + 1);
      ++t;
      cdf += pmf;
    }
    return t;
  }

  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Scalar minimization and quadrature
// ---------------------------------------------------------------------------

/// Golden-section search for the minimizer of a unimodal f on [lo, hi],
/// refined until the bracket is narrower than xtol.
inline double golden_section_minimize(const std::function<double(double)>& f,
                                      double lo, double hi, double xtol = 1e-9) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section: lo > hi");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

struct QuadratureResult {
  double value;
  double residual;  // magnitude of the final refinement step
};

/// Composite Simpson on a uniform grid, doubling the panel count with
/// Richardson extrapolation until successive estimates differ by < tol.
inline QuadratureResult integrate_simpson(const std::function<double(double)>& f,
                                          double a, double b, double tol = 1e-10,
                                          int max_doublings = 22) {
  auto simpson = [&](int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
  };
  int n = 8;
  double prev = simpson(n);
  for (int k = 0; k < max_doublings; ++k) {
    n *= 2;
    const double cur = simpson(n);
    const double diff = std::abs(cur - prev);
    if (diff < tol) return {cur + (cur - prev) / 15.0, diff};
    prev = cur;
  }
  return {prev, std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace predrisk
