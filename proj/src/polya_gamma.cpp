#include "dbird/polya_gamma.hpp"

#include <cmath>
#include <numbers>

#include "dbird/error.hpp"

namespace dbird {

namespace {

using std::numbers::pi;

// Switch point between the inverse-Gaussian and exponential proposal pieces.
constexpr double kTrunc = 0.64;

// log of the standard normal CDF, stable far into the left tail.
double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * pi) + std::log(series);
}

// Probability of proposing from the exponential piece (right of kTrunc).
double exponential_piece_mass(double z) {
  const double fz = 0.125 * pi * pi + 0.5 * z * z;
  const double root_t = std::sqrt(kTrunc);
  const double b = (kTrunc * z - 1.0) / root_t;
  const double a = -(kTrunc * z + 1.0) / root_t;
  const double x0 = std::log(fz) + fz * kTrunc;
  const double xb = x0 - z + log_normal_cdf(b);
  const double xa = x0 + z + log_normal_cdf(a);
  const double q_over_p = 4.0 / pi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + q_over_p);
}

// log a_n(x), the n-th coefficient of the alternating series for the J*(1)
// density, using the left or right representation around kTrunc.
double log_series_term(int n, double x) {
  const double k = n + 0.5;
  if (x > kTrunc) return std::log(pi * k) - 0.5 * k * k * pi * pi * x;
  return std::log(pi * k) - 1.5 * (std::log(0.5 * pi) + std::log(x)) - 2.0 * k * k / x;
}

// Inverse Gaussian IG(mu = 1/z, 1) truncated to (0, kTrunc).
double draw_truncated_inverse_gaussian(double z, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  if (z < 1.0 / kTrunc) {
    // mu > kTrunc: proposals from the z = 0 case, accepted with exp(-z^2 x / 2).
    while (true) {
      double e1 = expo(rng);
      double e2 = expo(rng);
      while (e1 * e1 > 2.0 * e2 / kTrunc) {
        e1 = expo(rng);
        e2 = expo(rng);
      }
      const double x = kTrunc / ((1.0 + kTrunc * e1) * (1.0 + kTrunc * e1));
      if (unif(rng) <= std::exp(-0.5 * z * z * x)) return x;
    }
  }
  const double mu = 1.0 / z;
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    const double y0 = normal(rng);
    const double y = y0 * y0;
    double x = mu + 0.5 * mu * mu * y - 0.5 * mu * std::sqrt(4.0 * mu * y + (mu * y) * (mu * y));
    if (unif(rng) > mu / (mu + x)) x = mu * mu / x;
    if (x < kTrunc) return x;
  }
}

}  // namespace

PgSample draw_pg1_traced(double c, Rng& rng) {
  if (!std::isfinite(c)) throw Error(ErrorCode::NonfiniteTilt, "PG tilt must be finite");
  // PG(1, c) = J*(1, |c|/2) / 4.
  const double z = 0.5 * std::abs(c);
  const double fz = 0.125 * pi * pi + 0.5 * z * z;
  const double p_exp = exponential_piece_mass(z);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  PgSample out;
  while (true) {
    ++out.proposals;
    const double x =
        unif(rng) < p_exp ? kTrunc + expo(rng) / fz : draw_truncated_inverse_gaussian(z, rng);
    // Partial sums normalised by a_0(x) so tiny x cannot underflow.
    const double log_a0 = log_series_term(0, x);
    double s = 1.0;
    const double u = unif(rng);
    for (int n = 1;; ++n) {
      const double term = std::exp(log_series_term(n, x) - log_a0);
      if (n % 2 == 1) {
        s -= term;
        if (u <= s) {
          out.value = 0.25 * x;
          return out;
        }
      } else {
        s += term;
        if (u > s) break;
      }
    }
  }
}

double draw_pg1(double c, Rng& rng) { return draw_pg1_traced(c, rng).value; }

double pg_mean(double b, double c) {
  if (!(b > 0.0)) throw Error(ErrorCode::NonpositiveB, "PG shape b must be positive");
  const double h = 0.5 * std::abs(c);
  if (h < 1e-6) {
    // tanh(h)/h = 1 - h^2/3 + 2h^4/15
    return 0.25 * b * (1.0 - h * h / 3.0);
  }
  return 0.25 * b * std::tanh(h) / h;
}

}  // namespace dbird
