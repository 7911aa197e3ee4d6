#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pqfa {

namespace detail {

inline constexpr int kGammaMaxIter = 10000;

// Lower regularized incomplete gamma P(a,x) by series expansion.
// Converges fastest for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * std::numeric_limits<double>::epsilon()) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// Upper regularized incomplete gamma Q(a,x) by modified-Lentz continued
// fraction. Converges fastest for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < std::numeric_limits<double>::epsilon()) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("gamma_q_continued_fraction: no convergence");
}

}  // namespace detail

/// Upper regularized incomplete gamma function Q(a, x) = Gamma(a,x)/Gamma(a),
/// the fraction of the gamma density with shape a lying above x.
///
/// Series expansion is used for x < a + 1 and the continued fraction
/// otherwise; both are evaluated to machine precision.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) {
    throw std::domain_error("regularized_gamma_q: shape a must be positive");
  }
  if (x < 0.0) {
    throw std::domain_error("regularized_gamma_q: x must be non-negative");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    return 1.0 - detail::gamma_p_series(a, x);
  }
  return detail::gamma_q_continued_fraction(a, x);
}

/// Poisson probability mass mu^n e^(-mu) / n!.
///
/// Small arguments use the iterated product directly; larger ones switch to
/// log space with lgamma so means in the thousands stay finite.
inline double poisson_pmf(std::uint64_t n, double mu) {
  if (mu < 0.0) {
    throw std::domain_error("poisson_pmf: mean must be non-negative");
  }
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n > 30 || mu > 30.0) {
    const double nn = static_cast<double>(n);
    return std::exp(nn * std::log(mu) - mu - std::lgamma(nn + 1.0));
  }
  double term = std::exp(-mu);
  for (std::uint64_t i = 1; i <= n; ++i) {
    term *= mu / static_cast<double>(i);
  }
  return term;
}

/// Poisson lower tail P(X <= n) for mean mu, via the identity
/// CDF(n; mu) = Q(n + 1, mu).
inline double poisson_cdf(std::uint64_t n, double mu) {
  if (mu < 0.0) {
    throw std::domain_error("poisson_cdf: mean must be non-negative");
  }
  if (mu == 0.0) return 1.0;
  return regularized_gamma_q(static_cast<double>(n) + 1.0, mu);
}

/// Poisson upper tail P(X > n) = 1 - CDF(n; mu).
inline double poisson_sf(std::uint64_t n, double mu) {
  if (mu < 0.0) {
    throw std::domain_error("poisson_sf: mean must be non-negative");
  }
  if (mu == 0.0) return 0.0;
  // 1 - Q(n+1, mu) evaluated as P(n+1, mu) keeps precision in the far tail.
  const double a = static_cast<double>(n) + 1.0;
  if (mu < a + 1.0) {
    return detail::gamma_p_series(a, mu);
  }
  return 1.0 - detail::gamma_q_continued_fraction(a, mu);
}

}  // namespace pqfa
