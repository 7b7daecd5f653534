#include "oracles.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace coagfrag::oracle {

double u_star_bisection(double s) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double value = mid / ((1.0 - mid) * (1.0 - mid) * (1.0 - mid));
    (value < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double b3_series(double z) {
  if (!(std::abs(z) < 4.0 / 27.0)) throw std::domain_error("outside the disc of convergence");
  // binom(3n, n) / (2n + 1) updated by its term ratio
  long double term = 1.0L, sum = 1.0L;
  for (int n = 0; n < 4000; ++n) {
    long double ratio = 3.0L * (3 * n + 1) * (3 * n + 2) / (2.0L * (n + 1) * (2 * n + 3));
    term *= ratio * z;
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

namespace {

using cplx = std::complex<long double>;

// Root of w B^3 - B + 1 = 0 continued from guess by Newton.
cplx cubic_root(cplx w, cplx guess) {
  cplx b = guess;
  for (int it = 0; it < 60; ++it) {
    cplx g = w * b * b * b - b + 1.0L;
    cplx dg = 3.0L * w * b * b - 1.0L;
    cplx delta = g / dg;
    b -= delta;
    if (std::abs(delta) < 1e-19L * std::abs(b)) break;
  }
  return b;
}

}  // namespace

std::vector<double> shifted_b3_cauchy(double mu, std::size_t n) {
  const long double lambda = 1.0L + 4.0L / (27.0L * mu);
  const long double r = 0.97L * lambda;
  const std::size_t m = 8192;
  // real starting value at z = r by bisection on w B^3 - B + 1 over the principal branch
  long double w0 = mu * (r - 1.0L);
  long double lo = 0.0L, hi = 1.5L;
  for (int it = 0; it < 200; ++it) {
    long double mid = 0.5L * (lo + hi);
    (w0 * mid * mid * mid - mid + 1.0L > 0.0L ? lo : hi) = mid;
  }
  std::vector<cplx> values(m);
  cplx b = 0.5L * (lo + hi);
  for (std::size_t k = 0; k < m; ++k) {
    long double theta = 2.0L * std::numbers::pi_v<long double> * k / m;
    cplx z = std::polar(r, theta);
    b = cubic_root(static_cast<long double>(mu) * (z - 1.0L), b);
    values[k] = b;
  }
  std::vector<double> coeffs(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    cplx sum = 0.0L;
    for (std::size_t k = 0; k < m; ++k) {
      long double theta = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((j * k) % m) / m;
      sum += values[k] * std::polar(1.0L, theta);
    }
    coeffs[j] = static_cast<double>(sum.real() / (static_cast<long double>(m) * std::pow(r, static_cast<long double>(j))));
  }
  return coeffs;
}

std::vector<double> convolve_brute(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<double> pairwise_rates(const std::vector<double>& f, double alpha, double beta) {
  const std::size_t n = f.size();
  std::vector<double> rate(n, 0.0);
  // merges: each ordered pair (i, j) at rate alpha/2 f_i f_j
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      double flux = 0.5 * alpha * f[i - 1] * f[j - 1];
      rate[i - 1] -= flux;
      rate[j - 1] -= flux;
      if (i + j <= n) rate[i + j - 1] += flux;
    }
  }
  // splits: size k breaks into the ordered pair (i, k - i), i = 1..k-1, each at rate beta/2 / (k + 1)
  for (std::size_t k = 2; k <= n; ++k) {
    double flux = 0.5 * beta * f[k - 1] / static_cast<double>(k + 1);
    for (std::size_t i = 1; i < k; ++i) {
      rate[k - 1] -= flux;
      rate[i - 1] += flux;
      rate[k - i - 1] += flux;
    }
  }
  return rate;
}

}  // namespace coagfrag::oracle
