#include "coagfrag/continuum_profile.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "coagfrag/errors.h"
#include "coagfrag/format.h"
#include "coagfrag/parallel.h"
#include "numerics.h"

namespace coagfrag {
namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kQuadTol = 1e-14;
constexpr double kAcceptedQuadError = 1e-10;
// e^{-46} is below double resolution relative to the retained integral
constexpr double kExponentCut = 46.0;
constexpr double kUnderflowExponent = 746.0;

double u_star_small(double s) {
  // U = sum_n (-1)^{n-1} C(3n, n-1)/n s^n
  static const double c[] = {1.0, -3.0, 12.0, -55.0, 273.0, -1428.0, 7752.0, -43263.0};
  double acc = 0.0;
  for (int n = 7; n >= 0; --n) acc = acc * s + c[n];
  return acc * s;
}

// log|1/Gamma(a)| and its sign, with a = (4 - 2n)/3; zero at the poles n = 2 mod 3.
double series_coefficient(int n) {
  int r = n % 3;
  if (r == 2) return 0.0;
  double a = (4.0 - 2.0 * n) / 3.0;
  double log_n_fact = std::lgamma(n + 1.0);
  double magnitude, sign;
  if (a > 0.0) {
    magnitude = -std::lgamma(a) - log_n_fact;
    sign = 1.0;
  } else {
    // 1/Gamma(a) = sin(pi a) Gamma(1 - a) / pi
    double sin_pa = r == 0 ? -std::sqrt(3.0) / 2.0 : std::sqrt(3.0) / 2.0;
    magnitude = std::log(std::abs(sin_pa)) + std::lgamma(1.0 - a) - std::log(std::numbers::pi) -
                log_n_fact;
    sign = sin_pa > 0.0 ? 1.0 : -1.0;
  }
  if (n % 2 == 1) sign = -sign;
  return sign * std::exp(magnitude);
}

template <class F>
double integrate(F f, double a, double b, double* error) {
  double err = 0.0;
  double value = gauss_kronrod<double, 61>::integrate(f, a, b, 20, kQuadTol, &err);
  if (error) *error += err;
  return value;
}

// int_X^inf x^k e^{-a x} dx
double exponential_tail(double a, double X, int k) {
  double sum = 0.0, term = 1.0 / a;
  // term_j = k!/(k-j)! X^{k-j} / a^{j+1}, accumulated from j = 0
  double power = std::pow(X, k);
  double falling = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += falling * power * term;
    term /= a;
    if (X > 0.0) power /= X;
    falling *= static_cast<double>(k - j);
  }
  return std::exp(-a * X) * sum;
}

}  // namespace

double b3(double z) {
  if (std::isnan(z) || z > kBranchOffset) throw DomainError("b3 requires z <= 4/27");
  if (z == kBranchOffset) return 1.5;
  if (z == 0.0) return 1.0;
  auto g = [z](double b) { return z * b * b * b - b + 1.0; };
  auto dg = [z](double b) { return 3.0 * z * b * b - 1.0; };
  if (z < 0.0) {
    double guess = 1.0 / (1.0 + std::cbrt(-z));
    return detail::safeguarded_newton(g, dg, 0.0, 1.0, guess);
  }
  return detail::safeguarded_newton(g, dg, 1.0, 1.5, 1.0 + z);
}

double u_star(double s) {
  if (std::isnan(s) || s < -kBranchOffset) throw DomainError("u_star requires s >= -4/27");
  if (s == -kBranchOffset) return -0.5;
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return 1.0;
  auto g = [s](double u) {
    double w = 1.0 - u;
    return u - s * w * w * w;
  };
  auto dg = [s](double u) {
    double w = 1.0 - u;
    return 1.0 + 3.0 * s * w * w;
  };
  double guess = 1.0 - 1.0 / std::cbrt(1.0 + 3.0 * s);
  return detail::safeguarded_newton(g, dg, -0.5, 1.0, guess);
}

double u_star_closed_form(double s) {
  if (std::isnan(s) || s < -kBranchOffset) throw DomainError("u_star requires s >= -4/27");
  if (std::isinf(s)) return 1.0;
  if (std::abs(s) < 1e-4) return u_star_small(s);
  if (s > 0.0) {
    double a = std::sqrt(s + kBranchOffset);
    double b = std::sqrt(s);
    double plus = 0.5 * (a + b);
    double minus = 0.5 * kBranchOffset / (a + b);
    double d = std::cbrt(plus) - std::cbrt(minus);
    return d * d * d / b;
  }
  double r = -s;
  std::complex<double> z(0.5 * std::sqrt(s + kBranchOffset), 0.5 * std::sqrt(r));
  double im = std::pow(z, 1.0 / 3.0).imag();
  return -8.0 * im * im * im / std::sqrt(r);
}

double spectral_density(double rho) {
  if (!(rho > 0.0)) return 0.0;
  if (std::isinf(rho)) return 0.0;
  double s = -kBranchOffset - rho;
  double sqrt_d = std::sqrt(-rho / (4.0 * s * s * s));
  double v = std::cbrt(0.5 / s - sqrt_d);
  double u = -1.0 / (3.0 * s * v);
  return std::sqrt(3.0) * sqrt_d / (std::numbers::pi * (u * u + u * v + v * v));
}

double gamma_star_small_x(double x) { return std::pow(x, -2.0 / 3.0) / std::tgamma(1.0 / 3.0); }

double gamma_star_large_x(double x) {
  return 9.0 / 8.0 * std::pow(x, -1.5) / std::sqrt(std::numbers::pi);
}

double phi_niwa(double x) { return std::exp(-x + 0.5 * x * std::exp(-x)) / x; }

double phi_log(double x) { return std::exp(-x) / x; }

double niwa_population_constant() {
  static const double value = [] {
    double err = 0.0;
    return integrate([](double x) { return std::exp(-x + 0.5 * x * std::exp(-x)); }, 0.0, 60.0,
                     &err);
  }();
  return value;
}

ContinuumProfile::ContinuumProfile() : ContinuumProfile(ProfileOptions{}) {}

ContinuumProfile::ContinuumProfile(ProfileOptions options) : options_(options) {
  if (options_.series_terms < 10) throw DomainError("series_terms must be at least 10");
  if (!(options_.x_switch > 0.0)) throw DomainError("x_switch must be positive");
  coefficients_.resize(static_cast<std::size_t>(options_.series_terms));
  for (int n = 0; n < options_.series_terms; ++n) coefficients_[n] = series_coefficient(n);
  double xs = options_.x_switch;
  double by_series = f_star_series(xs).value;
  double by_spectrum = f_star_spectral(xs);
  switch_mismatch_ = std::abs(by_series - by_spectrum) / by_spectrum;
  if (!(switch_mismatch_ <= 1e-6)) {
    throw DomainError("series and spectral evaluations disagree at x_switch (relative " +
                      format_real(switch_mismatch_) + "); lower x_switch or add terms");
  }
}

ProfileValue ContinuumProfile::series_in_t(double t) const {
  detail::CompensatedSum sum;
  double abs_sum = 0.0;
  double power = 1.0;
  for (double c : coefficients_) {
    double term = c * power;
    sum.add(term);
    abs_sum += std::abs(term);
    power *= t;
  }
  ProfileValue out;
  out.value = sum.value();
  out.cancellation = out.value != 0.0 ? kEps * abs_sum / std::abs(out.value) : 1.0;
  out.accuracy_warning = out.cancellation > 1e-8;
  return out;
}

ProfileValue ContinuumProfile::f_star_series(double x) const {
  if (!(x > 0.0)) throw DomainError("f_star requires x > 0");
  double t = std::cbrt(x);
  ProfileValue s = series_in_t(t);
  s.value /= 3.0 * t * t;
  return s;
}

double ContinuumProfile::gamma_star_spectral(double x) const {
  if (!(x > 0.0)) throw DomainError("f_star requires x > 0");
  // rho = w^2 / x puts the decay scale at w = O(1) for every x
  const double inv_x = 1.0 / x;
  double err = 0.0;
  double value = integrate(
      [inv_x](double w) {
        double rho = w * w * inv_x;
        return 2.0 * w * spectral_density(rho) * std::exp(-w * w);
      },
      0.0, std::sqrt(kExponentCut), &err);
  if (err > kAcceptedQuadError * std::abs(value) + 1e-300) {
    throw QuadratureError("spectral quadrature did not converge", err * inv_x);
  }
  return value * inv_x;
}

double ContinuumProfile::f_star_spectral(double x) const {
  const double decay = kBranchOffset * x;
  if (decay > kUnderflowExponent) return 0.0;
  return gamma_star_spectral(x) * std::exp(-decay);
}

ProfileValue ContinuumProfile::f_star_checked(double x) const {
  if (!(x > 0.0)) throw DomainError("f_star requires x > 0");
  if (x <= options_.x_switch) {
    ProfileValue v = f_star_series(x);
    v.value = std::max(v.value, 0.0);
    return v;
  }
  ProfileValue v;
  v.value = f_star_spectral(x);
  return v;
}

double ContinuumProfile::f_star(double x) const { return f_star_checked(x).value; }

double ContinuumProfile::gamma_star(double x) const {
  if (!(x > 0.0)) throw DomainError("f_star requires x > 0");
  if (x <= options_.x_switch) return f_star(x) * std::exp(kBranchOffset * x);
  return gamma_star_spectral(x);
}

double ContinuumProfile::head_integral(double s, int k, double* error) const {
  double t_max = std::cbrt(options_.x_switch);
  return integrate(
      [&](double t) {
        double t3 = t * t * t;
        return std::exp(-s * t3) * std::pow(t3, k) * series_in_t(t).value;
      },
      0.0, t_max, error);
}

double ContinuumProfile::tail_integral(double s, int k, double* error) const {
  double X = options_.x_switch;
  double c = s + kBranchOffset;
  double vmax = std::sqrt(kExponentCut / X);
  return integrate(
      [&](double v) {
        double rho = v * v;
        return 2.0 * v * spectral_density(rho) * exponential_tail(c + rho, X, k);
      },
      0.0, vmax, error);
}

double ContinuumProfile::laplace_of_fstar(double s) const {
  if (!(s > 0.0)) throw DomainError("laplace_of_fstar requires s > 0");
  double err = 0.0;
  double value = head_integral(s, 0, &err) + tail_integral(s, 0, &err);
  if (err > kAcceptedQuadError) throw QuadratureError("Laplace quadrature did not converge", err);
  return value;
}

double ContinuumProfile::moment(int k) const {
  if (k < 0 || k > 3) throw DomainError("moment order must be in {0,1,2,3}");
  double err = 0.0;
  double value = head_integral(0.0, k, &err) + tail_integral(0.0, k, &err);
  if (err > kAcceptedQuadError * std::max(1.0, value)) {
    throw QuadratureError("moment quadrature did not converge", err);
  }
  return value;
}

std::vector<ProfileSample> ContinuumProfile::profiles_figure1(std::span<const double> x_grid) const {
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    double x = x_grid[j];
    if (!(x >= 1e-3 * (1 - 1e-12) && x <= 1e2 * (1 + 1e-12))) {
      throw DomainError("figure grid must lie within [1e-3, 1e2]");
    }
    if (j > 0 && !(x > x_grid[j - 1])) throw DomainError("figure grid must be strictly increasing");
  }
  const double niwa_norm = 6.0 * niwa_population_constant();
  std::vector<ProfileSample> out(x_grid.size());
  parallel_for(x_grid.size(), [&](std::size_t j) {
    ProfileSample& p = out[j];
    p.x = x_grid[j];
    p.f_star = f_star(p.x);
    p.gamma_star = gamma_star(p.x);
    p.phi_new = 6.0 * f_star(6.0 * p.x);
    p.phi_niwa = phi_niwa(p.x);
    p.phi_log = phi_log(p.x);
    p.ratio_new = 1.0;
    p.ratio_niwa = p.phi_niwa / niwa_norm / p.phi_new;
    p.ratio_log = p.phi_log / 6.0 / p.phi_new;
  });
  return out;
}

std::string figure1_csv(const std::vector<ProfileSample>& samples) {
  std::string out = "x,phi_new,phi_niwa,phi_log,ratio_new,ratio_niwa,ratio_log\n";
  for (const auto& p : samples) {
    out += format_real(p.x) + ',' + format_real(p.phi_new) + ',' + format_real(p.phi_niwa) + ',' +
           format_real(p.phi_log) + ',' + format_real(p.ratio_new) + ',' +
           format_real(p.ratio_niwa) + ',' + format_real(p.ratio_log) + '\n';
  }
  return out;
}

}  // namespace coagfrag
