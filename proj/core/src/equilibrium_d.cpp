#include "coagfrag/equilibrium_d.h"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coagfrag/continuum_profile.h"
#include "coagfrag/errors.h"
#include "coagfrag/format.h"

namespace coagfrag {
namespace {

using quad = __float128;
using big_float = boost::multiprecision::cpp_bin_float_50;
using big_rational = boost::multiprecision::cpp_rational;

void require_nu(double nu0) {
  if (!(nu0 > 0.0 && nu0 < 1.0)) throw DomainError("nu0 must lie in (0, 1)");
}

// the subtractive beta update leaves an absolute error near 1e-41 in quad precision
constexpr double kResolvableFraction = 1e-26;

void record_underflow(EquilibriumD& eq, std::size_t i) {
  if (!eq.underflow_index) eq.underflow_index = i;
}

void finish_gamma(EquilibriumD& eq) {
  const std::size_t n = eq.f.size();
  eq.gamma.resize(n);
  quad lambda = eq.lambda;
  quad power = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    power *= lambda;
    eq.gamma[i - 1] = static_cast<double>(static_cast<quad>(eq.f[i - 1]) * power);
  }
}

void recursion_direct(EquilibriumD& eq, std::size_t n) {
  const quad nu = eq.nu0;
  const quad denom = 1 + 2 * nu;
  quad beta = (nu - nu * nu) / 2;
  std::vector<quad> f(n + 1, 0);
  eq.f.assign(n, 0.0);
  eq.beta.assign(n, 0.0);
  quad floor = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    quad conv = 0;
    std::size_t j = 1, p = i - 1;
    while (j < p) {
      conv += f[j] * f[p];
      ++j;
      --p;
    }
    conv *= 2;
    if (j == p) conv += f[j] * f[j];
    f[i] = (2 * beta + conv) / denom;
    if (i == 1) floor = kResolvableFraction * f[1];
    double fi = static_cast<double>(f[i]);
    if (f[i] < floor || fi < DBL_MIN) {
      record_underflow(eq, i);
      return;
    }
    eq.beta[i - 1] = static_cast<double>(beta);
    eq.f[i - 1] = fi;
    beta -= f[i] / static_cast<quad>(i + 1);
  }
}

struct OnlineRecursion {
  double denom;
  double beta;
  std::vector<double> f;     // f[0] = 0
  std::vector<double> conv;  // pending sums of f_j f_{i-j}
  std::vector<double> betas;
  std::vector<double> scratch;

  void leaf(std::size_t i) {
    if (i == 0 || i >= f.size()) return;
    f[i] = (2.0 * beta + conv[i]) / denom;
    betas[i] = beta;
    beta -= f[i] / static_cast<double>(i + 1);
  }

  void solve(std::size_t l, std::size_t r) {
    if (r - l == 1) {
      leaf(l);
      return;
    }
    std::size_t m = (l + r) / 2;
    solve(l, m);
    std::size_t hi = std::min(m, f.size());
    if (l < hi) {
      scratch.assign(r - l, 0.0);
      std::span<const double> head(f.data() + l, hi - l);
      if (l == 0) {
        accumulate_cross_convolution(head, head, 1.0, scratch);
      } else {
        std::span<const double> low(f.data(), std::min(r - l, f.size()));
        accumulate_cross_convolution(head, low, 2.0, scratch);
      }
      for (std::size_t t = m - l; t < r - l && l + t < conv.size(); ++t) conv[l + t] += scratch[t];
    }
    solve(m, r);
  }
};

void recursion_fft(EquilibriumD& eq, std::size_t n) {
  OnlineRecursion rec;
  rec.denom = 1.0 + 2.0 * eq.nu0;
  rec.beta = 0.5 * (eq.nu0 - eq.nu0 * eq.nu0);
  rec.f.assign(n + 1, 0.0);
  rec.conv.assign(n + 1, 0.0);
  rec.betas.assign(n + 1, 0.0);
  std::size_t size = 1;
  while (size < n + 1) size *= 2;
  rec.solve(0, size);
  eq.f.assign(rec.f.begin() + 1, rec.f.end());
  eq.beta.assign(rec.betas.begin() + 1, rec.betas.end());
  for (std::size_t i = 1; i <= n; ++i) {
    if (eq.f[i - 1] < DBL_MIN) {
      record_underflow(eq, i);
      break;
    }
  }
}

template <class T>
std::vector<T> shifted_b3_coefficients(const T& w0, const T& b0, std::size_t n) {
  std::vector<T> b(n + 1), p(n + 1), c(n + 1);
  b[0] = b0;
  p[0] = b0 * b0;
  c[0] = p[0] * b0;
  const T denom = T(1) - T(3) * w0 * p[0];
  for (std::size_t k = 1; k <= n; ++k) {
    T pp = 0, rr = 0;
    for (std::size_t i = 1; i < k; ++i) {
      pp += b[i] * b[k - i];
      rr += p[i] * b[k - i];
    }
    b[k] = (w0 * (b0 * pp + rr) + c[k - 1]) / denom;
    p[k] = T(2) * b0 * b[k] + pp;
    c[k] = T(3) * p[0] * b[k] + b0 * pp + rr;
  }
  return b;
}

void check_oracle_decay(const std::vector<double>& g, double lambda) {
  double prev = 0.0;
  double power = 1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!std::isfinite(g[k]) || g[k] < 0.0) {
      throw InstabilityError("generating-function coefficients lost positivity at index " +
                             std::to_string(k));
    }
    if (k >= 1) {
      power *= lambda;
      double gamma = g[k] * power;
      if (k >= 2 && gamma > prev * (1.0 + 1e-8)) {
        throw InstabilityError("generating-function coefficients grow at index " +
                               std::to_string(k));
      }
      prev = gamma;
    }
  }
}

}  // namespace

double mu_from_nu(double nu0) {
  require_nu(nu0);
  double w = 1.0 - nu0;
  return nu0 / (w * w * w);
}

double nu_from_mu(double mu) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  return u_star(mu);
}

double lambda_from_mu(double mu) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  return 1.0 + 4.0 / (27.0 * mu);
}

EquilibriumD equilibrium_recursion(double nu0, std::size_t n, RecursionOptions options) {
  require_nu(nu0);
  if (n < 1) throw DomainError("equilibrium recursion needs n >= 1");
  EquilibriumD eq;
  eq.nu0 = nu0;
  eq.mu = mu_from_nu(nu0);
  eq.lambda = lambda_from_mu(eq.mu);
  if (options.path == ConvolutionPath::fft) {
    recursion_fft(eq, n);
  } else {
    recursion_direct(eq, n);
  }
  finish_gamma(eq);
  return eq;
}

std::vector<double> generating_oracle(double mu, std::size_t n) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  const big_float m = mu;
  big_float b0 = b3(-mu);
  for (int it = 0; it < 8; ++it) {
    big_float f = m * b0 * b0 * b0 + b0 - 1;
    b0 -= f / (3 * m * b0 * b0 + 1);
  }
  auto b = shifted_b3_coefficients<big_float>(-m, b0, n);
  std::vector<double> g(n + 1);
  big_float power = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    g[k] = static_cast<double>(b[k] * power);
    power *= m;
  }
  check_oracle_decay(g, lambda_from_mu(mu));
  return g;
}

std::vector<double> generating_oracle_rational(long num, long den, std::size_t n) {
  if (den <= 0 || num <= 0 || num >= den) throw DomainError("nu0 = num/den must lie in (0, 1)");
  const big_rational nu(num, den);
  const big_rational w = 1 - nu;
  const big_rational m = nu / (w * w * w);
  auto b = shifted_b3_coefficients<big_rational>(-m, w, n);
  std::vector<double> g(n + 1);
  big_rational power = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    g[k] = static_cast<double>(b[k] * power);
    power *= m;
  }
  check_oracle_decay(g, lambda_from_mu(static_cast<double>(m)));
  return g;
}

MonotonicityReport check_complete_monotonicity(std::span<const double> gamma, int max_order,
                                               std::size_t window, double tolerance) {
  if (max_order < 1 || max_order > 8) throw DomainError("max_order must be in [1, 8]");
  if (window + static_cast<std::size_t>(max_order) > gamma.size()) {
    throw DomainError("window + max_order exceeds the sequence length");
  }
  std::vector<double> diff(gamma.begin(), gamma.begin() + window + max_order);
  MonotonicityReport report;
  report.most_negative = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_order; ++k) {
    for (std::size_t j = 0; j + k < window + max_order; ++j) diff[j] -= diff[j + 1];
    for (std::size_t j = 0; j < window; ++j) {
      double normalized = diff[j] / gamma[j];
      if (normalized < report.most_negative) {
        report.most_negative = normalized;
        report.order_at = k;
        report.index_at = j;
      }
    }
  }
  report.pass = report.most_negative >= -tolerance;
  return report;
}

double tail_asymptotic_ratio(const EquilibriumD& eq, std::size_t i) {
  if (i < 1 || i > eq.gamma.size()) throw DomainError("index outside the equilibrium range");
  if (eq.underflow_index && i >= *eq.underflow_index) {
    throw DomainError("index beyond the resolved part of the equilibrium");
  }
  double amplitude = 9.0 / 8.0 * std::sqrt(eq.mu * eq.lambda / std::numbers::pi);
  return eq.gamma[i - 1] / (amplitude * std::pow(static_cast<double>(i), -1.5));
}

double stationarity_residual(std::span<const double> f, std::span<const double> beta, double nu0) {
  if (f.size() != beta.size()) throw DomainError("f and beta lengths differ");
  double worst = 0.0;
  for (std::size_t i = 1; i <= f.size(); ++i) {
    double conv = 0.0;
    for (std::size_t j = 1; j < i; ++j) conv += f[j - 1] * f[i - j - 1];
    double r = conv - (2.0 * nu0 + 1.0) * f[i - 1] + 2.0 * beta[i - 1];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::string to_csv(const EquilibriumD& eq) {
  std::string out = "i,f,beta,gamma,tail_ratio\n";
  for (std::size_t i = 1; i <= eq.f.size(); ++i) {
    const bool resolved = !eq.underflow_index || i < *eq.underflow_index;
    out += std::to_string(i) + ',' + format_real(eq.f[i - 1]) + ',' +
           format_real(eq.beta[i - 1]) + ',' + format_real(eq.gamma[i - 1]) + ',' +
           format_real(resolved ? tail_asymptotic_ratio(eq, i) : std::numeric_limits<double>::quiet_NaN()) +
           '\n';
  }
  return out;
}

EquilibriumD read_equilibrium_csv(const std::string& text, double nu0) {
  require_nu(nu0);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line.rfind("i,f,beta", 0) != 0) throw DomainError("equilibrium file must start with i,f,beta");
  EquilibriumD eq;
  eq.nu0 = nu0;
  eq.mu = mu_from_nu(nu0);
  eq.lambda = lambda_from_mu(eq.mu);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw DomainError("malformed equilibrium row: " + line);
    if (std::stoul(cells[0]) != eq.f.size() + 1) throw DomainError("rows must be consecutive");
    eq.f.push_back(std::stod(cells[1]));
    eq.beta.push_back(std::stod(cells[2]));
  }
  finish_gamma(eq);
  return eq;
}

std::string summary_json(const EquilibriumD& eq, int max_order, std::size_t window) {
  JsonObject obj;
  obj.add_real("nu0", eq.nu0).add_real("mu", eq.mu).add_real("lambda", eq.lambda);
  obj.add_int("n", static_cast<long long>(eq.f.size()));
  std::size_t w = std::min(window, eq.gamma.size() > static_cast<std::size_t>(max_order)
                                       ? eq.gamma.size() - max_order
                                       : std::size_t{0});
  double violation = 0.0;
  if (w > 0) {
    auto report = check_complete_monotonicity(eq.gamma, max_order, w);
    violation = std::max(0.0, -report.most_negative);
  }
  obj.add_real("max_cm_violation", violation);
  return obj.str();
}

}  // namespace coagfrag
