#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coagfrag/convolution.h"
#include "coagfrag/measures.h"

namespace coagfrag {

struct EquilibriumD {
  double nu0 = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  std::vector<double> f;      // f_1..f_N
  std::vector<double> beta;   // beta_1..beta_N
  std::vector<double> gamma;  // f_i lambda^i
  // First unresolved size: below 1e-26 f_1 on the direct path or below double range on the
  // fft path. Entries from it on are zero (direct path).
  std::optional<std::size_t> underflow_index;

  std::size_t size() const { return f.size(); }
  SizeDistribution distribution() const { return SizeDistribution(f); }
};

double mu_from_nu(double nu0);
double nu_from_mu(double mu);
double lambda_from_mu(double mu);

struct RecursionOptions {
  // direct runs in quadruple precision; fft is the online FFT path in double
  ConvolutionPath path = ConvolutionPath::direct;
};

EquilibriumD equilibrium_recursion(double nu0, std::size_t n, RecursionOptions options = {});

// Taylor coefficients 0..n of G(z) = B3(mu (z - 1)), by implicit differentiation of
// B = 1 + w B^3 about w = -mu in 50-digit arithmetic.
std::vector<double> generating_oracle(double mu, std::size_t n);
// Same coefficients in exact rational arithmetic for rational nu0 = num/den.
std::vector<double> generating_oracle_rational(long num, long den, std::size_t n);

struct MonotonicityReport {
  double most_negative = 0.0;  // min over (k, j) of (I - S)^k gamma_j / gamma_j
  int order_at = 0;
  std::size_t index_at = 0;
  bool pass = true;
};

MonotonicityReport check_complete_monotonicity(std::span<const double> gamma, int max_order,
                                               std::size_t window, double tolerance = 1e-12);

// gamma_i / [(9/8) (mu lambda / pi)^{1/2} i^{-3/2}], 1 <= i <= N
double tail_asymptotic_ratio(const EquilibriumD& eq, std::size_t i);

// max_i |sum_{j<i} f_j f_{i-j} - (2 nu0 + 1) f_i + 2 beta_i|
double stationarity_residual(std::span<const double> f, std::span<const double> beta, double nu0);

std::string to_csv(const EquilibriumD& eq);
// Loads f and beta columns back from to_csv output.
EquilibriumD read_equilibrium_csv(const std::string& text, double nu0);
std::string summary_json(const EquilibriumD& eq, int max_order = 6, std::size_t window = 200);

}  // namespace coagfrag
