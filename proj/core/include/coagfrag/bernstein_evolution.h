#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace coagfrag {

enum class AverageQuadrature {
  trapezoid,  // trapezoid in log s, linear model on [0, s_min]
  lagrange6,  // 6-point Lagrange panels in log s, quadratic model on [0, s_min]
};

// U(s, t) on a positive log-spaced grid plus the s = infinity slot m0.
struct BernsteinField {
  std::vector<double> s_grid;
  std::vector<double> values;
  double m0 = 0.0;
  double time = 0.0;

  void validate(double concavity_tolerance = 1e-10) const;
  // Largest positive second divided difference (0 for a concave field).
  double concavity_defect() const;
};

std::vector<double> log_grid(double s_min, double s_max, std::size_t nodes);
std::vector<double> default_s_grid();

BernsteinField sample_field(std::vector<double> grid, const std::function<double(double)>& u,
                            double m0, double time = 0.0);
// U*(mu g_h(s)) with g_0(s) = s, g_h(s) = (1 - e^{-sh})/h.
BernsteinField equilibrium_field(std::vector<double> grid, double mu, double h = 0.0);

// Averaging operators A_0 (h = 0) and A_h (h > 0) on a fixed grid.
class AveragingOperator {
 public:
  explicit AveragingOperator(std::vector<double> grid,
                             AverageQuadrature quadrature = AverageQuadrature::lagrange6);

  const std::vector<double>& grid() const { return grid_; }
  // Fills out[j] = A(U)(s_j) and returns A(U)(infinity).
  double apply(std::span<const double> u, double m0, double h, std::vector<double>& out) const;

 private:
  double head_integral(std::span<const double> u, double h) const;

  std::vector<double> grid_;
  AverageQuadrature quadrature_;
  // per panel k: stencil start and weights over g = U w(s) s in log s
  std::vector<std::size_t> stencil_start_;
  std::vector<std::vector<double>> panel_weights_;
};

double running_average(const BernsteinField& field, std::size_t s_index,
                       AverageQuadrature quadrature = AverageQuadrature::lagrange6);
double scaled_average(const BernsteinField& field, std::size_t s_index, double h,
                      AverageQuadrature quadrature = AverageQuadrature::lagrange6);

struct ImexConfig {
  double dt = 0.01;
  double t_end = 10.0;
  AverageQuadrature quadrature = AverageQuadrature::lagrange6;
  double record_every = 1.0;

  void validate() const;
};

// Inverse of U -> U + dt (U^2 + U) for nonnegative input.
double imex_inverse(double u_hat, double dt);

BernsteinField imex_step(const BernsteinField& field, double dt, double h,
                         AverageQuadrature quadrature = AverageQuadrature::lagrange6);

struct EvolutionDiagnostics {
  double t = 0.0;
  double m0 = 0.0;
  double mu_est = 0.0;
  double sup_dist_to_equilibrium = 0.0;
  double logistic_deviation = 0.0;  // h = 0 only
  double max_growth_excess = 0.0;   // max over steps so far of U_n - e^{t_n} U_0
};

struct EvolutionRecord {
  double t = 0.0;
  BernsteinField field;
  EvolutionDiagnostics diagnostics;
};

// Six-point Lagrange interpolation in log s; s must lie within the grid.
double interpolate(const BernsteinField& field, double s);

// Richardson extrapolation of U(s)/s from the two smallest nodes.
double estimate_slope(const BernsteinField& field);

std::vector<EvolutionRecord> evolve(const BernsteinField& init, const ImexConfig& cfg, double h);

std::string to_csv(const BernsteinField& field);
std::string diagnostics_json(const EvolutionDiagnostics& d);

}  // namespace coagfrag
