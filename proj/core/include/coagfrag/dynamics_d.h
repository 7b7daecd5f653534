#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coagfrag/convolution.h"
#include "coagfrag/measures.h"

namespace coagfrag {

enum class StepControl { fixed, adaptive };

// Coagulation rate alpha and fragmentation rate beta; (2, 2) is the reference model.
struct RateParameters {
  double alpha = 2.0;
  double beta = 2.0;
};

struct SimulationConfigD {
  std::size_t truncation_n = 4096;
  double t_end = 50.0;
  // 0 selects 0.05 / (beta/2 + alpha m0) re-evaluated every step
  double dt_init = 0.0;
  StepControl dt_control = StepControl::fixed;
  double rel_tol = 1e-8;
  double record_every = 1.0;
  RateParameters rates;
  ConvolutionPath convolution = ConvolutionPath::automatic;
  // co-integrates the size-zero class f0 when set
  std::optional<double> ghost_init;

  void validate() const;
};

struct RunReport {
  std::vector<double> times;
  std::vector<MomentReport> moments;
  std::optional<std::vector<double>> distance_to_equilibrium;
  std::vector<double> f1_trace;
  std::vector<double> lost_mass_trace;
  std::vector<double> lost_number_trace;
  std::vector<double> ghost_f0_trace;  // empty unless the ghost class is tracked
  double initial_m1 = 0.0;
  double clamped_mass = 0.0;
  double most_negative_entry = 0.0;  // smallest entry seen before clamping
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  SizeDistribution final_state;

  // Finite-truncation bookkeeping for infinite-first-moment runs.
  double predicted_equilibrium_m0 = 0.0;
  double reequilibration_time = 0.0;  // NaN if not reached by t_end
  bool before_reequilibration = false;
};

struct RhsResult {
  std::vector<double> rate;
  double lost_mass_rate = 0.0;
  double lost_number_rate = 0.0;
};

double stability_bound(double m0, RateParameters rates = {});
double default_step(double m0, RateParameters rates = {});
// Solution of x' = x - x^2 with x(0) = x0.
double logistic_solution(double x0, double t);

RhsResult rhs_model_d(const SizeDistribution& dist, RateParameters rates = {},
                      ConvolutionPath path = ConvolutionPath::automatic);

// One RK4 step; negative entries down to -1e-9 are clamped and their mass added to *clamped_mass.
SizeDistribution step(const SizeDistribution& dist, double dt, RateParameters rates = {},
                      double* clamped_mass = nullptr);

RunReport run_model_d(const SizeDistribution& init, const SimulationConfigD& cfg,
                      const SizeDistribution* reference = nullptr);
RunReport run_to_equilibrium(const SizeDistribution& init, const SimulationConfigD& cfg);
RunReport run_infinite_m1(double exponent, std::size_t n, const SimulationConfigD& cfg);

SizeDistribution monodisperse_initial(std::size_t n, std::size_t size = 1, double density = 1.0);
SizeDistribution geometric_initial(std::size_t n, double q, double amplitude);
// f_i proportional to i^{-exponent}, normalized to m0 = 1
SizeDistribution powerlaw_initial(std::size_t n, double exponent);
SizeDistribution random_initial(std::size_t n, std::uint64_t seed);

std::string to_csv(const RunReport& report);
std::string summary_json(const RunReport& report);

}  // namespace coagfrag
