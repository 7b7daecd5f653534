#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coagfrag/dynamics_d.h"
#include "coagfrag/equilibrium_d.h"

namespace coagfrag {

struct ScaledEquilibrium {
  double h = 0.0;
  double nu_h = 0.0;
  double mu_h = 0.0;
  EquilibriumD eq;  // unscaled sequence with m1 = mu_h / h
  double ghost_f0 = 0.0;
};

double h_from(double nu_h, double mu_h);
double nu_h_leading(double h, double mu_h);

// Size needed for the discarded tail to fall below double resolution (clamped to [64, cap]).
std::size_t scaled_truncation(double mu_h, double h, std::size_t cap = 20000);

// n = 0 selects scaled_truncation(mu_h, h).
ScaledEquilibrium scaled_equilibrium(double mu_h, double h, std::size_t n = 0);
ScaledEquilibrium scaled_equilibrium_from_nu(double nu_h, double mu_h, std::size_t n);

// U*(mu_h (1 - e^{-sh}) / h)
double scaled_transform_identity(double mu_h, double h, double s);

struct Figure2Row {
  double x = 0.0;
  double discrete_over_h = 0.0;
  double f_star = 0.0;
  double ratio = 0.0;
  double asym3 = 0.0;
};

struct Figure2Data {
  double h = 0.0;
  double nu_h = 0.0;
  double mu_h = 0.0;
  std::vector<Figure2Row> rows;
};

Figure2Data figure2_data(double nu_h, double mu_h, std::size_t n);
// (f^h_1 / h) / f_star(h) at mu_h = 1
double head_ratio(double h);
// Largest |ratio / asym3 - 1| over rows with x in [x_lo, x_hi].
double asym3_deviation(const Figure2Data& data, double x_lo, double x_hi);

struct HStudyOptions {
  bool dynamic = true;
  std::vector<double> times{1.0, 5.0};
  double imex_dt = 1e-3;
  double size_extent = 60.0;  // Model D sizes cover x <= size_extent * mu
};

struct HStudyRow {
  double h = 0.0;
  double E = 0.0;
  double order = 0.0;  // NaN for the first row
  double identity_error = 0.0;
  std::vector<double> dynamic_sup;  // one entry per HStudyOptions::times
};

std::vector<double> default_s_probe();

std::vector<HStudyRow> h_convergence_study(double mu, std::span<const double> h_values,
                                           std::span<const double> s_probe,
                                           const HStudyOptions& options = {});

struct GhostTrace {
  std::vector<double> times;
  std::vector<double> nu_hat;
  std::vector<double> logistic;
  double max_deviation = 0.0;
  RunReport run;
};

// Runs Model D with the ghost class co-integrated and compares f0 + m0 with the logistic law.
GhostTrace ghost_trace(const SizeDistribution& init, double ghost_f0, const SimulationConfigD& cfg);

std::string figure2_csv(const Figure2Data& data);
std::string h_study_csv(const std::vector<HStudyRow>& rows);

}  // namespace coagfrag
