#pragma once

#include <span>
#include <string>
#include <vector>

namespace coagfrag {

inline constexpr double kBranchOffset = 4.0 / 27.0;

// Real branch of B = 1 + z B^3 with B(0) = 1, for z <= 4/27.
double b3(double z);

// Root U in [-1/2, 1) of U / (1 - U)^3 = s, for s >= -4/27; safeguarded Newton.
double u_star(double s);
// Same root from the cube/square-root closed form.
double u_star_closed_form(double s);

// Density of the exponentially rescaled profile: gamma_star(x) = int e^{-rho x} density(rho) drho.
double spectral_density(double rho);

double gamma_star_small_x(double x);
double gamma_star_large_x(double x);

double phi_niwa(double x);
double phi_log(double x);
// int_0^inf x phi_niwa(x) dx
double niwa_population_constant();

struct ProfileValue {
  double value = 0.0;
  double cancellation = 0.0;
  bool accuracy_warning = false;
};

struct ProfileSample {
  double x = 0.0;
  double f_star = 0.0;
  double gamma_star = 0.0;
  double phi_new = 0.0;
  double phi_niwa = 0.0;
  double phi_log = 0.0;
  double ratio_new = 1.0;
  double ratio_niwa = 0.0;
  double ratio_log = 0.0;
};

struct ProfileOptions {
  int series_terms = 45;
  double x_switch = 6.0;
};

class ContinuumProfile {
 public:
  ContinuumProfile();
  explicit ContinuumProfile(ProfileOptions options);

  const ProfileOptions& options() const { return options_; }
  double s0() const { return kBranchOffset; }
  // Relative disagreement of the two evaluation routes at x_switch.
  double switch_mismatch() const { return switch_mismatch_; }

  double f_star(double x) const;
  ProfileValue f_star_checked(double x) const;
  double gamma_star(double x) const;

  ProfileValue f_star_series(double x) const;
  double f_star_spectral(double x) const;
  double gamma_star_spectral(double x) const;

  double laplace_of_fstar(double s) const;
  // int_0^inf x^k f_star(x) dx, k in {0,1,2,3}
  double moment(int k) const;

  std::vector<ProfileSample> profiles_figure1(std::span<const double> x_grid) const;

 private:
  ProfileValue series_in_t(double t) const;
  double head_integral(double s, int k, double* error) const;
  double tail_integral(double s, int k, double* error) const;

  ProfileOptions options_;
  std::vector<double> coefficients_;
  double switch_mismatch_ = 0.0;
};

std::string figure1_csv(const std::vector<ProfileSample>& samples);

}  // namespace coagfrag
