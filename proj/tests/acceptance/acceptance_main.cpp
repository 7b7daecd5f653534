#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "coagfrag/bernstein_evolution.h"
#include "coagfrag/continuum_profile.h"
#include "coagfrag/disc2cont.h"
#include "coagfrag/dynamics_d.h"
#include "coagfrag/equilibrium_d.h"
#include "coagfrag/errors.h"
#include "oracles.h"

namespace {

using namespace coagfrag;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fails]");
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) { return log_grid(lo, hi, n); }

Outcome profile_moments() {
  Outcome o;
  ContinuumProfile p;
  double m0 = p.moment(0), m1 = p.moment(1), m2 = p.moment(2);
  o.require(std::abs(m0 - 1.0) <= 1e-6, fmt("|m0-1|=%.2e", std::abs(m0 - 1.0)));
  o.require(std::abs(m1 - 1.0) <= 1e-6, fmt("|m1-1|=%.2e", std::abs(m1 - 1.0)));
  o.require(std::abs(m2 - 6.0) <= 1e-4, fmt("|m2-6|=%.2e", std::abs(m2 - 6.0)));
  return o;
}

Outcome transform_identity() {
  Outcome o;
  double residual = 0.0, closed = 0.0;
  for (double s : log_spaced(1e-3, 1e3, 100)) {
    double u = u_star(s);
    residual = std::max(residual, std::abs(u / ((1.0 - u) * (1.0 - u) * (1.0 - u)) - s) / s);
    closed = std::max(closed, std::abs(u_star_closed_form(s) - u));
  }
  o.require(residual <= 1e-12, fmt("max relative residual=%.2e", residual));
  o.require(closed <= 1e-12, fmt("closed form vs root=%.2e", closed));
  return o;
}

Outcome laplace_consistency() {
  Outcome o;
  ContinuumProfile p;
  double worst = 0.0;
  for (double s : {0.1, 1.0, 10.0}) {
    worst = std::max(worst, std::abs(p.laplace_of_fstar(s) - (1.0 - oracle::u_star_bisection(s))));
  }
  o.require(worst <= 1e-6, fmt("max error=%.2e", worst));
  return o;
}

Outcome recursion_oracle() {
  Outcome o;
  double worst = 0.0;
  for (double mu : {1.0, 4.0, 9.375}) {
    EquilibriumD eq = equilibrium_recursion(nu_from_mu(mu), 50);
    auto g = oracle::shifted_b3_cauchy(mu, 50);
    for (std::size_t i = 1; i <= 50; ++i) worst = std::max(worst, std::abs(eq.f[i - 1] / g[i] - 1.0));
  }
  o.require(worst <= 1e-10, fmt("max relative error=%.2e", worst));
  return o;
}

Outcome complete_monotonicity() {
  Outcome o;
  for (double mu : {1.0, 4.0}) {
    EquilibriumD eq = equilibrium_recursion(nu_from_mu(mu), 206);
    MonotonicityReport r = check_complete_monotonicity(eq.gamma, 6, 200, 1e-12);
    o.require(r.pass, fmt("mu=%g", mu) + fmt(" min normalized difference=%.2e", r.most_negative));
  }
  return o;
}

Outcome tail_law() {
  Outcome o;
  EquilibriumD eq = equilibrium_recursion(0.6, 2000);
  double d1 = tail_asymptotic_ratio(eq, 1000) - 1.0;
  double d2 = tail_asymptotic_ratio(eq, 2000) - 1.0;
  o.require(std::abs(d2) <= 0.02, fmt("deviation at 2000=%.4f", d2));
  double halving = d2 / d1;
  o.require(halving >= 0.4 && halving <= 0.6, fmt("deviation ratio 2000/1000=%.3f", halving));
  return o;
}

RunReport& monodisperse_run() {
  static RunReport report = [] {
    SimulationConfigD cfg;
    cfg.truncation_n = 4096;
    cfg.t_end = 50.0;
    return run_to_equilibrium(monodisperse_initial(4096), cfg);
  }();
  return report;
}

Outcome conservation() {
  Outcome o;
  const RunReport& r = monodisperse_run();
  double drift = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    drift = std::max(drift, std::abs(r.moments[k].m1 + r.lost_mass_trace[k] - 1.0));
  }
  double lowest = std::min(r.most_negative_entry,
                           *std::min_element(r.final_state.entries().begin(), r.final_state.entries().end()));
  o.require(drift <= 1e-9, fmt("max |m1+lost-1|=%.2e", drift));
  o.require(lowest >= -1e-12, fmt("most negative entry=%.2e", lowest));
  return o;
}

Outcome convergence() {
  Outcome o;
  const RunReport& r = monodisperse_run();
  const auto& d = *r.distance_to_equilibrium;
  double reduction = d.front() / d.back();
  o.require(reduction >= 100.0, fmt("distance reduction=%.3g", reduction));
  bool monotone = true;
  for (std::size_t k = 1; k < r.times.size(); ++k) {
    if (r.times[k - 1] >= 10.0 && !(d[k] < d[k - 1])) monotone = false;
  }
  o.require(monotone, "monotone on [10, 50]");
  return o;
}

Outcome logistic_law() {
  Outcome o;
  SimulationConfigD cfg;
  cfg.truncation_n = 256;
  cfg.t_end = 20.0;
  cfg.dt_init = 0.01;
  cfg.record_every = 0.1;
  GhostTrace g = ghost_trace(geometric_initial(256, 0.5, 0.4), 0.1, cfg);
  o.require(g.max_deviation <= 1e-8, fmt("max |nu_hat - logistic|=%.2e", g.max_deviation));
  return o;
}

Outcome imex() {
  Outcome o;
  ImexConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 10.0;
  cfg.record_every = 0.1;
  BernsteinField eq = equilibrium_field(default_s_grid(), 1.0);
  double drift = 0.0, excess = 0.0;
  for (const auto& rec : evolve(eq, cfg, 0.0)) {
    for (std::size_t j = 0; j < eq.values.size(); ++j) {
      drift = std::max(drift, std::abs(rec.field.values[j] - eq.values[j]));
    }
    excess = std::max(excess, rec.diagnostics.max_growth_excess);
  }
  o.require(drift <= 1e-6, fmt("stationary drift=%.2e", drift));
  cfg.t_end = 40.0;
  cfg.record_every = 1.0;
  auto records = evolve(sample_field(default_s_grid(), [](double s) { return s / (1.0 + s); }, 1.0), cfg, 0.0);
  double dist = records.back().diagnostics.sup_dist_to_equilibrium;
  for (const auto& rec : records) excess = std::max(excess, rec.diagnostics.max_growth_excess);
  o.require(dist <= 0.01, fmt("sup distance at t=40=%.2e", dist));
  o.require(excess <= 1e-12, fmt("growth bound excess=%.2e", excess));
  return o;
}

Outcome infinite_first_moment() {
  Outcome o;
  SimulationConfigD cfg;
  cfg.t_end = 50.0;
  RunReport r = run_infinite_m1(2.0, 100000, cfg);
  double m0 = r.moments.back().m0;
  o.require(m0 >= 0.95 && m0 <= 1.05, fmt("m0(50)=%.4f", m0));
  bool decreasing = true;
  for (std::size_t k = 1; k < r.times.size(); ++k) {
    if (r.times[k - 1] >= 5.0 && !(r.f1_trace[k] < r.f1_trace[k - 1])) decreasing = false;
  }
  o.require(decreasing, "f1 strictly decreasing on [5, 50]");
  ImexConfig icfg;
  icfg.dt = 0.01;
  icfg.t_end = 60.0;
  icfg.record_every = 60.0;
  auto field = sample_field(log_grid(1e-12, 1e3, 451),
                            [](double s) { return std::sqrt(s) / (1.0 + std::sqrt(s)); }, 1.0);
  double u = interpolate(evolve(field, icfg, 0.0).back().field, 1.0);
  o.require(u >= 0.9, fmt("U(1, 60)=%.4f", u));
  return o;
}

Outcome discrete_to_continuum() {
  Outcome o;
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  auto rows = h_convergence_study(1.0, hs, default_s_probe());
  double min_order = INFINITY;
  for (std::size_t k = 1; k < rows.size(); ++k) min_order = std::min(min_order, rows[k].order);
  o.require(min_order >= 0.9, fmt("min empirical order=%.3f", min_order));
  Figure2Data fig = figure2_data(0.6, 1.0, 400);
  double dev = asym3_deviation(fig, 5.0, 30.0);
  o.require(dev <= 0.01, fmt("h=%.5f", fig.h) + fmt(" tail ratio deviation=%.4f", dev));
  const double target = std::tgamma(1.0 / 3.0) / 3.0;
  double r2 = head_ratio(1e-2), r3 = head_ratio(1e-3), r4 = head_ratio(1e-4);
  bool trend = std::abs(r4 - target) < std::abs(r3 - target) && std::abs(r3 - target) < std::abs(r2 - target);
  o.require(trend && std::abs(r4 / target - 1.0) <= 0.05, fmt("head ratio at 1e-4=%.5f", r4));
  return o;
}

Outcome figure1() {
  Outcome o;
  ContinuumProfile p;
  double worst_log = 0.0, worst_niwa = 0.0;
  for (const auto& s : p.profiles_figure1(log_spaced(0.1, 3.0, 200))) {
    worst_log = std::max(worst_log, std::abs(1.0 / s.ratio_log - 1.0));
    worst_niwa = std::max(worst_niwa, std::abs(1.0 / s.ratio_niwa - 1.0));
  }
  o.require(worst_log <= 0.10, fmt("max |phi/phi_log-1|=%.4f", worst_log));
  o.require(worst_niwa <= 0.20, fmt("max |phi/phi_niwa-1|=%.4f", worst_niwa));
  std::vector<double> lx, ly;
  for (double x : log_spaced(1e-6, 1e-4, 40)) {
    lx.push_back(std::log(x));
    ly.push_back(std::log(6.0 * p.f_star(6.0 * x)));
  }
  double small = fit_slope(lx, ly);
  o.require(std::abs(small / (-2.0 / 3.0) - 1.0) <= 0.03, fmt("small-x slope=%.4f", small));
  lx.clear();
  ly.clear();
  for (double x : log_spaced(20.0, 100.0, 40)) {
    lx.push_back(std::log(x));
    ly.push_back(std::log(6.0 * p.f_star(6.0 * x)) + 8.0 * x / 9.0);
  }
  double large = fit_slope(lx, ly);
  o.require(std::abs(large / -1.5 - 1.0) <= 0.03, fmt("large-x slope=%.4f", large));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "profile moments", 1.0, profile_moments},
      {2, "equilibrium transform identity", 0.1, transform_identity},
      {3, "Laplace consistency", 1.0, laplace_consistency},
      {4, "recursion matches generating-function oracle", 1.0, recursion_oracle},
      {5, "complete monotonicity", 0.1, complete_monotonicity},
      {6, "tail law", 5.0, tail_law},
      {7, "conservation under dynamics", 60.0, conservation},
      {8, "convergence to equilibrium", 60.0, convergence},
      {9, "logistic zeroth-moment law", 10.0, logistic_law},
      {10, "IMEX stationarity and stability", 30.0, imex},
      {11, "infinite first moment", 180.0, infinite_first_moment},
      {12, "discrete-to-continuum limit", 60.0, discrete_to_continuum},
      {13, "Figure 1 profile comparison", 5.0, figure1},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= c.budget_seconds, fmt("%.2f s", seconds) + fmt(" of %.1f s budget", c.budget_seconds));
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
