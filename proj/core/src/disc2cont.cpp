#include "coagfrag/disc2cont.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coagfrag/bernstein_evolution.h"
#include "coagfrag/continuum_profile.h"
#include "coagfrag/errors.h"
#include "coagfrag/format.h"
#include "coagfrag/measures.h"
#include "coagfrag/parallel.h"

namespace coagfrag {
namespace {

void require_scaling(double mu_h, double h) {
  if (!(mu_h > 0.0)) throw DomainError("mu_h must be positive");
  if (!(h > 0.0)) throw DomainError("bin width must be positive");
}

const ContinuumProfile& profile() {
  static const ContinuumProfile p;
  return p;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

double h_from(double nu_h, double mu_h) {
  if (!(nu_h > 0.0 && nu_h < 1.0)) throw DomainError("nu_h must lie in (0, 1)");
  if (!(mu_h > 0.0)) throw DomainError("mu_h must be positive");
  double w = 1.0 - nu_h;
  return mu_h * w * w * w / nu_h;
}

double nu_h_leading(double h, double mu_h) {
  require_scaling(mu_h, h);
  return 1.0 - std::cbrt(h / mu_h);
}

std::size_t scaled_truncation(double mu_h, double h, std::size_t cap) {
  require_scaling(mu_h, h);
  double log_lambda = std::log1p(4.0 * h / (27.0 * mu_h));
  double n = std::ceil(34.0 / log_lambda);
  return static_cast<std::size_t>(std::clamp(n, 64.0, static_cast<double>(cap)));
}

ScaledEquilibrium scaled_equilibrium(double mu_h, double h, std::size_t n) {
  require_scaling(mu_h, h);
  double nu = nu_from_mu(mu_h / h);
  ScaledEquilibrium se;
  se.h = h;
  se.mu_h = mu_h;
  se.nu_h = nu;
  se.eq = equilibrium_recursion(nu, n == 0 ? scaled_truncation(mu_h, h) : n);
  se.ghost_f0 = 1.0 - nu;
  return se;
}

ScaledEquilibrium scaled_equilibrium_from_nu(double nu_h, double mu_h, std::size_t n) {
  double h = h_from(nu_h, mu_h);
  ScaledEquilibrium se;
  se.h = h;
  se.mu_h = mu_h;
  se.nu_h = nu_h;
  se.eq = equilibrium_recursion(nu_h, n);
  se.ghost_f0 = 1.0 - nu_h;
  return se;
}

double scaled_transform_identity(double mu_h, double h, double s) {
  require_scaling(mu_h, h);
  if (std::isinf(s)) return u_star(mu_h / h);
  return u_star(mu_h * -std::expm1(-s * h) / h);
}

Figure2Data figure2_data(double nu_h, double mu_h, std::size_t n) {
  ScaledEquilibrium se = scaled_equilibrium_from_nu(nu_h, mu_h, n);
  Figure2Data data;
  data.h = se.h;
  data.nu_h = nu_h;
  data.mu_h = mu_h;
  data.rows.resize(n);
  const double h = se.h;
  const double decay = 4.0 / (27.0 * mu_h);
  const double log_base = std::log1p(decay * h);
  parallel_for(n, [&](std::size_t k) {
    double i = static_cast<double>(k + 1);
    Figure2Row& row = data.rows[k];
    row.x = i * h;
    row.discrete_over_h = se.eq.f[k] / h;
    row.f_star = profile().f_star(row.x / mu_h) / mu_h;
    row.ratio = row.discrete_over_h / row.f_star;
    row.asym3 = std::exp(decay * row.x + (0.5 - i) * log_base);
  });
  return data;
}

double head_ratio(double h) {
  if (!(h > 0.0)) throw DomainError("bin width must be positive");
  double nu = nu_from_mu(1.0 / h);
  EquilibriumD eq = equilibrium_recursion(nu, 1);
  return eq.f[0] / h / profile().f_star(h);
}

double asym3_deviation(const Figure2Data& data, double x_lo, double x_hi) {
  double worst = 0.0;
  for (const auto& row : data.rows) {
    if (row.x >= x_lo && row.x <= x_hi) worst = std::max(worst, std::abs(row.ratio / row.asym3 - 1.0));
  }
  return worst;
}

std::vector<double> default_s_probe() { return log_grid(1e-2, 10.0, 61); }

namespace {

std::vector<double> dynamic_sups(double mu, double h, std::span<const double> s_probe,
                                 const HStudyOptions& options) {
  const std::size_t n = static_cast<std::size_t>(std::ceil(options.size_extent * mu / h));
  // exponential density (1/mu) e^{-x/mu}, binned by left endpoints
  std::vector<double> f(n);
  const double q = std::exp(-h / mu);
  const double mass = -std::expm1(-h / mu);
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    p *= q;
    f[i] = p * mass;
  }
  SimulationConfigD cfg;
  cfg.truncation_n = n;
  cfg.t_end = options.times.back();
  cfg.record_every = options.times.back();
  std::vector<double> sups;
  SizeDistribution state{f};
  double t = 0.0;

  BernsteinField field =
      sample_field(default_s_grid(), [mu](double s) { return mu * s / (1.0 + mu * s); }, 1.0);
  AveragingOperator op(field.s_grid);
  std::vector<double> scratch;
  for (double t_next : options.times) {
    cfg.t_end = t_next - t;
    cfg.record_every = cfg.t_end;
    RunReport run = run_model_d(state, cfg);
    state = run.final_state;
    ImexConfig imex;
    imex.dt = options.imex_dt;
    imex.t_end = t_next - t;
    imex.record_every = imex.t_end;
    field = evolve(field, imex, 0.0).back().field;
    t = t_next;
    std::vector<double> discrete = bernstein_of(state, s_probe, h);
    double worst = 0.0;
    for (std::size_t j = 0; j < s_probe.size(); ++j) {
      worst = std::max(worst, std::abs(discrete[j] - interpolate(field, s_probe[j])));
    }
    sups.push_back(worst);
  }
  return sups;
}

}  // namespace

std::vector<HStudyRow> h_convergence_study(double mu, std::span<const double> h_values,
                                           std::span<const double> s_probe,
                                           const HStudyOptions& options) {
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  for (std::size_t k = 0; k < h_values.size(); ++k) {
    if (!(h_values[k] > 0.0 && h_values[k] <= 1.0)) throw DomainError("h values must lie in (0, 1]");
    if (k > 0 && !(h_values[k] < h_values[k - 1])) throw DomainError("h values must decrease");
  }
  for (double t : options.times) {
    if (!(t > 0.0)) throw DomainError("study times must be positive");
  }
  if (options.dynamic && !std::is_sorted(options.times.begin(), options.times.end())) {
    throw DomainError("study times must increase");
  }
  std::vector<HStudyRow> rows(h_values.size());
  parallel_for(h_values.size(), [&](std::size_t k) {
    const double h = h_values[k];
    HStudyRow& row = rows[k];
    row.h = h;
    ScaledEquilibrium se = scaled_equilibrium(mu, h);
    std::vector<double> discrete = bernstein_of(se.eq.distribution(), s_probe, h);
    for (std::size_t j = 0; j < s_probe.size(); ++j) {
      double identity = scaled_transform_identity(mu, h, s_probe[j]);
      row.E = std::max(row.E, std::abs(identity - u_star(mu * s_probe[j])));
      row.identity_error = std::max(row.identity_error, std::abs(discrete[j] - identity));
    }
    if (options.dynamic) row.dynamic_sup = dynamic_sups(mu, h, s_probe, options);
  });
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].order = k == 0 ? nan()
                           : std::log(rows[k - 1].E / rows[k].E) / std::log(rows[k - 1].h / rows[k].h);
  }
  return rows;
}

GhostTrace ghost_trace(const SizeDistribution& init, double ghost_f0, const SimulationConfigD& cfg) {
  SimulationConfigD c = cfg;
  c.ghost_init = ghost_f0;
  GhostTrace trace;
  trace.run = run_model_d(init, c);
  const double r = 0.5 * c.rates.beta, capacity = c.rates.beta / c.rates.alpha;
  const double start = ghost_f0 + trace.run.moments.front().m0;
  for (std::size_t k = 0; k < trace.run.times.size(); ++k) {
    double t = trace.run.times[k];
    double nu_hat = trace.run.ghost_f0_trace[k] + trace.run.moments[k].m0;
    double logistic = start == 0.0 ? 0.0
                                   : capacity / (1.0 + (capacity - start) / start * std::exp(-r * t));
    trace.times.push_back(t);
    trace.nu_hat.push_back(nu_hat);
    trace.logistic.push_back(logistic);
    trace.max_deviation = std::max(trace.max_deviation, std::abs(nu_hat - logistic));
  }
  return trace;
}

std::string figure2_csv(const Figure2Data& data) {
  std::string out = "x,discrete_over_h,f_star,ratio,asym3\n";
  for (const auto& r : data.rows) {
    out += format_real(r.x) + ',' + format_real(r.discrete_over_h) + ',' + format_real(r.f_star) +
           ',' + format_real(r.ratio) + ',' + format_real(r.asym3) + '\n';
  }
  return out;
}

std::string h_study_csv(const std::vector<HStudyRow>& rows) {
  std::string out = "h,E,order\n";
  for (const auto& r : rows) {
    out += format_real(r.h) + ',' + format_real(r.E) + ',' + format_real(r.order) + '\n';
  }
  return out;
}

}  // namespace coagfrag
