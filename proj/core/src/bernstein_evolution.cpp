#include "coagfrag/bernstein_evolution.h"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "coagfrag/continuum_profile.h"
#include "coagfrag/dynamics_d.h"
#include "coagfrag/errors.h"
#include "coagfrag/format.h"
#include "coagfrag/parallel.h"

namespace coagfrag {
namespace {

using boost::math::quadrature::gauss;

constexpr std::size_t kStencil = 6;

double weight(double r, double h) { return h > 0.0 ? std::exp(-r * h) : 1.0; }

// h / (1 - e^{-sh}), tending to 1/s as h -> 0
double scaled_normalizer(double s, double h) {
  if (h == 0.0) return 1.0 / s;
  return h / -std::expm1(-s * h);
}

double scaled_argument(double s, double h) {
  if (h == 0.0) return s;
  return -std::expm1(-s * h) / h;
}

}  // namespace

double BernsteinField::concavity_defect() const {
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < s_grid.size(); ++j) {
    double left = (values[j] - values[j - 1]) / (s_grid[j] - s_grid[j - 1]);
    double right = (values[j + 1] - values[j]) / (s_grid[j + 1] - s_grid[j]);
    double dd = 2.0 * (right - left) / (s_grid[j + 1] - s_grid[j - 1]);
    worst = std::max(worst, dd);
  }
  return worst;
}

void BernsteinField::validate(double concavity_tolerance) const {
  if (s_grid.size() != values.size() || s_grid.empty()) {
    throw DomainError("field grid and values must have equal nonzero length");
  }
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    if (!(s_grid[j] > 0.0)) throw DomainError("s grid must be positive");
    if (j > 0 && !(s_grid[j] > s_grid[j - 1])) throw DomainError("s grid must increase");
    if (j > 0 && values[j] < values[j - 1] - 1e-12) throw DomainError("field must be nondecreasing");
    if (values[j] < -1e-12 || values[j] > m0 + 1e-12) throw DomainError("field must lie in [0, m0]");
  }
  if (concavity_defect() > concavity_tolerance) throw DomainError("field must be concave");
}

std::vector<double> log_grid(double s_min, double s_max, std::size_t nodes) {
  if (!(s_min > 0.0 && s_max > s_min) || nodes < 2) throw DomainError("invalid log grid");
  std::vector<double> grid(nodes);
  double a = std::log(s_min), b = std::log(s_max);
  for (std::size_t j = 0; j < nodes; ++j) {
    grid[j] = std::exp(a + (b - a) * static_cast<double>(j) / static_cast<double>(nodes - 1));
  }
  grid.front() = s_min;
  grid.back() = s_max;
  return grid;
}

std::vector<double> default_s_grid() { return log_grid(1e-4, 1e3, 200); }

BernsteinField sample_field(std::vector<double> grid, const std::function<double(double)>& u,
                            double m0, double time) {
  BernsteinField field;
  field.values.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) field.values[j] = u(grid[j]);
  field.s_grid = std::move(grid);
  field.m0 = m0;
  field.time = time;
  return field;
}

BernsteinField equilibrium_field(std::vector<double> grid, double mu, double h) {
  if (!(mu > 0.0) || !(h >= 0.0)) throw DomainError("equilibrium field needs mu > 0, h >= 0");
  double m0 = h > 0.0 ? u_star(mu / h) : 1.0;
  return sample_field(
      std::move(grid), [&](double s) { return u_star(mu * scaled_argument(s, h)); }, m0);
}

AveragingOperator::AveragingOperator(std::vector<double> grid, AverageQuadrature quadrature)
    : grid_(std::move(grid)), quadrature_(quadrature) {
  const std::size_t n = grid_.size();
  if (n < 2) throw DomainError("averaging grid needs at least two nodes");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(grid_[j] > 0.0) || (j > 0 && !(grid_[j] > grid_[j - 1]))) {
      throw DomainError("averaging grid must be positive and increasing");
    }
  }
  std::vector<double> tau(n);
  for (std::size_t j = 0; j < n; ++j) tau[j] = std::log(grid_[j]);
  const std::size_t p = quadrature_ == AverageQuadrature::lagrange6 ? std::min(kStencil, n) : 2;
  stencil_start_.resize(n - 1);
  panel_weights_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t st = k >= p / 2 - 1 ? k - (p / 2 - 1) : 0;
    st = std::min(st, n - p);
    stencil_start_[k] = st;
    auto& w = panel_weights_[k];
    w.resize(p);
    for (std::size_t m = 0; m < p; ++m) {
      auto basis = [&](double x) {
        double v = 1.0;
        for (std::size_t q = 0; q < p; ++q) {
          if (q != m) v *= (x - tau[st + q]) / (tau[st + m] - tau[st + q]);
        }
        return v;
      };
      w[m] = gauss<double, 8>::integrate(basis, tau[k], tau[k + 1]);
    }
  }
}

double AveragingOperator::head_integral(std::span<const double> u, double h) const {
  const double s0 = grid_[0], s1 = grid_[1];
  if (quadrature_ == AverageQuadrature::trapezoid) {
    double slope = u[0] / s0;
    return gauss<double, 8>::integrate([&](double r) { return slope * r * weight(r, h); }, 0.0, s0);
  }
  // U ~ a r + b r^2 through the origin and the first two nodes
  double b = (u[1] / s1 - u[0] / s0) / (s1 - s0);
  double a = u[0] / s0 - b * s0;
  return gauss<double, 8>::integrate([&](double r) { return (a * r + b * r * r) * weight(r, h); },
                                     0.0, s0);
}

double AveragingOperator::apply(std::span<const double> u, double m0, double h,
                                std::vector<double>& out) const {
  const std::size_t n = grid_.size();
  if (u.size() != n) throw DomainError("field length does not match the averaging grid");
  if (!(h >= 0.0)) throw DomainError("bin width must be nonnegative");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = u[j] * weight(grid_[j], h) * grid_[j];
  out.resize(n);
  double integral = head_integral(u, h);
  out[0] = integral * scaled_normalizer(grid_[0], h);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& w = panel_weights_[k];
    const std::size_t st = stencil_start_[k];
    double panel = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) panel += w[m] * g[st + m];
    integral += panel;
    out[k + 1] = integral * scaled_normalizer(grid_[k + 1], h);
  }
  if (h == 0.0) return m0;
  return h * integral + m0 * std::exp(-grid_.back() * h);
}

double running_average(const BernsteinField& field, std::size_t s_index,
                       AverageQuadrature quadrature) {
  return scaled_average(field, s_index, 0.0, quadrature);
}

double scaled_average(const BernsteinField& field, std::size_t s_index, double h,
                      AverageQuadrature quadrature) {
  if (s_index >= field.s_grid.size()) throw DomainError("s index outside the grid");
  AveragingOperator op(field.s_grid, quadrature);
  std::vector<double> out;
  op.apply(field.values, field.m0, h, out);
  return out[s_index];
}

void ImexConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.5)) throw DomainError("IMEX dt must lie in (0, 0.5]");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!(record_every > 0.0)) throw DomainError("record_every must be positive");
}

double imex_inverse(double u_hat, double dt) {
  double alpha = (1.0 + dt) / (2.0 * dt);
  double r = u_hat / dt;
  // -alpha + sqrt(alpha^2 + r), rationalized
  return r / (alpha + std::sqrt(alpha * alpha + r));
}

namespace {

void imex_update(const AveragingOperator& op, std::vector<double>& u, double& m0, double dt,
                 double h, std::vector<double>& scratch) {
  double at_inf = op.apply(u, m0, h, scratch);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = imex_inverse(u[j] + 2.0 * dt * scratch[j], dt);
  m0 = imex_inverse(m0 + 2.0 * dt * at_inf, dt);
  for (std::size_t j = 1; j < u.size(); ++j) {
    if (u[j] < u[j - 1] - 1e-9) {
      throw InvariantViolation("IMEX step broke monotonicity at s = " +
                               format_real(op.grid()[j]) + "; refine the s grid");
    }
  }
}

double sup_distance(const BernsteinField& field, double mu, double h) {
  double worst = 0.0;
  for (std::size_t j = 0; j < field.s_grid.size(); ++j) {
    double target = u_star(mu * scaled_argument(field.s_grid[j], h));
    worst = std::max(worst, std::abs(field.values[j] - target));
  }
  return worst;
}

}  // namespace

BernsteinField imex_step(const BernsteinField& field, double dt, double h,
                         AverageQuadrature quadrature) {
  if (!(dt > 0.0)) throw DomainError("IMEX dt must be positive");
  AveragingOperator op(field.s_grid, quadrature);
  BernsteinField next = field;
  std::vector<double> scratch;
  imex_update(op, next.values, next.m0, dt, h, scratch);
  next.time = field.time + dt;
  return next;
}

double estimate_slope(const BernsteinField& field) {
  const double s0 = field.s_grid[0], s1 = field.s_grid[1];
  const double q0 = field.values[0] / s0, q1 = field.values[1] / s1;
  return (q0 * s1 - q1 * s0) / (s1 - s0);
}

double interpolate(const BernsteinField& field, double s) {
  const auto& grid = field.s_grid;
  const std::size_t n = grid.size();
  if (!(s >= grid.front() && s <= grid.back())) throw DomainError("s outside the field grid");
  std::size_t k = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), s) - grid.begin());
  if (k > 0) --k;
  const std::size_t p = std::min(kStencil, n);
  std::size_t st = k >= p / 2 - 1 ? k - (p / 2 - 1) : 0;
  st = std::min(st, n - p);
  const double x = std::log(s);
  double value = 0.0;
  for (std::size_t m = 0; m < p; ++m) {
    double basis = 1.0;
    double tm = std::log(grid[st + m]);
    for (std::size_t q = 0; q < p; ++q) {
      if (q != m) basis *= (x - std::log(grid[st + q])) / (tm - std::log(grid[st + q]));
    }
    value += basis * field.values[st + m];
  }
  return value;
}

std::vector<EvolutionRecord> evolve(const BernsteinField& init, const ImexConfig& cfg, double h) {
  cfg.validate();
  if (!(h >= 0.0)) throw DomainError("bin width must be nonnegative");
  init.validate();
  AveragingOperator op(init.s_grid, cfg.quadrature);
  BernsteinField field = init;
  const double m0_initial = init.m0;
  double growth_excess = -std::numeric_limits<double>::infinity();
  std::vector<double> scratch;
  std::vector<EvolutionRecord> records;

  auto diagnose = [&]() {
    EvolutionDiagnostics d;
    d.t = field.time;
    d.m0 = field.m0;
    d.mu_est = estimate_slope(field);
    d.sup_dist_to_equilibrium = d.mu_est > 0.0 ? sup_distance(field, d.mu_est, h)
                                               : std::numeric_limits<double>::quiet_NaN();
    d.logistic_deviation = h == 0.0 ? std::abs(field.m0 - logistic_solution(m0_initial, field.time))
                                    : std::numeric_limits<double>::quiet_NaN();
    d.max_growth_excess = std::max(growth_excess, 0.0);
    records.push_back({field.time, field, d});
  };

  diagnose();
  const std::size_t total = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const std::size_t per_record =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.record_every / cfg.dt)));
  for (std::size_t k = 1; k <= total; ++k) {
    imex_update(op, field.values, field.m0, cfg.dt, h, scratch);
    field.time = static_cast<double>(k) * cfg.dt;
    double growth = std::exp(field.time);
    for (std::size_t j = 0; j < field.values.size(); ++j) {
      growth_excess = std::max(growth_excess, field.values[j] - growth * init.values[j]);
    }
    if (k % per_record == 0 || k == total) diagnose();
  }
  return records;
}

std::string to_csv(const BernsteinField& field) {
  std::string out = "s,U\n";
  for (std::size_t j = 0; j < field.s_grid.size(); ++j) {
    out += format_real(field.s_grid[j]) + ',' + format_real(field.values[j]) + '\n';
  }
  out += "inf," + format_real(field.m0) + '\n';
  return out;
}

std::string diagnostics_json(const EvolutionDiagnostics& d) {
  JsonObject obj;
  obj.add_real("t", d.t).add_real("m0", d.m0).add_real("mu_est", d.mu_est);
  obj.add_real("sup_dist_to_equilibrium", d.sup_dist_to_equilibrium);
  obj.add_real("logistic_deviation", d.logistic_deviation);
  obj.add_real("max_growth_excess", d.max_growth_excess);
  return obj.str();
}

}  // namespace coagfrag
