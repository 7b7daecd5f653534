#include "coagfrag/dynamics_d.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "coagfrag/continuum_profile.h"
#include "coagfrag/equilibrium_d.h"
#include "coagfrag/errors.h"
#include "coagfrag/format.h"

namespace coagfrag {
namespace {

constexpr double kClampTolerance = 1e-9;
constexpr double kLostMassLimit = 0.01;

struct State {
  std::vector<double> f;
  double lost_mass = 0.0;
  double lost_number = 0.0;
  double ghost = 0.0;
};

class Integrator {
 public:
  Integrator(std::size_t n, RateParameters rates, ConvolutionPath path, bool ghost)
      : n_(n), rates_(rates), path_(resolve_path(path, n + 1)), ghost_(ghost),
        padded_(n + 1, 0.0), conv_(n + 1, 0.0) {
    if (path_ == ConvolutionPath::fft) fft_ = std::make_unique<FftSelfConvolver>(n + 1);
    for (State* s : {&k1_, &k2_, &k3_, &k4_, &tmp_}) s->f.assign(n, 0.0);
  }

  void derivative(const State& y, State& dy) {
    const double half_a = 0.5 * rates_.alpha, half_b = 0.5 * rates_.beta;
    std::copy(y.f.begin(), y.f.end(), padded_.begin() + 1);
    if (fft_) {
      fft_->convolve(padded_, conv_);
    } else {
      self_convolution_direct(padded_, conv_);
    }
    double m0 = 0.0, m1 = 0.0, conv_sum = 0.0, conv_mass = 0.0;
    for (std::size_t i = 1; i <= n_; ++i) {
      double fi = y.f[i - 1];
      double di = static_cast<double>(i);
      m0 += fi;
      m1 += di * fi;
      conv_sum += conv_[i];
      conv_mass += di * conv_[i];
    }
    double tail = 0.0;  // sum_{j>i} f_j/(j+1)
    for (std::size_t i = n_; i >= 1; --i) {
      double fi = y.f[i - 1];
      double di = static_cast<double>(i);
      double coag = conv_[i] - 2.0 * fi * m0;
      double frag = -((di - 1.0) / (di + 1.0)) * fi + 2.0 * tail;
      dy.f[i - 1] = half_a * coag + half_b * frag;
      tail += fi / (di + 1.0);
    }
    dy.lost_mass = std::max(0.0, half_a * (2.0 * m0 * m1 - conv_mass));
    dy.lost_number = std::max(0.0, half_a * (m0 * m0 - conv_sum));
    dy.ghost = ghost_ ? half_a * (-y.ghost * y.ghost - 2.0 * y.ghost * m0) +
                            half_b * (y.ghost + 2.0 * tail)
                      : 0.0;
  }

  void rk4(State& y, double dt) {
    derivative(y, k1_);
    axpy(y, 0.5 * dt, k1_, tmp_);
    derivative(tmp_, k2_);
    axpy(y, 0.5 * dt, k2_, tmp_);
    derivative(tmp_, k3_);
    axpy(y, dt, k3_, tmp_);
    derivative(tmp_, k4_);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n_; ++i) {
      y.f[i] += w * (k1_.f[i] + 2.0 * k2_.f[i] + 2.0 * k3_.f[i] + k4_.f[i]);
    }
    y.lost_mass += w * (k1_.lost_mass + 2.0 * k2_.lost_mass + 2.0 * k3_.lost_mass + k4_.lost_mass);
    y.lost_number +=
        w * (k1_.lost_number + 2.0 * k2_.lost_number + 2.0 * k3_.lost_number + k4_.lost_number);
    y.ghost += w * (k1_.ghost + 2.0 * k2_.ghost + 2.0 * k3_.ghost + k4_.ghost);
  }

 private:
  void axpy(const State& y, double a, const State& k, State& out) const {
    for (std::size_t i = 0; i < n_; ++i) out.f[i] = y.f[i] + a * k.f[i];
    out.lost_mass = y.lost_mass + a * k.lost_mass;
    out.lost_number = y.lost_number + a * k.lost_number;
    out.ghost = y.ghost + a * k.ghost;
  }

  std::size_t n_;
  RateParameters rates_;
  ConvolutionPath path_;
  bool ghost_;
  std::unique_ptr<FftSelfConvolver> fft_;
  std::vector<double> padded_, conv_;
  State k1_, k2_, k3_, k4_, tmp_;
};

double clamp_negative(std::vector<double>& f, double& most_negative) {
  double clamped = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) {
      most_negative = std::min(most_negative, f[i]);
      if (f[i] < -kClampTolerance) {
        throw StepSizeError("entry at size " + std::to_string(i + 1) + " fell to " +
                            format_real(f[i]) + "; reduce the time step");
      }
      clamped += static_cast<double>(i + 1) * -f[i];
      f[i] = 0.0;
    }
  }
  return clamped;
}

double zeroth(const std::vector<double>& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s;
}

double weighted_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<double>(i + 1) * std::abs(a[i] - b[i]);
  }
  return s;
}

// Solution of x' = r x - c x^2.
double general_logistic(double x0, double t, RateParameters rates) {
  if (x0 <= 0.0) return 0.0;
  double r = 0.5 * rates.beta, capacity = rates.beta / rates.alpha;
  return capacity / (1.0 + (capacity - x0) / x0 * std::exp(-r * t));
}

}  // namespace

void SimulationConfigD::validate() const {
  if (truncation_n < 8) throw DomainError("truncation_n must be at least 8");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!(dt_init >= 0.0)) throw DomainError("dt_init must be positive (or 0 for the default)");
  if (!(record_every > 0.0)) throw DomainError("record_every must be positive");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (!(rates.alpha > 0.0 && rates.beta > 0.0)) throw DomainError("rates must be positive");
}

double stability_bound(double m0, RateParameters rates) {
  return 0.1 / (0.5 * rates.beta + rates.alpha * m0);
}

double default_step(double m0, RateParameters rates) {
  return 0.05 / (0.5 * rates.beta + rates.alpha * m0);
}

double logistic_solution(double x0, double t) {
  if (x0 == 0.0) return 0.0;
  return 1.0 / (1.0 + (1.0 - x0) / x0 * std::exp(-t));
}

RhsResult rhs_model_d(const SizeDistribution& dist, RateParameters rates, ConvolutionPath path) {
  const std::size_t n = dist.truncation();
  Integrator integ(n, rates, path, false);
  State y, dy;
  y.f.assign(dist.entries().begin(), dist.entries().end());
  dy.f.assign(n, 0.0);
  integ.derivative(y, dy);
  return {std::move(dy.f), dy.lost_mass, dy.lost_number};
}

SizeDistribution step(const SizeDistribution& dist, double dt, RateParameters rates,
                      double* clamped_mass) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  double m0 = moment(dist, 0);
  if (dt > stability_bound(m0, rates) * (1.0 + 1e-12)) {
    throw StepSizeError("time step " + format_real(dt) + " exceeds the stability bound " +
                        format_real(stability_bound(m0, rates)));
  }
  const std::size_t n = dist.truncation();
  Integrator integ(n, rates, ConvolutionPath::automatic, false);
  State y;
  y.f.assign(dist.entries().begin(), dist.entries().end());
  y.lost_mass = dist.lost_mass();
  integ.rk4(y, dt);
  double most_negative = 0.0;
  double clamped = clamp_negative(y.f, most_negative);
  if (clamped_mass) *clamped_mass += clamped;
  return SizeDistribution(std::move(y.f), y.lost_mass);
}

RunReport run_model_d(const SizeDistribution& init, const SimulationConfigD& cfg,
                      const SizeDistribution* reference) {
  cfg.validate();
  const std::size_t n = cfg.truncation_n;
  if (init.truncation() > n) throw DomainError("initial data longer than truncation_n");
  const RateParameters rates = cfg.rates;

  State y;
  y.f.assign(n, 0.0);
  std::copy(init.entries().begin(), init.entries().end(), y.f.begin());
  y.lost_mass = init.lost_mass();
  y.ghost = cfg.ghost_init.value_or(0.0);
  Integrator integ(n, rates, cfg.convolution, cfg.ghost_init.has_value());

  std::vector<double> ref;
  if (reference) {
    ref.assign(n, 0.0);
    auto e = reference->entries();
    std::copy(e.begin(), e.begin() + std::min(e.size(), n), ref.begin());
  }

  RunReport report;
  if (reference) report.distance_to_equilibrium.emplace();
  const double m0_initial = zeroth(y.f);
  {
    SizeDistribution d(y.f);
    report.initial_m1 = moment(d, 1) + y.lost_mass;
  }

  auto record = [&](double t) {
    SizeDistribution d(y.f, y.lost_mass);
    MomentReport m = moments_of(d, t);
    report.times.push_back(t);
    report.moments.push_back(m);
    report.f1_trace.push_back(y.f[0]);
    report.lost_mass_trace.push_back(y.lost_mass);
    report.lost_number_trace.push_back(y.lost_number);
    if (cfg.ghost_init) report.ghost_f0_trace.push_back(y.ghost);
    if (reference) report.distance_to_equilibrium->push_back(weighted_gap(y.f, ref));
    if (y.lost_mass > kLostMassLimit * report.initial_m1) {
      throw TruncationOverflowError("lost mass " + format_real(y.lost_mass) +
                                    " exceeds 1% of m1; increase truncation_n");
    }
    double trend = general_logistic(m0_initial, t, rates);
    if (m.m0 > trend * (1.0 + 1e-9) + 1e-12) {
      throw InvariantViolation("m0 = " + format_real(m.m0) + " exceeds the logistic trend " +
                               format_real(trend) + " at t = " + format_real(t));
    }
  };

  double t = 0.0;
  record(t);
  double dt_adaptive = cfg.dt_init > 0.0 ? cfg.dt_init : default_step(m0_initial, rates);
  State full, half;
  for (std::size_t k = 1;; ++k) {
    double target = std::min(cfg.t_end, static_cast<double>(k) * cfg.record_every);
    while (t < target) {
      double m0 = zeroth(y.f);
      double bound = stability_bound(m0, rates);
      double dt;
      if (cfg.dt_control == StepControl::fixed) {
        dt = cfg.dt_init > 0.0 ? cfg.dt_init : default_step(m0, rates);
        if (dt > bound * (1.0 + 1e-12)) {
          throw StepSizeError("time step " + format_real(dt) + " exceeds the stability bound " +
                              format_real(bound));
        }
      } else {
        dt = std::min(dt_adaptive, bound);
      }
      bool landing = t + dt >= target - 1e-12 * std::max(1.0, target);
      if (landing) dt = target - t;
      if (cfg.dt_control == StepControl::fixed) {
        integ.rk4(y, dt);
        report.clamped_mass += clamp_negative(y.f, report.most_negative_entry);
        t = landing ? target : t + dt;
        ++report.steps;
        continue;
      }
      full = y;
      integ.rk4(full, dt);
      half = y;
      integ.rk4(half, 0.5 * dt);
      integ.rk4(half, 0.5 * dt);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += static_cast<double>(i + 1) * std::abs(half.f[i]);
      double err = weighted_gap(half.f, full.f) / (15.0 * cfg.rel_tol * std::max(scale, 1e-300));
      double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 2.0;
      if (err <= 1.0) {
        y = std::move(half);
        report.clamped_mass += clamp_negative(y.f, report.most_negative_entry);
        t = landing ? target : t + dt;
        ++report.steps;
        if (!landing) dt_adaptive = dt * std::clamp(factor, 0.2, 2.0);
      } else {
        ++report.rejected_steps;
        dt_adaptive = dt * std::clamp(factor, 0.2, 0.9);
        if (dt_adaptive < 1e-12) throw StepSizeError("adaptive step size underflow");
      }
    }
    record(t);
    if (target >= cfg.t_end) break;
  }
  report.final_state = SizeDistribution(y.f, y.lost_mass);
  report.predicted_equilibrium_m0 = u_star(report.initial_m1);
  report.reequilibration_time = std::numeric_limits<double>::quiet_NaN();
  return report;
}

RunReport run_to_equilibrium(const SizeDistribution& init, const SimulationConfigD& cfg) {
  cfg.validate();
  double m1 = moment(init, 1) + init.lost_mass();
  if (m1 <= 0.0) return run_model_d(init, cfg, nullptr);
  EquilibriumD eq = equilibrium_recursion(nu_from_mu(m1), cfg.truncation_n);
  SizeDistribution ref = eq.distribution();
  return run_model_d(init, cfg, &ref);
}

RunReport run_infinite_m1(double exponent, std::size_t n, const SimulationConfigD& cfg) {
  if (!(exponent > 1.0 && exponent <= 2.0)) throw DomainError("exponent must lie in (1, 2]");
  SimulationConfigD c = cfg;
  c.truncation_n = n;
  RunReport report = run_model_d(powerlaw_initial(n, exponent), c, nullptr);
  const double target = report.predicted_equilibrium_m0;
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    if (std::abs(report.moments[k].m0 - target) <= 0.01 * target) {
      report.reequilibration_time = report.times[k];
      break;
    }
  }
  report.before_reequilibration = std::isnan(report.reequilibration_time);
  return report;
}

SizeDistribution monodisperse_initial(std::size_t n, std::size_t size, double density) {
  if (size < 1 || size > n) throw DomainError("monodisperse size outside [1, n]");
  std::vector<double> f(n, 0.0);
  f[size - 1] = density;
  return SizeDistribution(std::move(f));
}

SizeDistribution geometric_initial(std::size_t n, double q, double amplitude) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("geometric ratio must lie in (0, 1)");
  std::vector<double> f(n);
  double p = amplitude;
  for (std::size_t i = 0; i < n; ++i) {
    p *= q;
    f[i] = p;
  }
  return SizeDistribution(std::move(f));
}

SizeDistribution powerlaw_initial(std::size_t n, double exponent) {
  if (!(exponent > 0.0)) throw DomainError("power-law exponent must be positive");
  std::vector<double> f(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  for (std::size_t i = n; i-- > 0;) total += f[i];
  for (double& v : f) v /= total;
  return SizeDistribution(std::move(f));
}

SizeDistribution random_initial(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> f(n);
  double total = 0.0;
  for (double& v : f) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    total += v;
  }
  for (double& v : f) v /= total;
  return SizeDistribution(std::move(f));
}

std::string to_csv(const RunReport& report) {
  std::string out = "t,m0,m1,m2,dist,f1,lost_mass\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const auto& m = report.moments[k];
    double dist = report.distance_to_equilibrium ? (*report.distance_to_equilibrium)[k]
                                                 : std::numeric_limits<double>::quiet_NaN();
    out += format_real(report.times[k]) + ',' + format_real(m.m0) + ',' + format_real(m.m1) + ',' +
           format_real(m.m2) + ',' + format_real(dist) + ',' + format_real(report.f1_trace[k]) +
           ',' + format_real(report.lost_mass_trace[k]) + '\n';
  }
  return out;
}

std::string summary_json(const RunReport& report) {
  JsonObject obj;
  const std::size_t last = report.times.size() - 1;
  const auto& m = report.moments[last];
  double nan = std::numeric_limits<double>::quiet_NaN();
  obj.add_real("t_end", report.times[last]);
  obj.add_int("steps", static_cast<long long>(report.steps));
  obj.add_int("rejected_steps", static_cast<long long>(report.rejected_steps));
  obj.add_real("initial_m1", report.initial_m1);
  obj.add_real("m0", m.m0).add_real("m1", m.m1).add_real("m2", m.m2);
  obj.add_real("f1", report.f1_trace[last]);
  obj.add_real("distance", report.distance_to_equilibrium
                               ? report.distance_to_equilibrium->back()
                               : nan);
  obj.add_real("lost_mass", report.lost_mass_trace[last]);
  obj.add_real("lost_number", report.lost_number_trace[last]);
  obj.add_real("clamped_mass", report.clamped_mass);
  obj.add_real("most_negative_entry", report.most_negative_entry);
  double drift = report.initial_m1 > 0.0
                     ? std::abs(m.m1 + report.lost_mass_trace[last] - report.initial_m1) /
                           report.initial_m1
                     : 0.0;
  obj.add_real("conservation_error", drift);
  obj.add_real("predicted_equilibrium_m0", report.predicted_equilibrium_m0);
  obj.add_real("reequilibration_time", report.reequilibration_time);
  obj.add_bool("before_reequilibration", report.before_reequilibration);
  return obj.str();
}

}  // namespace coagfrag
