#include "cli/cli.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "coagfrag/bernstein_evolution.h"
#include "coagfrag/continuum_profile.h"
#include "coagfrag/disc2cont.h"
#include "coagfrag/dynamics_d.h"
#include "coagfrag/equilibrium_d.h"
#include "coagfrag/errors.h"
#include "coagfrag/format.h"
#include "coagfrag/measures.h"

namespace coagfrag::cli {
namespace {

using nlohmann::json;

enum class Kind { real, integer, text, boolean, real_list };

struct KeySpec {
  Kind kind;
  std::vector<std::string> flags;
  std::string help;
};

const std::map<std::string, KeySpec>& key_specs() {
  static const std::map<std::string, KeySpec> specs = {
      {"mu", {Kind::real, {"--mu"}, "first moment"}},
      {"nu0", {Kind::real, {"--nu0", "--nu"}, "zeroth moment of the equilibrium"}},
      {"n", {Kind::integer, {"--n"}, "number of size classes"}},
      {"h", {Kind::real, {"--h"}, "bin width"}},
      {"t_end", {Kind::real, {"--t-end"}, "final time"}},
      {"dt", {Kind::real, {"--dt"}, "time step"}},
      {"exponent", {Kind::real, {"--exponent"}, "power-law exponent"}},
      {"output_path", {Kind::text, {"--output", "-o"}, "output file"}},
      {"seed", {Kind::integer, {"--seed"}, "seed for random initial data"}},
      {"format", {Kind::text, {"--format"}, "csv or json"}},
      {"xmin", {Kind::real, {"--xmin"}, "smallest abscissa"}},
      {"xmax", {Kind::real, {"--xmax"}, "largest abscissa"}},
      {"points", {Kind::integer, {"--points"}, "number of log-spaced abscissae"}},
      {"init", {Kind::text, {"--init"}, "initial data kind"}},
      {"q", {Kind::real, {"--q"}, "geometric ratio"}},
      {"init_file", {Kind::text, {"--init-file"}, "CSV file with header i,f"}},
      {"record_every", {Kind::real, {"--record-every"}, "sampling interval"}},
      {"adaptive", {Kind::boolean, {"--adaptive"}, "adaptive step doubling (true/false)"}},
      {"rel_tol", {Kind::real, {"--rel-tol"}, "relative tolerance for adaptive steps"}},
      {"h_values", {Kind::real_list, {"--h-values"}, "comma-separated decreasing bin widths"}},
      {"dynamic", {Kind::boolean, {"--dynamic"}, "include the time-dependent comparison"}},
      {"s_min", {Kind::real, {"--s-min"}, "smallest transform node"}},
      {"s_max", {Kind::real, {"--s-max"}, "largest transform node"}},
      {"nodes", {Kind::integer, {"--nodes"}, "number of transform nodes"}},
  };
  return specs;
}

const std::vector<std::string> kCommon = {"output_path", "format", "seed"};

struct CommandSpec {
  std::string description;
  std::vector<std::string> keys;
  std::vector<std::vector<std::string>> required;  // each entry: at least one of
};

const std::map<std::string, CommandSpec>& command_specs() {
  static const std::map<std::string, CommandSpec> specs = {
      {"profile", {"evaluate f_star and gamma_star on a log grid", {"xmin", "xmax", "points"}, {}}},
      {"equilibrium",
       {"discrete equilibrium by recursion", {"nu0", "mu", "n"}, {{"nu0", "mu"}, {"n"}}}},
      {"simulate",
       {"integrate the discrete model",
        {"mu", "n", "t_end", "dt", "exponent", "init", "q", "init_file", "record_every",
         "adaptive", "rel_tol"},
        {}}},
      {"evolve",
       {"IMEX evolution of the transform",
        {"mu", "h", "t_end", "dt", "init", "record_every", "s_min", "s_max", "nodes"},
        {}}},
      {"figure1", {"Figure 1 profile comparison", {"xmin", "xmax", "points"}, {}}},
      {"figure2", {"Figure 2 discrete vs continuous profile", {"nu0", "mu", "n"}, {}}},
      {"h-study",
       {"discrete-to-continuum convergence", {"mu", "h_values", "dynamic"}, {}}},
      {"infinite-m1",
       {"power-law data with divergent first moment",
        {"exponent", "n", "t_end", "dt", "record_every"},
        {}}},
  };
  return specs;
}

struct HelpRequest {
  std::string text;
  int code;
};

json convert(const std::string& key, const std::string& raw) {
  const KeySpec& spec = key_specs().at(key);
  try {
    std::size_t used = 0;
    switch (spec.kind) {
      case Kind::real: {
        double v = std::stod(raw, &used);
        if (used != raw.size()) break;
        return v;
      }
      case Kind::integer: {
        long long v = std::stoll(raw, &used);
        if (used != raw.size()) break;
        return v;
      }
      case Kind::text:
        return raw;
      case Kind::boolean:
        if (raw == "true" || raw == "1") return true;
        if (raw == "false" || raw == "0") return false;
        break;
      case Kind::real_list: {
        json list = json::array();
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
          double v = std::stod(item, &used);
          if (used != item.size()) throw ConfigError("bad number in " + key);
          list.push_back(v);
        }
        return list;
      }
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("invalid value for " + key + ": " + raw);
}

void check_type(const std::string& key, const json& value) {
  const KeySpec& spec = key_specs().at(key);
  bool ok = false;
  switch (spec.kind) {
    case Kind::real: ok = value.is_number(); break;
    case Kind::integer: ok = value.is_number_integer(); break;
    case Kind::text: ok = value.is_string(); break;
    case Kind::boolean: ok = value.is_boolean(); break;
    case Kind::real_list:
      ok = value.is_array() &&
           std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number(); });
      break;
  }
  if (!ok) throw ConfigError("wrong type for key " + key);
}

double real_or(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

long long int_or(const json& p, const std::string& key, long long fallback) {
  return p.contains(key) ? p.at(key).get<long long>() : fallback;
}

std::string text_or(const json& p, const std::string& key, const std::string& fallback) {
  return p.contains(key) ? p.at(key).get<std::string>() : fallback;
}

std::size_t positive_count(const json& p, const std::string& key, long long fallback) {
  long long v = int_or(p, key, fallback);
  if (v < 1) throw ConfigError(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> log_points(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo)) throw ConfigError("need 0 < xmin < xmax");
  if (count < 2) throw ConfigError("points must be at least 2");
  std::vector<double> x(count);
  for (std::size_t j = 0; j < count; ++j) {
    x[j] = lo * std::pow(hi / lo, static_cast<double>(j) / static_cast<double>(count - 1));
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

struct Artifact {
  std::string content;
  JsonObject result;
};

Artifact run_profile(const json& p, const std::string& format) {
  auto x = log_points(real_or(p, "xmin", 1e-3), real_or(p, "xmax", 1e2),
                      positive_count(p, "points", 200));
  ContinuumProfile profile;
  std::vector<double> f(x.size()), g(x.size());
  bool warned = false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    ProfileValue v = profile.f_star_checked(x[j]);
    f[j] = v.value;
    warned = warned || v.accuracy_warning;
    g[j] = profile.gamma_star(x[j]);
  }
  Artifact a;
  if (format == "json") {
    a.content = JsonObject().add_array("x", x).add_array("f_star", f).add_array("gamma_star", g).str() + "\n";
  } else {
    a.content = "x,f_star,gamma_star\n";
    for (std::size_t j = 0; j < x.size(); ++j) {
      a.content += format_real(x[j]) + ',' + format_real(f[j]) + ',' + format_real(g[j]) + '\n';
    }
  }
  a.result.add_int("points", static_cast<long long>(x.size()));
  a.result.add_real("m0", profile.moment(0)).add_real("m1", profile.moment(1)).add_real("m2", profile.moment(2));
  a.result.add_bool("accuracy_warning", warned);
  return a;
}

Artifact run_equilibrium(const json& p, const std::string& format) {
  if (p.contains("nu0") && p.contains("mu")) throw ConfigError("give either nu0 or mu, not both");
  double nu0 = p.contains("nu0") ? p.at("nu0").get<double>() : nu_from_mu(p.at("mu").get<double>());
  EquilibriumD eq = equilibrium_recursion(nu0, positive_count(p, "n", 0));
  Artifact a;
  if (format == "json") {
    // index 0 carries the ghost value 1 - nu0, so f[i] is the density of size i
    std::vector<double> f{1.0 - nu0};
    f.insert(f.end(), eq.f.begin(), eq.f.end());
    std::string summary = summary_json(eq);
    summary.pop_back();
    a.content = summary + ",\"f\":" + JsonObject().add_array("f", f).str().substr(5);
    a.content.pop_back();
    a.content += "}\n";
  } else {
    a.content = to_csv(eq);
  }
  a.result.add_real("nu0", eq.nu0).add_real("mu", eq.mu).add_real("lambda", eq.lambda);
  a.result.add_int("n", static_cast<long long>(eq.f.size()));
  a.result.add_real("f1", eq.f[0]);
  a.result.add_raw("underflow_index", eq.underflow_index ? std::to_string(*eq.underflow_index) : "null");
  return a;
}

SizeDistribution initial_data(const json& p, std::size_t n) {
  std::string kind = text_or(p, "init", "monodisperse");
  if (kind == "monodisperse") return monodisperse_initial(n, 1, real_or(p, "mu", 1.0));
  if (kind == "geometric") {
    double q = real_or(p, "q", 0.5);
    return geometric_initial(n, q, (1.0 - q) / q);
  }
  if (kind == "powerlaw") return powerlaw_initial(n, real_or(p, "exponent", 2.0));
  if (kind == "random") return random_initial(n, static_cast<std::uint64_t>(int_or(p, "seed", 0)));
  if (kind == "file") {
    if (!p.contains("init_file")) throw ConfigError("init=file requires init_file");
    std::ifstream in(p.at("init_file").get<std::string>());
    if (!in) throw ConfigError("cannot open init_file");
    SizeDistribution d = read_size_distribution_csv(in);
    if (d.truncation() > n) throw ConfigError("init_file has more classes than n");
    std::vector<double> f(d.entries().begin(), d.entries().end());
    f.resize(n, 0.0);
    return SizeDistribution(std::move(f));
  }
  throw ConfigError("init must be monodisperse, geometric, powerlaw, random or file");
}

void add_run_result(JsonObject& result, const RunReport& report) {
  result.add_raw("summary", summary_json(report));
}

std::string run_content(const RunReport& report, const std::string& format) {
  if (format != "json") return to_csv(report);
  std::vector<double> m0, m1, m2;
  for (const auto& m : report.moments) {
    m0.push_back(m.m0);
    m1.push_back(m.m1);
    m2.push_back(m.m2);
  }
  JsonObject obj;
  obj.add_raw("summary", summary_json(report));
  obj.add_array("t", report.times).add_array("m0", m0).add_array("m1", m1).add_array("m2", m2);
  if (report.distance_to_equilibrium) obj.add_array("dist", *report.distance_to_equilibrium);
  obj.add_array("f1", report.f1_trace).add_array("lost_mass", report.lost_mass_trace);
  return obj.str() + "\n";
}

SimulationConfigD simulation_config(const json& p, std::size_t n, double t_end) {
  SimulationConfigD cfg;
  cfg.truncation_n = n;
  cfg.t_end = real_or(p, "t_end", t_end);
  cfg.dt_init = real_or(p, "dt", 0.0);
  cfg.record_every = real_or(p, "record_every", 1.0);
  cfg.rel_tol = real_or(p, "rel_tol", 1e-8);
  if (p.contains("adaptive") && p.at("adaptive").get<bool>()) cfg.dt_control = StepControl::adaptive;
  return cfg;
}

Artifact run_simulate(const json& p, const std::string& format) {
  std::size_t n = positive_count(p, "n", 4096);
  SimulationConfigD cfg = simulation_config(p, n, 50.0);
  RunReport report = run_to_equilibrium(initial_data(p, n), cfg);
  Artifact a;
  a.content = run_content(report, format);
  add_run_result(a.result, report);
  return a;
}

Artifact run_infinite(const json& p, const std::string& format) {
  std::size_t n = positive_count(p, "n", 100000);
  SimulationConfigD cfg = simulation_config(p, n, 50.0);
  RunReport report = run_infinite_m1(real_or(p, "exponent", 2.0), n, cfg);
  Artifact a;
  a.content = run_content(report, format);
  add_run_result(a.result, report);
  return a;
}

Artifact run_evolve(const json& p, const std::string& format) {
  double mu = real_or(p, "mu", 1.0);
  double h = real_or(p, "h", 0.0);
  std::size_t nodes = positive_count(p, "nodes", 200);
  auto grid = log_grid(real_or(p, "s_min", 1e-4), real_or(p, "s_max", 1e3), nodes);
  std::string kind = text_or(p, "init", "exponential");
  BernsteinField init;
  if (kind == "equilibrium") {
    init = equilibrium_field(grid, mu, h);
  } else if (kind == "exponential") {
    init = sample_field(grid, [mu](double s) { return mu * s / (1.0 + mu * s); }, 1.0);
  } else if (kind == "sqrt") {
    init = sample_field(grid, [](double s) { return std::sqrt(s) / (1.0 + std::sqrt(s)); }, 1.0);
  } else {
    throw ConfigError("init must be equilibrium, exponential or sqrt");
  }
  ImexConfig cfg;
  cfg.dt = real_or(p, "dt", 0.01);
  cfg.t_end = real_or(p, "t_end", 10.0);
  cfg.record_every = real_or(p, "record_every", 1.0);
  auto records = evolve(init, cfg, h);
  Artifact a;
  if (format == "json") {
    std::string list = "[";
    for (std::size_t k = 0; k < records.size(); ++k) {
      if (k) list += ',';
      list += diagnostics_json(records[k].diagnostics);
    }
    a.content = list + "]\n";
  } else {
    a.content = to_csv(records.back().field);
  }
  a.result.add_raw("final", diagnostics_json(records.back().diagnostics));
  return a;
}

Artifact run_figure1(const json& p, const std::string& format) {
  auto x = log_points(real_or(p, "xmin", 1e-3), real_or(p, "xmax", 1e2),
                      positive_count(p, "points", 200));
  ContinuumProfile profile;
  auto samples = profile.profiles_figure1(x);
  Artifact a;
  if (format == "json") {
    std::vector<double> cols[7];
    for (const auto& s : samples) {
      double v[7] = {s.x, s.phi_new, s.phi_niwa, s.phi_log, s.ratio_new, s.ratio_niwa, s.ratio_log};
      for (int c = 0; c < 7; ++c) cols[c].push_back(v[c]);
    }
    const char* names[7] = {"x", "phi_new", "phi_niwa", "phi_log", "ratio_new", "ratio_niwa", "ratio_log"};
    JsonObject obj;
    for (int c = 0; c < 7; ++c) obj.add_array(names[c], cols[c]);
    a.content = obj.str() + "\n";
  } else {
    a.content = figure1_csv(samples);
  }
  a.result.add_int("rows", static_cast<long long>(samples.size()));
  return a;
}

Artifact run_figure2(const json& p, const std::string& format) {
  double nu = real_or(p, "nu0", 0.6);
  double mu = real_or(p, "mu", 1.0);
  Figure2Data data = figure2_data(nu, mu, positive_count(p, "n", 400));
  Artifact a;
  if (format == "json") {
    std::vector<double> cols[5];
    for (const auto& r : data.rows) {
      double v[5] = {r.x, r.discrete_over_h, r.f_star, r.ratio, r.asym3};
      for (int c = 0; c < 5; ++c) cols[c].push_back(v[c]);
    }
    const char* names[5] = {"x", "discrete_over_h", "f_star", "ratio", "asym3"};
    JsonObject obj;
    obj.add_real("h", data.h).add_real("nu_h", data.nu_h).add_real("mu_h", data.mu_h);
    for (int c = 0; c < 5; ++c) obj.add_array(names[c], cols[c]);
    a.content = obj.str() + "\n";
  } else {
    a.content = figure2_csv(data);
  }
  a.result.add_real("h", data.h).add_real("nu_h", data.nu_h).add_real("mu_h", data.mu_h);
  a.result.add_real("f1_over_h", data.rows.front().discrete_over_h);
  a.result.add_real("max_asym3_deviation_5_30", asym3_deviation(data, 5.0, 30.0));
  return a;
}

Artifact run_h_study(const json& p, const std::string& format) {
  double mu = real_or(p, "mu", 1.0);
  std::vector<double> hs = p.contains("h_values") ? p.at("h_values").get<std::vector<double>>()
                                                  : std::vector<double>{0.2, 0.1, 0.05, 0.025};
  HStudyOptions options;
  options.dynamic = p.contains("dynamic") && p.at("dynamic").get<bool>();
  auto probe = default_s_probe();
  auto rows = h_convergence_study(mu, hs, probe, options);
  Artifact a;
  if (format == "json") {
    std::string list = "[";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k) list += ',';
      JsonObject row;
      row.add_real("h", rows[k].h).add_real("E", rows[k].E).add_real("order", rows[k].order);
      row.add_real("identity_error", rows[k].identity_error);
      if (options.dynamic) row.add_array("dynamic_sup", rows[k].dynamic_sup);
      list += row.str();
    }
    a.content = list + "]\n";
  } else {
    a.content = h_study_csv(rows);
  }
  double min_order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) min_order = std::min(min_order, rows[k].order);
  a.result.add_real("min_order", rows.size() > 1 ? min_order : std::numeric_limits<double>::quiet_NaN());
  a.result.add_real("E_last", rows.back().E);
  return a;
}

Artifact run_command(const CliConfig& config) {
  const json& p = config.params;
  const std::string& c = config.command;
  if (c == "profile") return run_profile(p, config.format);
  if (c == "equilibrium") return run_equilibrium(p, config.format);
  if (c == "simulate") return run_simulate(p, config.format);
  if (c == "evolve") return run_evolve(p, config.format);
  if (c == "figure1") return run_figure1(p, config.format);
  if (c == "figure2") return run_figure2(p, config.format);
  if (c == "h-study") return run_h_study(p, config.format);
  return run_infinite(p, config.format);
}

void print_failure(std::ostream& out, std::ostream& err, const std::string& command, int code,
                   const std::string& message) {
  err << "coagfrag: " << message << '\n';
  out << JsonObject()
             .add_text("command", command)
             .add_text("status", "error")
             .add_int("exit_code", code)
             .add_text("message", message)
             .str()
      << '\n';
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"profile", "equilibrium", "simulate", "evolve",
                                                 "figure1", "figure2", "h-study", "infinite-m1"};
  return names;
}

void validate(const CliConfig& config) {
  auto it = command_specs().find(config.command);
  if (it == command_specs().end()) throw ConfigError("unknown command: " + config.command);
  const CommandSpec& spec = it->second;
  if (!config.params.is_object()) throw ConfigError("parameters must form an object");
  for (const auto& [key, value] : config.params.items()) {
    bool allowed = std::find(spec.keys.begin(), spec.keys.end(), key) != spec.keys.end() ||
                   std::find(kCommon.begin(), kCommon.end(), key) != kCommon.end();
    if (!allowed) throw ConfigError("unknown key for " + config.command + ": " + key);
    check_type(key, value);
  }
  for (const auto& group : spec.required) {
    bool present = std::any_of(group.begin(), group.end(),
                               [&](const std::string& k) { return config.params.contains(k); });
    if (!present) {
      std::string names;
      for (const auto& k : group) names += (names.empty() ? "" : " or ") + k;
      throw ConfigError(config.command + " requires " + names);
    }
  }
  if (config.format != "csv" && config.format != "json") throw ConfigError("format must be csv or json");
}

CliConfig parse_arguments(int argc, const char* const* argv) {
  CLI::App app{"Coagulation-fragmentation equilibria, dynamics and discrete-to-continuum studies"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON file with parameters; flags override it");

  std::map<std::string, std::map<std::string, std::string>> raw;
  for (const auto& name : commands()) {
    const CommandSpec& spec = command_specs().at(name);
    CLI::App* sub = app.add_subcommand(name, spec.description);
    std::vector<std::string> keys = spec.keys;
    keys.insert(keys.end(), kCommon.begin(), kCommon.end());
    for (const auto& key : keys) {
      const KeySpec& ks = key_specs().at(key);
      std::string flags;
      for (const auto& f : ks.flags) flags += (flags.empty() ? "" : ",") + f;
      sub->add_option(flags, raw[name][key], ks.help);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequest{app.help(), kExitOk};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  CliConfig config;
  for (CLI::App* sub : app.get_subcommands()) config.command = sub->get_name();
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot open config file " + config_file);
    try {
      config.params = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!config.params.is_object()) throw ConfigError("config file must hold a JSON object");
    if (config.params.contains("command")) {
      if (config.params.at("command") != config.command) {
        throw ConfigError("config file names a different command");
      }
      config.params.erase("command");
    }
  }
  CLI::App* sub = app.get_subcommand(config.command);
  for (const auto& [key, value] : raw[config.command]) {
    const KeySpec& ks = key_specs().at(key);
    if (sub->count(ks.flags.front()) > 0) config.params[key] = convert(key, value);
  }
  if (config.params.contains("format")) {
    if (!config.params.at("format").is_string()) throw ConfigError("format must be a string");
    config.format = config.params.at("format").get<std::string>();
  }
  validate(config);
  return config;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    Artifact artifact = run_command(config);
    std::string path = config.params.contains("output_path")
                           ? config.params.at("output_path").get<std::string>()
                           : config.command + "." + config.format;
    write_atomically(path, artifact.content);
    out << JsonObject()
               .add_text("command", config.command)
               .add_text("status", "ok")
               .add_text("output", path)
               .add_text("format", config.format)
               .add_raw("result", artifact.result.str())
               .str()
        << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    print_failure(out, err, config.command, kExitConfig, e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    print_failure(out, err, config.command, kExitConfig, e.what());
    return kExitConfig;
  } catch (const json::exception& e) {
    print_failure(out, err, config.command, kExitConfig, e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    print_failure(out, err, config.command, kExitNumerical, e.what());
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config = parse_arguments(argc, argv);
  } catch (const HelpRequest& help) {
    out << help.text;
    return help.code;
  } catch (const ConfigError& e) {
    print_failure(out, err, "", kExitConfig, e.what());
    return kExitConfig;
  }
  return dispatch(config, out, err);
}

}  // namespace coagfrag::cli
