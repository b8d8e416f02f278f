#include "latcp/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace latcp {

using ojson = nlohmann::ordered_json;

Method parse_method(const std::string& s) {
  if (s == "modes") return Method::Modes;
  if (s == "green") return Method::Green;
  if (s == "both") return Method::Both;
  throw ConfigError("unknown method '" + s + "' (expected modes, green or both)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Modes: return "modes";
    case Method::Green: return "green";
    case Method::Both: return "both";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

void SweepConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(fiber_radius > 0.0, "fiber_radius must be positive");
  need(n_real > 1.0, "n_real must exceed 1");
  need(n_imag >= 0.0, "n_imag must be non-negative");
  need(wavelength > 0.0, "wavelength must be positive");
  need(dipole > 0.0, "dipole must be positive");
  need(mass > 0.0, "mass must be positive");
  need(d_min > 0.0, "d_min must be positive");
  need(d_max >= d_min, "d_max must not be below d_min");
  need(steps >= 1, "steps must be at least 1");
  need(mode_tol > 0.0 && green_tol > 0.0, "tolerances must be positive");
  need(threads >= 0, "threads must be non-negative");
}

AtomTransition SweepConfig::atom() const {
  return {2.0 * kPi * si::c / wavelength, dipole_vector(polarization, dipole), mass, polarization};
}

std::vector<double> SweepConfig::grid() const {
  validate();
  std::vector<double> g(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    g[i] = log_grid ? d_min * std::pow(d_max / d_min, t) : d_min + (d_max - d_min) * t;
  }
  return g;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
  size_t used = 0;
  double x = std::stod(v, &used);
  if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument("not a finite number");
  return x;
}

int to_int(const std::string& v) {
  size_t used = 0;
  int x = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument("not an integer");
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean");
}

using Setter = std::function<void(SweepConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s = {
      {"fiber_radius", [](SweepConfig& c, const std::string& v) { c.fiber_radius = to_double(v); }},
      {"n_real", [](SweepConfig& c, const std::string& v) { c.n_real = to_double(v); }},
      {"n_imag", [](SweepConfig& c, const std::string& v) { c.n_imag = to_double(v); }},
      {"wavelength", [](SweepConfig& c, const std::string& v) { c.wavelength = to_double(v); }},
      {"dipole", [](SweepConfig& c, const std::string& v) { c.dipole = to_double(v); }},
      {"mass", [](SweepConfig& c, const std::string& v) { c.mass = to_double(v); }},
      {"polarization", [](SweepConfig& c, const std::string& v) { c.polarization = parse_polarization(v); }},
      {"d_min", [](SweepConfig& c, const std::string& v) { c.d_min = to_double(v); }},
      {"d_max", [](SweepConfig& c, const std::string& v) { c.d_max = to_double(v); }},
      {"steps", [](SweepConfig& c, const std::string& v) { c.steps = to_int(v); }},
      {"log_grid", [](SweepConfig& c, const std::string& v) { c.log_grid = to_bool(v); }},
      {"method", [](SweepConfig& c, const std::string& v) { c.method = parse_method(v); }},
      {"mode_tol", [](SweepConfig& c, const std::string& v) { c.mode_tol = to_double(v); }},
      {"green_tol", [](SweepConfig& c, const std::string& v) { c.green_tol = to_double(v); }},
      {"format", [](SweepConfig& c, const std::string& v) { c.format = parse_format(v); }},
      {"threads", [](SweepConfig& c, const std::string& v) { c.threads = to_int(v); }},
  };
  return s;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SweepConfig parse_config(const std::string& text, SweepConfig c) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + "bad value '" + value + "' for '" + key + "' (" + e.what() + ")");
    }
  }
  c.validate();
  return c;
}

SweepConfig load_config(const std::string& path, SweepConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), base);
}

std::string config_to_text(const SweepConfig& c) {
  std::ostringstream o;
  o << "fiber_radius = " << num(c.fiber_radius) << "\n"
    << "n_real = " << num(c.n_real) << "\n"
    << "n_imag = " << num(c.n_imag) << "\n"
    << "wavelength = " << num(c.wavelength) << "\n"
    << "dipole = " << num(c.dipole) << "\n"
    << "mass = " << num(c.mass) << "\n"
    << "polarization = " << to_string(c.polarization) << "\n"
    << "d_min = " << num(c.d_min) << "\n"
    << "d_max = " << num(c.d_max) << "\n"
    << "steps = " << c.steps << "\n"
    << "log_grid = " << (c.log_grid ? "true" : "false") << "\n"
    << "method = " << to_string(c.method) << "\n"
    << "mode_tol = " << num(c.mode_tol) << "\n"
    << "green_tol = " << num(c.green_tol) << "\n"
    << "format = " << to_string(c.format) << "\n"
    << "threads = " << c.threads << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

SweepRecord evaluate_point(const SweepConfig& config, double d_A, const GuidedMode& mode) {
  const Fiber fiber = config.fiber();
  const AtomTransition atom = config.atom();
  const auto pos = AtomPosition::from_surface_distance(fiber, d_A);
  SweepRecord r;
  r.d_A = d_A;
  if (config.method != Method::Green) {
    ModeSumOptions mo;
    mo.quad.rel_tol = config.mode_tol;
    const auto e = decompose_emission(atom, pos, fiber, mode, mo);
    const auto rec = recoil_observables(atom, e);
    r.gamma_g_plus = e.rates.gamma_g_plus;
    r.gamma_g_minus = e.rates.gamma_g_minus;
    r.gamma_r_plus = e.rates.gamma_r_plus;
    r.gamma_r_minus = e.rates.gamma_r_minus;
    r.Gamma = e.rates.Gamma;
    r.alpha = e.alpha;
    r.F_modes = rec.F_z0;
    r.dp_z = rec.momentum_kick;
    r.dv = rec.velocity_gain;
  }
  if (config.method != Method::Modes) {
    GreenOptions go;
    go.quad.rel_tol = config.green_tol;
    const auto g = green_observables(atom, pos, fiber, go);
    r.F_green = g.Fz;
    r.Gamma_green = g.Gamma;
    r.alpha_green = g.alpha;
    if (config.method == Method::Green) {
      r.Gamma = g.Gamma;
      r.alpha = g.alpha;
      r.dp_z = g.Fz / g.Gamma;
      r.dv = *r.dp_z / atom.mass;
    } else {
      r.rel_dev = std::abs(*r.F_modes - g.Fz) / std::abs(g.Fz);
    }
  }
  return r;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const auto grid = config.grid();
  std::vector<SweepRecord> out(grid.size());
  GuidedMode mode;
  try {
    mode = solve_guided_mode(config.fiber().lossless(), config.atom().omega);
  } catch (const std::exception& e) {
    for (size_t i = 0; i < grid.size(); ++i) {
      out[i].d_A = grid[i];
      out[i].error = std::string("guided mode: ") + e.what();
    }
    return out;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < grid.size();) {
      try {
        out[i] = evaluate_point(config, grid[i], mode);
      } catch (const std::exception& e) {
        out[i] = SweepRecord{};
        out[i].d_A = grid[i];
        out[i].error = e.what();
      }
    }
  };
  unsigned n = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> get_opt(const ojson& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

ojson config_json(const SweepConfig& c) {
  ojson j;
  j["fiber_radius"] = c.fiber_radius;
  j["n_real"] = c.n_real;
  j["n_imag"] = c.n_imag;
  j["wavelength"] = c.wavelength;
  j["dipole"] = c.dipole;
  j["mass"] = c.mass;
  j["polarization"] = to_string(c.polarization);
  j["d_min"] = c.d_min;
  j["d_max"] = c.d_max;
  j["steps"] = c.steps;
  j["log_grid"] = c.log_grid;
  j["method"] = to_string(c.method);
  j["mode_tol"] = c.mode_tol;
  j["green_tol"] = c.green_tol;
  j["format"] = to_string(c.format);
  j["threads"] = c.threads;
  return j;
}

}  // namespace

std::string emit(const SweepConfig& config, const std::vector<SweepRecord>& records, OutputFormat format) {
  if (records.empty()) throw std::invalid_argument("emit: no records");
  if (format == OutputFormat::Csv) {
    std::string s = std::string(kCsvHeader) + "\n";
    for (const auto& r : records) {
      s += csv_field(r.d_A) + "," + csv_field(r.gamma_g_plus) + "," + csv_field(r.gamma_g_minus) + "," +
           csv_field(r.gamma_r_plus) + "," + csv_field(r.gamma_r_minus) + "," + csv_field(r.Gamma) + "," +
           csv_field(r.alpha) + "," + csv_field(r.F_modes) + "," + csv_field(r.F_green) + "," +
           csv_field(r.dp_z) + "," + csv_field(r.dv) + "\n";
    }
    return s;
  }
  ojson j;
  j["config"] = config_json(config);
  ojson arr = ojson::array();
  for (const auto& r : records) {
    ojson o;
    o["d_A"] = r.d_A;
    o["gamma_g_plus"] = opt(r.gamma_g_plus);
    o["gamma_g_minus"] = opt(r.gamma_g_minus);
    o["gamma_r_plus"] = opt(r.gamma_r_plus);
    o["gamma_r_minus"] = opt(r.gamma_r_minus);
    o["Gamma"] = opt(r.Gamma);
    o["alpha"] = opt(r.alpha);
    o["F_modes"] = opt(r.F_modes);
    o["F_green"] = opt(r.F_green);
    o["Gamma_green"] = opt(r.Gamma_green);
    o["alpha_green"] = opt(r.alpha_green);
    o["F_rel_dev"] = opt(r.rel_dev);
    o["dp_z"] = opt(r.dp_z);
    o["dv"] = opt(r.dv);
    o["error"] = r.error.empty() ? ojson(nullptr) : ojson(r.error);
    arr.push_back(std::move(o));
  }
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::pair<SweepConfig, std::vector<SweepRecord>> parse_json_output(const std::string& text) {
  const auto j = ojson::parse(text);
  const auto& c = j.at("config");
  SweepConfig cfg;
  cfg.fiber_radius = c.at("fiber_radius").get<double>();
  cfg.n_real = c.at("n_real").get<double>();
  cfg.n_imag = c.at("n_imag").get<double>();
  cfg.wavelength = c.at("wavelength").get<double>();
  cfg.dipole = c.at("dipole").get<double>();
  cfg.mass = c.at("mass").get<double>();
  cfg.polarization = parse_polarization(c.at("polarization").get<std::string>());
  cfg.d_min = c.at("d_min").get<double>();
  cfg.d_max = c.at("d_max").get<double>();
  cfg.steps = c.at("steps").get<int>();
  cfg.log_grid = c.at("log_grid").get<bool>();
  cfg.method = parse_method(c.at("method").get<std::string>());
  cfg.mode_tol = c.at("mode_tol").get<double>();
  cfg.green_tol = c.at("green_tol").get<double>();
  cfg.format = parse_format(c.at("format").get<std::string>());
  cfg.threads = c.at("threads").get<int>();
  std::vector<SweepRecord> recs;
  for (const auto& o : j.at("records")) {
    SweepRecord r;
    r.d_A = o.at("d_A").get<double>();
    r.gamma_g_plus = get_opt(o, "gamma_g_plus");
    r.gamma_g_minus = get_opt(o, "gamma_g_minus");
    r.gamma_r_plus = get_opt(o, "gamma_r_plus");
    r.gamma_r_minus = get_opt(o, "gamma_r_minus");
    r.Gamma = get_opt(o, "Gamma");
    r.alpha = get_opt(o, "alpha");
    r.F_modes = get_opt(o, "F_modes");
    r.F_green = get_opt(o, "F_green");
    r.Gamma_green = get_opt(o, "Gamma_green");
    r.alpha_green = get_opt(o, "alpha_green");
    r.rel_dev = get_opt(o, "F_rel_dev");
    r.dp_z = get_opt(o, "dp_z");
    r.dv = get_opt(o, "dv");
    if (!o.at("error").is_null()) r.error = o.at("error").get<std::string>();
    recs.push_back(std::move(r));
  }
  return {cfg, recs};
}

}  // namespace latcp
