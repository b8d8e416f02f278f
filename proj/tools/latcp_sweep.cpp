// Distance sweep driver. Writes CSV or JSON and prints a short table with
// Gamma / 2 pi in MHz and forces in units of 1e-24 N.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "latcp/cli.hpp"

using namespace latcp;

int main(int argc, char** argv) {
  CLI::App app{"Lateral Casimir-Polder force near a nanofiber: distance sweeps"};
  std::string config_path, out_path, method, format, polarization;
  std::optional<double> d_min, d_max;
  std::optional<int> steps;
  std::optional<bool> log_grid;
  app.add_option("--config", config_path, "flat key = value configuration file (SI units)");
  app.add_option("--method", method, "modes, green or both")->check(CLI::IsMember({"modes", "green", "both"}));
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--d-min", d_min, "smallest surface distance [m]");
  app.add_option("--d-max", d_max, "largest surface distance [m]");
  app.add_option("--steps", steps, "number of grid points");
  app.add_option("--log-grid", log_grid, "logarithmic spacing (true/false)")->expected(0, 1)->default_str("true");
  app.add_option("--polarization", polarization, "sigma+, sigma- or pi")
      ->check(CLI::IsMember({"sigma+", "sigma-", "pi"}));
  CLI11_PARSE(app, argc, argv);

  SweepConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!method.empty()) cfg.method = parse_method(method);
    if (!format.empty()) cfg.format = parse_format(format);
    if (!polarization.empty()) cfg.polarization = parse_polarization(polarization);
    if (d_min) cfg.d_min = *d_min;
    if (d_max) cfg.d_max = *d_max;
    if (steps) cfg.steps = *steps;
    if (app.count("--log-grid")) cfg.log_grid = log_grid.value_or(true);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto records = run_sweep(cfg);
  const std::string data = emit(cfg, records, cfg.format);
  if (out_path.empty()) {
    std::cout << data;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    f << data;
    std::printf("%12s %14s %10s %14s %14s\n", "d_A [nm]", "Gamma/2pi[MHz]", "alpha", "F_modes[1e-24N]",
                "F_green[1e-24N]");
    for (const auto& r : records) {
      if (!r.error.empty()) continue;
      auto f24 = [](const std::optional<double>& v) { return v ? *v / 1e-24 : NAN; };
      std::printf("%12.3f %14.6f %10.5f %14.6g %14.6g\n", r.d_A * 1e9, r.Gamma.value_or(NAN) / (2 * kPi) / 1e6,
                  r.alpha.value_or(NAN), f24(r.F_modes), f24(r.F_green));
    }
  }
  int failed = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      std::cerr << "d_A = " << r.d_A << " m: " << r.error << "\n";
      ++failed;
    }
  }
  return failed ? 1 : 0;
}
