#pragma once
// Sweep configuration, distance sweeps over both methods, result files.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latcp/force.hpp"
#include "latcp/greens_cylinder.hpp"

namespace latcp {

enum class Method { Modes, Green, Both };
enum class OutputFormat { Csv, Json };

Method parse_method(const std::string& s);
std::string to_string(Method m);
OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  double fiber_radius = 250e-9;
  double n_real = 1.45;
  double n_imag = 2.05e-7;
  double wavelength = 852e-9;
  double dipole = 1.9e-29;  // d0; the dipole vector is d0 (i, 0, 1) for sigma+
  double mass = 2.207e-25;
  Polarization polarization = Polarization::SigmaPlus;
  double d_min = 10e-9;
  double d_max = 1e-6;
  int steps = 60;
  bool log_grid = true;
  Method method = Method::Both;
  double mode_tol = 1e-9;
  double green_tol = 1e-8;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  Fiber fiber() const { return {fiber_radius, cplx(n_real, n_imag)}; }
  AtomTransition atom() const;
  std::vector<double> grid() const;
};

/// Flat "key = value" text, '#' starts a comment. Unknown keys, duplicate
/// keys and malformed values throw ConfigError naming the line.
SweepConfig parse_config(const std::string& text, SweepConfig base = {});
SweepConfig load_config(const std::string& path, SweepConfig base = {});
/// Every key with its current value, in the format parse_config reads.
std::string config_to_text(const SweepConfig& c);

struct SweepRecord {
  double d_A = 0.0;
  std::optional<double> gamma_g_plus, gamma_g_minus, gamma_r_plus, gamma_r_minus;
  std::optional<double> Gamma, alpha;
  std::optional<double> F_modes, F_green;
  std::optional<double> Gamma_green, alpha_green;
  std::optional<double> dp_z, dv;
  std::optional<double> rel_dev;  // |F_modes - F_green| / |F_green| when both ran
  std::string error;              // empty on success
};

/// One record per grid point, in grid order. Failures stay in the record.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Single point; throws on failure.
SweepRecord evaluate_point(const SweepConfig& config, double d_A, const GuidedMode& mode);

inline constexpr const char* kCsvHeader =
    "d_A,gamma_g_plus,gamma_g_minus,gamma_r_plus,gamma_r_minus,Gamma,alpha,F_modes,F_green,dp_z,dv";

std::string emit(const SweepConfig& config, const std::vector<SweepRecord>& records, OutputFormat format);

/// Inverse of the JSON emitter.
std::pair<SweepConfig, std::vector<SweepRecord>> parse_json_output(const std::string& text);

}  // namespace latcp
