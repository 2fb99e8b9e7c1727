#pragma once

// Scenario definition: every scalar the analysis and the simulator consume,
// in linear units (mW, meters, linear gains, radians). dB/dBm and degrees are
// accepted only at the config/CLI boundary.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dmm {

double db_to_linear(double db);
double linear_to_db(double lin);
double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Two-level sectored pattern: constant main-lobe gain over `beamwidth`,
// constant side-lobe gain elsewhere.
struct AntennaPattern {
  double main_gain = 100.0;  // linear
  double side_gain = 0.1;    // linear
  double beamwidth = 0.5235987755982988;  // rad (30 deg)
};

// Blockage: a link of length r <= radius is LOS with probability p_los,
// NLOS otherwise; links beyond the radius are always NLOS.
struct LosBall {
  double p_los = 1.0;
  double radius = 100.0;  // m
};

struct PathLossExponents {
  double los_c = 2.0;
  double nlos_c = 4.0;
  double los_d = 2.0;
  double nlos_d = 4.0;
};

struct NetworkParams {
  double lambda_b = 1e-5;    // BS density, 1/m^2
  double lambda_c = 1e-4;    // cluster-center density, 1/m^2
  double lambda_cu = 1e-4;   // cellular-UE density, 1/m^2 (saturation check only)
  double sigma_d_sq = 25.0;  // cluster scattering variance, m^2
  int n_total = 40;          // potential D2D UEs per cluster
  double n_bar = 3.0;        // mean simultaneously transmitting UEs per cluster
  double p_c = 200.0;        // cellular transmit power, mW
  double p_d = 200.0;        // D2D transmit power, mW
  PathLossExponents alpha{};
  LosBall los_ball_c{1.0, 100.0};
  LosBall los_ball_d{1.0, 50.0};
  AntennaPattern antenna_bs{};
  AntennaPattern antenna_ue{};
  double t_d = 1.0;    // D2D mode-selection bias, >= 0
  int beta = 1;        // 1 underlay, 0 overlay
  double delta = 0.2;  // overlay spectrum partition factor
  double gamma = 1.0;  // SINR threshold, linear
  double noise = 3.9810717055349694e-08;  // mW (-74 dBm)
  double sigma_be = 0.0;  // beamsteering error std, rad
  double w_c = 0.6;       // proportional-fairness weights, w_c + w_d = 1
  double w_d = 0.4;

  double sigma_d() const { return std::sqrt(sigma_d_sq); }
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

ValidationReport validate(const NetworkParams& p);

NetworkParams default_params();

// Parses a flat key = value document (TOML-compatible subset, '#' comments).
// Unspecified keys keep their defaults. Throws ConfigError on malformed input,
// unknown keys, or validation failure (message lists every violation).
NetworkParams load_params(const std::string& text);
NetworkParams load_params_file(const std::string& path);

// Applies one `key=value` override using the config key set; no validation.
void apply_override(NetworkParams& p, const std::string& key, const std::string& value);

// Emits a config document that round-trips through load_params.
std::string render_config(const NetworkParams& p);

// All recognized config keys, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace d2dmm
