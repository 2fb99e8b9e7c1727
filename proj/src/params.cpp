#include "d2dmm/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace d2dmm {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_antenna(const AntennaPattern& a, const char* prefix, std::vector<std::string>& errs) {
  if (!(a.side_gain > 0.0)) errs.push_back(std::string(prefix) + ": side-lobe gain must be > 0");
  if (!(a.main_gain >= a.side_gain))
    errs.push_back(std::string(prefix) + ": main-lobe gain must be >= side-lobe gain");
  if (!(a.beamwidth > 0.0 && a.beamwidth <= kTwoPi))
    errs.push_back(std::string(prefix) + ": beamwidth must be in (0, 2*pi]");
}

void check_ball(const LosBall& b, const char* pkey, const char* rkey, std::vector<std::string>& errs) {
  if (!(b.p_los >= 0.0 && b.p_los <= 1.0)) errs.push_back(std::string(pkey) + " must be in [0, 1]");
  if (!(b.radius > 0.0)) errs.push_back(std::string(rkey) + " must be > 0");
}

// One entry per config key: getter renders the boundary-unit value, setter
// parses it.  Keeping both in one table makes render/load symmetric.
struct KeyEntry {
  const char* key;
  std::function<double(const NetworkParams&)> get;
  std::function<void(NetworkParams&, double)> set;
  bool integer = false;
};

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = {
      {"lambda_b", [](const NetworkParams& p) { return p.lambda_b; },
       [](NetworkParams& p, double v) { p.lambda_b = v; }},
      {"lambda_c", [](const NetworkParams& p) { return p.lambda_c; },
       [](NetworkParams& p, double v) { p.lambda_c = v; }},
      {"lambda_cu", [](const NetworkParams& p) { return p.lambda_cu; },
       [](NetworkParams& p, double v) { p.lambda_cu = v; }},
      {"sigma_d_sq", [](const NetworkParams& p) { return p.sigma_d_sq; },
       [](NetworkParams& p, double v) { p.sigma_d_sq = v; }},
      {"n_total", [](const NetworkParams& p) { return double(p.n_total); },
       [](NetworkParams& p, double v) { p.n_total = int(v); }, true},
      {"n_bar", [](const NetworkParams& p) { return p.n_bar; },
       [](NetworkParams& p, double v) { p.n_bar = v; }},
      {"p_c_mw", [](const NetworkParams& p) { return p.p_c; },
       [](NetworkParams& p, double v) { p.p_c = v; }},
      {"p_d_mw", [](const NetworkParams& p) { return p.p_d; },
       [](NetworkParams& p, double v) { p.p_d = v; }},
      {"alpha_lc", [](const NetworkParams& p) { return p.alpha.los_c; },
       [](NetworkParams& p, double v) { p.alpha.los_c = v; }},
      {"alpha_nc", [](const NetworkParams& p) { return p.alpha.nlos_c; },
       [](NetworkParams& p, double v) { p.alpha.nlos_c = v; }},
      {"alpha_ld", [](const NetworkParams& p) { return p.alpha.los_d; },
       [](NetworkParams& p, double v) { p.alpha.los_d = v; }},
      {"alpha_nd", [](const NetworkParams& p) { return p.alpha.nlos_d; },
       [](NetworkParams& p, double v) { p.alpha.nlos_d = v; }},
      {"p_l_c", [](const NetworkParams& p) { return p.los_ball_c.p_los; },
       [](NetworkParams& p, double v) { p.los_ball_c.p_los = v; }},
      {"r_b_c", [](const NetworkParams& p) { return p.los_ball_c.radius; },
       [](NetworkParams& p, double v) { p.los_ball_c.radius = v; }},
      {"p_l_d", [](const NetworkParams& p) { return p.los_ball_d.p_los; },
       [](NetworkParams& p, double v) { p.los_ball_d.p_los = v; }},
      {"r_b_d", [](const NetworkParams& p) { return p.los_ball_d.radius; },
       [](NetworkParams& p, double v) { p.los_ball_d.radius = v; }},
      {"m_bs_db", [](const NetworkParams& p) { return linear_to_db(p.antenna_bs.main_gain); },
       [](NetworkParams& p, double v) { p.antenna_bs.main_gain = db_to_linear(v); }},
      {"s_bs_db", [](const NetworkParams& p) { return linear_to_db(p.antenna_bs.side_gain); },
       [](NetworkParams& p, double v) { p.antenna_bs.side_gain = db_to_linear(v); }},
      {"theta_bs_deg", [](const NetworkParams& p) { return rad_to_deg(p.antenna_bs.beamwidth); },
       [](NetworkParams& p, double v) { p.antenna_bs.beamwidth = deg_to_rad(v); }},
      {"m_ue_db", [](const NetworkParams& p) { return linear_to_db(p.antenna_ue.main_gain); },
       [](NetworkParams& p, double v) { p.antenna_ue.main_gain = db_to_linear(v); }},
      {"s_ue_db", [](const NetworkParams& p) { return linear_to_db(p.antenna_ue.side_gain); },
       [](NetworkParams& p, double v) { p.antenna_ue.side_gain = db_to_linear(v); }},
      {"theta_ue_deg", [](const NetworkParams& p) { return rad_to_deg(p.antenna_ue.beamwidth); },
       [](NetworkParams& p, double v) { p.antenna_ue.beamwidth = deg_to_rad(v); }},
      {"t_d", [](const NetworkParams& p) { return p.t_d; },
       [](NetworkParams& p, double v) { p.t_d = v; }},
      {"beta", [](const NetworkParams& p) { return double(p.beta); },
       [](NetworkParams& p, double v) { p.beta = int(v); }, true},
      {"delta", [](const NetworkParams& p) { return p.delta; },
       [](NetworkParams& p, double v) { p.delta = v; }},
      {"gamma_db", [](const NetworkParams& p) { return linear_to_db(p.gamma); },
       [](NetworkParams& p, double v) { p.gamma = db_to_linear(v); }},
      {"noise_dbm", [](const NetworkParams& p) { return linear_to_db(p.noise); },
       [](NetworkParams& p, double v) { p.noise = db_to_linear(v); }},
      {"sigma_be_deg", [](const NetworkParams& p) { return rad_to_deg(p.sigma_be); },
       [](NetworkParams& p, double v) { p.sigma_be = deg_to_rad(v); }},
      {"w_d", [](const NetworkParams& p) { return p.w_d; },
       [](NetworkParams& p, double v) { p.w_d = v; p.w_c = 1.0 - v; }},
  };
  return table;
}

const KeyEntry* find_key(const std::string& key) {
  for (const auto& e : key_table())
    if (key == e.key) return &e;
  return nullptr;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text, bool integer) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty value for key '" + key + "'");
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ConfigError("cannot parse value '" + t + "' for key '" + key + "'");
  if (integer && v != std::floor(v))
    throw ConfigError("key '" + key + "' expects an integer, got '" + t + "'");
  return v;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : key_table()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

ValidationReport validate(const NetworkParams& p) {
  ValidationReport r;
  auto& errs = r.errors;
  if (!(p.lambda_b > 0.0)) errs.push_back("lambda_b must be > 0");
  if (!(p.lambda_c > 0.0)) errs.push_back("lambda_c must be > 0");
  if (!(p.lambda_cu > 0.0)) errs.push_back("lambda_cu must be > 0");
  if (!(p.sigma_d_sq > 0.0)) errs.push_back("sigma_d_sq must be > 0");
  if (p.n_total < 1) errs.push_back("n_total must be >= 1");
  if (!(p.n_bar >= 0.0)) errs.push_back("n_bar must be >= 0");
  if (!(p.n_bar <= p.n_total / 2.0))
    errs.push_back("n_bar must be <= n_total/2");
  else if (p.n_bar > p.n_total / 4.0)
    r.warnings.push_back("n_bar exceeds n_total/4; cluster-size truncation may bias results");
  if (!(p.p_c > 0.0)) errs.push_back("p_c_mw must be > 0");
  if (!(p.p_d > 0.0)) errs.push_back("p_d_mw must be > 0");
  for (auto [a, key] : {std::pair{p.alpha.los_c, "alpha_lc"}, {p.alpha.nlos_c, "alpha_nc"},
                        {p.alpha.los_d, "alpha_ld"}, {p.alpha.nlos_d, "alpha_nd"}})
    if (!(a >= 2.0)) errs.push_back(std::string(key) + " must be >= 2");
  check_ball(p.los_ball_c, "p_l_c", "r_b_c", errs);
  check_ball(p.los_ball_d, "p_l_d", "r_b_d", errs);
  check_antenna(p.antenna_bs, "bs antenna", errs);
  check_antenna(p.antenna_ue, "ue antenna", errs);
  if (!(p.t_d >= 0.0)) errs.push_back("t_d must be >= 0");
  if (p.beta != 0 && p.beta != 1) errs.push_back("beta must be 0 or 1");
  if (!(p.delta >= 0.0 && p.delta <= 1.0)) errs.push_back("delta must be in [0, 1]");
  if (!(p.gamma > 0.0)) errs.push_back("gamma must be > 0");
  if (!(p.noise > 0.0)) errs.push_back("noise must be > 0");
  if (!(p.sigma_be >= 0.0)) errs.push_back("sigma_be_deg must be >= 0");
  if (!(p.w_d >= 0.0 && p.w_d <= 1.0)) errs.push_back("w_d must be in [0, 1]");
  if (!(std::abs(p.w_c + p.w_d - 1.0) <= 1e-12)) errs.push_back("w_c + w_d must equal 1");
  return r;
}

NetworkParams default_params() { return NetworkParams{}; }

void apply_override(NetworkParams& p, const std::string& key, const std::string& value) {
  const KeyEntry* e = find_key(trim(key));
  if (!e) throw ConfigError("unknown config key '" + trim(key) + "'");
  e->set(p, parse_number(e->key, value, e->integer));
}

NetworkParams load_params(const std::string& text) {
  NetworkParams p;
  std::vector<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    seen.push_back(key);
    apply_override(p, key, line.substr(eq + 1));
  }
  ValidationReport r = validate(p);
  if (!r.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : r.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return p;
}

NetworkParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_params(buf.str());
}

std::string render_config(const NetworkParams& p) {
  std::string out;
  char buf[64];
  for (const auto& e : key_table()) {
    if (e.integer)
      std::snprintf(buf, sizeof buf, "%s = %d\n", e.key, int(e.get(p)));
    else
      std::snprintf(buf, sizeof buf, "%s = %.17g\n", e.key, e.get(p));
    out += buf;
  }
  return out;
}

}  // namespace d2dmm
