// Batch front-end: parameter sweeps, figure-recipe reproduction with trend
// checks, analytic-vs-MC comparison, config validation, and a quick selftest.
//
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "d2dmm/figures.hpp"
#include "d2dmm/params.hpp"
#include "d2dmm/sweep.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  double window_radius = 0.0;
  std::string method = "analytic";
  std::string out_path = "-";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "parameter config file");
  cmd->add_option("--set", a.overrides, "key=value parameter override (repeatable)");
  cmd->add_option("--trials", a.trials, "Monte Carlo trials per estimate");
  cmd->add_option("--seed", a.seed, "master RNG seed");
  cmd->add_option("--workers", a.workers, "worker threads (0 = hardware)");
  cmd->add_option("--window", a.window_radius, "simulation window radius, m (0 = default)");
  cmd->add_option("--method", a.method, "analytic | mc | both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  cmd->add_option("--out", a.out_path, "output CSV path ('-' = stdout)");
}

d2dmm::NetworkParams build_params(const CommonArgs& a) {
  d2dmm::NetworkParams p = a.config_path.empty() ? d2dmm::default_params()
                                                 : d2dmm::load_params_file(a.config_path);
  for (const auto& ov : a.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw d2dmm::ConfigError("--set expects key=value, got '" + ov + "'");
    d2dmm::apply_override(p, ov.substr(0, eq), ov.substr(eq + 1));
  }
  const d2dmm::ValidationReport r = d2dmm::validate(p);
  if (!r.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : r.errors) msg += "\n  - " + e;
    throw d2dmm::ConfigError(msg);
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return p;
}

d2dmm::SweepMethod parse_method(const std::string& m) {
  if (m == "mc") return d2dmm::SweepMethod::mc;
  if (m == "both") return d2dmm::SweepMethod::both;
  return d2dmm::SweepMethod::analytic;
}

int write_out(const std::string& path, const std::vector<d2dmm::SweepRow>& rows,
              const std::string& metadata = "") {
  if (path == "-") {
    d2dmm::write_csv(rows, std::cout, metadata);
    return 0;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "cannot open output file: " << path << "\n";
    return 2;
  }
  d2dmm::write_csv(rows, os, metadata);
  return 0;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-engine uplink performance toolkit for D2D-enabled mmWave networks"};
  app.require_subcommand(1);

  CommonArgs a;

  auto* sweep = app.add_subcommand("sweep", "evaluate outputs over a parameter grid");
  add_common(sweep, a);
  std::string sweep_key, grid_list, grid_lin, grid_log, outputs_list = "outage_c,outage_d";
  std::string gamma_list = "0";
  std::string sharing = "underlay";
  bool timing = false;
  sweep->add_option("--sweep-key", sweep_key, "config key to sweep");
  sweep->add_option("--grid", grid_list, "comma-separated grid values");
  sweep->add_option("--grid-lin", grid_lin, "lo:hi:count linear grid");
  sweep->add_option("--grid-log", grid_log, "lo:hi:count logarithmic grid");
  sweep->add_option("--outputs", outputs_list,
                    "comma list: p_d2d,outage_c,outage_d,ase,laplace[,laplace_cc,...]");
  sweep->add_option("--gamma-db", gamma_list, "comma list of SINR thresholds, dB");
  sweep->add_option("--sharing", sharing, "underlay | overlay (for the ase output)")
      ->check(CLI::IsMember({"underlay", "overlay"}));
  sweep->add_flag("--timing", timing, "record wall_ms per row (breaks byte-replay)");

  auto* figure = app.add_subcommand("figure", "reproduce a result-figure dataset + trends");
  add_common(figure, a);
  std::string figure_id;
  figure->add_option("id", figure_id, "fig2 .. fig9")->required();

  auto* compare = app.add_subcommand("compare", "compare two sweep CSVs (3*SE | 0.03 rule)");
  std::string csv_a, csv_b;
  compare->add_option("analytic_csv", csv_a)->required();
  compare->add_option("mc_csv", csv_b)->required();

  auto* validate_cmd = app.add_subcommand("validate-config", "parse and validate parameters");
  add_common(validate_cmd, a);

  auto* selftest = app.add_subcommand("selftest", "run the trivial-limit suite");
  add_common(selftest, a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      d2dmm::SweepSpec spec;
      spec.base = build_params(a);
      spec.swept_key = sweep_key;
      if (!grid_list.empty()) {
        spec.grid = parse_list(grid_list);
      } else if (!grid_lin.empty() || !grid_log.empty()) {
        const bool log = !grid_log.empty();
        const std::string& g = log ? grid_log : grid_lin;
        double lo, hi;
        int count;
        if (std::sscanf(g.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
          throw d2dmm::ConfigError("grid range expects lo:hi:count, got '" + g + "'");
        for (int i = 0; i < count; ++i) {
          const double f = count == 1 ? 0.0 : double(i) / (count - 1);
          spec.grid.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
        }
      }
      if (!sweep_key.empty() && spec.grid.empty())
        throw d2dmm::ConfigError("--sweep-key requires --grid / --grid-lin / --grid-log");
      spec.outputs.clear();
      std::stringstream ss(outputs_list);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) spec.outputs.push_back(tok);
      spec.method = parse_method(a.method);
      spec.gamma_db = parse_list(gamma_list);
      spec.mc.trials = a.trials;
      spec.mc.seed = a.seed;
      spec.mc.worker_count = a.workers;
      spec.mc.window_radius = a.window_radius;
      spec.sharing = sharing == "overlay" ? d2dmm::Sharing::overlay : d2dmm::Sharing::underlay;
      spec.timing = timing;

      const std::vector<d2dmm::SweepRow> rows = d2dmm::run_sweep(spec);
      const int rc = write_out(a.out_path, rows);
      if (rc != 0) return rc;

      bool any_error = false;
      for (const auto& r : rows) any_error = any_error || !r.error.empty();
      if (any_error) {
        std::cerr << "sweep finished with per-row errors\n";
        return 1;
      }
      if (spec.method == d2dmm::SweepMethod::both) {
        const d2dmm::CompareReport rep = d2dmm::compare_rows(rows, rows);
        d2dmm::print_compare_report(rep, std::cerr);
        return rep.pass ? 0 : 1;
      }
      return 0;
    }

    if (figure->parsed()) {
      d2dmm::McSettings mc;
      mc.trials = a.trials;
      mc.seed = a.seed;
      mc.worker_count = a.workers;
      mc.window_radius = a.window_radius;
      const bool markers = parse_method(a.method) != d2dmm::SweepMethod::analytic;
      const d2dmm::FigureResult fig =
          d2dmm::reproduce_figure(figure_id, build_params(a), {}, markers, mc);
      const int rc = write_out(a.out_path, fig.rows, fig.metadata);
      if (rc != 0) return rc;
      d2dmm::print_trend_report(fig, std::cerr);
      return fig.pass() ? 0 : 1;
    }

    if (compare->parsed()) {
      std::ifstream fa(csv_a), fb(csv_b);
      if (!fa || !fb) {
        std::cerr << "cannot open input CSV\n";
        return 2;
      }
      const auto rows_a = d2dmm::read_csv(fa);
      const auto rows_b = d2dmm::read_csv(fb);
      const d2dmm::CompareReport rep = d2dmm::compare_rows(rows_a, rows_b);
      d2dmm::print_compare_report(rep, std::cout);
      return rep.pass ? 0 : 1;
    }

    if (validate_cmd->parsed()) {
      const d2dmm::NetworkParams p = build_params(a);
      std::cout << "configuration valid\n" << d2dmm::render_config(p);
      return 0;
    }

    if (selftest->parsed()) return d2dmm::run_selftest(std::cout);
  } catch (const d2dmm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
