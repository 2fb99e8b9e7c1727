#include "d2dmm/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "d2dmm/channel.hpp"

namespace d2dmm {

namespace {

constexpr double kMonotoneSlack = 1e-9;

std::string label(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

struct FigureBuilder {
  FigureResult result;
  const NetworkParams& base;
  const AnalysisOptions& opt;
  bool with_markers;
  const McSettings& mc;
  std::uint64_t marker_counter = 0;

  FigureBuilder(const std::string& id, const NetworkParams& b, const AnalysisOptions& o,
                bool markers, const McSettings& m)
      : base(b), opt(o), with_markers(markers), mc(m) {
    result.id = id;
  }

  void meta(const std::string& line) { result.metadata += line + "\n"; }

  void row(const std::string& key, double x, double gamma_db, const std::string& output,
           double value) {
    result.rows.push_back({key, x, gamma_db, output, "analytic", value, 0.0, -1.0, ""});
  }

  void marker(const std::string& key, double x, double gamma_db, const std::string& output,
              const McEstimate& e) {
    result.rows.push_back(
        {key, x, gamma_db, output, "mc", e.mean, e.std_error, -1.0, ""});
  }

  McSettings marker_settings() {
    McSettings m = mc;
    std::uint64_t s = mc.seed + (++marker_counter) * 0x9e3779b97f4a7c15ULL;
    m.seed = splitmix64(s);
    return m;
  }

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    result.checks.push_back({name, pass, detail});
  }

  void check_nonincreasing(const std::string& name, const std::vector<double>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i + 1] > v[i] + kMonotoneSlack) {
        check(name, false, "rises at index " + std::to_string(i + 1));
        return;
      }
    check(name, true);
  }

  void check_nondecreasing(const std::string& name, const std::vector<double>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i + 1] < v[i] - kMonotoneSlack) {
        check(name, false, "drops at index " + std::to_string(i + 1));
        return;
      }
    check(name, true);
  }

  void check_pointwise_le(const std::string& name, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
    for (size_t i = 0; i < lo.size() && i < hi.size(); ++i)
      if (lo[i] > hi[i] + kMonotoneSlack) {
        check(name, false, "violated at index " + std::to_string(i));
        return;
      }
    check(name, true);
  }
};

std::vector<double> linspace_int(int lo, int hi) {
  std::vector<double> v;
  for (int x = lo; x <= hi; ++x) v.push_back(double(x));
  return v;
}

const std::vector<double> kGammaGridDb = {0, 5, 10, 15, 20, 25, 30, 35, 40};

void fig2(FigureBuilder& fb) {
  fb.meta("fig2: D2D mode-selection probability vs cluster scatter std sigma_d");
  fb.meta("sigma_d grid 1..10 m is a reconstruction (axis not tabulated)");
  const std::vector<std::pair<double, double>> variants = {{1.0, 1.0}, {0.5, 1.0}, {1.0, 0.5}};
  std::map<std::pair<double, double>, std::vector<double>> curves;
  for (auto [plc, pld] : variants) {
    for (double sd : linspace_int(1, 10)) {
      NetworkParams p = fb.base;
      p.sigma_d_sq = sd * sd;
      p.los_ball_c.p_los = plc;
      p.los_ball_d.p_los = pld;
      const double v = p_d2d(p, fb.opt).value;
      const std::string out =
          "p_d2d|p_l_c=" + label("%.2g", plc) + "|p_l_d=" + label("%.2g", pld);
      fb.row("sigma_d", sd, fb.base.gamma, out, v);
      curves[{plc, pld}].push_back(v);
      if (fb.with_markers)
        fb.marker("sigma_d", sd, fb.base.gamma, out,
                  simulate_p_d2d(p, fb.marker_settings(), fb.opt.serving_model));
    }
  }
  for (auto [plc, pld] : variants)
    fb.check_nonincreasing("p_d2d nonincreasing in sigma_d at p_l_c=" + label("%.2g", plc) +
                               ", p_l_d=" + label("%.2g", pld),
                           curves[{plc, pld}]);
  fb.check_pointwise_le("p_d2d decreases when p_l_c rises", curves[{1.0, 1.0}],
                        curves[{0.5, 1.0}]);
  fb.check_pointwise_le("p_d2d increases when p_l_d rises", curves[{1.0, 0.5}],
                        curves[{1.0, 1.0}]);
}

void fig3(FigureBuilder& fb) {
  fb.meta("fig3: SINR outage vs mean active transmitters per cluster (gamma = 40 dB)");
  fb.meta("n_bar grid 1..10 is a reconstruction");
  const double gamma = db_to_linear(40.0);
  const std::vector<double> lambdas = {1e-4, 5e-4};
  // curves[(lambda, sharing, mode)]
  std::map<std::tuple<double, int, int>, std::vector<double>> curves;
  for (double lc : lambdas) {
    for (double nb : linspace_int(1, 10)) {
      NetworkParams p = fb.base;
      p.lambda_c = lc;
      p.n_bar = nb;
      const double pd2d = p_d2d(p, fb.opt).value;
      for (int sharing = 0; sharing < 2; ++sharing) {
        NetworkParams q = p;
        q.beta = sharing == 0 ? 1 : 0;
        const char* sh = sharing == 0 ? "underlay" : "overlay";
        const OutageResult oc = outage_cellular(gamma, q, pd2d, fb.opt);
        const OutageResult od = outage_d2d(gamma, q, pd2d, fb.opt);
        const std::string lc_label = "|lambda_c=" + label("%.1e", lc) + "|";
        fb.row("n_bar", nb, 40.0, "outage_c" + lc_label + sh, oc.value);
        fb.row("n_bar", nb, 40.0, "outage_d" + lc_label + sh, od.value);
        curves[{lc, sharing, 0}].push_back(oc.value);
        curves[{lc, sharing, 1}].push_back(od.value);
        if (fb.with_markers) {
          fb.marker("n_bar", nb, 40.0, "outage_c" + lc_label + sh,
                    simulate_outage(Mode::cellular, gamma, q, pd2d, fb.marker_settings()));
          fb.marker("n_bar", nb, 40.0, "outage_d" + lc_label + sh,
                    simulate_outage(Mode::d2d, gamma, q, pd2d, fb.marker_settings()));
        }
      }
    }
  }
  for (double lc : lambdas) {
    const std::string l = label("%.1e", lc);
    fb.check_nondecreasing("underlay cellular outage nondecreasing in n_bar, lambda_c=" + l,
                           curves[{lc, 0, 0}]);
    fb.check_nondecreasing("underlay d2d outage nondecreasing in n_bar, lambda_c=" + l,
                           curves[{lc, 0, 1}]);
    const auto& flat = curves[{lc, 1, 0}];
    const auto [mn, mx] = std::minmax_element(flat.begin(), flat.end());
    fb.check("overlay cellular outage flat in n_bar, lambda_c=" + l, *mx - *mn < 1e-9,
             "spread " + label("%.3g", *mx - *mn));
    fb.check_pointwise_le("overlay cellular <= underlay cellular, lambda_c=" + l,
                          curves[{lc, 1, 0}], curves[{lc, 0, 0}]);
    // Cross-mode interference from cellular UEs barely moves D2D outage.
    double worst = 0.0;
    for (size_t i = 0; i < curves[{lc, 0, 1}].size(); ++i)
      worst = std::max(worst, std::abs(curves[{lc, 0, 1}][i] - curves[{lc, 1, 1}][i]));
    fb.check("d2d outage gap between sharing modes < 0.005, lambda_c=" + l, worst < 0.005,
             "max gap " + label("%.4g", worst));
  }
  for (int mode = 0; mode < 2; ++mode)
    fb.check_pointwise_le(std::string("underlay ") + (mode == 0 ? "cellular" : "d2d") +
                              " outage nondecreasing in lambda_c",
                          curves[{1e-4, 0, mode}], curves[{5e-4, 0, mode}]);
}

void fig4(FigureBuilder& fb) {
  fb.meta("fig4: D2D outage vs sigma_d for two D2D LOS ball radii (gamma = 20 dB)");
  fb.meta("sigma_d grid 1..10 m is a reconstruction");
  const double gamma = db_to_linear(20.0);
  std::map<double, std::vector<double>> curves;
  const std::vector<double> radii = {25.0, 50.0};
  const std::vector<double> sds = linspace_int(1, 10);
  for (double rb : radii) {
    for (double sd : sds) {
      NetworkParams p = fb.base;
      p.sigma_d_sq = sd * sd;
      p.los_ball_d.radius = rb;
      const double pd2d = p_d2d(p, fb.opt).value;
      const double v = outage_d2d(gamma, p, pd2d, fb.opt).value;
      fb.row("sigma_d", sd, 20.0, "outage_d|r_b_d=" + label("%g", rb), v);
      curves[rb].push_back(v);
      if (fb.with_markers)
        fb.marker("sigma_d", sd, 20.0, "outage_d|r_b_d=" + label("%g", rb),
                  simulate_outage(Mode::d2d, gamma, p, pd2d, fb.marker_settings()));
    }
  }
  const auto at = [&](double rb, double sd) {
    const auto it = std::find(sds.begin(), sds.end(), sd);
    return curves[rb][size_t(it - sds.begin())];
  };
  fb.check("small ball radius wins at sigma_d = 2", at(25, 2) < at(50, 2),
           label("%.4g", at(25, 2)) + " vs " + label("%.4g", at(50, 2)));
  fb.check("large ball radius wins at sigma_d = 10", at(25, 10) > at(50, 10),
           label("%.4g", at(25, 10)) + " vs " + label("%.4g", at(50, 10)));
}

void fig5(FigureBuilder& fb) {
  fb.meta("fig5: SINR outage vs threshold for antenna main-lobe gain / beamwidth variants");
  struct Variant {
    double m_db;
    double theta_deg;
  };
  const std::vector<Variant> variants = {{20, 30}, {10, 30}, {20, 60}};
  std::map<std::pair<int, int>, std::vector<double>> curves;  // (variant idx, mode)
  for (size_t vi = 0; vi < variants.size(); ++vi) {
    NetworkParams p = fb.base;
    p.antenna_bs.main_gain = p.antenna_ue.main_gain = db_to_linear(variants[vi].m_db);
    p.antenna_bs.beamwidth = p.antenna_ue.beamwidth = deg_to_rad(variants[vi].theta_deg);
    const double pd2d = p_d2d(p, fb.opt).value;
    const std::string tag =
        "|m_db=" + label("%g", variants[vi].m_db) + "|theta=" + label("%g", variants[vi].theta_deg);
    for (double gdb : kGammaGridDb) {
      const double gamma = db_to_linear(gdb);
      const OutageResult oc = outage_cellular(gamma, p, pd2d, fb.opt);
      const OutageResult od = outage_d2d(gamma, p, pd2d, fb.opt);
      fb.row("gamma_db", gdb, gdb, "outage_c" + tag, oc.value);
      fb.row("gamma_db", gdb, gdb, "outage_d" + tag, od.value);
      curves[{int(vi), 0}].push_back(oc.value);
      curves[{int(vi), 1}].push_back(od.value);
      if (fb.with_markers) {
        fb.marker("gamma_db", gdb, gdb, "outage_c" + tag,
                  simulate_outage(Mode::cellular, gamma, p, pd2d, fb.marker_settings()));
        fb.marker("gamma_db", gdb, gdb, "outage_d" + tag,
                  simulate_outage(Mode::d2d, gamma, p, pd2d, fb.marker_settings()));
      }
    }
  }
  for (int mode = 0; mode < 2; ++mode) {
    const char* mn = mode == 0 ? "cellular" : "d2d";
    fb.check_pointwise_le(std::string("higher main-lobe gain lowers ") + mn + " outage",
                          curves[{0, mode}], curves[{1, mode}]);
    fb.check_pointwise_le(std::string("narrower beam lowers ") + mn + " outage",
                          curves[{0, mode}], curves[{2, mode}]);
    fb.check_nondecreasing(std::string(mn) + " outage nondecreasing in gamma",
                           curves[{0, mode}]);
  }
  fb.check_pointwise_le("d2d outage below cellular outage (base antenna)", curves[{0, 1}],
                        curves[{0, 0}]);
}

void fig6(FigureBuilder& fb) {
  fb.meta("fig6: SINR outage vs threshold under beamsteering error");
  const std::vector<double> sigmas_deg = {0, 5, 10, 20};
  std::map<std::pair<double, int>, std::vector<double>> curves;
  for (double sdeg : sigmas_deg) {
    NetworkParams p = fb.base;
    p.sigma_be = deg_to_rad(sdeg);
    const double pd2d = p_d2d(p, fb.opt).value;
    for (double gdb : kGammaGridDb) {
      const double gamma = db_to_linear(gdb);
      for (int mode = 0; mode < 2; ++mode) {
        const Mode m = mode == 0 ? Mode::cellular : Mode::d2d;
        const double v = outage_with_beam_error(gamma, m, p, pd2d, fb.opt).value;
        const std::string out = std::string(mode == 0 ? "outage_c" : "outage_d") +
                                "|sigma_be_deg=" + label("%g", sdeg);
        fb.row("gamma_db", gdb, gdb, out, v);
        curves[{sdeg, mode}].push_back(v);
        if (fb.with_markers)
          fb.marker("gamma_db", gdb, gdb, out,
                    simulate_outage(m, gamma, p, pd2d, fb.marker_settings()));
      }
    }
  }
  for (int mode = 0; mode < 2; ++mode) {
    const char* mn = mode == 0 ? "cellular" : "d2d";
    for (size_t i = 0; i + 1 < sigmas_deg.size(); ++i)
      fb.check_pointwise_le(std::string(mn) + " outage nondecreasing in sigma_be (" +
                                label("%g", sigmas_deg[i]) + " -> " +
                                label("%g", sigmas_deg[i + 1]) + " deg)",
                            curves[{sigmas_deg[i], mode}], curves[{sigmas_deg[i + 1], mode}]);
  }
}

void fig7(FigureBuilder& fb) {
  fb.meta("fig7: underlay ASE vs mean active transmitters per cluster (gamma = 40 dB)");
  fb.meta("n_bar grid 1..15 is a reconstruction");
  const double gamma = db_to_linear(40.0);
  const std::vector<double> lambdas = {1e-4, 5e-4};
  std::map<double, std::vector<double>> curves;
  const std::vector<double> nbars = linspace_int(1, 15);
  for (double lc : lambdas) {
    for (double nb : nbars) {
      NetworkParams p = fb.base;
      p.lambda_c = lc;
      p.n_bar = nb;
      const double pd2d = p_d2d(p, fb.opt).value;
      const double v = ase(gamma, p, Sharing::underlay, p.delta, pd2d, fb.opt);
      fb.row("n_bar", nb, 40.0, "ase|underlay|lambda_c=" + label("%.1e", lc), v);
      curves[lc].push_back(v);
      if (fb.with_markers)
        fb.marker("n_bar", nb, 40.0, "ase|underlay|lambda_c=" + label("%.1e", lc),
                  simulate_ase(gamma, p, Sharing::underlay, p.delta, pd2d,
                               fb.marker_settings()));
    }
  }
  std::map<double, size_t> argmax;
  for (double lc : lambdas) {
    const auto& c = curves[lc];
    argmax[lc] = size_t(std::max_element(c.begin(), c.end()) - c.begin());
    fb.check("interior ASE maximizer, lambda_c=" + label("%.1e", lc),
             argmax[lc] > 0 && argmax[lc] + 1 < c.size(),
             "argmax n_bar = " + label("%g", nbars[argmax[lc]]));
  }
  fb.check("optimal n_bar identical across cluster densities",
           argmax[lambdas[0]] == argmax[lambdas[1]],
           label("%g", nbars[argmax[lambdas[0]]]) + " vs " +
               label("%g", nbars[argmax[lambdas[1]]]));
  fb.check_pointwise_le("denser clusters raise underlay ASE", curves[1e-4], curves[5e-4]);
}

void fig8(FigureBuilder& fb) {
  fb.meta("fig8: overlay ASE vs mean active transmitters for partition factors");
  fb.meta("n_bar grid 1..15 is a reconstruction");
  const double gamma = db_to_linear(40.0);
  const std::vector<double> deltas = {0.0, 0.2, 0.5, 1.0};
  std::map<double, std::vector<double>> curves;
  for (double nb : linspace_int(1, 15)) {
    NetworkParams p = fb.base;
    p.n_bar = nb;
    const double pd2d = p_d2d(p, fb.opt).value;
    // delta only reweights the two terms; evaluate the outages once.
    NetworkParams q = p;
    q.beta = 0;
    const double pc = outage_cellular(gamma, q, pd2d, fb.opt).value;
    const double pd = outage_d2d(gamma, q, pd2d, fb.opt).value;
    const double rate = std::log2(1.0 + gamma);
    for (double d : deltas) {
      const double v = ((1.0 - d) * p.lambda_b * (1.0 - pc) +
                        d * p.n_bar * pd2d * p.lambda_c * (1.0 - pd)) *
                       rate;
      fb.row("n_bar", nb, 40.0, "ase|overlay|delta=" + label("%g", d), v);
      curves[d].push_back(v);
    }
  }
  for (double d : {0.0, 0.2, 0.5})
    fb.check_pointwise_le("ASE(delta=1) dominates delta=" + label("%g", d), curves[d],
                          curves[1.0]);
}

void fig9(FigureBuilder& fb) {
  fb.meta("fig9: proportional-fair partition objective vs delta (gamma = 40 dB, w_d = 0.4)");
  const double gamma = db_to_linear(40.0);
  NetworkParams p = fb.base;
  p.w_d = 0.4;
  p.w_c = 0.6;
  const double pd2d = p_d2d(p, fb.opt).value;
  const PfObjective obj = make_pf_objective(gamma, p, pd2d, fb.opt);
  double best_delta = 0.0, best_val = -1e308;
  for (int i = 1; i <= 99; ++i) {
    const double d = i / 100.0;
    const double v = obj(d);
    fb.row("delta", d, 40.0, "pf_objective", v);
    if (v > best_val) {
      best_val = v;
      best_delta = d;
    }
  }
  fb.check("objective argmax within one grid step of w_d",
           std::abs(best_delta - p.w_d) <= 0.01 + 1e-12, "argmax " + label("%.2f", best_delta));
  fb.check("closed-form partition equals w_d",
           optimal_partition_proportional_fair(p) == p.w_d);
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2", "fig3", "fig4", "fig5",
                                               "fig6", "fig7", "fig8", "fig9"};
  return ids;
}

FigureResult reproduce_figure(const std::string& id, const NetworkParams& base,
                              const AnalysisOptions& opt, bool with_markers,
                              const McSettings& mc) {
  FigureBuilder fb(id, base, opt, with_markers, mc);
  if (id == "fig2")
    fig2(fb);
  else if (id == "fig3")
    fig3(fb);
  else if (id == "fig4")
    fig4(fb);
  else if (id == "fig5")
    fig5(fb);
  else if (id == "fig6")
    fig6(fb);
  else if (id == "fig7")
    fig7(fb);
  else if (id == "fig8")
    fig8(fb);
  else if (id == "fig9")
    fig9(fb);
  else
    throw std::invalid_argument("unknown figure id '" + id + "'");
  return std::move(fb.result);
}

void print_trend_report(const FigureResult& fig, std::ostream& os) {
  os << "trend report for " << fig.id << "\n";
  for (const auto& c : fig.checks) {
    os << (c.pass ? "  [PASS] " : "  [FAIL] ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (fig.pass() ? "all trends PASS" : "trend FAILURES present") << "\n";
}

}  // namespace d2dmm
