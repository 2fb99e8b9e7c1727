#include "d2dmm/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "d2dmm/channel.hpp"

namespace d2dmm {

namespace {

const std::vector<std::pair<std::string, LaplaceKind>> kLaplaceOutputs = {
    {"laplace_cc", LaplaceKind::cc},
    {"laplace_dc", LaplaceKind::dc},
    {"laplace_cd", LaplaceKind::cd},
    {"laplace_dd_intra", LaplaceKind::dd_intra},
    {"laplace_dd_inter", LaplaceKind::dd_inter},
};

std::vector<std::string> expand_outputs(const std::vector<std::string>& outputs) {
  std::vector<std::string> out;
  for (const auto& o : outputs) {
    if (o == "laplace") {
      for (const auto& [name, kind] : kLaplaceOutputs) out.push_back(name);
    } else {
      out.push_back(o);
    }
  }
  return out;
}

struct RowTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

double eval_analytic(const std::string& output, double gamma, const NetworkParams& p,
                     double pd2d, const SweepSpec& spec, double* std_err) {
  *std_err = 0.0;
  if (output == "p_d2d") return pd2d;
  if (output == "outage_c")
    return p.sigma_be > 0.0
               ? outage_with_beam_error(gamma, Mode::cellular, p, pd2d, spec.opt).value
               : outage_cellular(gamma, p, pd2d, spec.opt).value;
  if (output == "outage_d")
    return p.sigma_be > 0.0 ? outage_with_beam_error(gamma, Mode::d2d, p, pd2d, spec.opt).value
                            : outage_d2d(gamma, p, pd2d, spec.opt).value;
  if (output == "ase") return ase(gamma, p, spec.sharing, p.delta, pd2d, spec.opt);
  for (const auto& [name, kind] : kLaplaceOutputs)
    if (output == name) {
      std::optional<double> w0;
      if (kind == LaplaceKind::dd_intra) w0 = p.sigma_d();
      return laplace(kind, gamma, p, pd2d, w0, spec.opt);
    }
  throw std::runtime_error("unknown output '" + output + "'");
}

double eval_mc(const std::string& output, double gamma, const NetworkParams& p, double pd2d,
               const SweepSpec& spec, std::uint64_t row_seed, double* std_err) {
  McSettings mc = spec.mc;
  mc.seed = row_seed;
  McEstimate e;
  if (output == "p_d2d") {
    e = simulate_p_d2d(p, mc, spec.opt.serving_model);
  } else if (output == "outage_c") {
    e = simulate_outage(Mode::cellular, gamma, p, pd2d, mc);
  } else if (output == "outage_d") {
    e = simulate_outage(Mode::d2d, gamma, p, pd2d, mc);
  } else if (output == "ase") {
    e = simulate_ase(gamma, p, spec.sharing, p.delta, pd2d, mc);
  } else {
    bool found = false;
    for (const auto& [name, kind] : kLaplaceOutputs)
      if (output == name) {
        std::optional<double> w0;
        if (kind == LaplaceKind::dd_intra) w0 = p.sigma_d();
        e = simulate_laplace(kind, gamma, p, pd2d, w0, mc);
        found = true;
        break;
      }
    if (!found) throw std::runtime_error("unknown output '" + output + "'");
  }
  *std_err = e.std_error;
  return e.mean;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  std::vector<double> grid = spec.grid;
  if (spec.swept_key.empty() || grid.empty()) grid = {std::nan("")};
  const std::vector<std::string> outputs = expand_outputs(spec.outputs);

  std::uint64_t row_counter = 0;
  for (double gv : grid) {
    NetworkParams p = spec.base;
    std::string point_error;
    if (!spec.swept_key.empty() && std::isfinite(gv)) {
      try {
        apply_override(p, spec.swept_key, std::to_string(gv));
        ValidationReport r = validate(p);
        if (!r.ok()) {
          point_error = "invalid parameters at this grid point:";
          for (const auto& e : r.errors) point_error += " " + e + ";";
        }
      } catch (const std::exception& ex) {
        point_error = ex.what();
      }
    }

    double pd2d = 0.0;
    if (point_error.empty()) {
      try {
        pd2d = p_d2d(p, spec.opt).value;
      } catch (const std::exception& ex) {
        point_error = ex.what();
      }
    }

    for (double gdb : spec.gamma_db) {
      const double gamma = db_to_linear(gdb);
      for (const auto& output : outputs) {
        for (int pass = 0; pass < 2; ++pass) {
          const bool analytic = pass == 0;
          if (analytic && spec.method == SweepMethod::mc) continue;
          if (!analytic && spec.method == SweepMethod::analytic) continue;

          SweepRow row;
          row.swept_key = spec.swept_key;
          row.swept_value = gv;
          row.gamma_db = gdb;
          row.output = output;
          row.method = analytic ? "analytic" : "mc";
          const std::uint64_t row_seed = [&] {
            std::uint64_t s = spec.mc.seed;
            std::uint64_t mixed = splitmix64(s) ^ (row_counter * 0x9e3779b97f4a7c15ULL);
            return splitmix64(mixed);
          }();
          ++row_counter;

          RowTimer timer;
          if (!point_error.empty()) {
            row.error = point_error;
            row.value = std::nan("");
          } else {
            try {
              row.value = analytic
                              ? eval_analytic(output, gamma, p, pd2d, spec, &row.std_err)
                              : eval_mc(output, gamma, p, pd2d, spec, row_seed, &row.std_err);
            } catch (const std::exception& ex) {
              row.error = ex.what();
              row.value = std::nan("");
            }
          }
          if (spec.timing) row.wall_ms = timer.ms();
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt_double(double v, const char* fmt = "%.12g") {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os, const std::string& metadata) {
  if (!metadata.empty()) {
    std::istringstream lines(metadata);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << "\n";
  }
  os << "swept_key,swept_value,gamma_db,output,method,value,std_err,wall_ms,error\n";
  for (const auto& r : rows) {
    os << csv_field(r.swept_key) << ',' << fmt_double(r.swept_value) << ','
       << fmt_double(r.gamma_db) << ',' << csv_field(r.output) << ',' << r.method << ','
       << fmt_double(r.value) << ',' << fmt_double(r.std_err) << ','
       << (r.wall_ms < 0.0 ? "" : fmt_double(r.wall_ms, "%.3f")) << ',' << csv_field(r.error)
       << "\n";
  }
}

std::vector<SweepRow> read_csv(std::istream& is) {
  std::vector<SweepRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("swept_key,", 0) == 0) continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() < 9) throw std::runtime_error("malformed CSV row: " + line);
    SweepRow r;
    r.swept_key = f[0];
    r.swept_value = f[1].empty() ? std::nan("") : std::stod(f[1]);
    r.gamma_db = f[2].empty() ? std::nan("") : std::stod(f[2]);
    r.output = f[3];
    r.method = f[4];
    r.value = f[5].empty() ? std::nan("") : std::stod(f[5]);
    r.std_err = f[6].empty() ? 0.0 : std::stod(f[6]);
    r.wall_ms = f[7].empty() ? -1.0 : std::stod(f[7]);
    r.error = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

CompareReport compare_rows(const std::vector<SweepRow>& analytic,
                           const std::vector<SweepRow>& mc) {
  CompareReport rep;
  const auto key = [](const SweepRow& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g|%.12g", r.swept_value, r.gamma_db);
    return r.swept_key + "|" + buf + "|" + r.output;
  };
  // Prefer mc-method rows on the candidate side; fall back to whatever the
  // file holds so that comparing a file against itself pairs every row.
  std::map<std::string, const SweepRow*> mc_index;
  for (const auto& r : mc) {
    auto [it, inserted] = mc_index.try_emplace(key(r), &r);
    if (!inserted && r.method == "mc") it->second = &r;
  }
  const bool a_has_analytic =
      std::any_of(analytic.begin(), analytic.end(),
                  [](const SweepRow& r) { return r.method != "mc"; });

  for (const auto& a : analytic) {
    if (a_has_analytic && a.method == "mc") continue;
    auto it = mc_index.find(key(a));
    if (it == mc_index.end()) {
      rep.unmatched.push_back(key(a));
      rep.pass = false;
      continue;
    }
    const SweepRow& b = *it->second;
    ComparedPair pr;
    pr.reference = a;
    pr.candidate = b;
    if (!a.error.empty() || !b.error.empty() || std::isnan(a.value) || std::isnan(b.value)) {
      pr.pass = false;
      pr.gap = std::nan("");
    } else {
      pr.gap = std::abs(a.value - b.value);
      const double se = std::max(a.std_err, b.std_err);
      pr.gap_over_se = se > 0.0 ? pr.gap / se : (pr.gap > 0.0 ? 1e308 : 0.0);
      pr.pass = pr.gap <= std::max(0.03, 3.0 * se);
    }
    rep.pass = rep.pass && pr.pass;
    rep.pairs.push_back(std::move(pr));
  }
  std::stable_sort(rep.pairs.begin(), rep.pairs.end(),
                   [](const ComparedPair& x, const ComparedPair& y) {
                     return x.gap_over_se > y.gap_over_se;
                   });
  return rep;
}

void print_compare_report(const CompareReport& rep, std::ostream& os) {
  os << "compared " << rep.pairs.size() << " row pairs\n";
  const size_t worst = std::min<size_t>(rep.pairs.size(), 10);
  for (size_t i = 0; i < worst; ++i) {
    const auto& pr = rep.pairs[i];
    os << (pr.pass ? "  ok   " : "  FAIL ") << pr.reference.output << " " << pr.reference.swept_key
       << "=" << pr.reference.swept_value << " gamma_db=" << pr.reference.gamma_db
       << " gap=" << pr.gap << " gap/se=" << pr.gap_over_se << "\n";
  }
  for (const auto& k : rep.unmatched) os << "  UNMATCHED " << k << "\n";
  os << (rep.pass ? "comparison PASS" : "comparison FAIL") << "\n";
}

int run_selftest(std::ostream& os) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    os << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) os << "  (" << detail << ")";
    os << "\n";
    if (!ok) ++failures;
  };

  const NetworkParams p = default_params();
  const AnalysisOptions opt;
  const double pd2d = p_d2d(p, opt).value;

  for (const auto& [name, kind] :
       std::vector<std::pair<std::string, LaplaceKind>>{{"cc", LaplaceKind::cc},
                                                        {"dc", LaplaceKind::dc},
                                                        {"cd", LaplaceKind::cd},
                                                        {"dd_intra", LaplaceKind::dd_intra},
                                                        {"dd_inter", LaplaceKind::dd_inter}}) {
    const double v = laplace(kind, 0.0, p, pd2d, p.sigma_d(), opt);
    check("laplace_" + name + "(v=0) == 1", v == 1.0);
  }

  for (Mode mode : {Mode::cellular, Mode::d2d}) {
    const char* mn = mode == Mode::cellular ? "cellular" : "d2d";
    const double lo = outage(mode, 1e-9, p, pd2d, opt).value;
    const double hi = outage(mode, 1e12, p, pd2d, opt).value;
    check(std::string("outage_") + mn + "(gamma->0) <= 1e-6", lo <= 1e-6, std::to_string(lo));
    check(std::string("outage_") + mn + "(gamma->inf) >= 1-1e-6", hi >= 1.0 - 1e-6,
          std::to_string(hi));
  }

  {
    NetworkParams q = p;
    q.t_d = 0.0;
    check("p_d2d(t_d=0) == 0", p_d2d(q, opt).value == 0.0);
  }

  for (Mode mode : {Mode::cellular, Mode::d2d}) {
    const char* mn = mode == Mode::cellular ? "cellular" : "d2d";
    const double plain = outage(mode, p.gamma, p, pd2d, opt).value;
    const double mix = outage_with_beam_error(p.gamma, mode, p, pd2d, opt).value;
    check(std::string("beam-error outage at sigma_be=0 equals plain (") + mn + ")",
          std::abs(plain - mix) <= 1e-12);
  }

  for (Mode mode : {Mode::cellular, Mode::d2d}) {
    const char* mn = mode == Mode::cellular ? "cellular" : "d2d";
    NetworkParams overlay = p;
    overlay.beta = 0;
    AnalysisOptions pinned = opt;
    pinned.pin_cross_mode = true;
    const double a = outage(mode, p.gamma, overlay, pd2d, opt).value;
    const double b = outage(mode, p.gamma, p, pd2d, pinned).value;
    check(std::string("overlay == underlay with pinned cross-mode factor (") + mn + ")",
          std::abs(a - b) <= 1e-12);
  }

  for (LinkKind kind : {LinkKind::cellular, LinkKind::d2d}) {
    const char* kn = kind == LinkKind::cellular ? "cellular" : "d2d";
    const GainPmf interferer = interferer_gain_pmf(kind, p);
    double s1 = 0.0;
    for (const auto& a : interferer.atoms) s1 += a.prob;
    check(std::string("interferer gain pmf sums to 1 (") + kn + ")",
          std::abs(s1 - 1.0) <= 1e-12);
    for (double sbe : {0.0, deg_to_rad(7.5), deg_to_rad(30.0)}) {
      const GainPmf serving = serving_gain_pmf(kind, sbe, p);
      double s2 = 0.0;
      for (const auto& a : serving.atoms) s2 += a.prob;
      check(std::string("serving gain pmf sums to 1 (") + kn + ", sigma_be=" +
                std::to_string(rad_to_deg(sbe)) + " deg)",
            std::abs(s2 - 1.0) <= 1e-12);
    }
  }

  os << (failures == 0 ? "selftest PASS" : "selftest FAIL") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace d2dmm
