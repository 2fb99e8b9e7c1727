#pragma once

// Batch front-end machinery: parameter sweeps over any config key, CSV
// emission, analytic-vs-MC comparison, and the quick trivial-limit selftest.

#include <iosfwd>
#include <string>
#include <vector>

#include "d2dmm/analysis.hpp"
#include "d2dmm/simulator.hpp"

namespace d2dmm {

enum class SweepMethod { analytic, mc, both };

// Output tokens: p_d2d, outage_c, outage_d, ase, laplace_cc, laplace_dc,
// laplace_cd, laplace_dd_intra, laplace_dd_inter; "laplace" expands to the
// five kinds.  Laplace rows evaluate E[exp(-v I)] at v = 10^(gamma_db / 10),
// i.e. the gamma column doubles as the transform argument; dd_intra uses
// w0 = sigma_d.
struct SweepSpec {
  NetworkParams base{};
  std::string swept_key;             // config key; empty = single point
  std::vector<double> grid;          // values in config (boundary) units
  std::vector<std::string> outputs = {"outage_c", "outage_d"};
  SweepMethod method = SweepMethod::analytic;
  std::vector<double> gamma_db = {0.0};
  McSettings mc{};
  AnalysisOptions opt{};
  Sharing sharing = Sharing::underlay;  // for the ase output
  bool timing = false;                  // populate wall_ms (breaks byte-replay)
};

struct SweepRow {
  std::string swept_key;
  double swept_value = 0.0;
  double gamma_db = 0.0;
  std::string output;
  std::string method;  // "analytic" | "mc"
  double value = 0.0;
  double std_err = 0.0;
  double wall_ms = -1.0;  // < 0 renders as an empty field
  std::string error;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// RFC-4180 CSV with a fixed header; metadata emitted as '#' comment lines
// above the header.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& os,
               const std::string& metadata = "");
std::vector<SweepRow> read_csv(std::istream& is);

struct ComparedPair {
  SweepRow reference;  // analytic
  SweepRow candidate;  // mc
  double gap = 0.0;
  double gap_over_se = 0.0;
  bool pass = true;
};

struct CompareReport {
  std::vector<ComparedPair> pairs;
  std::vector<std::string> unmatched;
  bool pass = true;
};

// Pairs rows by (swept_key, swept_value, gamma_db, output) and applies the
// oracle-agreement rule gap <= max(0.03, 3 * SE).
CompareReport compare_rows(const std::vector<SweepRow>& analytic,
                           const std::vector<SweepRow>& mc);
void print_compare_report(const CompareReport& rep, std::ostream& os);

// Fast limit checks (Laplace at v = 0, outage at extreme thresholds, bias
// extremes, pmf normalization, overlay identity).  Returns 0 iff all pass.
int run_selftest(std::ostream& os);

}  // namespace d2dmm
