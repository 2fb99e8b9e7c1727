#pragma once

// Pre-baked sweep scenarios (fig2 .. fig9) with machine-checked trend
// assertions.  Each recipe regenerates one result curve family; axis grids
// not fixed by the scenario definitions are reconstructions and are flagged
// in the emitted metadata.

#include <string>
#include <vector>

#include "d2dmm/sweep.hpp"

namespace d2dmm {

struct TrendCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FigureResult {
  std::string id;
  std::vector<SweepRow> rows;
  std::vector<TrendCheck> checks;
  std::string metadata;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

const std::vector<std::string>& figure_ids();

// Throws std::invalid_argument for an unknown id.  MC marker rows are added
// when with_markers is set (trend checks always run on the analytic rows).
FigureResult reproduce_figure(const std::string& id, const NetworkParams& base,
                              const AnalysisOptions& opt = {}, bool with_markers = false,
                              const McSettings& mc = {});

void print_trend_report(const FigureResult& fig, std::ostream& os);

}  // namespace d2dmm
