#pragma once

// Monte Carlo estimation of every quantity the analysis module computes, by
// direct realization of the modeled point processes.  Serves as the
// independent oracle for the closed forms.
//
// Determinism contract: trial t draws from an RNG stream derived from
// (seed, t), per-trial outcomes are reduced in trial order, so estimates are
// bit-identical for a fixed (seed, trials, params) regardless of worker
// count.

#include <cstdint>
#include <optional>

#include "d2dmm/analysis.hpp"
#include "d2dmm/params.hpp"

namespace d2dmm {

struct McSettings {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double window_radius = 0.0;         // 0 = default_window(params)
  double min_distance_epsilon = 0.1;  // m; shorter sampled distances resample
  int worker_count = 0;               // 0 = hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t degenerate = 0;  // resampled sub-draws across all trials
};

// Frequency of the biased D2D-mode rule firing for the typical potential D2D
// UE.  The partitioned model compares against the min-path-loss serving BS;
// the printed model mirrors the published per-branch sum (its per-trial score
// is the number of satisfied branches, so the mean may exceed 1).
McEstimate simulate_p_d2d(const NetworkParams& p, const McSettings& mc,
                          ServingModel model = ServingModel::partitioned);

McEstimate simulate_outage(Mode mode, double gamma, const NetworkParams& p, double p_d2d_value,
                           const McSettings& mc);

// E[exp(-v I)] with only the designated interference component realized.
// w0 is required for dd_intra.
McEstimate simulate_laplace(LaplaceKind kind, double v, const NetworkParams& p,
                            double p_d2d_value, std::optional<double> w0, const McSettings& mc);

McEstimate simulate_ase(double gamma, const NetworkParams& p, Sharing sharing, double delta,
                        double p_d2d_value, const McSettings& mc);

}  // namespace d2dmm
