#pragma once

// Quadrature evaluation of the closed-form performance expressions: D2D mode
// selection probability, interference Laplace transforms, SINR outage for
// cellular and D2D links (with and without beamsteering error), area spectral
// efficiency, and the spectrum-partition optimizers.

#include <optional>

#include "d2dmm/params.hpp"
#include "d2dmm/quadrature.hpp"
#include "d2dmm/stochgeom.hpp"

namespace d2dmm {

// Interference components: first letter = interferer population (cellular
// uplink field / D2D cluster members), second = victim receiver (BS / UE).
enum class LaplaceKind { cc, dc, cd, dd_intra, dd_inter };

// Cluster-interference evaluation route (dc / dd_inter):
//   exact   - member-level gain and blockage marks, cluster size summed over
//             the truncated-Poisson law; mirrors the sampled field.
//   approx  - first-order (Taylor) form; the conditioning distance smears out.
//   printed - per-(gain, mark) thinned-subprocess split as published; the
//             thinning is applied to cluster centers rather than members, so
//             it systematically deviates from the sampled field (diagnostic).
enum class LaplaceVariant { exact, approx, printed };

// Serving-branch handling where a cellular serving link enters (mode
// selection, cellular outage):
//   partitioned - serving BS is the min-path-loss choice between the nearest
//                 LOS and nearest NLOS candidates; branch masses partition.
//   printed     - the two branches are summed as published; their masses
//                 overlap, so the result can exceed 1 / fall below 0 and is
//                 clamped with a diagnostic flag (kept for comparison runs).
enum class ServingModel { partitioned, printed };

enum class Mode { cellular, d2d };
enum class Sharing { underlay, overlay };

struct AnalysisOptions {
  QuadratureSettings quad{};
  ServingModel serving_model = ServingModel::partitioned;
  LaplaceVariant cluster_variant = LaplaceVariant::exact;
  // Apply the serving-path-loss CDF retention to the cellular field seen by a
  // D2D receiver (matches the sampled field); off reproduces the bare form.
  bool cd_q_factor = true;
  // Replace the cross-mode Laplace factor with the constant 1 inside the
  // outage integrands; with beta = 1 this must reproduce the overlay result.
  bool pin_cross_mode = false;
};

struct PD2DResult {
  double value = 0.0;      // clamped to [0, 1]
  double unclamped = 0.0;  // raw integral, > 1 possible for the printed model
  bool clamped = false;
};

// Probability that a potential D2D UE selects D2D mode under bias t_d.
PD2DResult p_d2d(const NetworkParams& p, ServingModel model, const AnalysisOptions& opt = {});
inline PD2DResult p_d2d(const NetworkParams& p, const AnalysisOptions& opt = {}) {
  return p_d2d(p, opt.serving_model, opt);
}

// E[exp(-v I)] for one interference component.  w0 (the conditioning
// cluster-center distance) is required for dd_intra and ignored otherwise.
double laplace(LaplaceKind kind, double v, const NetworkParams& p, double p_d2d_value,
               std::optional<double> w0 = std::nullopt, const AnalysisOptions& opt = {});

struct OutageResult {
  double value = 0.0;      // clamped to [0, 1]
  double unclamped = 0.0;
  double los_success = 0.0;   // success mass through the LOS serving branch
  double nlos_success = 0.0;  // and through the NLOS branch
  bool clamped = false;
};

// P(SINR < gamma) for a typical link; *_g0 variants pin the serving-link
// antenna gain (used by the beam-error mixture), the plain forms use the
// perfectly aligned gain.
OutageResult outage_cellular(double gamma, const NetworkParams& p, double p_d2d_value,
                             const AnalysisOptions& opt = {});
OutageResult outage_cellular_g0(double gamma, double g0, const NetworkParams& p,
                                double p_d2d_value, const AnalysisOptions& opt = {});
OutageResult outage_d2d(double gamma, const NetworkParams& p, double p_d2d_value,
                        const AnalysisOptions& opt = {});
OutageResult outage_d2d_g0(double gamma, double g0, const NetworkParams& p, double p_d2d_value,
                           const AnalysisOptions& opt = {});
OutageResult outage(Mode mode, double gamma, const NetworkParams& p, double p_d2d_value,
                    const AnalysisOptions& opt = {});

// Outage averaged over the serving-gain mixture induced by beamsteering
// error sigma_be (params.sigma_be); equals the plain outage at sigma_be = 0.
OutageResult outage_with_beam_error(double gamma, Mode mode, const NetworkParams& p,
                                    double p_d2d_value, const AnalysisOptions& opt = {});

// Area spectral efficiency, bits/s/Hz/m^2.  Underlay evaluates outage with
// cross-mode interference on (beta = 1) and ignores delta; overlay forces
// beta = 0 and weights the two terms by the partition factor.
double ase(double gamma, const NetworkParams& p, Sharing sharing, double delta,
           double p_d2d_value, const AnalysisOptions& opt = {});

// Greedy overlay partition: all bandwidth to whichever link family carries
// the higher successful-link density; ties go to D2D.
double optimal_partition_greedy(double gamma, const NetworkParams& p, double p_d2d_value,
                                const AnalysisOptions& opt = {});

// Weighted proportional-fair overlay partition.  The optimizer itself is
// closed-form (delta* = w_d); the objective is exposed for grid verification.
struct PfObjective {
  double cell_rate_density = 0.0;  // lambda_b (1 - Pout_c) log2(1 + gamma)
  double d2d_rate_density = 0.0;
  double w_c = 0.0;
  double w_d = 0.0;
  double operator()(double delta) const;
};
PfObjective make_pf_objective(double gamma, const NetworkParams& p, double p_d2d_value,
                              const AnalysisOptions& opt = {});
double optimal_partition_proportional_fair(const NetworkParams& p);

}  // namespace d2dmm
