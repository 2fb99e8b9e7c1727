#pragma once

// Per-link physics shared by the analysis and the simulator: blockage state,
// power-law path loss, sectored-antenna gain distributions (with and without
// beam alignment error), and small-scale fading.

#include <array>
#include <utility>

#include "d2dmm/params.hpp"
#include "d2dmm/rng.hpp"

namespace d2dmm {

enum class LinkKind { cellular, d2d };
enum class LosState { los, nlos };

struct LinkGeometry {
  double distance = 0.0;  // m, > 0
  LosState los = LosState::los;
  LinkKind kind = LinkKind::cellular;
};

struct GainAtom {
  double gain = 0.0;
  double prob = 0.0;
};

// Four-atom effective-gain distribution, atoms ordered descending by gain.
struct GainPmf {
  std::array<GainAtom, 4> atoms{};

  double draw(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      acc += atoms[i].prob;
      if (u < acc) return atoms[i].gain;
    }
    return atoms[3].gain;
  }
};

const LosBall& los_ball(LinkKind kind, const NetworkParams& p);

// (P(LOS), P(NLOS)) at link length r; the components always sum to 1.
// r == ball radius counts as inside.
std::pair<double, double> los_probabilities(double r, LinkKind kind, const NetworkParams& p);

double pathloss_exponent(LosState s, LinkKind kind, const NetworkParams& p);

// r^(-alpha) with the exponent selected by (los, kind).
double path_loss(const LinkGeometry& g, const NetworkParams& p);

// Effective gain distribution of an interfering link whose victim receiver is
// a BS (cellular kind) or a UE (d2d kind); interferer beams point uniformly.
GainPmf interferer_gain_pmf(LinkKind kind, const NetworkParams& p);

// Serving-link gain under perfect alignment.
double serving_gain(LinkKind kind, const NetworkParams& p);

// Serving-link gain distribution under half-normal absolute beamsteering
// error with std sigma_be; sigma_be = 0 degenerates to the top atom.
GainPmf serving_gain_pmf(LinkKind kind, double sigma_be, const NetworkParams& p);

// Exp(1) small-scale fading.
inline double draw_fading(Rng& rng) { return rng.exponential(); }

}  // namespace d2dmm
