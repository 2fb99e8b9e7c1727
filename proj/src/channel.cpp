#include "d2dmm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace d2dmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GainPmf make_pmf(const AntennaPattern& rx, const AntennaPattern& tx, double p_rx_main,
                 double p_tx_main) {
  GainPmf pmf;
  pmf.atoms = {{{rx.main_gain * tx.main_gain, p_rx_main * p_tx_main},
                {rx.main_gain * tx.side_gain, p_rx_main * (1.0 - p_tx_main)},
                {rx.side_gain * tx.main_gain, (1.0 - p_rx_main) * p_tx_main},
                {rx.side_gain * tx.side_gain, (1.0 - p_rx_main) * (1.0 - p_tx_main)}}};
  std::stable_sort(pmf.atoms.begin(), pmf.atoms.end(),
                   [](const GainAtom& a, const GainAtom& b) { return a.gain > b.gain; });
  return pmf;
}

const AntennaPattern& receiver_pattern(LinkKind kind, const NetworkParams& p) {
  return kind == LinkKind::cellular ? p.antenna_bs : p.antenna_ue;
}

}  // namespace

const LosBall& los_ball(LinkKind kind, const NetworkParams& p) {
  return kind == LinkKind::cellular ? p.los_ball_c : p.los_ball_d;
}

std::pair<double, double> los_probabilities(double r, LinkKind kind, const NetworkParams& p) {
  const LosBall& b = los_ball(kind, p);
  if (r <= b.radius) return {b.p_los, 1.0 - b.p_los};
  return {0.0, 1.0};
}

double pathloss_exponent(LosState s, LinkKind kind, const NetworkParams& p) {
  if (kind == LinkKind::cellular)
    return s == LosState::los ? p.alpha.los_c : p.alpha.nlos_c;
  return s == LosState::los ? p.alpha.los_d : p.alpha.nlos_d;
}

double path_loss(const LinkGeometry& g, const NetworkParams& p) {
  return std::pow(g.distance, -pathloss_exponent(g.los, g.kind, p));
}

GainPmf interferer_gain_pmf(LinkKind kind, const NetworkParams& p) {
  const AntennaPattern& rx = receiver_pattern(kind, p);
  // Interferer transmit beams and the receiver's beam toward an interferer
  // are uniform on [0, 2*pi): main-lobe hit probability = beamwidth / 2*pi.
  return make_pmf(rx, p.antenna_ue, rx.beamwidth / kTwoPi, p.antenna_ue.beamwidth / kTwoPi);
}

double serving_gain(LinkKind kind, const NetworkParams& p) {
  return receiver_pattern(kind, p).main_gain * p.antenna_ue.main_gain;
}

GainPmf serving_gain_pmf(LinkKind kind, double sigma_be, const NetworkParams& p) {
  const AntennaPattern& rx = receiver_pattern(kind, p);
  if (sigma_be <= 0.0) {
    GainPmf pmf;
    pmf.atoms = {{{rx.main_gain * p.antenna_ue.main_gain, 1.0},
                  {rx.main_gain * p.antenna_ue.side_gain, 0.0},
                  {rx.side_gain * p.antenna_ue.main_gain, 0.0},
                  {rx.side_gain * p.antenna_ue.side_gain, 0.0}}};
    std::stable_sort(pmf.atoms.begin(), pmf.atoms.end(),
                     [](const GainAtom& a, const GainAtom& b) { return a.gain > b.gain; });
    return pmf;
  }
  // |error| is half-normal; the beam stays on target when |error| < width/2.
  const auto hit = [sigma_be](double width) {
    return std::erf(width / 2.0 / (std::numbers::sqrt2 * sigma_be));
  };
  return make_pmf(rx, p.antenna_ue, hit(rx.beamwidth), hit(p.antenna_ue.beamwidth));
}

}  // namespace d2dmm
