#pragma once

// Point-process samplers and link-distance densities: the geometric substrate
// shared by the closed-form analysis (through the psi / coverage integrals)
// and the Monte Carlo simulator (through the samplers).

#include <vector>

#include "d2dmm/channel.hpp"
#include "d2dmm/params.hpp"
#include "d2dmm/rng.hpp"

namespace d2dmm {

// Circular simulation region centered on the typical receiver.
struct Window {
  double radius = 0.0;  // m
};

// 10x the largest LOS ball; beyond it the NLOS power-law tail contributes
// negligibly to mean interference at the supported exponents.
Window default_window(const NetworkParams& p);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const;
};

struct MarkedPoint {
  Point2 pos;
  LosState los = LosState::nlos;
};

// One cluster draw: center, the active transmitters' offsets from it, and a
// per-transmitter D2D-mode flag (false = cellular mode).
struct ClusterRealization {
  Point2 center;
  std::vector<Point2> member_offsets;
  std::vector<bool> d2d_mode;
};

// Homogeneous PPP on the window disk.
std::vector<Point2> sample_ppp(double density, const Window& w, Rng& rng);

// `count` i.i.d. points at center + N(0, sigma_d^2 I).
std::vector<Point2> sample_thomas_cluster(const Point2& center, double sigma_d, int count,
                                          Rng& rng);

// Uplink co-channel cellular interferers as seen from the origin: homogeneous
// PPP at lambda_b, LOS/NLOS mark per link, then distance-dependent retention
// with probability q_function(t^alpha_mark).  The retained intensity is
// lambda_b * p_{j,c}(t) * Q(t^alpha_{j,c}) summed over marks.
std::vector<MarkedPoint> sample_uplink_interferers(const NetworkParams& p, const Window& w,
                                                   Rng& rng);

// Cluster centers as PPP(lambda_c); per cluster the active-transmitter count
// is Poisson(n_bar) conditioned on being < n_total/2, and each active
// transmitter independently selects D2D mode with probability p_d2d.
std::vector<ClusterRealization> sample_cluster_field(const NetworkParams& p, const Window& w,
                                                     double p_d2d, Rng& rng);

// Largest active-transmitter count allowed per cluster (count < n_total/2).
std::uint64_t cluster_count_cap(const NetworkParams& p);

// exp(-x) * I0(x), full double precision: power series below x = 30,
// large-argument asymptotic expansion above.
double bessel_i0_scaled(double x);

// Rician density (a/s2) exp(-(a^2+b^2)/(2 s2)) I0(a b / s2), evaluated in
// overflow-safe scaled form; the naive I0 overflows near a*b/s2 ~ 700.
double rice_pdf(double a, double b, double sigma_d_sq);

// Rayleigh density of a cluster-center distance: (w/s2) exp(-w^2/(2 s2)).
double rayleigh_pdf(double w, double sigma_d_sq);

// psi_s(r) = integral_0^r x p_s(x) dx for the modified LOS ball; piecewise
// quadratic, closed form.
double psi_integral(double r, const LosBall& ball, LosState s);

// B_{s,c}: probability that a UE sees at least one BS of LOS state s.  The
// NLOS tail integral diverges, so the NLOS mass is exactly 1.
double coverage_mass(LosState s, const NetworkParams& p);

// f_s(r): density of the distance to the nearest BS of state s, normalized
// by coverage_mass(s).
double nearest_bs_pdf(double r, LosState s, const NetworkParams& p);

// CDF of the serving-link path loss r^alpha(r) of a cellular UE: probability
// that some BS offers path loss below y.  Shapes the uplink interferer
// density and the co-channel retention rule.
double q_function(double y, const NetworkParams& p);

}  // namespace d2dmm
