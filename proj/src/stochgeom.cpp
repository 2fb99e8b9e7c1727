#include "d2dmm/stochgeom.hpp"

#include <cmath>
#include <numbers>

namespace d2dmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Asymptotic coefficients a_k = ((2k-1)!!)^2 / (k! 8^k) for
// I0(x) ~ e^x / sqrt(2 pi x) * sum a_k x^-k.
const double* i0_asymptotic_coeffs() {
  static const auto coeffs = [] {
    std::array<double, 13> a{};
    a[0] = 1.0;
    for (int k = 1; k < 13; ++k) {
      const double odd = 2.0 * k - 1.0;
      a[k] = a[k - 1] * odd * odd / (8.0 * k);
    }
    return a;
  }();
  return coeffs.data();
}

}  // namespace

double Point2::norm() const { return std::hypot(x, y); }

Window default_window(const NetworkParams& p) {
  return Window{10.0 * std::max(p.los_ball_c.radius, p.los_ball_d.radius)};
}

std::vector<Point2> sample_ppp(double density, const Window& w, Rng& rng) {
  std::vector<Point2> pts;
  if (density <= 0.0) return pts;
  const std::uint64_t n = rng.poisson(density * std::numbers::pi * w.radius * w.radius);
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = w.radius * std::sqrt(rng.uniform());
    const double a = kTwoPi * rng.uniform();
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return pts;
}

std::vector<Point2> sample_thomas_cluster(const Point2& center, double sigma_d, int count,
                                          Rng& rng) {
  std::vector<Point2> pts;
  pts.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i)
    pts.push_back({center.x + sigma_d * rng.normal(), center.y + sigma_d * rng.normal()});
  return pts;
}

std::vector<MarkedPoint> sample_uplink_interferers(const NetworkParams& p, const Window& w,
                                                   Rng& rng) {
  std::vector<MarkedPoint> out;
  for (const Point2& pt : sample_ppp(p.lambda_b, w, rng)) {
    const double t = pt.norm();
    const auto [pl, pn] = los_probabilities(t, LinkKind::cellular, p);
    (void)pn;
    const LosState mark = rng.uniform() < pl ? LosState::los : LosState::nlos;
    const double alpha = pathloss_exponent(mark, LinkKind::cellular, p);
    if (rng.uniform() < q_function(std::pow(t, alpha), p)) out.push_back({pt, mark});
  }
  return out;
}

std::uint64_t cluster_count_cap(const NetworkParams& p) {
  // Counts must stay strictly below n_total / 2.
  const double half = p.n_total / 2.0;
  auto cap = std::uint64_t(std::ceil(half));  // strict upper bound for rejection
  return cap;
}

std::vector<ClusterRealization> sample_cluster_field(const NetworkParams& p, const Window& w,
                                                     double p_d2d, Rng& rng) {
  std::vector<ClusterRealization> field;
  const double sigma = p.sigma_d();
  for (const Point2& c : sample_ppp(p.lambda_c, w, rng)) {
    ClusterRealization cl;
    cl.center = c;
    const auto k = rng.truncated_poisson(p.n_bar, cluster_count_cap(p));
    cl.member_offsets.reserve(k);
    cl.d2d_mode.reserve(k);
    for (std::uint64_t i = 0; i < k; ++i) {
      cl.member_offsets.push_back({sigma * rng.normal(), sigma * rng.normal()});
      cl.d2d_mode.push_back(rng.uniform() < p_d2d);
    }
    field.push_back(std::move(cl));
  }
  return field;
}

double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x < 30.0) {
    // I0 power series; all terms positive, ~40 terms at the crossover.
    const double t = x * x / 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= t / (double(k) * double(k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  const double* a = i0_asymptotic_coeffs();
  const double inv = 1.0 / x;
  double poly = a[12];
  for (int k = 11; k >= 0; --k) poly = poly * inv + a[k];
  return poly / std::sqrt(kTwoPi * x);
}

double rice_pdf(double a, double b, double sigma_d_sq) {
  const double d = a - b;
  return (a / sigma_d_sq) * std::exp(-d * d / (2.0 * sigma_d_sq)) *
         bessel_i0_scaled(a * b / sigma_d_sq);
}

double rayleigh_pdf(double w, double sigma_d_sq) {
  return (w / sigma_d_sq) * std::exp(-w * w / (2.0 * sigma_d_sq));
}

double psi_integral(double r, const LosBall& ball, LosState s) {
  if (r < 0.0) return 0.0;
  const double rc = std::min(r, ball.radius);
  if (s == LosState::los) return ball.p_los * rc * rc / 2.0;
  double v = (1.0 - ball.p_los) * rc * rc / 2.0;
  if (r > ball.radius) v += (r * r - ball.radius * ball.radius) / 2.0;
  return v;
}

double coverage_mass(LosState s, const NetworkParams& p) {
  if (s == LosState::nlos) return 1.0;
  const double& pl = p.los_ball_c.p_los;
  const double& rb = p.los_ball_c.radius;
  return -std::expm1(-std::numbers::pi * p.lambda_b * pl * rb * rb);
}

double nearest_bs_pdf(double r, LosState s, const NetworkParams& p) {
  if (r < 0.0) return 0.0;
  const auto [pl, pn] = los_probabilities(r, LinkKind::cellular, p);
  const double ps = s == LosState::los ? pl : pn;
  if (ps == 0.0) return 0.0;
  const double expo = std::exp(-kTwoPi * p.lambda_b * psi_integral(r, p.los_ball_c, s));
  return kTwoPi * p.lambda_b * r * ps * expo / coverage_mass(s, p);
}

double q_function(double y, const NetworkParams& p) {
  if (!(y > 0.0)) return 0.0;
  const double rl = std::pow(y, 1.0 / p.alpha.los_c);
  const double rn = std::pow(y, 1.0 / p.alpha.nlos_c);
  const double mass = psi_integral(rl, p.los_ball_c, LosState::los) +
                      psi_integral(rn, p.los_ball_c, LosState::nlos);
  return -std::expm1(-kTwoPi * p.lambda_b * mass);
}

}  // namespace d2dmm
