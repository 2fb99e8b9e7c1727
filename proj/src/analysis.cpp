#include "d2dmm/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "d2dmm/channel.hpp"

namespace d2dmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Gaussian/Rayleigh/Rician kernels are integrated out to this many standard
// deviations; the truncated mass is ~1e-31.
constexpr double kKernelReach = 12.0;

double pow_a(double x, double a) {
  if (a == 2.0) return x * x;
  if (a == 4.0) {
    const double x2 = x * x;
    return x2 * x2;
  }
  return std::pow(x, a);
}

// Gain-averaged fading MGF complement Sum_i p_i c_i / (c_i + u^alpha) with
// c_i = v P G_i; the per-interferer "damage" fraction at distance u.
struct GainFrac {
  std::array<double, 4> c{};
  std::array<double, 4> prob{};

  GainFrac(double v, double power, const GainPmf& pmf) {
    for (int i = 0; i < 4; ++i) {
      c[i] = v * power * pmf.atoms[i].gain;
      prob[i] = pmf.atoms[i].prob;
    }
  }

  double operator()(double u, double alpha) const {
    const double ua = pow_a(u, alpha);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += prob[i] * c[i] / (c[i] + ua);
    return s;
  }
};

// Blockage-state-averaged damage fraction for one link family.
double mark_avg_frac(double u, const GainFrac& g, const LosBall& ball, double a_los,
                     double a_nlos) {
  if (u <= ball.radius)
    return ball.p_los * g(u, a_los) + (1.0 - ball.p_los) * g(u, a_nlos);
  return g(u, a_nlos);
}

// Truncated-Poisson pmf over {0, ..., strict_upper - 1}.
std::vector<double> truncated_poisson_pmf(double mean, std::uint64_t strict_upper) {
  std::vector<double> pmf(strict_upper, 0.0);
  if (strict_upper == 0) return pmf;
  double term = std::exp(-mean);
  double total = 0.0;
  for (std::uint64_t k = 0; k < strict_upper; ++k) {
    pmf[k] = term;
    total += term;
    term *= mean / double(k + 1);
  }
  for (auto& x : pmf) x /= total;
  return pmf;
}

double lap_cellular_field(double v, const NetworkParams& p, LinkKind receiver, bool with_q,
                          const QuadratureSettings& quad) {
  if (v <= 0.0) return 1.0;
  const GainFrac g(v, p.p_c, interferer_gain_pmf(receiver, p));
  const LosBall& ball = p.los_ball_c;
  const auto integrand = [&](double t) {
    double s = 0.0;
    if (t <= ball.radius) {
      const double ql = with_q ? q_function(pow_a(t, p.alpha.los_c), p) : 1.0;
      const double qn = with_q ? q_function(pow_a(t, p.alpha.nlos_c), p) : 1.0;
      s = ball.p_los * ql * g(t, p.alpha.los_c) + (1.0 - ball.p_los) * qn * g(t, p.alpha.nlos_c);
    } else {
      const double qn = with_q ? q_function(pow_a(t, p.alpha.nlos_c), p) : 1.0;
      s = qn * g(t, p.alpha.nlos_c);
    }
    return s * t;
  };
  const double breaks[] = {ball.radius};
  const double mass = integrate_to_infinity(integrand, 0.0, breaks, quad);
  return std::exp(-kTwoPi * p.lambda_b * mass);
}

// Position-averaged damage of one cluster member at center distance t.
double member_damage(double t, const GainFrac& g, const NetworkParams& p,
                     const QuadratureSettings& quad) {
  const double sigma = p.sigma_d();
  const double lo = std::max(0.0, t - kKernelReach * sigma);
  const double hi = t + kKernelReach * sigma;
  const auto integrand = [&](double u) {
    return mark_avg_frac(u, g, p.los_ball_d, p.alpha.los_d, p.alpha.nlos_d) *
           rice_pdf(u, t, p.sigma_d_sq);
  };
  const double breaks[] = {p.los_ball_d.radius};
  return integrate(integrand, lo, hi, breaks, quad);
}

double lap_cluster_field(double v, const NetworkParams& p, LinkKind receiver, double p_d2d_value,
                         LaplaceVariant variant, const QuadratureSettings& quad) {
  if (v <= 0.0) return 1.0;
  const GainPmf pmf = interferer_gain_pmf(receiver, p);
  const GainFrac g(v, p.p_d, pmf);
  const QuadratureSettings inner = quad.tighter();
  const double sigma = p.sigma_d();

  if (variant == LaplaceVariant::approx) {
    // First-order form: the conditional member position integrates out.
    const auto integrand = [&](double u) {
      return mark_avg_frac(u, g, p.los_ball_d, p.alpha.los_d, p.alpha.nlos_d) * u;
    };
    const double breaks[] = {p.los_ball_d.radius};
    const double mass = integrate_to_infinity(integrand, 0.0, breaks, quad);
    return std::exp(-kTwoPi * p.lambda_c * p.n_bar * p_d2d_value * mass);
  }

  if (variant == LaplaceVariant::printed) {
    // Published split: one thinned cluster subprocess per (gain, mark) pair.
    const double mu = p.n_bar * p_d2d_value;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (LosState s : {LosState::los, LosState::nlos}) {
        const double alpha = s == LosState::los ? p.alpha.los_d : p.alpha.nlos_d;
        const double ci = v * p.p_d * pmf.atoms[i].gain;
        const auto damage = [&](double t) {
          const auto one = [&](double u) {
            const auto [pl, pn] = los_probabilities(u, LinkKind::d2d, p);
            const double mark = s == LosState::los ? pl : pn;
            return mark * (ci / (ci + pow_a(u, alpha))) * rice_pdf(u, t, p.sigma_d_sq);
          };
          const double lo = std::max(0.0, t - kKernelReach * sigma);
          const double breaks[] = {p.los_ball_d.radius};
          return integrate(one, lo, t + kKernelReach * sigma, breaks, inner);
        };
        const auto integrand = [&](double t) { return -std::expm1(-mu * damage(t)) * t; };
        const double breaks[] = {p.los_ball_d.radius + kKernelReach * sigma};
        total += pmf.atoms[i].prob * integrate_to_infinity(integrand, 0.0, breaks, quad);
      }
    }
    return std::exp(-kTwoPi * p.lambda_c * total);
  }

  // exact: E over the truncated-Poisson cluster size K and the independent
  // per-member D2D flags of prod (1 - damage) = (1 - p_d2d * S(t))^K.
  const auto cap = cluster_count_cap(p);
  const std::vector<double> pk = truncated_poisson_pmf(p.n_bar, cap);
  const auto integrand = [&](double t) {
    const double s = member_damage(t, g, p, inner);
    const double rho = 1.0 - p_d2d_value * s;
    double phi = 0.0, rk = 1.0;
    for (std::uint64_t k = 0; k < cap; ++k) {
      phi += pk[k] * rk;
      rk *= rho;
    }
    return (1.0 - phi) * t;
  };
  const double breaks[] = {p.los_ball_d.radius + kKernelReach * sigma};
  const double mass = integrate_to_infinity(integrand, 0.0, breaks, quad);
  return std::exp(-kTwoPi * p.lambda_c * mass);
}

double lap_intra(double v, double w0, const NetworkParams& p, double p_d2d_value,
                 const QuadratureSettings& quad) {
  if (v <= 0.0) return 1.0;
  const double mean = std::max(p.n_bar * p_d2d_value - 1.0, 0.0);
  if (mean == 0.0) return 1.0;
  const GainFrac g(v, p.p_d, interferer_gain_pmf(LinkKind::d2d, p));
  const double s = member_damage(w0, g, p, quad);
  // Interferer count: truncated Poisson on {0, ..., cap - 2}; the serving
  // transmitter occupies one slot.
  const auto cap = cluster_count_cap(p);
  if (cap <= 1) return 1.0;
  const std::vector<double> pk = truncated_poisson_pmf(mean, cap - 1);
  const double rho = 1.0 - s;
  double phi = 0.0, rk = 1.0;
  for (std::uint64_t k = 0; k + 1 < cap; ++k) {
    phi += pk[k] * rk;
    rk *= rho;
  }
  return phi;
}

// Unconditioned density of the nearest type-s BS distance, f_s * B_s.
double nearest_bs_mass_density(double r, LosState s, const NetworkParams& p) {
  const auto [pl, pn] = los_probabilities(r, LinkKind::cellular, p);
  const double ps = s == LosState::los ? pl : pn;
  if (ps == 0.0) return 0.0;
  return kTwoPi * p.lambda_b * r * ps *
         std::exp(-kTwoPi * p.lambda_b * psi_integral(r, p.los_ball_c, s));
}

// P(the other branch offers no better path loss than a type-s BS at r).
double serving_association_factor(double r, LosState s, const NetworkParams& p) {
  if (s == LosState::los) {
    const double rn = std::pow(r, p.alpha.los_c / p.alpha.nlos_c);
    return std::exp(-kTwoPi * p.lambda_b * psi_integral(rn, p.los_ball_c, LosState::nlos));
  }
  const double rl = std::pow(r, p.alpha.nlos_c / p.alpha.los_c);
  return std::exp(-kTwoPi * p.lambda_b * psi_integral(rl, p.los_ball_c, LosState::los));
}

OutageResult clamp_outage(double los_success, double nlos_success) {
  OutageResult r;
  r.los_success = los_success;
  r.nlos_success = nlos_success;
  r.unclamped = 1.0 - (los_success + nlos_success);
  r.value = std::clamp(r.unclamped, 0.0, 1.0);
  r.clamped = r.value != r.unclamped;
  return r;
}

}  // namespace

PD2DResult p_d2d(const NetworkParams& p, ServingModel model, const AnalysisOptions& opt) {
  if (p.t_d <= 0.0 && model == ServingModel::partitioned) return {0.0, 0.0, false};
  const double sigma = p.sigma_d();
  const double w_hi = kKernelReach * sigma;
  const QuadratureSettings inner = opt.quad.tighter();

  // Cellular-ball kinks mapped back to the D2D distance axis, per (s, s').
  std::vector<double> kinks{p.los_ball_d.radius};
  for (double a_c : {p.alpha.los_c, p.alpha.nlos_c})
    for (double a_d : {p.alpha.los_d, p.alpha.nlos_d})
      if (p.t_d > 0.0)
        kinks.push_back(std::pow(pow_a(p.los_ball_c.radius, a_c) * p.t_d, 1.0 / a_d));

  const auto survival = [&](double rd, double alpha_d) {
    // P(no cellular BS beats the biased D2D path gain), split per BS state.
    double prod = 1.0, sum = 0.0;
    for (LosState s : {LosState::los, LosState::nlos}) {
      const double a_c = s == LosState::los ? p.alpha.los_c : p.alpha.nlos_c;
      const double y = p.t_d > 0.0
                           ? std::pow(pow_a(rd, alpha_d) / p.t_d, 1.0 / a_c)
                           : std::numeric_limits<double>::infinity();
      const double e = std::exp(-kTwoPi * p.lambda_b * psi_integral(y, p.los_ball_c, s));
      prod *= e;
      sum += e;
    }
    return model == ServingModel::partitioned ? prod : sum;
  };

  const auto inner_integral = [&](double w) {
    const double r_hi = w + kKernelReach * sigma;
    const auto f = [&](double rd) {
      const auto [pl, pn] = los_probabilities(rd, LinkKind::d2d, p);
      double s = 0.0;
      if (pl > 0.0) s += pl * survival(rd, p.alpha.los_d);
      if (pn > 0.0) s += pn * survival(rd, p.alpha.nlos_d);
      return s * rice_pdf(rd, w, p.sigma_d_sq);
    };
    return integrate(f, 0.0, r_hi, kinks, inner);
  };

  const double raw = integrate(
      [&](double w) { return rayleigh_pdf(w, p.sigma_d_sq) * inner_integral(w); }, 0.0, w_hi,
      {}, opt.quad);
  PD2DResult r;
  r.unclamped = raw;
  r.value = std::clamp(raw, 0.0, 1.0);
  r.clamped = r.value != raw;
  return r;
}

double laplace(LaplaceKind kind, double v, const NetworkParams& p, double p_d2d_value,
               std::optional<double> w0, const AnalysisOptions& opt) {
  switch (kind) {
    case LaplaceKind::cc:
      return lap_cellular_field(v, p, LinkKind::cellular, true, opt.quad);
    case LaplaceKind::cd:
      return lap_cellular_field(v, p, LinkKind::d2d, opt.cd_q_factor, opt.quad);
    case LaplaceKind::dc:
      return lap_cluster_field(v, p, LinkKind::cellular, p_d2d_value, opt.cluster_variant,
                               opt.quad);
    case LaplaceKind::dd_inter:
      return lap_cluster_field(v, p, LinkKind::d2d, p_d2d_value, opt.cluster_variant, opt.quad);
    case LaplaceKind::dd_intra:
      if (!w0) throw std::invalid_argument("dd_intra requires the conditioning distance w0");
      return lap_intra(v, *w0, p, p_d2d_value, opt.quad.tighter());
  }
  return 1.0;
}

OutageResult outage_cellular_g0(double gamma, double g0, const NetworkParams& p,
                                double p_d2d_value, const AnalysisOptions& opt) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  const double beta_v = double(p.beta);
  std::array<double, 2> success{0.0, 0.0};
  int idx = 0;
  for (LosState s : {LosState::los, LosState::nlos}) {
    const double alpha = s == LosState::los ? p.alpha.los_c : p.alpha.nlos_c;
    const auto integrand = [&](double r) {
      double dens = nearest_bs_mass_density(r, s, p);
      if (dens == 0.0) return 0.0;
      if (opt.serving_model == ServingModel::partitioned)
        dens *= serving_association_factor(r, s, p);
      const double v = gamma * pow_a(r, alpha) / (p.p_c * g0);
      const double noise_term = std::exp(-v * p.noise);
      if (noise_term == 0.0) return 0.0;
      const double cross =
          opt.pin_cross_mode ? 1.0 : laplace(LaplaceKind::dc, beta_v * v, p, p_d2d_value, {}, opt);
      return noise_term * laplace(LaplaceKind::cc, v, p, p_d2d_value, {}, opt) * cross * dens;
    };
    const double breaks[] = {p.los_ball_c.radius};
    if (s == LosState::los)
      success[idx] = p.los_ball_c.p_los > 0.0
                         ? integrate(integrand, 0.0, p.los_ball_c.radius, {}, opt.quad)
                         : 0.0;
    else
      success[idx] = integrate_to_infinity(integrand, 0.0, breaks, opt.quad);
    ++idx;
  }
  return clamp_outage(success[0], success[1]);
}

OutageResult outage_cellular(double gamma, const NetworkParams& p, double p_d2d_value,
                             const AnalysisOptions& opt) {
  return outage_cellular_g0(gamma, serving_gain(LinkKind::cellular, p), p, p_d2d_value, opt);
}

OutageResult outage_d2d_g0(double gamma, double g0, const NetworkParams& p, double p_d2d_value,
                           const AnalysisOptions& opt) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  const double beta_v = double(p.beta);
  const double sigma = p.sigma_d();
  const double w_hi = kKernelReach * sigma;
  const double r_hi = w_hi + kKernelReach * sigma;
  const QuadratureSettings inner = opt.quad.tighter();
  std::array<double, 2> success{0.0, 0.0};
  int idx = 0;
  for (LosState s : {LosState::los, LosState::nlos}) {
    const double alpha = s == LosState::los ? p.alpha.los_d : p.alpha.nlos_d;
    const auto integrand = [&](double r) {
      const auto [pl, pn] = los_probabilities(r, LinkKind::d2d, p);
      const double ps = s == LosState::los ? pl : pn;
      if (ps == 0.0) return 0.0;
      const double v = gamma * pow_a(r, alpha) / (p.p_d * g0);
      const double noise_term = std::exp(-v * p.noise);
      if (noise_term == 0.0) return 0.0;
      // Inter-cluster and cross-mode factors depend on r only; the
      // intra-cluster factor shares the conditioning distance with the
      // serving-link density, so it stays inside the w-integral.
      const double cross =
          opt.pin_cross_mode ? 1.0 : laplace(LaplaceKind::cd, beta_v * v, p, p_d2d_value, {}, opt);
      const double outer =
          noise_term * laplace(LaplaceKind::dd_inter, v, p, p_d2d_value, {}, opt) * cross;
      const auto w_int = [&](double w) {
        return lap_intra(v, w, p, p_d2d_value, inner) * rice_pdf(r, w, p.sigma_d_sq) *
               rayleigh_pdf(w, p.sigma_d_sq);
      };
      return ps * outer * integrate(w_int, 0.0, w_hi, {}, inner);
    };
    const double breaks[] = {p.los_ball_d.radius};
    success[idx] = integrate(integrand, 0.0, r_hi, breaks, opt.quad);
    ++idx;
  }
  return clamp_outage(success[0], success[1]);
}

OutageResult outage_d2d(double gamma, const NetworkParams& p, double p_d2d_value,
                        const AnalysisOptions& opt) {
  return outage_d2d_g0(gamma, serving_gain(LinkKind::d2d, p), p, p_d2d_value, opt);
}

OutageResult outage(Mode mode, double gamma, const NetworkParams& p, double p_d2d_value,
                    const AnalysisOptions& opt) {
  return mode == Mode::cellular ? outage_cellular(gamma, p, p_d2d_value, opt)
                                : outage_d2d(gamma, p, p_d2d_value, opt);
}

OutageResult outage_with_beam_error(double gamma, Mode mode, const NetworkParams& p,
                                    double p_d2d_value, const AnalysisOptions& opt) {
  const LinkKind kind = mode == Mode::cellular ? LinkKind::cellular : LinkKind::d2d;
  const GainPmf pmf = serving_gain_pmf(kind, p.sigma_be, p);
  OutageResult mix;
  for (const GainAtom& atom : pmf.atoms) {
    if (atom.prob <= 0.0) continue;
    const OutageResult one = mode == Mode::cellular
                                 ? outage_cellular_g0(gamma, atom.gain, p, p_d2d_value, opt)
                                 : outage_d2d_g0(gamma, atom.gain, p, p_d2d_value, opt);
    mix.value += atom.prob * one.value;
    mix.unclamped += atom.prob * one.unclamped;
    mix.los_success += atom.prob * one.los_success;
    mix.nlos_success += atom.prob * one.nlos_success;
    mix.clamped = mix.clamped || one.clamped;
  }
  return mix;
}

double ase(double gamma, const NetworkParams& p, Sharing sharing, double delta,
           double p_d2d_value, const AnalysisOptions& opt) {
  NetworkParams q = p;
  q.beta = sharing == Sharing::underlay ? 1 : 0;
  const double pc = outage_cellular(gamma, q, p_d2d_value, opt).value;
  const double pd = outage_d2d(gamma, q, p_d2d_value, opt).value;
  const double d2d_links = p.n_bar * p_d2d_value * p.lambda_c;
  const double rate = std::log2(1.0 + gamma);
  if (sharing == Sharing::underlay)
    return (p.lambda_b * (1.0 - pc) + d2d_links * (1.0 - pd)) * rate;
  return ((1.0 - delta) * p.lambda_b * (1.0 - pc) + delta * d2d_links * (1.0 - pd)) * rate;
}

double optimal_partition_greedy(double gamma, const NetworkParams& p, double p_d2d_value,
                                const AnalysisOptions& opt) {
  NetworkParams q = p;
  q.beta = 0;
  const double cell = p.lambda_b * (1.0 - outage_cellular(gamma, q, p_d2d_value, opt).value);
  const double d2d =
      p.n_bar * p_d2d_value * p.lambda_c * (1.0 - outage_d2d(gamma, q, p_d2d_value, opt).value);
  return cell > d2d ? 0.0 : 1.0;
}

double PfObjective::operator()(double delta) const {
  return w_c * std::log((1.0 - delta) * cell_rate_density) +
         w_d * std::log(delta * d2d_rate_density);
}

PfObjective make_pf_objective(double gamma, const NetworkParams& p, double p_d2d_value,
                              const AnalysisOptions& opt) {
  NetworkParams q = p;
  q.beta = 0;
  PfObjective obj;
  obj.w_c = p.w_c;
  obj.w_d = p.w_d;
  const double rate = std::log2(1.0 + gamma);
  obj.cell_rate_density =
      p.lambda_b * (1.0 - outage_cellular(gamma, q, p_d2d_value, opt).value) * rate;
  obj.d2d_rate_density = p.n_bar * p_d2d_value * p.lambda_c *
                         (1.0 - outage_d2d(gamma, q, p_d2d_value, opt).value) * rate;
  if (!(obj.cell_rate_density > 0.0) || !(obj.d2d_rate_density > 0.0))
    throw std::runtime_error("proportional-fair objective degenerate: a rate density is zero");
  return obj;
}

double optimal_partition_proportional_fair(const NetworkParams& p) {
  if (std::abs(p.w_c + p.w_d - 1.0) > 1e-12)
    throw std::invalid_argument("weights must satisfy w_c + w_d = 1");
  return p.w_d;
}

}  // namespace d2dmm
