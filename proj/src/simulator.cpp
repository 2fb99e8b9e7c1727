#include "d2dmm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "d2dmm/channel.hpp"
#include "d2dmm/rng.hpp"
#include "d2dmm/stochgeom.hpp"

namespace d2dmm {

namespace {

double pow_neg(double x, double a) {
  if (a == 2.0) return 1.0 / (x * x);
  if (a == 4.0) {
    const double x2 = x * x;
    return 1.0 / (x2 * x2);
  }
  return std::pow(x, -a);
}

// Everything a trial function needs, precomputed once per estimate.
struct TrialContext {
  const NetworkParams& p;
  double radius;
  double eps;
  double area_bs_mean;       // lambda_b * pi * R^2
  double area_cluster_mean;  // lambda_c * pi * R^2
  GainPmf at_bs;             // interferer gain pmf seen by a BS receiver
  GainPmf at_ue;             // and by a UE receiver
  GainPmf serving_c;
  GainPmf serving_d;
  std::uint64_t cap;         // strict upper bound on active count per cluster
  double p_d2d = 0.0;
  double sigma = 0.0;

  TrialContext(const NetworkParams& params, const McSettings& mc, double p_d2d_value)
      : p(params),
        radius(mc.window_radius > 0.0 ? mc.window_radius : default_window(params).radius),
        eps(mc.min_distance_epsilon),
        area_bs_mean(params.lambda_b * std::numbers::pi * radius * radius),
        area_cluster_mean(params.lambda_c * std::numbers::pi * radius * radius),
        at_bs(interferer_gain_pmf(LinkKind::cellular, params)),
        at_ue(interferer_gain_pmf(LinkKind::d2d, params)),
        serving_c(serving_gain_pmf(LinkKind::cellular, params.sigma_be, params)),
        serving_d(serving_gain_pmf(LinkKind::d2d, params.sigma_be, params)),
        cap(cluster_count_cap(params)),
        p_d2d(p_d2d_value),
        sigma(params.sigma_d()) {}
};

double disk_radius(const TrialContext& c, Rng& rng) {
  return c.radius * std::sqrt(rng.uniform());
}

LosState draw_mark(double dist, LinkKind kind, const TrialContext& c, Rng& rng) {
  const auto [pl, pn] = los_probabilities(dist, kind, c.p);
  (void)pn;
  if (pl >= 1.0) return LosState::los;
  if (pl <= 0.0) return LosState::nlos;
  return rng.uniform() < pl ? LosState::los : LosState::nlos;
}

// Co-channel cellular uplink field at the origin (thinned by the serving
// path-loss CDF), summed interference power.
double cellular_field_interference(const TrialContext& c, LinkKind receiver, Rng& rng,
                                   std::uint64_t& degen) {
  const GainPmf& pmf = receiver == LinkKind::cellular ? c.at_bs : c.at_ue;
  const std::uint64_t n = rng.poisson(c.area_bs_mean);
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    double t = disk_radius(c, rng);
    while (t < c.eps) {
      ++degen;
      t = disk_radius(c, rng);
    }
    const LosState mark = draw_mark(t, LinkKind::cellular, c, rng);
    const double alpha = pathloss_exponent(mark, LinkKind::cellular, c.p);
    if (rng.uniform() >= q_function(std::pow(t, alpha), c.p)) continue;
    total += c.p.p_c * pmf.draw(rng) * rng.exponential() * pow_neg(t, alpha);
  }
  return total;
}

// Distance from the origin of a member scattered around a center at distance
// tc; resamples inside the epsilon guard.
double member_distance(const TrialContext& c, double tc, Rng& rng, std::uint64_t& degen) {
  for (;;) {
    const double u = std::hypot(tc + c.sigma * rng.normal(), c.sigma * rng.normal());
    if (u >= c.eps) return u;
    ++degen;
  }
}

double member_interference(const TrialContext& c, double u, const GainPmf& pmf, Rng& rng) {
  const LosState mark = draw_mark(u, LinkKind::d2d, c, rng);
  const double alpha = pathloss_exponent(mark, LinkKind::d2d, c.p);
  return c.p.p_d * pmf.draw(rng) * rng.exponential() * pow_neg(u, alpha);
}

// All clusters' D2D-mode transmitters, interference at the origin.
double cluster_field_interference(const TrialContext& c, LinkKind receiver, Rng& rng,
                                  std::uint64_t& degen) {
  const GainPmf& pmf = receiver == LinkKind::cellular ? c.at_bs : c.at_ue;
  const std::uint64_t nc = rng.poisson(c.area_cluster_mean);
  double total = 0.0;
  for (std::uint64_t i = 0; i < nc; ++i) {
    const double tc = disk_radius(c, rng);
    const std::uint64_t k = rng.truncated_poisson(c.p.n_bar, c.cap);
    for (std::uint64_t j = 0; j < k; ++j) {
      if (rng.uniform() >= c.p_d2d) continue;  // transmitter in cellular mode
      total += member_interference(c, member_distance(c, tc, rng, degen), pmf, rng);
    }
  }
  return total;
}

// Co-cluster D2D interferers of the typical receiver, serving one excluded:
// count ~ Poisson(max(n_bar P_D2D - 1, 0)) conditioned below cap - 1.
double intra_cluster_interference(const TrialContext& c, double w0, Rng& rng,
                                  std::uint64_t& degen) {
  const double mean = std::max(c.p.n_bar * c.p_d2d - 1.0, 0.0);
  if (mean == 0.0 || c.cap <= 1) return 0.0;
  const std::uint64_t k = rng.truncated_poisson(mean, c.cap - 1);
  double total = 0.0;
  for (std::uint64_t j = 0; j < k; ++j)
    total += member_interference(c, member_distance(c, w0, rng, degen), c.at_ue, rng);
  return total;
}

// Serving cellular link drawn from the BS field around the UE: distance and
// blockage state of the min-path-loss candidate.
struct ServingCell {
  double dist = 0.0;
  LosState los = LosState::nlos;
  bool found = false;
};

ServingCell draw_serving_cell(const TrialContext& c, Rng& rng, std::uint64_t& degen) {
  ServingCell best;
  double best_gain = 0.0;
  const std::uint64_t n = rng.poisson(c.area_bs_mean);
  for (std::uint64_t i = 0; i < n; ++i) {
    double t = disk_radius(c, rng);
    while (t < c.eps) {
      ++degen;
      t = disk_radius(c, rng);
    }
    const LosState mark = draw_mark(t, LinkKind::cellular, c, rng);
    const double gain = pow_neg(t, pathloss_exponent(mark, LinkKind::cellular, c.p));
    if (gain > best_gain) {
      best_gain = gain;
      best = {t, mark, true};
    }
  }
  return best;
}

// D2D pair: cluster-center distance w0 ~ Rayleigh(sigma), partner at a fresh
// Gaussian offset from the center.
struct ServingD2d {
  double w0 = 0.0;
  double dist = 0.0;
  LosState los = LosState::nlos;
};

ServingD2d draw_serving_d2d(const TrialContext& c, Rng& rng, std::uint64_t& degen) {
  ServingD2d s;
  s.w0 = rng.rayleigh(c.sigma);
  s.dist = member_distance(c, s.w0, rng, degen);
  s.los = draw_mark(s.dist, LinkKind::d2d, c, rng);
  return s;
}

template <typename TrialFn>
McEstimate run_trials(const McSettings& mc, TrialFn&& trial) {
  const std::uint64_t n = std::max<std::uint64_t>(mc.trials, 1);
  std::vector<double> vals(n);
  std::vector<std::uint32_t> degen(n);

  const auto body = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng = Rng::for_trial(mc.seed, t);
      std::uint64_t d = 0;
      vals[t] = trial(rng, d);
      degen[t] = std::uint32_t(std::min<std::uint64_t>(d, UINT32_MAX));
    }
  };

  unsigned workers = mc.worker_count > 0 ? unsigned(mc.worker_count)
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::uint64_t>(workers, n));
  if (workers <= 1) {
    body(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = n * w / workers;
      const std::uint64_t hi = n * (w + 1) / workers;
      pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Trial-ordered compensated reduction keeps the result independent of the
  // worker partition.
  double sum = 0.0, comp = 0.0;
  for (double v : vals) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  const double mean = (sum + comp) / double(n);
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  McEstimate e;
  e.mean = mean;
  e.std_error = n > 1 ? std::sqrt(ss / double(n - 1) / double(n)) : 0.0;
  e.trials = n;
  for (auto d : degen) e.degenerate += d;
  return e;
}

}  // namespace

McEstimate simulate_p_d2d(const NetworkParams& p, const McSettings& mc, ServingModel model) {
  const TrialContext ctx(p, mc, 0.0);
  return run_trials(mc, [&](Rng& rng, std::uint64_t& degen) -> double {
    const ServingD2d d2d = draw_serving_d2d(ctx, rng, degen);
    const double alpha_d = pathloss_exponent(d2d.los, LinkKind::d2d, p);
    const double d2d_gain = p.t_d * pow_neg(d2d.dist, alpha_d);

    if (model == ServingModel::partitioned) {
      const ServingCell cell = draw_serving_cell(ctx, rng, degen);
      const double cell_gain =
          cell.found ? pow_neg(cell.dist, pathloss_exponent(cell.los, LinkKind::cellular, p))
                     : 0.0;
      return d2d_gain >= cell_gain ? 1.0 : 0.0;
    }

    // Printed mirror: one indicator per blockage branch against the nearest
    // BS of that state; a branch with no such BS is vacuously satisfied.
    double score = 0.0;
    const std::uint64_t n = rng.poisson(ctx.area_bs_mean);
    double nearest_los = -1.0, nearest_nlos = -1.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      double t = disk_radius(ctx, rng);
      while (t < ctx.eps) {
        ++degen;
        t = disk_radius(ctx, rng);
      }
      if (draw_mark(t, LinkKind::cellular, ctx, rng) == LosState::los) {
        if (nearest_los < 0.0 || t < nearest_los) nearest_los = t;
      } else {
        if (nearest_nlos < 0.0 || t < nearest_nlos) nearest_nlos = t;
      }
    }
    if (nearest_los < 0.0 || d2d_gain >= pow_neg(nearest_los, p.alpha.los_c)) score += 1.0;
    if (nearest_nlos < 0.0 || d2d_gain >= pow_neg(nearest_nlos, p.alpha.nlos_c)) score += 1.0;
    return score;
  });
}

McEstimate simulate_outage(Mode mode, double gamma, const NetworkParams& p, double p_d2d_value,
                           const McSettings& mc) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  const TrialContext ctx(p, mc, p_d2d_value);
  const bool underlay = p.beta != 0;

  if (mode == Mode::cellular) {
    return run_trials(mc, [&](Rng& rng, std::uint64_t& degen) -> double {
      ServingCell cell = draw_serving_cell(ctx, rng, degen);
      while (!cell.found) {  // empty window draw; astronomically rare
        ++degen;
        cell = draw_serving_cell(ctx, rng, degen);
      }
      const double g0 = ctx.serving_c.draw(rng);
      const double signal = p.p_c * g0 * rng.exponential() *
                            pow_neg(cell.dist, pathloss_exponent(cell.los, LinkKind::cellular, p));
      double interference = cellular_field_interference(ctx, LinkKind::cellular, rng, degen);
      if (underlay)
        interference += cluster_field_interference(ctx, LinkKind::cellular, rng, degen);
      return signal / (p.noise + interference) < gamma ? 1.0 : 0.0;
    });
  }

  return run_trials(mc, [&](Rng& rng, std::uint64_t& degen) -> double {
    const ServingD2d d2d = draw_serving_d2d(ctx, rng, degen);
    const double g0 = ctx.serving_d.draw(rng);
    const double signal = p.p_d * g0 * rng.exponential() *
                          pow_neg(d2d.dist, pathloss_exponent(d2d.los, LinkKind::d2d, p));
    double interference = intra_cluster_interference(ctx, d2d.w0, rng, degen) +
                          cluster_field_interference(ctx, LinkKind::d2d, rng, degen);
    if (underlay) interference += cellular_field_interference(ctx, LinkKind::d2d, rng, degen);
    return signal / (p.noise + interference) < gamma ? 1.0 : 0.0;
  });
}

McEstimate simulate_laplace(LaplaceKind kind, double v, const NetworkParams& p,
                            double p_d2d_value, std::optional<double> w0, const McSettings& mc) {
  if (kind == LaplaceKind::dd_intra && !w0)
    throw std::invalid_argument("dd_intra requires the conditioning distance w0");
  const TrialContext ctx(p, mc, p_d2d_value);
  return run_trials(mc, [&](Rng& rng, std::uint64_t& degen) -> double {
    double interference = 0.0;
    switch (kind) {
      case LaplaceKind::cc:
        interference = cellular_field_interference(ctx, LinkKind::cellular, rng, degen);
        break;
      case LaplaceKind::cd:
        interference = cellular_field_interference(ctx, LinkKind::d2d, rng, degen);
        break;
      case LaplaceKind::dc:
        interference = cluster_field_interference(ctx, LinkKind::cellular, rng, degen);
        break;
      case LaplaceKind::dd_inter:
        interference = cluster_field_interference(ctx, LinkKind::d2d, rng, degen);
        break;
      case LaplaceKind::dd_intra:
        interference = intra_cluster_interference(ctx, *w0, rng, degen);
        break;
    }
    return std::exp(-v * interference);
  });
}

McEstimate simulate_ase(double gamma, const NetworkParams& p, Sharing sharing, double delta,
                        double p_d2d_value, const McSettings& mc) {
  NetworkParams q = p;
  q.beta = sharing == Sharing::underlay ? 1 : 0;
  McSettings mc_d = mc;
  std::uint64_t s = mc.seed + 0x632be59bd9b4e019ULL;
  mc_d.seed = splitmix64(s);
  const McEstimate pc = simulate_outage(Mode::cellular, gamma, q, p_d2d_value, mc);
  const McEstimate pd = simulate_outage(Mode::d2d, gamma, q, p_d2d_value, mc_d);

  const double d2d_links = p.n_bar * p_d2d_value * p.lambda_c;
  const double rate = std::log2(1.0 + gamma);
  const double wc = (sharing == Sharing::underlay ? 1.0 : 1.0 - delta) * p.lambda_b;
  const double wd = (sharing == Sharing::underlay ? 1.0 : delta) * d2d_links;

  McEstimate e;
  e.mean = (wc * (1.0 - pc.mean) + wd * (1.0 - pd.mean)) * rate;
  e.std_error = std::hypot(wc * pc.std_error, wd * pd.std_error) * rate;
  e.trials = pc.trials + pd.trials;
  e.degenerate = pc.degenerate + pd.degenerate;
  return e;
}

}  // namespace d2dmm
