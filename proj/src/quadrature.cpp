#include "d2dmm/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace d2dmm {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double panel(const Integrand& f, double a, double b, const QuadratureSettings& s) {
  if (!(b > a)) return 0.0;
  double err = 0.0, l1 = 0.0;
  double v = GK::integrate(f, a, b, unsigned(s.max_depth), s.rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw QuadratureError("quadrature produced a non-finite value");
  if (err > std::max(s.abs_tol, 100.0 * s.rel_tol * std::max(std::abs(v), l1)) && err > 1e-14)
    throw QuadratureError("quadrature failed to converge (err=" + std::to_string(err) + ")");
  return v;
}

}  // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureSettings& s) {
  return panel(f, a, b, s);
}

double integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 const QuadratureSettings& s) {
  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) total += panel(f, edges[i], edges[i + 1], s);
  return total;
}

double integrate_to_infinity(const Integrand& f, double a, std::span<const double> breakpoints,
                             const QuadratureSettings& s) {
  double hi = a;
  for (double x : breakpoints) hi = std::max(hi, x);
  hi = std::max(hi, std::max(a, 1.0));
  double total = integrate(f, a, hi, breakpoints, s);

  // Geometric tail panels; integrands are nonnegative with power-law or
  // Gaussian tails, so two consecutive negligible panels end the scan.
  int quiet = 0;
  double lo = hi;
  for (int i = 0; i < 64; ++i) {
    hi = lo * 2.0;
    const double part = panel(f, lo, hi, s);
    total += part;
    if (part <= std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
      if (++quiet >= 2) return total;
    } else {
      quiet = 0;
    }
    lo = hi;
  }
  throw QuadratureError("semi-infinite integral did not settle within 64 tail panels");
}

}  // namespace d2dmm
