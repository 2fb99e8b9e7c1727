#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace d2dmm {

struct QuadratureSettings {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_depth = 12;  // adaptive subdivision depth per panel

  // Error-budget split for nested integrals: inner tolerance 10x tighter.
  QuadratureSettings tighter() const {
    QuadratureSettings s = *this;
    s.rel_tol /= 10.0;
    s.abs_tol /= 10.0;
    return s;
  }
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod over [a, b].
double integrate(const Integrand& f, double a, double b, const QuadratureSettings& s = {});

// Same, with the interval split into panels at each interior breakpoint.
// Integrands here are piecewise-smooth with kinks at known radii; un-split
// panels destroy the convergence of the adaptive rule.
double integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 const QuadratureSettings& s = {});

// Integral over [a, inf) of a nonnegative integrand with a summable tail:
// panels at the breakpoints first, then geometrically growing panels until
// two consecutive panel contributions fall below tolerance.
double integrate_to_infinity(const Integrand& f, double a, std::span<const double> breakpoints,
                             const QuadratureSettings& s = {});

}  // namespace d2dmm
