#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plap/scalar_fn.hpp"

namespace plap {

enum class Finiteness { Finite, Infinite, Undecidable };

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool converged = false;
  std::vector<double> singular_endpoints_handled;
};

struct QuadTol {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_depth = 60;
};

/// Symbolic decision whether int_s^r f is finite.  Only the 0 endpoint can
/// carry a power singularity in this model; declared Opaque singular points
/// inside [s,r] make the integral Undecidable.
Finiteness finiteness(const ScalarFn& f, double s, double r);

/// Adaptive Gauss-Kronrod integration of a raw callable.  When a power
/// behaviour t^e with e in (-1,0) is known at an endpoint, the integrand is
/// regularized there by the substitution t = a + sigma^{1/(1+e)} before
/// quadrature.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadTol& tol = {},
                              std::optional<double> exponent_at_a = std::nullopt,
                              std::optional<double> exponent_at_b = std::nullopt);

/// Integration of a ScalarFn with symbolic endpoint-singularity detection.
/// Throws std::domain_error("divergent integral") when finiteness says
/// Infinite.
QuadResult integrate(const ScalarFn& f, double s, double r, const QuadTol& tol = {});

/// int_s^t v(sigma)^{-1/(p-1)} dsigma.  Closed form for power-law v,
/// quadrature otherwise.  Throws std::domain_error when the weight is not
/// admissible (divergent inner integral).
double inner_primitive(const ScalarFn& v, double p, double s, double t,
                       const QuadTol& tol = {});

}  // namespace plap
