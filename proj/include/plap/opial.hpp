#pragma once

#include <utility>
#include <vector>

#include "plap/quadrature.hpp"
#include "plap/scalar_fn.hpp"

namespace plap {

enum class Pinned { LeftZero, RightZero };

/// Data defining one Beesack-Das constant K(a, y, l, m, q, pweight).
struct OpialSetup {
  double l;          // > 0
  double m;          // > 0, l + m > 1
  ScalarFn q;        // >= 0
  ScalarFn pweight;  // >= 0, pweight^{-1/(l+m-1)} integrable
  double a;
  double b;
  Pinned pinned = Pinned::LeftZero;

  OpialSetup(double l_, double m_, ScalarFn q_, ScalarFn pweight_, double a_, double b_,
             Pinned pinned_ = Pinned::LeftZero);
};

/// Absolutely continuous test function with piecewise-constant derivative.
class PiecewiseLinearFn {
 public:
  explicit PiecewiseLinearFn(std::vector<std::pair<double, double>> nodes);

  double operator()(double t) const;
  double slope(std::size_t segment) const;
  std::size_t segments() const { return nodes_.size() - 1; }
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

 private:
  std::vector<std::pair<double, double>> nodes_;
};

/// The Beesack-Das constant
///   K = (m/(l+m))^{m/(l+m)} [ int_s^y q^{(l+m)/l} pweight^{-m/l}
///         (int_s^t pweight^{-1/(l+m-1)})^{l+m-1} dt ]^{l/(l+m)}.
/// Returns +inf when an involved integral diverges (a legitimate verdict);
/// throws std::runtime_error on numerical non-convergence.
double opial_constant(const OpialSetup& setup, double s, double y,
                      const QuadTol& tol = {});

/// K for the pure power family q = Cq t^gamma, v = Cv t^beta on (0, r).
/// Finite iff the outer power exponent exceeds -1.
struct PowerK {
  double value;  // +inf when !finite
  bool finite;
};
PowerK power_family_K(double p, double l, double Cq, double gamma, double Cv, double beta,
                      double r);

/// Exact closed form of the A5 constant K(0, r, C t^gamma, delta_a) for the
/// weight a = t^alpha, where delta_a = C_{alpha,p} t^{alpha-1} with
/// C_{alpha,p} = (n-1) - alpha(1 - 1/p).  Finite iff gamma > alpha - 1 - l.
struct PowerClosedForm {
  double value;  // +inf when !finite
  bool finite;
  double c_alpha_p;
  const char* finite_condition = "gamma > alpha - 1 - l";
};
PowerClosedForm opial_constant_power_closed_form(double p, double l, double n, double alpha,
                                                 double gamma, double C, double r = 1.0);

struct OpialCheck {
  double lhs;
  double K;
  double rhs;
  bool holds;
};

/// Evaluates both sides of the inequality for a concrete piecewise-linear u
/// on [setup.a, y]; u must vanish at the pinned endpoint.
OpialCheck verify_opial(const OpialSetup& setup, const PiecewiseLinearFn& u, double y);

struct EqualityWitness {
  ScalarFn u;           // u(y) = k2 int_a^y pweight^{-1/(l+m-1)}
  ScalarFn q_required;  // the q for which equality holds
};

/// Equality-case witness of the Beesack-Das theorem; requires symbolic
/// pweight (throws std::domain_error("witness unavailable") otherwise).
EqualityWitness equality_witness(const OpialSetup& setup, double k1 = 1.0, double k2 = 1.0);

}  // namespace plap
