#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plap/conditions.hpp"
#include "plap/radial_ode.hpp"

namespace plap {

enum class Status { Consistent, Violated, HypothesesFail, Inconclusive };
const char* to_string(Status s);

struct VerdictWitness {
  double tau;
  double value;
  std::string what;
};

/// Outcome of instantiating one theorem on concrete data.  A Violated
/// verdict always carries at least one witness.
struct Verdict {
  std::string theorem;
  Status status = Status::Inconclusive;
  std::vector<std::string> hypotheses;
  std::vector<VerdictWitness> witnesses;
  std::map<std::string, double> numbers;
  std::string note;

  /// {theorem, status, hypotheses: [...], witnesses: [...], numbers: {...}}
  std::string json() const;
};

/// Power-family data for the region classifiers (a = tau^alpha,
/// q = C tau^gamma, optional sharpness profile data).
struct PowerParams {
  double p;
  double l;
  double alpha;
  double gamma;
  double n;
  double C = 1.0;
  std::optional<double> D;
  std::optional<double> s;
};

/// sup|u| <= Phi^{-1}((1 - 1/p) a(0) |u'(0)|^p); +inf when Phi saturates
/// below the argument.
double apriori_bound(const ProblemSpec& spec, double du0);

/// Checks max|u| along a trajectory with u(eps) ~ 0 against the a priori
/// bound.  du0 defaults to the trajectory's own initial derivative.
Verdict verify_apriori(const ProblemSpec& spec, const Trajectory& traj,
                       std::optional<double> du0 = std::nullopt);

/// Degenerate-origin alternative: u == 0 is the only candidate (h(.,0,0)
/// vanishing) or no solution exists (witness attached).  Applicable only
/// when a(0) = 0 or the declared u'(0) vanishes.
Verdict triviality_verdict(const ProblemSpec& spec, double du0 = 0.0);

/// Once u(s) = u'(s) = 0 at an interior grid point, u must vanish on [s, R).
Verdict support_propagation(const ProblemSpec& spec, const Trajectory& traj, double s,
                            double tol = 1e-8);

/// Constant sign, monotone, and critical-points-are-zeros along a trajectory
/// with u(R) = 0.
Verdict monotonicity_verdict(const Trajectory& traj, double p);

/// limsup of a|u'|^p at the origin must not vanish for nontrivial u.
Verdict vanishing_flux_verdict(const ProblemSpec& spec, const Trajectory& traj);

enum class RegionClass { NonexistenceApplies, CounterexampleExists, OutsideTheory };
const char* to_string(RegionClass c);

/// Classifies (p, l, alpha, gamma, n) against the nonexistence theorem and
/// the sharpness construction; the failing condition is named through `why`.
RegionClass power_region_classify(const PowerParams& params, std::string* why = nullptr);

struct SharpnessCounterexample {
  ScalarFn w;    // radial profile |x|^s
  HSpec h;       // D s^l tau^gamma |l0|^l |l1|^{p-l-1}
  ScalarFn phi;  // odd closed form with tau phi(tau) > 0
  double A;      // s^{p-1}(kappa - 1 + n)
  double kappa;  // (s-1)(p-1)
  double max_residual;
  bool tau_phi_positive;
};

/// Explicit nontrivial solution w = |x|^s outside the nonexistence region
/// gamma > alpha - 1 - l; rejects inadmissible (gamma, D).
SharpnessCounterexample sharpness_counterexample(double s, double p, double n,
                                                 double alpha, double l, double gamma,
                                                 double D);

/// Largest envelope coefficient X/Y admitted by the monotonicity theorem for
/// q = C tau^{alpha-1}.
double monohomo_admissible_C(double p, double l, double alpha, double n);

struct RestrictedClassExample {
  ScalarFn w;    // 1 - |x|^s on the unit ball, n = 2
  ScalarFn phi;  // phi(w) closed form (opaque evaluator)
  HSpec h;
  bool z1, z2, z3, z4;
  bool admissible;     // all of (z1)-(z4)
  bool phi_negative;   // phi < 0 sampled on (0,1)
  double G;            // alpha + p(s-1); G < 0 defeats the vanishing-flux clause
  double max_residual;
};

RestrictedClassExample restricted_class_example(double s, double p, double alpha,
                                                double l, double D, double n = 2.0);

}  // namespace plap
