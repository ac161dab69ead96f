#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "plap/core.hpp"

namespace plap {

enum class Direction { ForwardFromZero, BackwardFromR };

enum class Termination { ReachedEndpoint, BlowUp, StepUnderflow };

/// Numerically integrated radial solution on a strictly monotone grid, in
/// the state variables (u, z = Phi_p(u')).
struct Trajectory {
  std::vector<double> tau;
  std::vector<double> u;
  std::vector<double> z;
  Direction direction = Direction::ForwardFromZero;
  double epsilon = 0.0;
  double rel_tol = 0.0;
  Termination termination = Termination::ReachedEndpoint;

  std::size_t size() const { return tau.size(); }
  double du(std::size_t i, double p) const;
  double max_abs_u() const;

  /// CSV with header "tau,u,du,z" at 17 significant digits.
  void write_csv(std::ostream& os, double p) const;
};

struct ShootSpec {
  Direction direction = Direction::ForwardFromZero;
  double epsilon = 0.0;  // start offset from the singular endpoint; 0 -> 1e-6*R
  double u0 = 0.0;
  double du0 = 0.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};

struct Derivs {
  double du;
  double dz;
};

/// Right-hand side of the nondivergent equation in (u, z) variables:
///   du = Phi_p^{-1}(z),  dz = [h - phi(u)]/a - (n-1) z / tau.
Derivs rhs_nondivergent(const ProblemSpec& spec, double tau, double u, double z);

/// Divergent form: dz picks up the extra transport term a'/a * z.
Derivs rhs_divergent(const ProblemSpec& spec, double tau, double u, double z);

/// Adaptive embedded Runge-Kutta shooting toward the far endpoint.  Blow-up
/// (|u|+|z| > 1e12) and step underflow truncate the trajectory and are
/// recorded, not raised.
Trajectory solve(const ProblemSpec& spec, const ShootSpec& shoot);

/// Pointwise residual of the selected equation form for a symbolic radial
/// profile (exact derivatives).
double residual(const ProblemSpec& spec, const ScalarFn& u, double tau);

/// Residuals along a trajectory grid; z' is reconstructed from the equation
/// consistent finite differences of z.
std::vector<double> residual(const ProblemSpec& spec, const Trajectory& traj);

/// Radial reduction of a profile w(x) = u(|x|): derived one-dimensional
/// identities for the gradient and the p-Laplacian.
struct RadialReduction {
  ScalarFn u;
  ScalarFn du;
  double n;

  /// div Phi_p(grad w) at radius tau: (Phi_p(u'))' + (n-1) Phi_p(u')/tau.
  double p_laplacian(double p, double tau) const;
};
RadialReduction radial_reduce(const ScalarFn& w_profile, double n);

/// Max absolute difference between the divergent residual form and its
/// nondivergent equivalent along the trajectory grid.
double divergence_equivalence_check(const ProblemSpec& spec, const Trajectory& traj);

}  // namespace plap
