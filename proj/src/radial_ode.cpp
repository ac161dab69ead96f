#include "plap/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace plap {

double Trajectory::du(std::size_t i, double p) const { return phi_p_inverse(p, z[i]); }

double Trajectory::max_abs_u() const {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

void Trajectory::write_csv(std::ostream& os, double p) const {
  os << "tau,u,du,z\n";
  os.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    os << tau[i] << ',' << u[i] << ',' << du(i, p) << ',' << z[i] << '\n';
  }
}

Derivs rhs_nondivergent(const ProblemSpec& spec, double tau, double u, double z) {
  if (!(tau > 0.0)) throw std::invalid_argument("rhs: tau must be > 0");
  const double a = spec.weight.a(tau);
  if (a == 0.0) throw std::domain_error("degenerate interior coefficient a(tau) = 0");
  const double p = spec.weight.p;
  const double du = phi_p_inverse(p, z);
  const double dz =
      (spec.h(tau, u, du) - spec.phi(u)) / a - (spec.weight.n - 1.0) * z / tau;
  return {du, dz};
}

Derivs rhs_divergent(const ProblemSpec& spec, double tau, double u, double z) {
  if (!(tau > 0.0)) throw std::invalid_argument("rhs: tau must be > 0");
  const double a = spec.weight.a(tau);
  if (a == 0.0) throw std::domain_error("degenerate interior coefficient a(tau) = 0");
  auto da_fn = spec.weight.a.derivative();
  if (!spec.weight.a.symbolic() && !da_fn)
    throw std::domain_error("derivative unavailable for opaque weight");
  const double ap = spec.weight.a.derivative_at(tau);
  const double p = spec.weight.p;
  const double du = phi_p_inverse(p, z);
  const double dz = (spec.h(tau, u, du) - spec.phi(u)) / a -
                    ((spec.weight.n - 1.0) / tau + ap / a) * z;
  return {du, dz};
}

namespace {

Derivs rhs(const ProblemSpec& spec, double tau, double u, double z) {
  return spec.form == Form::Nondivergent ? rhs_nondivergent(spec, tau, u, z)
                                         : rhs_divergent(spec, tau, u, z);
}

struct State {
  double u;
  double z;
};

}  // namespace

Trajectory solve(const ProblemSpec& spec, const ShootSpec& shoot) {
  const double R = spec.effective_R();
  const double eps = shoot.epsilon > 0.0 ? shoot.epsilon : 1e-6 * R;
  if (!(eps < R / 10.0)) throw std::invalid_argument("solve: epsilon must be < R/10");

  const bool forward = shoot.direction == Direction::ForwardFromZero;
  const double t0 = forward ? eps : R;
  const double t1 = forward ? R : eps;

  Trajectory traj;
  traj.direction = shoot.direction;
  traj.epsilon = eps;
  traj.rel_tol = shoot.rel_tol;
  traj.termination = Termination::ReachedEndpoint;

  State y{shoot.u0, phi_p(spec.weight.p, shoot.du0)};
  double t = t0;
  traj.tau.push_back(t);
  traj.u.push_back(y.u);
  traj.z.push_back(y.z);

  // Dormand-Prince 5(4) coefficients.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double h = (t1 - t0) / 100.0;
  const double h_floor = 1e-14 * R;
  const int max_steps = 2000000;

  for (int step = 0; step < max_steps; ++step) {
    if ((forward && t >= t1) || (!forward && t <= t1)) break;
    if (std::abs(y.u) + std::abs(y.z) > 1e12) {
      traj.termination = Termination::BlowUp;
      break;
    }
    if (std::abs(h) < h_floor) {
      traj.termination = Termination::StepUnderflow;
      break;
    }
    // Clamp to the endpoint.
    if (forward ? (t + h > t1) : (t + h < t1)) h = t1 - t;

    bool ok = true;
    Derivs k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    State ynew{};
    double err = 0.0;
    try {
      k1 = rhs(spec, t, y.u, y.z);
      k2 = rhs(spec, t + h * a21, y.u + h * a21 * k1.du, y.z + h * a21 * k1.dz);
      k3 = rhs(spec, t + h * 0.3, y.u + h * (a31 * k1.du + a32 * k2.du),
               y.z + h * (a31 * k1.dz + a32 * k2.dz));
      k4 = rhs(spec, t + h * 0.8, y.u + h * (a41 * k1.du + a42 * k2.du + a43 * k3.du),
               y.z + h * (a41 * k1.dz + a42 * k2.dz + a43 * k3.dz));
      k5 = rhs(spec, t + h * (8.0 / 9.0),
               y.u + h * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du),
               y.z + h * (a51 * k1.dz + a52 * k2.dz + a53 * k3.dz + a54 * k4.dz));
      k6 = rhs(spec, t + h,
               y.u + h * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du +
                          a65 * k5.du),
               y.z + h * (a61 * k1.dz + a62 * k2.dz + a63 * k3.dz + a64 * k4.dz +
                          a65 * k5.dz));
      ynew.u = y.u + h * (b1 * k1.du + b3 * k3.du + b4 * k4.du + b5 * k5.du + b6 * k6.du);
      ynew.z = y.z + h * (b1 * k1.dz + b3 * k3.dz + b4 * k4.dz + b5 * k5.dz + b6 * k6.dz);
      k7 = rhs(spec, t + h, ynew.u, ynew.z);
      const double eu = h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du +
                             e6 * k6.du + e7 * k7.du);
      const double ez = h * (e1 * k1.dz + e3 * k3.dz + e4 * k4.dz + e5 * k5.dz +
                             e6 * k6.dz + e7 * k7.dz);
      const double su =
          shoot.abs_tol + shoot.rel_tol * std::max(std::abs(y.u), std::abs(ynew.u));
      const double sz =
          shoot.abs_tol + shoot.rel_tol * std::max(std::abs(y.z), std::abs(ynew.z));
      err = std::sqrt(0.5 * ((eu / su) * (eu / su) + (ez / sz) * (ez / sz)));
      if (!std::isfinite(ynew.u) || !std::isfinite(ynew.z) || !std::isfinite(err))
        ok = false;
    } catch (const std::exception&) {
      ok = false;
    }

    if (ok && err <= 1.0) {
      t += h;
      y = ynew;
      traj.tau.push_back(t);
      traj.u.push_back(y.u);
      traj.z.push_back(y.z);
      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : 0.25;
    }
  }

  if (!forward) {
    std::reverse(traj.tau.begin(), traj.tau.end());
    std::reverse(traj.u.begin(), traj.u.end());
    std::reverse(traj.z.begin(), traj.z.end());
  }
  return traj;
}

double residual(const ProblemSpec& spec, const ScalarFn& u, double tau) {
  if (!u.derivative())
    throw std::domain_error("residual: symbolic profile required");
  const double p = spec.weight.p;
  const double uv = u(tau);
  const double du = u.derivative_at(tau);
  const double ddu = u.second_derivative_at(tau);
  const double z = phi_p(p, du);
  double dz;
  if (du == 0.0) {
    dz = (p == 2.0) ? ddu : 0.0;
  } else {
    dz = (p - 1.0) * std::pow(std::abs(du), p - 2.0) * ddu;
  }
  const double a = spec.weight.a(tau);
  double res = a * dz + (spec.weight.n - 1.0) * (a / tau) * z -
               spec.h(tau, uv, du) + spec.phi(uv);
  if (spec.form == Form::Divergent) res += spec.weight.a.derivative_at(tau) * z;
  return res;
}

std::vector<double> residual(const ProblemSpec& spec, const Trajectory& traj) {
  const std::size_t n = traj.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  const double p = spec.weight.p;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = traj.tau[i] - traj.tau[i - 1];
    const double h0 = traj.tau[i + 1] - traj.tau[i];
    const double dz = (traj.z[i + 1] * h1 * h1 - traj.z[i - 1] * h0 * h0 +
                       traj.z[i] * (h0 * h0 - h1 * h1)) /
                      (h0 * h1 * (h0 + h1));
    const double tau = traj.tau[i];
    const double a = spec.weight.a(tau);
    const double du = traj.du(i, p);
    double res = a * dz + (spec.weight.n - 1.0) * (a / tau) * traj.z[i] -
                 spec.h(tau, traj.u[i], du) + spec.phi(traj.u[i]);
    if (spec.form == Form::Divergent)
      res += spec.weight.a.derivative_at(tau) * traj.z[i];
    out[i] = res;
  }
  out[0] = out[1];
  out[n - 1] = out[n - 2];
  return out;
}

double RadialReduction::p_laplacian(double p, double tau) const {
  const double dv = du(tau);
  const double ddv = u.second_derivative_at(tau);
  const double z = phi_p(p, dv);
  double dz;
  if (dv == 0.0) {
    dz = (p == 2.0) ? ddv : 0.0;
  } else {
    dz = (p - 1.0) * std::pow(std::abs(dv), p - 2.0) * ddv;
  }
  return dz + (n - 1.0) * z / tau;
}

RadialReduction radial_reduce(const ScalarFn& w_profile, double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("radial_reduce: n must be >= 2");
  auto d = w_profile.derivative();
  if (!d) throw std::domain_error("radial_reduce: symbolic profile required");
  return {w_profile, *d, n};
}

double divergence_equivalence_check(const ProblemSpec& spec, const Trajectory& traj) {
  if (spec.form != Form::Divergent)
    throw std::invalid_argument("divergence_equivalence_check requires the divergent form");
  const double p = spec.weight.p;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double tau = traj.tau[i];
    const double u = traj.u[i];
    const double z = traj.z[i];
    const double a = spec.weight.a(tau);
    const double ap = spec.weight.a.derivative_at(tau);
    const double dz = rhs_divergent(spec, tau, u, z).dz;
    const double du = traj.du(i, p);
    const double common = -spec.h(tau, u, du) + spec.phi(u);
    // (a z)' expanded by the product rule vs the transport form.
    const double div_form = ap * z + a * dz + (spec.weight.n - 1.0) * (a / tau) * z + common;
    const double nondiv_form =
        a * dz + ((spec.weight.n - 1.0) * (a / tau) + ap) * z + common;
    max_dev = std::max(max_dev, std::abs(div_form - nondiv_form));
  }
  return max_dev;
}

}  // namespace plap
