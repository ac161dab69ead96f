#include "plap/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plap {

namespace {

// Gauss 7 / Kronrod 15 on [-1,1] (positive half, QUADPACK values).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double value;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = fc * kWg[3];
  double kron = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double fsum = f(c - x) + f(c + x);
    kron += fsum * kWgk[i];
    if (i % 2 == 1) gauss += fsum * kWg[i / 2];
  }
  gauss *= h;
  kron *= h;
  return {kron, std::abs(kron - gauss)};
}

struct Accum {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

void refine(const std::function<double(double)>& f, double a, double b, const Panel& p,
            double tol_per_len, int depth, int max_depth, Accum& acc) {
  const double local_tol = tol_per_len * (b - a);
  if (p.error <= local_tol || depth >= max_depth || !(b - a > 0)) {
    acc.value += p.value;
    acc.error += p.error;
    if (p.error > local_tol) acc.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  const Panel left = gk15(f, a, m);
  const Panel right = gk15(f, m, b);
  refine(f, a, m, left, tol_per_len, depth + 1, max_depth, acc);
  refine(f, m, b, right, tol_per_len, depth + 1, max_depth, acc);
}

QuadResult integrate_plain(const std::function<double(double)>& f, double a, double b,
                           const QuadTol& tol) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, true, {}};
    QuadResult neg = integrate_plain(f, b, a, tol);
    neg.value = -neg.value;
    return neg;
  }
  const Panel first = gk15(f, a, b);
  const double scale = std::max(std::abs(first.value), 1.0e-300);
  const double budget = std::max(tol.abs_tol, tol.rel_tol * scale);
  Accum acc;
  refine(f, a, b, first, budget / (b - a), 0, tol.max_depth, acc);
  // Re-check convergence against the final value.
  const double final_budget = std::max(tol.abs_tol, tol.rel_tol * std::abs(acc.value));
  const bool ok = acc.converged || acc.error <= final_budget;
  return {acc.value, acc.error, ok, {}};
}

bool needs_substitution(std::optional<double> e) {
  return e && *e > -1.0 && *e < 0.0;
}

}  // namespace

Finiteness finiteness(const ScalarFn& f, double s, double r) {
  if (!f.symbolic()) return Finiteness::Undecidable;
  for (double pt : f.singular_points()) {
    if (pt > s && pt < r) return Finiteness::Infinite;  // interior power singularity
  }
  if (s <= 0.0) {
    auto e = f.exponent_at_zero();
    if (!e) return Finiteness::Undecidable;
    return *e > -1.0 ? Finiteness::Finite : Finiteness::Infinite;
  }
  return Finiteness::Finite;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadTol& tol, std::optional<double> exponent_at_a,
                              std::optional<double> exponent_at_b) {
  if (a == b) return {0.0, 0.0, true, {}};
  if (needs_substitution(exponent_at_a) && needs_substitution(exponent_at_b)) {
    const double m = 0.5 * (a + b);
    QuadResult left = integrate_adaptive(f, a, m, tol, exponent_at_a, std::nullopt);
    QuadResult right = integrate_adaptive(f, m, b, tol, std::nullopt, exponent_at_b);
    QuadResult out;
    out.value = left.value + right.value;
    out.abs_error_estimate = left.abs_error_estimate + right.abs_error_estimate;
    out.converged = left.converged && right.converged;
    out.singular_endpoints_handled = {a, b};
    return out;
  }
  if (needs_substitution(exponent_at_a)) {
    // t = a + sigma^k with k = 1/(1+e): the transformed integrand is bounded.
    const double e = *exponent_at_a;
    const double k = 1.0 / (1.0 + e);
    const double upper = std::pow(b - a, 1.0 + e);
    auto g = [&f, a, k](double sigma) {
      if (sigma <= 0.0) return 0.0;
      return f(a + std::pow(sigma, k)) * k * std::pow(sigma, k - 1.0);
    };
    QuadResult out = integrate_plain(g, 0.0, upper, tol);
    out.singular_endpoints_handled = {a};
    return out;
  }
  if (needs_substitution(exponent_at_b)) {
    const double e = *exponent_at_b;
    const double k = 1.0 / (1.0 + e);
    const double upper = std::pow(b - a, 1.0 + e);
    auto g = [&f, b, k](double sigma) {
      if (sigma <= 0.0) return 0.0;
      return f(b - std::pow(sigma, k)) * k * std::pow(sigma, k - 1.0);
    };
    QuadResult out = integrate_plain(g, 0.0, upper, tol);
    out.singular_endpoints_handled = {b};
    return out;
  }
  return integrate_plain(f, a, b, tol);
}

QuadResult integrate(const ScalarFn& f, double s, double r, const QuadTol& tol) {
  if (finiteness(f, s, r) == Finiteness::Infinite)
    throw std::domain_error("divergent integral");
  std::optional<double> left_exp;
  if (s <= 0.0) left_exp = f.exponent_at_zero();
  auto eval = [&f](double t) { return f(t); };
  return integrate_adaptive(eval, s, r, tol, left_exp, std::nullopt);
}

double inner_primitive(const ScalarFn& v, double p, double s, double t,
                       const QuadTol& tol) {
  if (t < s) throw std::invalid_argument("inner_primitive: requires t >= s");
  if (t == s) return 0.0;
  if (auto pw = v.as_power()) {
    if (!(pw->coeff > 0.0))
      throw std::domain_error("assumption A3/A5 violated: weight not admissible");
    const double cg = std::pow(pw->coeff, -1.0 / (p - 1.0));
    const double eg = -pw->exponent / (p - 1.0);
    if (eg <= -1.0 && s <= 0.0)
      throw std::domain_error("assumption A3/A5 violated: weight not admissible");
    if (eg == -1.0) return cg * std::log(t / s);
    const double lo = (s <= 0.0) ? 0.0 : std::pow(s, eg + 1.0);
    return cg * (std::pow(t, eg + 1.0) - lo) / (eg + 1.0);
  }
  std::optional<double> hint;
  if (s <= 0.0) {
    if (auto e0 = v.exponent_at_zero()) {
      const double eg = -*e0 / (p - 1.0);
      if (eg <= -1.0)
        throw std::domain_error("assumption A3/A5 violated: weight not admissible");
      hint = eg;
    }
  }
  auto g = [&v, p](double sigma) { return std::pow(v(sigma), -1.0 / (p - 1.0)); };
  QuadResult q = integrate_adaptive(g, s, t, tol, hint, std::nullopt);
  if (!q.converged && !(q.abs_error_estimate < 1e-6 * std::abs(q.value)))
    throw std::domain_error("assumption A3/A5 violated: weight not admissible");
  return q.value;
}

}  // namespace plap
