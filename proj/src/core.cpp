#include "plap/core.hpp"

#include <cmath>
#include <stdexcept>

#include "plap/quadrature.hpp"

namespace plap {

namespace {

void require_p(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must satisfy p > 1");
}

void validate_weight_positive(const ScalarFn& a) {
  if (auto pw = a.as_power()) {
    if (!(pw->coeff > 0.0)) throw std::invalid_argument("weight a must be > 0 a.e.");
    return;
  }
  // Non-power symbolic or opaque: sampled positivity on (0,1] scale grid.
  for (int i = 1; i <= 101; ++i) {
    const double t = static_cast<double>(i) / 101.0;
    if (!(a(t) > 0.0))
      throw std::invalid_argument("weight a must be > 0 a.e. (failed at sampled point)");
  }
}

void validate_odd(const ScalarFn& phi) {
  if (phi.symbolic()) {
    if (!phi.is_odd_symbolic())
      throw std::invalid_argument("phi must be odd");
    return;
  }
  // Opaque: symmetric grid of 101 points.
  for (int i = 1; i <= 50; ++i) {
    const double t = static_cast<double>(i) / 50.0;
    if (std::abs(phi(-t) + phi(t)) > 1e-12 * std::max(1.0, std::abs(phi(t))))
      throw std::invalid_argument("phi must be odd (failed sampled symmetry check)");
  }
  if (std::abs(phi(0.0)) > 1e-12)
    throw std::invalid_argument("phi must be odd (phi(0) != 0)");
}

}  // namespace

double phi_p(double p, double lambda) {
  require_p(p);
  if (lambda == 0.0) return 0.0;
  return std::pow(std::abs(lambda), p - 2.0) * lambda;
}

double phi_p_inverse(double p, double z) {
  require_p(p);
  if (z == 0.0) return 0.0;
  return std::pow(std::abs(z), 1.0 / (p - 1.0)) * (z > 0 ? 1.0 : -1.0);
}

WeightSpec::WeightSpec(ScalarFn a_, double n_, double p_) : a(std::move(a_)), n(n_), p(p_) {
  require_p(p);
  if (!(n >= 1.0)) throw std::invalid_argument("n must satisfy n >= 1");
  validate_weight_positive(a);
}

double delta_a(const WeightSpec& w, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("delta_a: tau must be > 0");
  const double da = w.a.derivative_at(tau);
  return (w.n - 1.0) * w.a(tau) / tau - (1.0 - 1.0 / w.p) * da;
}

double d_a(const WeightSpec& w, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("d_a: tau must be > 0");
  const double da = w.a.derivative_at(tau);
  return (w.n - 1.0) * w.a(tau) / tau + da / w.p;
}

namespace {

std::optional<ScalarFn> weight_functional(const WeightSpec& w, double deriv_coeff) {
  auto d = w.a.derivative();
  if (!d) return std::nullopt;
  auto pw = w.a.as_power();
  auto dpw = d->as_power();
  if (pw && dpw) {
    // (n-1) c t^{e-1} + deriv_coeff * c e t^{e-1}: single power law.
    const double coeff = (w.n - 1.0) * pw->coeff + deriv_coeff * pw->coeff * pw->exponent;
    return ScalarFn::power(coeff, pw->exponent - 1.0);
  }
  const WeightSpec copy = w;
  const bool is_delta = deriv_coeff < 0.0;
  return ScalarFn::opaque([copy, is_delta](double t) {
    return is_delta ? delta_a(copy, t) : d_a(copy, t);
  });
}

}  // namespace

std::optional<ScalarFn> delta_a_fn(const WeightSpec& w) {
  return weight_functional(w, -(1.0 - 1.0 / w.p));
}

std::optional<ScalarFn> d_a_fn(const WeightSpec& w) {
  return weight_functional(w, 1.0 / w.p);
}

double big_phi(const ScalarFn& phi, double t) {
  const double at = std::abs(t);
  if (at == 0.0) return 0.0;
  // Symbolic antiderivative for odd powers: c|t|^{d+1}/(d+1), termwise.
  std::function<std::optional<double>(const ScalarFn&)> symbolic =
      [&](const ScalarFn& f) -> std::optional<double> {
    return f.visit([&](const auto& node) -> std::optional<double> {
      using T = std::decay_t<decltype(node)>;
      if constexpr (std::is_same_v<T, ScalarFn::OddPower>) {
        return node.coeff * std::pow(at, node.degree + 1.0) / (node.degree + 1.0);
      } else if constexpr (std::is_same_v<T, ScalarFn::Constant>) {
        if (node.value == 0.0) return 0.0;
        return std::nullopt;
      } else if constexpr (std::is_same_v<T, ScalarFn::Sum>) {
        double acc = 0.0;
        for (const auto& term : node.terms) {
          auto v = symbolic(term);
          if (!v) return std::nullopt;
          acc += *v;
        }
        return acc;
      } else {
        return std::nullopt;
      }
    });
  };
  if (auto v = symbolic(phi)) return *v;
  QuadResult q = integrate_adaptive([&phi](double s) { return phi(s); }, 0.0, at);
  if (!q.converged && !std::isfinite(q.value))
    throw std::domain_error("non-integrable source");
  return q.value;
}

double big_phi_inverse(const ScalarFn& phi, double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("big_phi_inverse: y must be >= 0");
  if (y == 0.0) return 0.0;
  // Monotonicity precondition: tau*phi(tau) > 0, i.e. big_phi strictly
  // increasing on [0, inf).
  if (phi.symbolic()) {
    if (!phi.is_odd_symbolic()) throw std::domain_error("inverse undefined");
  }
  for (int i = 1; i <= 32; ++i) {
    const double t = std::ldexp(1.0, i - 16);  // spread over decades
    if (!(t * phi(t) >= 0.0)) throw std::domain_error("inverse undefined");
  }
  // Bracket.
  double hi = 1.0;
  double phi_hi = big_phi(phi, hi);
  int guard = 0;
  while (phi_hi < y) {
    hi *= 2.0;
    if (++guard > 600) return std::numeric_limits<double>::infinity();
    phi_hi = big_phi(phi, hi);
    if (!std::isfinite(phi_hi)) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double v = big_phi(phi, mid);
    if (v < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  // Newton polish: (Phi)' = phi.
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double ft = big_phi(phi, t) - y;
    const double dt = phi(t);
    if (dt == 0.0) break;
    const double next = t - ft / dt;
    if (next > lo && next < hi) t = next;
  }
  return t;
}

HSpec HSpec::sharpness_product(double D, double s, double gamma, double l, double p) {
  if (!(l > 0.0 && l < p))
    throw std::invalid_argument("sharpness product requires 0 < l < p");
  HSpec h;
  h.node = SharpnessProduct{D, s, gamma, l, p};
  return h;
}

HSpec HSpec::opaque(std::function<double(double, double, double)> eval) {
  HSpec h;
  h.node = OpaqueH{std::move(eval)};
  return h;
}

double HSpec::operator()(double tau, double l0, double l1) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SharpnessProduct>) {
          // D s^l tau^gamma |l0|^l |l1|^{p-l-1}
          return n.D * std::pow(n.s, n.l) * std::pow(tau, n.gamma) *
                 std::pow(std::abs(l0), n.l) *
                 std::pow(std::abs(l1), n.p - n.l - 1.0);
        } else {
          return n.eval(tau, l0, l1);
        }
      },
      node);
}

ProblemSpec::ProblemSpec(WeightSpec w, double R_, ScalarFn phi_, HSpec h_, Form form_,
                         GrowthEnvelope env)
    : weight(std::move(w)), R(R_), phi(std::move(phi_)), h(std::move(h_)), form(form_),
      envelope(std::move(env)) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  validate_odd(phi);
  if (!(envelope.theta >= 0.0 && envelope.theta <= 1.0))
    throw std::invalid_argument("theta must lie in [0,1]");
  if (!(envelope.l > 0.0 && envelope.l < weight.p))
    throw std::invalid_argument("envelope l must lie in (0,p)");
}

}  // namespace plap
