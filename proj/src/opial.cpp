#include "plap/opial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace plap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Primitive P(t) = int_s^t pweight^{-1/(l+m-1)}, closed form for power
// weights and cached quadrature otherwise.
class InnerPrimitive {
 public:
  InnerPrimitive(const ScalarFn& pweight, double lm1, double s)
      : pweight_(pweight), lm1_(lm1), s_(s) {
    if (auto pw = pweight.as_power()) {
      if (!(pw->coeff > 0.0)) throw std::domain_error("pweight must be positive");
      cg_ = std::pow(pw->coeff, -1.0 / lm1_);
      ep_ = -pw->exponent / lm1_;
      power_ = true;
    }
  }

  // Exponent of the integrand at 0 (power case).
  std::optional<double> integrand_exponent() const {
    if (power_) return ep_;
    return std::nullopt;
  }

  bool divergent_from_zero() const { return power_ && s_ <= 0.0 && ep_ <= -1.0; }

  double operator()(double t) const {
    if (t <= s_) return 0.0;
    if (power_) {
      if (ep_ == -1.0) return cg_ * std::log(t / s_);
      const double lo = (s_ <= 0.0) ? 0.0 : std::pow(s_, ep_ + 1.0);
      return cg_ * (std::pow(t, ep_ + 1.0) - lo) / (ep_ + 1.0);
    }
    // Cached accumulation: extend from the nearest computed point below t.
    auto it = cache_.upper_bound(t);
    double t0 = s_;
    double acc = 0.0;
    if (it != cache_.begin()) {
      --it;
      t0 = it->first;
      acc = it->second;
    }
    auto g = [this](double sigma) { return std::pow(pweight_(sigma), -1.0 / lm1_); };
    std::optional<double> hint;
    if (t0 <= 0.0) {
      if (auto e0 = pweight_.exponent_at_zero()) hint = -*e0 / lm1_;
    }
    acc += integrate_adaptive(g, t0, t, {}, hint, std::nullopt).value;
    cache_.emplace(t, acc);
    return acc;
  }

 private:
  const ScalarFn& pweight_;
  double lm1_;
  double s_;
  bool power_ = false;
  double cg_ = 0.0;
  double ep_ = 0.0;
  mutable std::map<double, double> cache_;
};

}  // namespace

OpialSetup::OpialSetup(double l_, double m_, ScalarFn q_, ScalarFn pweight_, double a_,
                       double b_, Pinned pinned_)
    : l(l_), m(m_), q(std::move(q_)), pweight(std::move(pweight_)), a(a_), b(b_),
      pinned(pinned_) {
  if (!(l > 0.0 && m > 0.0 && l + m > 1.0))
    throw std::invalid_argument("OpialSetup requires l, m > 0 and l + m > 1");
  if (!(a < b)) throw std::invalid_argument("OpialSetup requires a < b");
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<std::pair<double, double>> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw std::invalid_argument("PiecewiseLinearFn requires at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i].first > nodes_[i - 1].first))
      throw std::invalid_argument("PiecewiseLinearFn nodes must be strictly increasing");
  }
}

double PiecewiseLinearFn::operator()(double t) const {
  if (t <= nodes_.front().first) return nodes_.front().second;
  if (t >= nodes_.back().first) return nodes_.back().second;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double x, const auto& n) { return x < n.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

double PiecewiseLinearFn::slope(std::size_t k) const {
  return (nodes_[k + 1].second - nodes_[k].second) /
         (nodes_[k + 1].first - nodes_[k].first);
}

double opial_constant(const OpialSetup& setup, double s, double y, const QuadTol& tol) {
  if (!(s <= y)) throw std::invalid_argument("opial_constant requires s <= y");
  if (s == y) return 0.0;
  const double l = setup.l;
  const double m = setup.m;
  const double lm1 = l + m - 1.0;

  InnerPrimitive P(setup.pweight, lm1, s);
  if (P.divergent_from_zero()) return kInf;

  // Symbolic divergence decision and substitution hint at the left endpoint.
  std::optional<double> hint;
  auto qp = setup.q.as_power();
  auto pp = setup.pweight.as_power();
  if (s <= 0.0 && qp && pp) {
    const double ep = -pp->exponent / lm1;
    const double E = qp->exponent * (l + m) / l - pp->exponent * m / l + (ep + 1.0) * lm1;
    if (E <= -1.0) return kInf;
    hint = E;
  } else if (s <= 0.0) {
    auto qe = setup.q.exponent_at_zero();
    auto pe = setup.pweight.exponent_at_zero();
    if (qe && pe) {
      const double ep = -*pe / lm1;
      if (ep > -1.0) hint = *qe * (l + m) / l - *pe * m / l + (ep + 1.0) * lm1;
    }
  }

  auto outer = [&](double t) {
    const double qv = setup.q(t);
    const double pv = setup.pweight(t);
    return std::pow(qv, (l + m) / l) * std::pow(pv, -m / l) * std::pow(P(t), lm1);
  };
  QuadResult outer_q = integrate_adaptive(outer, s, y, tol, hint, std::nullopt);
  if (!outer_q.converged)
    throw std::runtime_error("opial_constant: quadrature failed to converge");
  if (outer_q.value < 0.0 && outer_q.value > -1e-14) outer_q.value = 0.0;
  return std::pow(m / (l + m), m / (l + m)) * std::pow(outer_q.value, l / (l + m));
}

PowerK power_family_K(double p, double l, double Cq, double gamma, double Cv, double beta,
                      double r) {
  if (!(p > 1.0 && l > 0.0 && l < p))
    throw std::invalid_argument("power_family_K requires p > 1 and 0 < l < p");
  if (!(Cv > 0.0)) throw std::domain_error("weight inadmissible");
  const double kappa = -beta / (p - 1.0);
  if (kappa <= -1.0) return {kInf, false};  // inner primitive diverges at 0
  const double E = gamma * p / l - beta * (p - l) / l + (kappa + 1.0) * (p - 1.0);
  if (E <= -1.0) return {kInf, false};
  const double coef = std::pow(Cq, p / l) * std::pow(Cv, -(p - l) / l) *
                      std::pow(std::pow(Cv, -1.0 / (p - 1.0)) / (kappa + 1.0), p - 1.0);
  const double L = coef * std::pow(r, E + 1.0) / (E + 1.0);
  const double K = std::pow((p - l) / p, (p - l) / p) * std::pow(L, l / p);
  return {K, true};
}

PowerClosedForm opial_constant_power_closed_form(double p, double l, double n, double alpha,
                                                 double gamma, double C, double r) {
  if (!(p > 1.0 && l > 0.0 && l < p))
    throw std::invalid_argument("requires p > 1 and 0 < l < p");
  const double c_alpha_p = (n - 1.0) - alpha * (1.0 - 1.0 / p);
  if (alpha >= p || c_alpha_p <= 0.0) throw std::domain_error("weight inadmissible");
  PowerK k = power_family_K(p, l, C, gamma, c_alpha_p, alpha - 1.0, r);
  PowerClosedForm out;
  out.value = k.value;
  out.finite = k.finite;
  out.c_alpha_p = c_alpha_p;
  return out;
}

namespace {

// int_{x0}^{x1} q(t) |u0 + s(t-x0)|^l dt by adaptive quadrature with a
// substitution hint when the piece starts at the singular origin.
double lhs_piece(const ScalarFn& q, double l, double x0, double x1, double u0,
                 double slope, bool at_origin) {
  auto f = [&](double t) {
    return q(t) * std::pow(std::abs(u0 + slope * (t - x0)), l);
  };
  std::optional<double> hint;
  if (at_origin) {
    if (auto qe = q.exponent_at_zero()) {
      double e = *qe;
      if (std::abs(u0) == 0.0) e += l;
      if (e > -1.0 && e < 0.0) hint = e;
    }
  }
  return integrate_adaptive(f, x0, x1, {}, hint, std::nullopt).value;
}

}  // namespace

OpialCheck verify_opial(const OpialSetup& setup, const PiecewiseLinearFn& u, double y) {
  const double a = setup.a;
  if (setup.pinned == Pinned::LeftZero) {
    if (std::abs(u(a)) > 1e-12)
      throw std::invalid_argument("verify_opial: u must vanish at the left endpoint");
  } else {
    if (std::abs(u(y)) > 1e-12)
      throw std::invalid_argument("verify_opial: u must vanish at y");
  }

  const double l = setup.l;
  const double m = setup.m;
  double lhs = 0.0;
  double rhs = 0.0;
  const auto& nodes = u.nodes();
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double x0 = std::max(nodes[k].first, a);
    double x1 = std::min(nodes[k + 1].first, y);
    if (!(x1 > x0)) continue;
    const double s = u.slope(k);
    const double v0 = u(x0);
    const double v1 = u(x1);
    // rhs: slope constant on the segment.
    rhs += std::pow(std::abs(s), l + m) * integrate(setup.pweight, x0, x1).value;
    if (s == 0.0 && v0 == 0.0) continue;
    // lhs: split at a sign change of u to keep |u|^l smooth per piece.
    if (v0 * v1 < 0.0) {
      const double xc = x0 + (x1 - x0) * v0 / (v0 - v1);
      lhs += std::pow(std::abs(s), m) *
             (lhs_piece(setup.q, l, x0, xc, v0, s, x0 <= 0.0) +
              lhs_piece(setup.q, l, xc, x1, 0.0, s, false));
    } else {
      lhs += std::pow(std::abs(s), m) * lhs_piece(setup.q, l, x0, x1, v0, s, x0 <= 0.0);
    }
  }
  const double K = opial_constant(setup, a, y);
  const bool holds = lhs <= K * rhs * (1.0 + 1e-7) + 1e-12;
  return {lhs, K, rhs, holds};
}

EqualityWitness equality_witness(const OpialSetup& setup, double k1, double k2) {
  auto pw = setup.pweight.as_power();
  if (!pw || !(pw->coeff > 0.0)) throw std::domain_error("witness unavailable");
  const double l = setup.l;
  const double m = setup.m;
  const double lm1 = l + m - 1.0;
  const double cg = std::pow(pw->coeff, -1.0 / lm1);
  const double ep = -pw->exponent / lm1;
  if (ep <= -1.0 && setup.a <= 0.0) throw std::domain_error("witness unavailable");

  ScalarFn v;  // v(y) = int_a^y pweight^{-1/(l+m-1)}
  double v_coeff = 0.0;
  double v_exponent = 0.0;
  if (setup.a <= 0.0) {
    v_coeff = cg / (ep + 1.0);
    v_exponent = ep + 1.0;
    v = ScalarFn::power(v_coeff, v_exponent);
  } else if (pw->exponent == 0.0) {
    v = ScalarFn::sum({ScalarFn::power(cg, 1.0), ScalarFn::constant(-cg * setup.a)});
  } else {
    throw std::domain_error("witness unavailable");
  }

  ScalarFn u = (setup.a <= 0.0)
                   ? ScalarFn::power(k2 * v_coeff, v_exponent)
                   : ScalarFn::sum({ScalarFn::power(k2 * cg, 1.0),
                                    ScalarFn::constant(-k2 * cg * setup.a)});

  // q(y) = k1 pweight^{(m-1)/(l+m-1)} v(y)^{l(1-m)/m}
  const double e1 = (m - 1.0) / lm1;
  const double e2 = l * (1.0 - m) / m;
  ScalarFn q_required;
  if (e2 == 0.0) {
    q_required = ScalarFn::power(k1 * std::pow(pw->coeff, e1), pw->exponent * e1);
  } else if (setup.a <= 0.0) {
    q_required = ScalarFn::power(
        k1 * std::pow(pw->coeff, e1) * std::pow(v_coeff, e2),
        pw->exponent * e1 + v_exponent * e2);
  } else {
    throw std::domain_error("witness unavailable");
  }
  return {u, q_required};
}

}  // namespace plap
