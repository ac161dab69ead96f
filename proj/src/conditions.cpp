#include "plap/conditions.hpp"

#include <cmath>
#include <random>

#include "plap/opial.hpp"
#include "plap/quadrature.hpp"

namespace plap {

Outcome ConditionReport::aggregate() const {
  Outcome out = Outcome::Pass;
  for (const auto& m : members) {
    if (m.outcome == Outcome::Fail) return Outcome::Fail;
    if (m.outcome == Outcome::Undecidable) out = Outcome::Undecidable;
  }
  return out;
}

VChoice variant_v(Variant v) {
  switch (v) {
    case Variant::a_l:
    case Variant::a_r:
    case Variant::a:
      return VChoice::Delta;
    default:
      return VChoice::D;
  }
}

bool variant_includes_zero(Variant v) {
  return v == Variant::a_l || v == Variant::b_l;
}

bool variant_includes_right(Variant v) {
  return v == Variant::a_r || v == Variant::b_r;
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::a_l: return "a_l";
    case Variant::a_r: return "a_r";
    case Variant::a: return "a";
    case Variant::b_l: return "b_l";
    case Variant::b_r: return "b_r";
    default: return "b";
  }
}

const char* to_string(ConditionSet s) {
  switch (s) {
    case ConditionSet::N_nd: return "N_nd";
    case ConditionSet::N_d: return "N_d";
    case ConditionSet::S_nd: return "S_nd";
    case ConditionSet::S_d: return "S_d";
    case ConditionSet::M_nd: return "M_nd";
    default: return "M_d";
  }
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "Pass";
    case Outcome::Fail: return "Fail";
    default: return "Undecidable";
  }
}

BundleDef bundle_def(ConditionSet id) {
  switch (id) {
    case ConditionSet::N_nd: return {SignVariant::Positive, Variant::a_l};
    case ConditionSet::N_d: return {SignVariant::Positive, Variant::b_l};
    case ConditionSet::S_nd: return {SignVariant::Positive, Variant::a};
    case ConditionSet::S_d: return {SignVariant::Positive, Variant::b};
    case ConditionSet::M_nd: return {SignVariant::Negative, Variant::a_r};
    default: return {SignVariant::Negative, Variant::b_r};
  }
}

CheckResult check_A1(double p, double l, double n, double R) {
  CheckResult r{"A1"};
  if (!(p > 1.0 && std::isfinite(p))) {
    r.outcome = Outcome::Fail;
    r.note = "p must lie in (1, inf)";
    return r;
  }
  if (!(l > 0.0 && l < p)) {
    r.outcome = Outcome::Fail;
    r.note = "l must lie in (0, p)";
    return r;
  }
  if (!(n >= 1.0)) {
    r.outcome = Outcome::Fail;
    r.note = "n must lie in [1, inf)";
    return r;
  }
  if (!(R > 0.0)) {
    r.outcome = Outcome::Fail;
    r.note = "R must lie in (0, inf]";
    return r;
  }
  r.outcome = Outcome::Pass;
  return r;
}

namespace {

// Structural coefficient sign for phi given as odd powers: all-positive or
// all-negative coefficients decide the sign of tau*phi exactly.
std::optional<int> odd_power_sign(const ScalarFn& phi) {
  std::optional<int> sign;
  bool ok = phi.visit([&](const auto& node) -> bool {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, ScalarFn::OddPower>) {
      int s = node.coeff > 0 ? 1 : (node.coeff < 0 ? -1 : 0);
      if (s == 0) return true;
      if (sign && *sign != s) return false;
      sign = s;
      return true;
    } else if constexpr (std::is_same_v<T, ScalarFn::Constant>) {
      return node.value == 0.0;
    } else if constexpr (std::is_same_v<T, ScalarFn::Sum>) {
      for (const auto& t : node.terms) {
        auto sub = odd_power_sign(t);
        if (!sub) return false;
        if (*sub != 0) {
          if (sign && *sign != *sub) return false;
          sign = *sub;
        }
      }
      return true;
    } else {
      return false;
    }
  });
  if (!ok) return std::nullopt;
  return sign.value_or(0);
}

}  // namespace

CheckResult check_A2(const ScalarFn& phi, SignVariant variant) {
  CheckResult r{variant == SignVariant::Positive ? "A2(a)" : "A2(b)"};
  if (phi.symbolic() && !phi.is_odd_symbolic()) {
    r.outcome = Outcome::Fail;
    r.note = "phi is not odd";
    return r;
  }
  const int want = variant == SignVariant::Positive ? 1 : -1;
  if (auto s = odd_power_sign(phi)) {
    if (*s == want) {
      r.outcome = Outcome::Pass;
      return r;
    }
    if (*s != 0 || phi.symbolic()) {
      r.outcome = Outcome::Fail;
      r.note = "tau*phi(tau) has the wrong sign";
      return r;
    }
  }
  // Sampled sign test on 1001 points (opaque or structurally undecided).
  for (int i = 1; i <= 1001; ++i) {
    const double t = static_cast<double>(i) / 1001.0 * 2.0 - 1.0;
    if (t == 0.0) continue;
    if (std::abs(phi(t) + phi(-t)) > 1e-12 * std::max(1.0, std::abs(phi(t)))) {
      r.outcome = Outcome::Fail;
      r.note = "phi is not odd";
      r.witness = t;
      return r;
    }
    if (!(want * t * phi(t) > 0.0)) {
      r.outcome = Outcome::Fail;
      r.note = "tau*phi(tau) has the wrong sign at sampled point";
      r.witness = t;
      return r;
    }
  }
  r.outcome = Outcome::Pass;
  r.note = "sampled";
  return r;
}

namespace {

double v_coefficient(const ScalarFn::PowerLaw& a, double n, double p, VChoice which) {
  if (which == VChoice::Delta)
    return a.coeff * ((n - 1.0) - a.exponent * (1.0 - 1.0 / p));
  return a.coeff * ((n - 1.0) + a.exponent / p);
}

}  // namespace

CheckResult check_A3(const WeightSpec& w, double R, Variant variant) {
  CheckResult r{std::string("A3(") + to_string(variant) + ")"};
  auto pw = w.a.as_power();
  if (!pw) {
    if (!w.a.symbolic()) {
      r.outcome = Outcome::Undecidable;
      r.note = "opaque weight: integrability not decidable";
      return r;
    }
    r.outcome = Outcome::Undecidable;
    r.note = "non-power symbolic weight: only sampled checks available";
    return r;
  }
  const double alpha = pw->exponent;
  const bool at_zero = variant_includes_zero(variant);
  // a in W^{1,1}_loc(X): only the 0 endpoint can obstruct for powers.
  if (at_zero && alpha != 0.0 && !(alpha > 0.0)) {
    r.outcome = Outcome::Fail;
    r.note = "a not in W^{1,1}_loc near 0";
    r.witness = 0.0;
    return r;
  }
  const double cv = v_coefficient(*pw, w.n, w.p, variant_v(variant));
  if (!(cv > 0.0)) {
    r.outcome = Outcome::Fail;
    r.note = variant_v(variant) == VChoice::Delta ? "positivity: delta_a <= 0 a.e."
                                                  : "positivity: d_a <= 0 a.e.";
    return r;
  }
  if (at_zero) {
    const double ev = alpha - 1.0;  // v ~ cv tau^{alpha-1}
    if (!(ev > -1.0)) {
      r.outcome = Outcome::Fail;
      r.note = "v not locally integrable at 0";
      r.witness = 0.0;
      return r;
    }
    const double einv = -ev / (w.p - 1.0);
    if (!(einv > -1.0)) {
      r.outcome = Outcome::Fail;
      r.note = "v^{-1/(p-1)} not locally integrable at 0";
      r.witness = 0.0;
      return r;
    }
  }
  (void)R;
  r.outcome = Outcome::Pass;
  return r;
}

CheckResult check_A4(const HSpec& h, const GrowthEnvelope& env, const WeightSpec& w,
                     double R) {
  CheckResult r{"A4"};
  if (h.is_zero()) {
    r.outcome = Outcome::Pass;
    return r;
  }
  // Symbolic majorization for the sharpness product family.
  if (auto* sp = std::get_if<HSpec::SharpnessProduct>(&h.node)) {
    if (auto qp = env.q.as_power()) {
      if (sp->l == env.l && qp->exponent == sp->gamma &&
          env.theta * qp->coeff >= std::abs(sp->D) * std::pow(sp->s, sp->l)) {
        r.outcome = Outcome::Pass;
        r.note = "termwise majorization";
        return r;
      }
    }
  }
  // Sampled check on a log-uniform tau grid plus random triples.
  const double Rt = std::isfinite(R) ? R : 1e3;
  ScalarFn v = ScalarFn::constant(0.0);
  if (env.theta < 1.0) {
    auto vf = (env.v_choice == VChoice::Delta) ? delta_a_fn(w) : d_a_fn(w);
    if (!vf) {
      r.outcome = Outcome::Undecidable;
      r.note = "v term required (theta < 1) but derivative unavailable";
      return r;
    }
    v = *vf;
  }
  auto violated = [&](double tau, double l0, double l1) {
    const double lhs = h(tau, l0, l1) * l1;
    double rhs = env.theta * env.q(tau) * std::pow(std::abs(l0), env.l) *
                 std::pow(std::abs(l1), w.p - env.l);
    if (env.theta < 1.0) rhs += (1.0 - env.theta) * v(tau) * std::pow(std::abs(l1), w.p);
    return lhs > rhs * (1.0 + 1e-9) + 1e-12;
  };
  const int nt = 23, nl = 21;
  for (int i = 0; i < nt; ++i) {
    const double tau = Rt * std::pow(10.0, -6.0 + 6.0 * i / (nt - 1.0)) * 0.999;
    for (int j = 0; j < nl; ++j) {
      const double l0 = -10.0 + 20.0 * j / (nl - 1.0);
      for (int k = 0; k < nl; ++k) {
        const double l1 = -10.0 + 20.0 * k / (nl - 1.0);
        if (l1 == 0.0) continue;
        if (violated(tau, l0, l1)) {
          r.outcome = Outcome::Fail;
          r.note = "violation at (tau, l0, l1) = (" + std::to_string(tau) + ", " +
                   std::to_string(l0) + ", " + std::to_string(l1) + ")";
          r.witness = tau;
          return r;
        }
      }
    }
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> ul(-10.0, 10.0);
  std::uniform_real_distribution<double> ulog(-6.0, 0.0);
  for (int i = 0; i < 10000; ++i) {
    const double tau = Rt * std::pow(10.0, ulog(rng)) * 0.999;
    const double l0 = ul(rng);
    double l1 = ul(rng);
    if (l1 == 0.0) l1 = 0.5;
    if (violated(tau, l0, l1)) {
      r.outcome = Outcome::Fail;
      r.note = "violation at (tau, l0, l1) = (" + std::to_string(tau) + ", " +
               std::to_string(l0) + ", " + std::to_string(l1) + ")";
      r.witness = tau;
      return r;
    }
  }
  r.outcome = Outcome::Pass;
  r.note = "sampled";
  return r;
}

CheckResult check_A5(const GrowthEnvelope& env, const WeightSpec& w, double R,
                     Variant variant) {
  CheckResult r{std::string("A5(") + to_string(variant) + ")"};
  const double Rt = std::isfinite(R) ? R : 1e3;
  const double l = env.l;
  const double p = w.p;
  auto qp = env.q.as_power();
  auto ap = w.a.as_power();
  if (qp && ap) {
    const double cv = v_coefficient(*ap, w.n, w.p, variant_v(variant));
    if (!(cv > 0.0)) {
      r.outcome = Outcome::Fail;
      r.note = "v not positive";
      return r;
    }
    if (qp->coeff < 0.0) {
      r.outcome = Outcome::Fail;
      r.note = "q must be nonnegative";
      return r;
    }
    const double beta = ap->exponent - 1.0;
    if (variant_includes_right(variant)) {
      PowerK k = power_family_K(p, l, qp->coeff, qp->exponent, cv, beta, Rt);
      if (!k.finite) {
        r.outcome = Outcome::Fail;
        r.note = "K(0,R) infinite";
        return r;
      }
      if (k.value > 1.0 + 1e-9) {
        r.outcome = Outcome::Fail;
        r.note = "K(0,R) = " + std::to_string(k.value) + " > 1";
        return r;
      }
      r.outcome = Outcome::Pass;
      return r;
    }
    if (variant_includes_zero(variant)) {
      PowerK k = power_family_K(p, l, qp->coeff, qp->exponent, cv, beta, Rt / 2.0);
      if (!k.finite) {
        r.outcome = Outcome::Fail;
        r.note = "K(0,r) infinite";
        return r;
      }
      r.outcome = Outcome::Pass;
      return r;
    }
    // Interior variants: power integrands have no interior singularity.
    r.outcome = Outcome::Pass;
    return r;
  }
  // Numeric fallback.
  auto vf = (variant_v(variant) == VChoice::Delta) ? delta_a_fn(w) : d_a_fn(w);
  if (!vf) {
    r.outcome = Outcome::Undecidable;
    r.note = "derivative unavailable for opaque weight";
    return r;
  }
  try {
    const double s0 = variant_includes_zero(variant) || variant_includes_right(variant)
                          ? 0.0
                          : Rt * 1e-3;
    const double y0 = variant_includes_right(variant) ? Rt : Rt * 0.999;
    OpialSetup setup(l, p - l, env.q, *vf, -1e300, 1e300);
    const double K = opial_constant(setup, s0, y0);
    if (std::isinf(K)) {
      r.outcome = Outcome::Fail;
      r.note = "K infinite";
      return r;
    }
    if (variant_includes_right(variant) && K > 1.0 + 1e-9) {
      r.outcome = Outcome::Fail;
      r.note = "K(0,R) = " + std::to_string(K) + " > 1";
      return r;
    }
    r.outcome = Outcome::Pass;
    r.note = "sampled (numeric K)";
  } catch (const std::exception& e) {
    r.outcome = Outcome::Undecidable;
    r.note = e.what();
  }
  return r;
}

ConditionReport check_set(ConditionSet id, const ProblemSpec& spec) {
  const BundleDef def = bundle_def(id);
  ConditionReport report;
  report.members.push_back(
      check_A1(spec.weight.p, spec.envelope.l, spec.weight.n, spec.R));
  report.members.push_back(check_A2(spec.phi, def.phi_variant));
  report.members.push_back(check_A3(spec.weight, spec.R, def.variant));
  {
    CheckResult a4 = check_A4(spec.h, spec.envelope, spec.weight, spec.R);
    a4.condition = std::string("A4(") + to_string(def.variant) + ")";
    report.members.push_back(std::move(a4));
  }
  report.members.push_back(check_A5(spec.envelope, spec.weight, spec.R, def.variant));
  return report;
}

CheckResult gronwall_envelope_check(const WeightSpec& w, double lo, double hi,
                                    VChoice which) {
  CheckResult r{which == VChoice::Delta ? "gronwall(delta)" : "gronwall(d)"};
  if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("invalid interval");
  // Hypothesis: v > 0 a.e. on the interval.
  bool hyp = true;
  for (int i = 0; i <= 100; ++i) {
    const double t = lo + (hi - lo) * i / 100.0;
    const double v = which == VChoice::Delta ? delta_a(w, t) : d_a(w, t);
    if (!(v > 0.0)) {
      hyp = false;
      r.witness = t;
      break;
    }
  }
  const double expn = which == VChoice::Delta ? (w.n - 1.0) / (1.0 - 1.0 / w.p)
                                              : -(w.n - 1.0) * w.p;
  auto g = [&](double t) { return w.a(t) / std::pow(t, expn); };
  for (int i = 0; i < 1000; ++i) {
    const double t0 = lo + (hi - lo) * i / 1000.0;
    const double t1 = lo + (hi - lo) * (i + 1) / 1000.0;
    if (!(g(t1) < g(t0) * (1.0 - 1e-12))) {
      r.outcome = Outcome::Fail;
      r.witness = t1;
      r.note = hyp ? "envelope not strictly decreasing (hypothesis v > 0 holds but "
                     "envelope is for the stated direction)"
                   : "hypothesis v > 0 fails on the interval";
      return r;
    }
  }
  if (!hyp) {
    r.outcome = Outcome::Fail;
    r.note = "hypothesis v > 0 fails on the interval";
    return r;
  }
  r.outcome = Outcome::Pass;
  return r;
}

}  // namespace plap
