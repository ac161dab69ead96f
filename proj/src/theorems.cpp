#include "plap/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace plap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Consistent: return "Consistent";
    case Status::Violated: return "Violated";
    case Status::HypothesesFail: return "HypothesesFail";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(RegionClass c) {
  switch (c) {
    case RegionClass::NonexistenceApplies: return "NonexistenceApplies";
    case RegionClass::CounterexampleExists: return "CounterexampleExists";
    case RegionClass::OutsideTheory: return "OutsideTheory";
  }
  return "?";
}

std::string Verdict::json() const {
  nlohmann::json j;
  j["theorem"] = theorem;
  j["status"] = to_string(status);
  j["hypotheses"] = hypotheses;
  auto ws = nlohmann::json::array();
  for (const auto& w : witnesses)
    ws.push_back({{"tau", w.tau}, {"value", w.value}, {"what", w.what}});
  j["witnesses"] = ws;
  nlohmann::json nums = nlohmann::json::object();
  for (const auto& [k, v] : numbers) {
    if (std::isinf(v))
      nums[k] = v > 0 ? "inf" : "-inf";
    else
      nums[k] = v;
  }
  j["numbers"] = nums;
  if (!note.empty()) j["note"] = note;
  return j.dump(2);
}

double apriori_bound(const ProblemSpec& spec, double du0) {
  const double p = spec.weight.p;
  const double a0 = spec.weight.a(0.0);
  if (!std::isfinite(a0))
    throw std::domain_error("apriori_bound: a unbounded at the origin");
  const double arg = (1.0 - 1.0 / p) * a0 * std::pow(std::abs(du0), p);
  return big_phi_inverse(spec.phi, arg);
}

Verdict verify_apriori(const ProblemSpec& spec, const Trajectory& traj,
                       std::optional<double> du0) {
  Verdict v;
  v.theorem = "prawa";
  if (traj.size() == 0) {
    v.status = Status::Inconclusive;
    v.note = "empty trajectory";
    return v;
  }
  const double p = spec.weight.p;
  const double scale = std::max(1.0, traj.max_abs_u());
  const double u_eps = traj.u.front();
  v.hypotheses.push_back("u(eps) ~ 0 at the inner endpoint");
  if (std::abs(u_eps) > 1e-6 * scale) {
    v.status = Status::HypothesesFail;
    v.note = "inner value not ~ 0";
    v.numbers["u_eps"] = u_eps;
    return v;
  }
  const double d0 = du0 ? *du0 : traj.du(0, p);
  const double bound = apriori_bound(spec, d0);
  double maxu = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (std::abs(traj.u[i]) > maxu) {
      maxu = std::abs(traj.u[i]);
      arg = i;
    }
  }
  v.numbers["bound"] = bound;
  v.numbers["max_abs_u"] = maxu;
  v.numbers["du0"] = d0;
  if (maxu <= bound * (1.0 + 1e-6) + 1e-9) {
    v.status = Status::Consistent;
  } else {
    v.status = Status::Violated;
    v.witnesses.push_back({traj.tau[arg], traj.u[arg], "max |u| exceeds a priori bound"});
  }
  return v;
}

Verdict triviality_verdict(const ProblemSpec& spec, double du0) {
  Verdict v;
  v.theorem = "prawa";
  const double a0 = spec.weight.a(0.0);
  v.numbers["a0"] = a0;
  v.numbers["du0"] = du0;
  v.hypotheses.push_back("a(0) = 0 or u'(0) = 0");
  if (a0 != 0.0 && du0 != 0.0) {
    v.status = Status::HypothesesFail;
    v.note = "degenerate-origin alternative not applicable";
    return v;
  }
  const double R = spec.effective_R();
  const double phi0 = spec.phi(0.0);
  v.numbers["phi_at_zero"] = phi0;
  for (int i = 1; i <= 1001; ++i) {
    const double tau = R * i / 1001.0;
    const double hv = spec.h(tau, 0.0, 0.0);
    if (hv != 0.0) {
      v.status = Status::Consistent;
      v.note = "no solution exists: h(.,0,0) not identically zero";
      v.witnesses.push_back({tau, hv, "h(tau,0,0) != 0"});
      v.numbers["zero_residual_at_witness"] = -hv + phi0;
      return v;
    }
  }
  if (phi0 != 0.0) {
    v.status = Status::Inconclusive;
    v.note = "phi(0) != 0: u == 0 is not a solution";
    return v;
  }
  v.status = Status::Consistent;
  v.note = "u == 0 admissible (unique candidate)";
  return v;
}

Verdict support_propagation(const ProblemSpec& spec, const Trajectory& traj, double s,
                            double tol) {
  Verdict v;
  v.theorem = "support";
  const auto set = spec.form == Form::Nondivergent ? ConditionSet::S_nd : ConditionSet::S_d;
  const auto report = check_set(set, spec);
  v.hypotheses.push_back(std::string("bundle ") + to_string(set) + ": " +
                         to_string(report.aggregate()));
  if (report.aggregate() == Outcome::Fail) {
    v.status = Status::HypothesesFail;
    v.note = "condition bundle fails";
    return v;
  }
  if (traj.size() < 2) {
    v.status = Status::Inconclusive;
    v.note = "trajectory too short";
    return v;
  }
  const double p = spec.weight.p;
  std::size_t is = 0;
  for (std::size_t i = 1; i < traj.size(); ++i)
    if (std::abs(traj.tau[i] - s) < std::abs(traj.tau[is] - s)) is = i;
  const double us = traj.u[is];
  const double dus = traj.du(is, p);
  v.numbers["s"] = traj.tau[is];
  v.numbers["u_s"] = us;
  v.numbers["du_s"] = dus;
  v.hypotheses.push_back("|u(s)| <= tol and |u'(s)| <= tol");
  if (std::abs(us) > tol || std::abs(dus) > tol) {
    v.status = Status::HypothesesFail;
    v.note = "s is not a critical zero";
    return v;
  }
  const double upper = spec.effective_R() - traj.epsilon;
  double maxu = 0.0;
  std::size_t arg = is;
  for (std::size_t i = is; i < traj.size() && traj.tau[i] <= upper; ++i) {
    if (std::abs(traj.u[i]) > maxu) {
      maxu = std::abs(traj.u[i]);
      arg = i;
    }
  }
  v.numbers["max_abs_u_after_s"] = maxu;
  if (maxu <= 10.0 * tol) {
    v.status = Status::Consistent;
  } else {
    v.status = Status::Violated;
    v.witnesses.push_back({traj.tau[arg], traj.u[arg], "u fails to vanish on [s, R)"});
  }
  return v;
}

Verdict monotonicity_verdict(const Trajectory& traj, double p) {
  Verdict v;
  v.theorem = "lewa";
  if (traj.size() < 3) {
    v.status = Status::Inconclusive;
    v.note = "trajectory too short";
    return v;
  }
  const double uR = traj.u.back();
  v.hypotheses.push_back("|u(R)| <= 1e-9");
  v.numbers["u_R"] = uR;
  if (std::abs(uR) > 1e-9) {
    v.status = Status::HypothesesFail;
    v.note = "outer value not ~ 0";
    return v;
  }
  const double scale_u = traj.max_abs_u();
  v.numbers["max_abs_u"] = scale_u;
  if (scale_u == 0.0) {
    v.status = Status::Consistent;
    v.note = "trivial trajectory";
    return v;
  }
  // (1) constant sign
  bool has_pos = false, has_neg = false;
  std::size_t ipos = 0, ineg = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.u[i] > 1e-9) { has_pos = true; ipos = i; }
    if (traj.u[i] < -1e-9) { has_neg = true; ineg = i; }
  }
  if (has_pos && has_neg) {
    v.status = Status::Violated;
    v.witnesses.push_back({traj.tau[ipos], traj.u[ipos], "sign change: positive here"});
    v.witnesses.push_back({traj.tau[ineg], traj.u[ineg], "sign change: negative here"});
    return v;
  }
  // (2) monotone
  const double dtol = 1e-9 * scale_u;
  bool inc = false, dec = false;
  std::size_t iinc = 0, idec = 0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double d = traj.u[i + 1] - traj.u[i];
    if (d > dtol) { inc = true; iinc = i; }
    if (d < -dtol) { dec = true; idec = i; }
  }
  if (inc && dec) {
    v.status = Status::Violated;
    v.witnesses.push_back({traj.tau[iinc], traj.u[iinc], "increasing here"});
    v.witnesses.push_back({traj.tau[idec], traj.u[idec], "decreasing here"});
    return v;
  }
  // (3) interior critical points are zeros
  double scale_du = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i)
    scale_du = std::max(scale_du, std::abs(traj.du(i, p)));
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double du = traj.du(i, p);
    if (std::abs(du) <= 1e-7 * scale_du && std::abs(traj.u[i]) > 1e-6 * scale_u) {
      v.status = Status::Violated;
      v.witnesses.push_back(
          {traj.tau[i], traj.u[i], "interior critical point with nonzero value"});
      return v;
    }
  }
  v.status = Status::Consistent;
  return v;
}

Verdict vanishing_flux_verdict(const ProblemSpec& spec, const Trajectory& traj) {
  Verdict v;
  v.theorem = "lewa";
  if (traj.size() == 0) {
    v.status = Status::Inconclusive;
    v.note = "empty trajectory";
    return v;
  }
  const double p = spec.weight.p;
  double max_flux = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double flux = spec.weight.a(traj.tau[i]) * std::pow(std::abs(traj.du(i, p)), p);
    max_flux = std::max(max_flux, flux);
  }
  const double flux0 =
      spec.weight.a(traj.tau.front()) * std::pow(std::abs(traj.du(0, p)), p);
  const double scale = std::max(1.0, max_flux);
  const double maxu = traj.max_abs_u();
  v.numbers["flux_at_eps"] = flux0;
  v.numbers["max_flux"] = max_flux;
  v.numbers["max_abs_u"] = maxu;
  if (flux0 < 1e-8 * scale && maxu > 1e-6) {
    v.status = Status::Violated;
    v.witnesses.push_back(
        {traj.tau.front(), flux0, "vanishing flux with nontrivial u"});
  } else {
    v.status = Status::Consistent;
  }
  return v;
}

RegionClass power_region_classify(const PowerParams& pp, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return RegionClass::OutsideTheory;
  };
  if (!(pp.p > 1.0)) return fail("p <= 1");
  if (!(pp.l > 0.0 && pp.l < pp.p)) return fail("l outside (0, p)");
  const bool alpha_ok = pp.alpha > 0.0 && pp.alpha < pp.p;
  const bool dim_ok = pp.n >= 2.0;
  const bool super_ok = pp.n > pp.alpha * (1.0 - 1.0 / pp.p) + 1.0;
  const bool gamma_low = pp.gamma > -1.0;
  const bool gamma_main = pp.gamma > pp.alpha - 1.0 - pp.l;
  if (alpha_ok && dim_ok && super_ok && gamma_low && gamma_main) {
    if (why) *why = "";
    return RegionClass::NonexistenceApplies;
  }
  if (alpha_ok && dim_ok && pp.gamma <= pp.alpha - pp.l - 1.0) {
    if (why) *why = "";
    return RegionClass::CounterexampleExists;
  }
  if (!alpha_ok) return fail("alpha outside (0, p)");
  if (!super_ok) return fail("n <= alpha(1 - 1/p) + 1");
  if (!dim_ok) return fail("n < 2");
  if (!gamma_low) return fail("gamma <= -1 with gamma > alpha - l - 1");
  return fail("gamma in the uncovered band");
}

SharpnessCounterexample sharpness_counterexample(double s, double p, double n,
                                                 double alpha, double l, double gamma,
                                                 double D) {
  if (!(s > 1.0)) throw std::invalid_argument("sharpness: s must be > 1");
  if (!(p > 1.0)) throw std::invalid_argument("sharpness: p must be > 1");
  if (!(l > 0.0 && l < p)) throw std::invalid_argument("sharpness: l outside (0, p)");
  if (!(n >= 2.0)) throw std::invalid_argument("sharpness: n must be >= 2");
  const double boundary = alpha - l - 1.0;
  if (gamma > boundary + 1e-12)
    throw std::invalid_argument("sharpness: gamma > alpha - l - 1 (nonexistence region)");
  const double kappa = (s - 1.0) * (p - 1.0);
  const double sp = std::pow(s, p - 1.0);
  const double A = sp * (kappa - 1.0 + n);
  const bool at_boundary = std::abs(gamma - boundary) < 1e-12;
  if (at_boundary ? !(D > A) : !(D >= A))
    throw std::invalid_argument(at_boundary ? "sharpness: needs D > A at gamma = alpha - l - 1"
                                            : "sharpness: needs D >= A");

  SharpnessCounterexample out{
      ScalarFn::power(1.0, s),
      HSpec::sharpness_product(D, s, gamma, l, p),
      ScalarFn::sum({ScalarFn::odd_power(-sp * A, (kappa + alpha - 1.0) / s),
                     ScalarFn::odd_power(sp * D, (kappa + gamma + l) / s)}),
      A,
      kappa,
      0.0,
      true};

  const auto red = radial_reduce(out.w, n);
  double max_res = 0.0;
  bool sign_ok = true;
  for (int k = 1; k <= 100; ++k) {
    const double tau = k / 100.0;
    const double lhs = -std::pow(tau, alpha) * red.p_laplacian(p, tau) +
                       out.h(tau, out.w(tau), std::abs(red.du(tau)));
    const double rhs =
        -A * std::pow(tau, kappa + alpha - 1.0) + D * sp * std::pow(tau, kappa + gamma + l);
    max_res = std::max(max_res, std::abs(lhs - rhs));
    if (!(tau * out.phi(tau) > 0.0)) sign_ok = false;
  }
  out.max_residual = max_res;
  out.tau_phi_positive = sign_ok;
  return out;
}

double monohomo_admissible_C(double p, double l, double alpha, double n) {
  if (!(p > 1.0) || !(l > 0.0 && l < p))
    throw std::invalid_argument("monohomo: need p > 1, 0 < l < p");
  if (!(alpha < p)) throw std::invalid_argument("monohomo: need alpha < p");
  if (!(n > (1.0 - 1.0 / p) * alpha + 1.0))
    throw std::invalid_argument("monohomo: need n > (1 - 1/p) alpha + 1");
  const double X = std::pow(p, 1.0 + (l - 1.0) / p) *
                   std::pow(p - alpha, (p - 1.0) * l / p) *
                   (n - 1.0 - alpha * (1.0 - 1.0 / p));
  const double Y = std::pow(p - 1.0, (1.0 - 1.0 / p) * (l + 1.0));
  return X / Y;
}

RestrictedClassExample restricted_class_example(double s, double p, double alpha,
                                                double l, double D, double n) {
  if (!(s > 0.0)) throw std::invalid_argument("restricted: s must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("restricted: p must be > 1");
  if (!(l > 0.0 && l < p)) throw std::invalid_argument("restricted: l outside (0, p)");
  if (n != 2.0) throw std::invalid_argument("restricted: the construction is planar (n = 2)");
  const double kappa = (s - 1.0) * (p - 1.0);
  const double sp = std::pow(s, p - 1.0);
  const double outer_e = (kappa + alpha - 1.0 - l * (s - 1.0)) / s;
  const double inner_e = l * (s - 1.0) / s;

  RestrictedClassExample out{
      ScalarFn::sum({ScalarFn::constant(1.0), ScalarFn::power(-1.0, s)}),
      ScalarFn::opaque(
          [=](double t) {
            return sp * std::pow(1.0 - t, outer_e) *
                   ((kappa + 1.0) * std::pow(1.0 - t, inner_e) + D * std::pow(t, l));
          },
          {1.0}),
      HSpec::sharpness_product(D, s, alpha - 1.0, l, p),
      s <= (p - 2.0) / (p - 1.0),
      s >= 1.0 - alpha,
      p > alpha && alpha >= 1.0 / (p - 1.0),
      alpha < p / (p - 1.0),
      false,
      false,
      alpha + p * (s - 1.0),
      0.0};
  out.admissible = out.z1 && out.z2 && out.z3 && out.z4 && D < 0.0;

  bool neg = true;
  for (int k = 1; k <= 101; ++k) {
    const double t = k / 102.0;
    if (!(out.phi(t) < 0.0)) neg = false;
  }
  out.phi_negative = neg;

  const auto red = radial_reduce(out.w, n);
  double max_res = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double tau = k / 101.0;
    const double res = -std::pow(tau, alpha) * red.p_laplacian(p, tau) +
                       out.h(tau, out.w(tau), std::abs(red.du(tau))) - out.phi(out.w(tau));
    max_res = std::max(max_res, std::abs(res));
  }
  out.max_residual = max_res;
  return out;
}

}  // namespace plap
