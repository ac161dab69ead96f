#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plap/conditions.hpp"
#include "plap/opial.hpp"
#include "plap/radial_ode.hpp"
#include "plap/theorems.hpp"

using nlohmann::json;

namespace {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_object(const json& j, const std::string& where,
                    const std::vector<std::string>& allowed,
                    const std::vector<std::string>& required) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw SchemaError(where + ": unknown key '" + key + "'");
  }
  for (const auto& r : required)
    if (!j.contains(r)) throw SchemaError(where + ": missing key '" + r + "'");
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

struct Scenario {
  plap::ProblemSpec spec;
  std::optional<plap::ShootSpec> shoot;
  plap::PowerParams powers;
};

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario parse error: ") + e.what());
  }
  require_object(j, "scenario",
                 {"p", "n", "R", "weight", "phi", "h", "form", "envelope", "shoot"},
                 {"p", "n", "R", "weight", "phi", "h", "form", "envelope"});
  const double p = num(j["p"], "p");
  const double n = num(j["n"], "n");
  const double R = num(j["R"], "R");

  const json& jw = j["weight"];
  require_object(jw, "weight", {"kind", "coeff", "exponent", "value"}, {"kind"});
  plap::ScalarFn a;
  double alpha = 0.0;
  if (jw["kind"] == "power") {
    require_object(jw, "weight", {"kind", "coeff", "exponent"}, {"coeff", "exponent"});
    alpha = num(jw["exponent"], "weight.exponent");
    a = plap::ScalarFn::power(num(jw["coeff"], "weight.coeff"), alpha);
  } else if (jw["kind"] == "constant") {
    require_object(jw, "weight", {"kind", "value"}, {"value"});
    a = plap::ScalarFn::constant(num(jw["value"], "weight.value"));
  } else {
    throw SchemaError("weight.kind: expected 'power' or 'constant'");
  }

  const json& jphi = j["phi"];
  require_object(jphi, "phi", {"kind", "coeff", "degree"}, {"kind", "coeff", "degree"});
  if (jphi["kind"] != "odd_power") throw SchemaError("phi.kind: expected 'odd_power'");
  plap::ScalarFn phi =
      plap::ScalarFn::odd_power(num(jphi["coeff"], "phi.coeff"), num(jphi["degree"], "phi.degree"));

  const json& jh = j["h"];
  require_object(jh, "h", {"kind", "D", "s", "gamma", "l"}, {"kind"});
  plap::HSpec h;
  plap::PowerParams powers{p, 1.0, alpha, 0.0, n, 1.0, std::nullopt, std::nullopt};
  if (jh["kind"] == "zero") {
    require_object(jh, "h", {"kind"}, {});
    h = plap::HSpec::zero();
  } else if (jh["kind"] == "sharpness") {
    require_object(jh, "h", {"kind", "D", "s", "gamma", "l"}, {"D", "s", "gamma", "l"});
    h = plap::HSpec::sharpness_product(num(jh["D"], "h.D"), num(jh["s"], "h.s"),
                                       num(jh["gamma"], "h.gamma"), num(jh["l"], "h.l"), p);
    powers.D = num(jh["D"], "h.D");
    powers.s = num(jh["s"], "h.s");
  } else {
    throw SchemaError("h.kind: expected 'zero' or 'sharpness'");
  }

  plap::Form form;
  if (j["form"] == "nondivergent")
    form = plap::Form::Nondivergent;
  else if (j["form"] == "divergent")
    form = plap::Form::Divergent;
  else
    throw SchemaError("form: expected 'nondivergent' or 'divergent'");

  const json& je = j["envelope"];
  require_object(je, "envelope", {"theta", "l", "q", "v"}, {"theta", "l", "q", "v"});
  require_object(je["q"], "envelope.q", {"kind", "coeff", "exponent"},
                 {"kind", "coeff", "exponent"});
  if (je["q"]["kind"] != "power") throw SchemaError("envelope.q.kind: expected 'power'");
  plap::GrowthEnvelope env;
  env.theta = num(je["theta"], "envelope.theta");
  env.l = num(je["l"], "envelope.l");
  env.q = plap::ScalarFn::power(num(je["q"]["coeff"], "envelope.q.coeff"),
                                num(je["q"]["exponent"], "envelope.q.exponent"));
  if (je["v"] == "delta")
    env.v_choice = plap::VChoice::Delta;
  else if (je["v"] == "d")
    env.v_choice = plap::VChoice::D;
  else
    throw SchemaError("envelope.v: expected 'delta' or 'd'");
  powers.l = env.l;
  powers.gamma = num(je["q"]["exponent"], "envelope.q.exponent");
  powers.C = num(je["q"]["coeff"], "envelope.q.coeff");

  std::optional<plap::ShootSpec> shoot;
  if (j.contains("shoot")) {
    const json& js = j["shoot"];
    require_object(js, "shoot", {"direction", "epsilon", "u0", "du0"}, {"direction"});
    plap::ShootSpec sh;
    if (js["direction"] == "forward")
      sh.direction = plap::Direction::ForwardFromZero;
    else if (js["direction"] == "backward")
      sh.direction = plap::Direction::BackwardFromR;
    else
      throw SchemaError("shoot.direction: expected 'forward' or 'backward'");
    if (js.contains("epsilon")) sh.epsilon = num(js["epsilon"], "shoot.epsilon");
    if (js.contains("u0")) sh.u0 = num(js["u0"], "shoot.u0");
    if (js.contains("du0")) sh.du0 = num(js["du0"], "shoot.du0");
    shoot = sh;
  }

  try {
    plap::ProblemSpec spec(plap::WeightSpec(a, n, p), R, phi, h, form, env);
    return Scenario{std::move(spec), shoot, powers};
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("scenario invalid: ") + e.what());
  }
}

json report_to_json(const plap::ConditionReport& report, plap::ConditionSet set) {
  json members = json::array();
  for (const auto& m : report.members) {
    json jm;
    jm["condition"] = m.condition;
    jm["outcome"] = plap::to_string(m.outcome);
    if (!m.note.empty()) jm["note"] = m.note;
    if (m.witness) jm["witness"] = *m.witness;
    members.push_back(jm);
  }
  return json{{"set", plap::to_string(set)},
              {"aggregate", plap::to_string(report.aggregate())},
              {"members", members}};
}

plap::ShootSpec default_shoot(const std::string& theorem) {
  plap::ShootSpec sh;
  if (theorem == "lewa") {
    sh.direction = plap::Direction::BackwardFromR;
    sh.u0 = 0.0;
    sh.du0 = -1.0;
  } else {
    sh.direction = plap::Direction::ForwardFromZero;
    sh.u0 = 0.0;
    sh.du0 = 1.0;
  }
  return sh;
}

int run_verify(const Scenario& sc, const std::string& theorem) {
  plap::Verdict v;
  if (theorem == "prawa") {
    const double a0 = sc.spec.weight.a(0.0);
    const double du0 = sc.shoot ? sc.shoot->du0 : 0.0;
    if (a0 == 0.0 || du0 == 0.0) {
      v = plap::triviality_verdict(sc.spec, du0);
    } else {
      auto traj = plap::solve(sc.spec, *sc.shoot);
      v = plap::verify_apriori(sc.spec, traj, sc.shoot->du0);
    }
  } else if (theorem == "support") {
    auto traj = plap::solve(sc.spec, sc.shoot ? *sc.shoot : default_shoot(theorem));
    std::optional<double> s;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      if (std::abs(traj.u[i]) <= 1e-8 && std::abs(traj.du(i, sc.spec.weight.p)) <= 1e-8) {
        s = traj.tau[i];
        break;
      }
    }
    if (!s) {
      v.theorem = "support";
      v.status = plap::Status::HypothesesFail;
      v.note = "no interior critical zero on the trajectory";
    } else {
      v = plap::support_propagation(sc.spec, traj, *s);
    }
  } else if (theorem == "lewa") {
    auto traj = plap::solve(sc.spec, sc.shoot ? *sc.shoot : default_shoot(theorem));
    v = plap::monotonicity_verdict(traj, sc.spec.weight.p);
    if (v.status == plap::Status::Consistent) {
      auto fv = plap::vanishing_flux_verdict(sc.spec, traj);
      v.numbers.insert(fv.numbers.begin(), fv.numbers.end());
      if (fv.status != plap::Status::Consistent) v = fv;
    }
  } else if (theorem == "twprzy") {
    std::string why;
    auto cls = plap::power_region_classify(sc.powers, &why);
    v.theorem = "twprzy";
    v.note = plap::to_string(cls);
    if (!why.empty()) v.hypotheses.push_back(why);
    v.status = cls == plap::RegionClass::OutsideTheory ? plap::Status::HypothesesFail
                                                       : plap::Status::Consistent;
    if (cls == plap::RegionClass::CounterexampleExists && sc.powers.D && sc.powers.s) {
      auto cex = plap::sharpness_counterexample(*sc.powers.s, sc.powers.p, sc.powers.n,
                                                sc.powers.alpha, sc.powers.l,
                                                sc.powers.gamma, *sc.powers.D);
      v.numbers["counterexample_residual"] = cex.max_residual;
      v.numbers["A"] = cex.A;
      if (cex.max_residual > 1e-10 || !cex.tau_phi_positive) {
        v.status = plap::Status::Violated;
        v.witnesses.push_back({0.0, cex.max_residual, "counterexample residual too large"});
      }
    }
  } else if (theorem == "monohomo") {
    v.theorem = "monohomo";
    const double cap =
        plap::monohomo_admissible_C(sc.powers.p, sc.powers.l, sc.powers.alpha, sc.powers.n);
    v.numbers["admissible_C"] = cap;
    v.numbers["C"] = sc.powers.C;
    v.status = sc.powers.C <= cap * (1.0 + 1e-12) ? plap::Status::Consistent
                                                  : plap::Status::HypothesesFail;
    if (v.status == plap::Status::HypothesesFail) v.note = "C exceeds X/Y";
  } else {
    throw SchemaError("unknown theorem: " + theorem);
  }
  std::cout << v.json() << "\n";
  switch (v.status) {
    case plap::Status::Consistent: return 0;
    case plap::Status::Violated: return 1;
    case plap::Status::HypothesesFail: return 2;
    case plap::Status::Inconclusive: return 3;
  }
  return 3;
}

struct VaryAxis {
  std::string name;
  std::vector<double> values;
};

VaryAxis parse_vary(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw SchemaError("--vary: expected name=lo:hi:step");
  VaryAxis axis;
  axis.name = arg.substr(0, eq);
  double lo, hi, step;
  char c1, c2;
  std::istringstream ss(arg.substr(eq + 1));
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
    throw SchemaError("--vary: expected name=lo:hi:step");
  for (double x = lo; x <= hi + 1e-12; x += step) axis.values.push_back(x);
  return axis;
}

int sweep_workers() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RADIAL_PLAP_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return static_cast<int>(hw);
}

int run_sweep(const Scenario& sc, const std::vector<std::string>& vary,
              const std::string& out_path) {
  std::vector<VaryAxis> axes;
  for (const auto& v : vary) axes.push_back(parse_vary(v));
  for (const auto& ax : axes)
    if (ax.name != "alpha" && ax.name != "gamma" && ax.name != "p" && ax.name != "l" &&
        ax.name != "n")
      throw SchemaError("--vary: unsupported parameter '" + ax.name + "'");

  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& ax : axes) total *= ax.values.size();

  struct Row {
    std::vector<double> coords;
    std::string cls;
    std::string why;
  };
  std::vector<Row> rows(total);

  auto classify_row = [&](std::size_t idx) {
    plap::PowerParams pp = sc.powers;
    Row row;
    std::size_t rem = idx;
    row.coords.resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      const std::size_t j = rem % axes[k].values.size();
      rem /= axes[k].values.size();
      row.coords[k] = axes[k].values[j];
    }
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const double x = row.coords[k];
      if (axes[k].name == "alpha") pp.alpha = x;
      else if (axes[k].name == "gamma") pp.gamma = x;
      else if (axes[k].name == "p") pp.p = x;
      else if (axes[k].name == "l") pp.l = x;
      else pp.n = x;
    }
    std::string why;
    row.cls = plap::to_string(plap::power_region_classify(pp, &why));
    row.why = why;
    return row;
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(sweep_workers()), std::max<std::size_t>(total, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < total; i += workers) rows[i] = classify_row(i);
    });
  }
  for (auto& t : pool) t.join();

  std::ofstream out(out_path);
  if (!out) throw SchemaError("cannot open output file: " + out_path);
  out << std::setprecision(17);
  for (const auto& ax : axes) out << ax.name << ',';
  out << "class,why\n";
  for (const auto& row : rows) {
    for (double c : row.coords) out << c << ',';
    out << row.cls << ',' << row.why << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial p-Laplace verification toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, set_name, out_path, theorem;
  std::vector<std::string> vary;

  auto* check = app.add_subcommand("check", "Evaluate a condition bundle");
  check->add_option("scenario", scenario_path)->required();
  check->add_option("--set", set_name)->required();

  auto* opialk = app.add_subcommand("opial-k", "Opial constant for the power family");
  double kp = 2, kl = 1, kn = 2, kalpha = 1, kgamma = 0, kC = 1;
  std::string interval = "0,1", vname = "delta";
  opialk->add_option("--p", kp);
  opialk->add_option("--l", kl);
  opialk->add_option("--n", kn);
  opialk->add_option("--alpha", kalpha);
  opialk->add_option("--gamma", kgamma);
  opialk->add_option("--C", kC);
  opialk->add_option("--interval", interval);
  opialk->add_option("--v", vname);

  auto* solve = app.add_subcommand("solve", "Integrate the radial ODE");
  solve->add_option("scenario", scenario_path)->required();
  solve->add_option("--out", out_path)->required();

  auto* verify = app.add_subcommand("verify", "Run a theorem verdict");
  verify->add_option("scenario", scenario_path)->required();
  verify->add_option("--theorem", theorem)
      ->required()
      ->check(CLI::IsMember({"prawa", "support", "lewa", "twprzy", "monohomo"}));

  auto* sweep = app.add_subcommand("sweep", "Region classification over a grid");
  sweep->add_option("scenario", scenario_path)->required();
  sweep->add_option("--vary", vary);
  sweep->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 4;
  }

  try {
    if (check->parsed()) {
      plap::ConditionSet set;
      if (set_name == "N_nd") set = plap::ConditionSet::N_nd;
      else if (set_name == "N_d") set = plap::ConditionSet::N_d;
      else if (set_name == "S_nd") set = plap::ConditionSet::S_nd;
      else if (set_name == "S_d") set = plap::ConditionSet::S_d;
      else if (set_name == "M_nd") set = plap::ConditionSet::M_nd;
      else if (set_name == "M_d") set = plap::ConditionSet::M_d;
      else throw SchemaError("--set: unknown bundle '" + set_name + "'");
      const auto sc = load_scenario(scenario_path);
      const auto report = plap::check_set(set, sc.spec);
      std::cout << report_to_json(report, set).dump(2) << "\n";
      return report.passed() ? 0 : 2;
    }

    if (opialk->parsed()) {
      double s, r;
      char comma;
      std::istringstream ss(interval);
      if (!(ss >> s >> comma >> r) || comma != ',')
        throw SchemaError("--interval: expected s,r");
      if (s == r) {
        std::cout << std::fixed << std::setprecision(12) << 0.0 << "\n";
        return 0;
      }
      double K;
      if (s == 0.0 && vname == "delta") {
        const auto cf = plap::opial_constant_power_closed_form(kp, kl, kn, kalpha, kgamma, kC, r);
        K = cf.value;
      } else {
        const plap::WeightSpec w(plap::ScalarFn::power(1.0, kalpha), kn, kp);
        const auto vfn = vname == "delta" ? plap::delta_a_fn(w) : plap::d_a_fn(w);
        if (!vfn) throw SchemaError("--v: weight functional unavailable");
        plap::OpialSetup setup(kl, kp - kl, plap::ScalarFn::power(kC, kgamma), *vfn, s, r,
                               plap::Pinned::LeftZero);
        K = plap::opial_constant(setup, s, r);
      }
      if (std::isinf(K)) {
        std::cout << "infinite\n";
        return 2;
      }
      std::cout << std::fixed << std::setprecision(12) << K << "\n";
      return 0;
    }

    if (solve->parsed()) {
      const auto sc = load_scenario(scenario_path);
      const auto traj = plap::solve(sc.spec, sc.shoot ? *sc.shoot : plap::ShootSpec{});
      std::ofstream out(out_path);
      if (!out) throw SchemaError("cannot open output file: " + out_path);
      traj.write_csv(out, sc.spec.weight.p);
      json summary{{"termination", traj.termination == plap::Termination::ReachedEndpoint
                                       ? "reached_endpoint"
                                       : traj.termination == plap::Termination::BlowUp
                                             ? "blow_up"
                                             : "step_underflow"},
                   {"nodes", traj.size()},
                   {"max_abs_u", traj.max_abs_u()}};
      std::cout << summary.dump(2) << "\n";
      return traj.termination == plap::Termination::ReachedEndpoint ? 0 : 3;
    }

    if (verify->parsed()) {
      return run_verify(load_scenario(scenario_path), theorem);
    }

    if (sweep->parsed()) {
      return run_sweep(load_scenario(scenario_path), vary, out_path);
    }
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return verify->parsed() ? 3 : 4;
  }
  return 4;
}
