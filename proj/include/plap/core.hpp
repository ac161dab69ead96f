#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <variant>

#include "plap/scalar_fn.hpp"

namespace plap {

/// The p-power map |lambda|^{p-2} lambda (odd, Phi_p(0) = 0).
double phi_p(double p, double lambda);

/// Inverse of phi_p: |z|^{1/(p-1)} sgn(z).
double phi_p_inverse(double p, double z);

/// Degenerate elliptic weight a(tau) with the ambient parameters p, n.
struct WeightSpec {
  ScalarFn a;
  double n;  // real parameter >= 1, interpreted as dimension in the PDE case
  double p;  // > 1

  WeightSpec(ScalarFn a_, double n_, double p_);
};

/// delta_a(tau) = (n-1) a/tau - (1 - 1/p) a'
double delta_a(const WeightSpec& w, double tau);

/// d_a(tau) = (n-1) a/tau + (1/p) a'
double d_a(const WeightSpec& w, double tau);

/// delta_a / d_a as ScalarFn, available when a is symbolic.
std::optional<ScalarFn> delta_a_fn(const WeightSpec& w);
std::optional<ScalarFn> d_a_fn(const WeightSpec& w);

/// Big Phi(t) = int_0^t phi(s) ds; even in t for odd phi.
double big_phi(const ScalarFn& phi, double t);

/// Unique t >= 0 with big_phi(t) = y; +inf when y exceeds sup big_phi.
double big_phi_inverse(const ScalarFn& phi, double y);

/// Growth envelope of assumption A4: h lambda1 <= theta q |l0|^l |l1|^{p-l}
/// + (1-theta) v |l1|^p.
enum class VChoice { Delta, D };

struct GrowthEnvelope {
  double theta = 1.0;   // in [0,1]
  double l = 1.0;       // in (0,p)
  ScalarFn q = ScalarFn::constant(0.0);
  VChoice v_choice = VChoice::Delta;
};

/// Nonlinearity descriptor.
struct HSpec {
  struct Zero {};
  struct SharpnessProduct {
    double D;
    double s;
    double gamma;
    double l;
    double p;  // supplies the |lambda1| exponent p-l-1
  };
  struct OpaqueH {
    std::function<double(double, double, double)> eval;  // (tau, l0, l1)
  };

  std::variant<Zero, SharpnessProduct, OpaqueH> node;

  HSpec() : node(Zero{}) {}
  static HSpec zero() { return HSpec{}; }
  static HSpec sharpness_product(double D, double s, double gamma, double l, double p);
  static HSpec opaque(std::function<double(double, double, double)> eval);

  bool is_zero() const { return std::holds_alternative<Zero>(node); }
  double operator()(double tau, double l0, double l1) const;
};

enum class Form { Nondivergent, Divergent };

/// Complete description of one radial problem on (0, R).
struct ProblemSpec {
  WeightSpec weight;
  double R;  // > 0, possibly +inf
  ScalarFn phi;
  HSpec h;
  Form form = Form::Nondivergent;
  GrowthEnvelope envelope;

  ProblemSpec(WeightSpec w, double R_, ScalarFn phi_, HSpec h_, Form form_,
              GrowthEnvelope env);

  /// Truncation radius standing in for R when R = +inf.
  double effective_R(double truncation = 1e3) const {
    return std::isinf(R) ? truncation : R;
  }
  bool truncated() const { return std::isinf(R); }
};

}  // namespace plap
