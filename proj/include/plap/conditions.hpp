#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plap/core.hpp"

namespace plap {

/// The six (interval, weight-functional) variants of assumption A3/A4/A5:
/// a_l/a_r/a use v = delta_a on [0,R) / (0,R] / (0,R); b_l/b_r/b use v = d_a.
enum class Variant { a_l, a_r, a, b_l, b_r, b };

enum class ConditionSet { N_nd, N_d, S_nd, S_d, M_nd, M_d };

enum class Outcome { Pass, Fail, Undecidable };

enum class SignVariant { Positive, Negative };  // A2(a): tau phi > 0; A2(b): < 0

struct CheckResult {
  std::string condition;
  Outcome outcome = Outcome::Undecidable;
  std::string note;
  std::optional<double> witness;  // violating tau where applicable
};

struct ConditionReport {
  std::vector<CheckResult> members;
  Outcome aggregate() const;
  bool passed() const { return aggregate() == Outcome::Pass; }
};

VChoice variant_v(Variant v);
bool variant_includes_zero(Variant v);
bool variant_includes_right(Variant v);
const char* to_string(Variant v);
const char* to_string(ConditionSet s);
const char* to_string(Outcome o);

struct BundleDef {
  SignVariant phi_variant;
  Variant variant;
};
BundleDef bundle_def(ConditionSet id);

CheckResult check_A1(double p, double l, double n, double R);
CheckResult check_A2(const ScalarFn& phi, SignVariant variant);
CheckResult check_A3(const WeightSpec& w, double R, Variant variant);
CheckResult check_A4(const HSpec& h, const GrowthEnvelope& env, const WeightSpec& w,
                     double R);
CheckResult check_A5(const GrowthEnvelope& env, const WeightSpec& w, double R,
                     Variant variant);

ConditionReport check_set(ConditionSet id, const ProblemSpec& spec);

/// Gronwall consequences of v > 0 a.e.: a(t)/t^{(n-1)/(1-1/p)} strictly
/// decreasing for v = delta_a, a(t) t^{(n-1)p} strictly decreasing for
/// v = d_a, verified on a 1001-point grid over [lo, hi].
CheckResult gronwall_envelope_check(const WeightSpec& w, double lo, double hi,
                                    VChoice which);

}  // namespace plap
