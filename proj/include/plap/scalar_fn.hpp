#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace plap {

/// One-variable function descriptor used for weights, sources and
/// nonlinearity envelopes.  Symbolic variants admit exact differentiation
/// and exact finiteness decisions for endpoint integrals; Opaque functions
/// route to numeric-only paths.
///
/// Conventions on the variants (everything of interest lives on tau > 0):
///   PowerLaw  c, e : t -> c * |t|^e          (even extension)
///   Constant  v    : t -> v
///   OddPower  c, d : t -> c * |t|^{d-1} * t  (odd, d > 0)
///   Sum            : termwise
///   Opaque         : arbitrary evaluator with declared singular points
class ScalarFn {
 public:
  struct PowerLaw {
    double coeff;
    double exponent;
  };
  struct Constant {
    double value;
  };
  struct OddPower {
    double coeff;
    double degree;
  };
  struct Sum {
    std::vector<ScalarFn> terms;
  };
  struct Opaque {
    std::function<double(double)> eval;
    std::vector<double> singular_points;
  };

  ScalarFn() : node_(Constant{0.0}) {}

  static ScalarFn power(double coeff, double exponent) {
    return ScalarFn(PowerLaw{coeff, exponent});
  }
  static ScalarFn constant(double value) { return ScalarFn(Constant{value}); }
  static ScalarFn odd_power(double coeff, double degree) {
    if (!(degree > 0)) throw std::invalid_argument("odd_power: degree must be > 0");
    return ScalarFn(OddPower{coeff, degree});
  }
  static ScalarFn sum(std::vector<ScalarFn> terms) {
    return ScalarFn(Sum{std::move(terms)});
  }
  static ScalarFn opaque(std::function<double(double)> eval,
                         std::vector<double> singular_points = {}) {
    return ScalarFn(Opaque{std::move(eval), std::move(singular_points)});
  }

  double operator()(double t) const;

  /// True for every variant except Opaque (recursively for Sum).
  bool symbolic() const;

  /// Exact derivative; nullopt for Opaque-containing functions.
  std::optional<ScalarFn> derivative() const;

  /// Exact where symbolic, central difference with h = max(1e-6, 1e-6|t|)
  /// otherwise.
  double derivative_at(double t) const;

  /// Second derivative at a point (symbolic functions only).
  double second_derivative_at(double t) const;

  /// Single-power view c * t^e valid on t > 0, when the function is a plain
  /// power (Constant, PowerLaw, OddPower, or a one-term Sum thereof).
  std::optional<PowerLaw> as_power() const;

  /// Smallest exponent governing the behaviour at t -> 0+ (termwise minimum
  /// for sums).  nullopt when the function contains an Opaque part.
  std::optional<double> exponent_at_zero() const;

  /// Points where the function is declared or known singular (0 for
  /// negative-exponent power laws, user-declared points for Opaque).
  std::vector<double> singular_points() const;

  /// Exact structural oddness: OddPower, zero constants and sums of odd
  /// parts.  Does not attempt sampling; see problem-spec validation for the
  /// Opaque path.
  bool is_odd_symbolic() const;

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), node_);
  }

 private:
  template <class Node>
  explicit ScalarFn(Node n) : node_(std::move(n)) {}

  std::variant<Constant, PowerLaw, OddPower, Sum, Opaque> node_;
};

/// f^e as a ScalarFn, available when f is a plain positive-coefficient power
/// on t > 0.  Used for the p^{-1/(l+m-1)} style transforms.
std::optional<ScalarFn> pow_of(const ScalarFn& f, double e);

}  // namespace plap
