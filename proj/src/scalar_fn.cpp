#include "plap/scalar_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plap {

namespace {

double eval_power(const ScalarFn::PowerLaw& p, double t) {
  if (t == 0.0) {
    if (p.exponent > 0) return 0.0;
    if (p.exponent == 0) return p.coeff;
    return p.coeff * std::numeric_limits<double>::infinity();
  }
  return p.coeff * std::pow(std::abs(t), p.exponent);
}

double eval_odd(const ScalarFn::OddPower& o, double t) {
  if (t == 0.0) return 0.0;
  return o.coeff * std::pow(std::abs(t), o.degree - 1.0) * t;
}

}  // namespace

double ScalarFn::operator()(double t) const {
  return visit([&](const auto& node) -> double {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Constant>) {
      return node.value;
    } else if constexpr (std::is_same_v<T, PowerLaw>) {
      return eval_power(node, t);
    } else if constexpr (std::is_same_v<T, OddPower>) {
      return eval_odd(node, t);
    } else if constexpr (std::is_same_v<T, Sum>) {
      double acc = 0.0;
      for (const auto& term : node.terms) acc += term(t);
      return acc;
    } else {
      return node.eval(t);
    }
  });
}

bool ScalarFn::symbolic() const {
  return visit([](const auto& node) -> bool {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Sum>) {
      return std::all_of(node.terms.begin(), node.terms.end(),
                         [](const ScalarFn& f) { return f.symbolic(); });
    } else {
      return !std::is_same_v<T, Opaque>;
    }
  });
}

std::optional<ScalarFn> ScalarFn::derivative() const {
  return visit([](const auto& node) -> std::optional<ScalarFn> {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Constant>) {
      return ScalarFn::constant(0.0);
    } else if constexpr (std::is_same_v<T, PowerLaw>) {
      // d/dt c|t|^e = c e |t|^{e-2} t, odd; on t>0 this is c e t^{e-1}.
      if (node.exponent == 0.0) return ScalarFn::constant(0.0);
      return ScalarFn::odd_power(node.coeff * node.exponent, node.exponent - 1.0);
    } else if constexpr (std::is_same_v<T, OddPower>) {
      // d/dt c|t|^{d-1}t = c d |t|^{d-1}, even.
      return ScalarFn::power(node.coeff * node.degree, node.degree - 1.0);
    } else if constexpr (std::is_same_v<T, Sum>) {
      std::vector<ScalarFn> dterms;
      dterms.reserve(node.terms.size());
      for (const auto& term : node.terms) {
        auto d = term.derivative();
        if (!d) return std::nullopt;
        dterms.push_back(std::move(*d));
      }
      return ScalarFn::sum(std::move(dterms));
    } else {
      return std::nullopt;
    }
  });
}

double ScalarFn::derivative_at(double t) const {
  if (auto d = derivative()) return (*d)(t);
  const double h = std::max(1e-6, 1e-6 * std::abs(t));
  return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
}

double ScalarFn::second_derivative_at(double t) const {
  auto d = derivative();
  if (!d) throw std::domain_error("second_derivative_at: derivative unavailable for opaque function");
  auto dd = d->derivative();
  if (!dd) throw std::domain_error("second_derivative_at: derivative unavailable for opaque function");
  return (*dd)(t);
}

std::optional<ScalarFn::PowerLaw> ScalarFn::as_power() const {
  return visit([](const auto& node) -> std::optional<PowerLaw> {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Constant>) {
      return PowerLaw{node.value, 0.0};
    } else if constexpr (std::is_same_v<T, PowerLaw>) {
      return node;
    } else if constexpr (std::is_same_v<T, OddPower>) {
      // On t > 0 an odd power is the plain power c t^d.
      return PowerLaw{node.coeff, node.degree};
    } else if constexpr (std::is_same_v<T, Sum>) {
      if (node.terms.size() == 1) return node.terms.front().as_power();
      return std::nullopt;
    } else {
      return std::nullopt;
    }
  });
}

std::optional<double> ScalarFn::exponent_at_zero() const {
  return visit([](const auto& node) -> std::optional<double> {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Constant>) {
      return node.value == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else if constexpr (std::is_same_v<T, PowerLaw>) {
      return node.coeff == 0.0 ? std::numeric_limits<double>::infinity() : node.exponent;
    } else if constexpr (std::is_same_v<T, OddPower>) {
      return node.coeff == 0.0 ? std::numeric_limits<double>::infinity() : node.degree;
    } else if constexpr (std::is_same_v<T, Sum>) {
      double e = std::numeric_limits<double>::infinity();
      for (const auto& term : node.terms) {
        auto te = term.exponent_at_zero();
        if (!te) return std::nullopt;
        e = std::min(e, *te);
      }
      return e;
    } else {
      return std::nullopt;
    }
  });
}

std::vector<double> ScalarFn::singular_points() const {
  return visit([](const auto& node) -> std::vector<double> {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, PowerLaw>) {
      if (node.exponent < 0.0 && node.coeff != 0.0) return {0.0};
      return {};
    } else if constexpr (std::is_same_v<T, Sum>) {
      std::vector<double> pts;
      for (const auto& term : node.terms) {
        auto sub = term.singular_points();
        pts.insert(pts.end(), sub.begin(), sub.end());
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      return pts;
    } else if constexpr (std::is_same_v<T, Opaque>) {
      return node.singular_points;
    } else {
      return {};
    }
  });
}

bool ScalarFn::is_odd_symbolic() const {
  return visit([](const auto& node) -> bool {
    using T = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<T, Constant>) {
      return node.value == 0.0;
    } else if constexpr (std::is_same_v<T, PowerLaw>) {
      return node.coeff == 0.0;
    } else if constexpr (std::is_same_v<T, OddPower>) {
      return true;
    } else if constexpr (std::is_same_v<T, Sum>) {
      return std::all_of(node.terms.begin(), node.terms.end(),
                         [](const ScalarFn& f) { return f.is_odd_symbolic(); });
    } else {
      return false;
    }
  });
}

std::optional<ScalarFn> pow_of(const ScalarFn& f, double e) {
  auto p = f.as_power();
  if (!p || !(p->coeff > 0.0)) return std::nullopt;
  return ScalarFn::power(std::pow(p->coeff, e), p->exponent * e);
}

}  // namespace plap
