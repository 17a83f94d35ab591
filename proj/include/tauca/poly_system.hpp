#pragma once

// Polynomial right-hand sides dy/dt = f(y) with integer coefficients.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tauca/error.hpp"
#include "tauca/tau_arith.hpp"

namespace tauca {

/// coefficient * prod_k y_k^powers[k]
struct Monomial {
  std::int64_t coefficient = 0;
  std::vector<int> powers;
};

using Polynomial = std::vector<Monomial>;

struct PolySystem {
  std::vector<Polynomial> rhs;
  std::vector<double> initial;
  std::vector<SignPattern> sign_patterns;

  std::size_t dim() const noexcept { return rhs.size(); }

  void validate() const {
    if (rhs.empty()) throw RangeError("system must have at least one component");
    if (initial.size() != rhs.size() || sign_patterns.size() != rhs.size()) {
      throw RangeError("rhs, initial values and sign patterns must have one entry per component");
    }
    for (const auto& poly : rhs) {
      for (const auto& m : poly) {
        if (m.powers.size() != rhs.size()) throw RangeError("monomial arity does not match the system dimension");
        for (int e : m.powers) {
          if (e < 0) throw RangeError("negative exponent in monomial");
        }
      }
    }
  }
};

/// du/dt = v^2 - u^2, dv/dt = u^2 - 2v, u(0) = 1, v(0) = 0.
///
/// Sign patterns follow u = 1 - a1 tau + a2 tau^2 - ... and
/// v = b1 tau - b2 tau^2 + b3 tau^3 - ...
inline PolySystem system4(int precision = 3) {
  PolySystem sys;
  sys.rhs = {
      {{1, {0, 2}}, {-1, {2, 0}}},
      {{1, {2, 0}}, {-2, {0, 1}}},
  };
  sys.initial = {1.0, 0.0};
  sys.sign_patterns = {SignPattern::alternating(precision, 0), SignPattern::alternating(precision, 1)};
  return sys;
}

/// Same shape as system4 with f == 0.
inline PolySystem zero_system(int precision = 3, std::vector<double> initial = {1.0, 0.0}) {
  PolySystem sys;
  sys.rhs.assign(initial.size(), Polynomial{});
  sys.sign_patterns.assign(initial.size(), SignPattern::alternating(precision, 0));
  sys.initial = std::move(initial);
  return sys;
}

template <typename Real>
Real evaluate(const Polynomial& poly, std::span<const Real> y) {
  Real total = Real(0);
  for (const auto& m : poly) {
    Real term = static_cast<Real>(m.coefficient);
    for (std::size_t k = 0; k < y.size(); ++k) {
      for (int e = 0; e < m.powers[k]; ++e) term = term * y[k];
    }
    total = total + term;
  }
  return total;
}

inline TruncatedSeries evaluate(const Polynomial& poly, std::span<const TruncatedSeries> y, int precision) {
  TruncatedSeries total(precision);
  for (const auto& m : poly) {
    TruncatedSeries term(precision, m.coefficient);
    for (std::size_t k = 0; k < y.size(); ++k) {
      for (int e = 0; e < m.powers[k]; ++e) term = term * y[k];
    }
    total += term;
  }
  return total;
}

}  // namespace tauca
