#pragma once

// Reference solutions in ordinary floating point: classical RK4 and the
// plain explicit Euler iteration. Templated on the real type so the
// convergence checks can run in extended precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tauca/csv.hpp"
#include "tauca/error.hpp"
#include "tauca/poly_system.hpp"

namespace tauca {

template <typename Real = double>
struct Trajectory {
  std::vector<Real> times;
  std::vector<std::vector<Real>> states;
  Real step = Real(0);

  std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

template <typename Real>
std::vector<Real> rhs(const PolySystem& sys, std::span<const Real> y) {
  std::vector<Real> dy(sys.dim());
  for (std::size_t k = 0; k < sys.dim(); ++k) dy[k] = evaluate<Real>(sys.rhs[k], y);
  return dy;
}

template <typename Real>
void check_finite(const std::vector<Real>& y, Real t) {
  for (const Real& x : y) {
    const auto d = static_cast<double>(x);
    if (!std::isfinite(d)) throw NonFiniteError("state left the finite range at t = " + std::to_string(static_cast<double>(t)));
  }
}

template <typename Real>
std::vector<Real> initial(const PolySystem& sys) {
  std::vector<Real> y(sys.dim());
  for (std::size_t k = 0; k < sys.dim(); ++k) y[k] = static_cast<Real>(sys.initial[k]);
  return y;
}

}  // namespace detail

/// Classical four-stage Runge-Kutta on [0, t_end] with step h. The last step
/// is shortened to land on t_end exactly.
template <typename Real = double>
Trajectory<Real> rk4_solve(const PolySystem& sys, Real t_end, Real h) {
  sys.validate();
  if (!(h > Real(0))) throw RangeError("rk4 step must be positive");
  if (t_end < Real(0)) throw RangeError("rk4 end time must be non-negative");

  Trajectory<Real> traj;
  traj.step = h;
  std::vector<Real> y = detail::initial<Real>(sys);
  traj.times.push_back(Real(0));
  traj.states.push_back(y);

  const auto full_steps = static_cast<std::size_t>(static_cast<double>(t_end / h) + 1e-9);
  const std::size_t dim = sys.dim();
  std::vector<Real> tmp(dim);

  auto advance = [&](Real dt) {
    const auto k1 = detail::rhs<Real>(sys, y);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + dt / 2 * k1[i];
    const auto k2 = detail::rhs<Real>(sys, tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + dt / 2 * k2[i];
    const auto k3 = detail::rhs<Real>(sys, tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + dt * k3[i];
    const auto k4 = detail::rhs<Real>(sys, tmp);
    for (std::size_t i = 0; i < dim; ++i) y[i] = y[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  };

  traj.times.reserve(full_steps + 2);
  traj.states.reserve(full_steps + 2);
  for (std::size_t n = 1; n <= full_steps; ++n) {
    advance(h);
    const Real t = static_cast<Real>(n) * h;
    detail::check_finite(y, t);
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  const Real rest = t_end - static_cast<Real>(full_steps) * h;
  if (rest > h * Real(1e-9)) {
    advance(rest);
    detail::check_finite(y, t_end);
    traj.times.push_back(t_end);
    traj.states.push_back(y);
  }
  return traj;
}

/// y_{n+1} = y_n + tau f(y_n) in plain arithmetic.
template <typename Real = double>
Trajectory<Real> euler_float(const PolySystem& sys, std::size_t n_steps, Real tau) {
  sys.validate();
  if (!(tau > Real(0))) throw RangeError("euler step must be positive");

  Trajectory<Real> traj;
  traj.step = tau;
  std::vector<Real> y = detail::initial<Real>(sys);
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(Real(0));
  traj.states.push_back(y);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const auto dy = detail::rhs<Real>(sys, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + tau * dy[i];
    const Real t = static_cast<Real>(n) * tau;
    detail::check_finite(y, t);
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

/// Linear interpolation between the bracketing nodes.
template <typename Real>
std::vector<Real> sample(const Trajectory<Real>& traj, Real t) {
  if (traj.times.empty()) throw GridError("empty trajectory");
  if (t < traj.times.front() || t > traj.times.back()) {
    throw GridError("t = " + std::to_string(static_cast<double>(t)) + " outside [" +
                    std::to_string(static_cast<double>(traj.times.front())) + ", " +
                    std::to_string(static_cast<double>(traj.times.back())) + "]");
  }
  auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
  const auto hi = static_cast<std::size_t>(it - traj.times.begin());
  if (*it == t) return traj.states[hi];
  const std::size_t lo = hi - 1;
  const Real w = (t - traj.times[lo]) / (traj.times[hi] - traj.times[lo]);
  std::vector<Real> y(traj.states[lo].size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = traj.states[lo][i] + w * (traj.states[hi][i] - traj.states[lo][i]);
  return y;
}

/// `t,u,v` for two-component systems.
template <typename Real>
void write_trajectory_csv(std::ostream& out, const Trajectory<Real>& traj) {
  out << "t,u,v\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    csv::row(out, static_cast<double>(traj.times[n]), static_cast<double>(traj.states[n].at(0)),
             static_cast<double>(traj.states[n].at(1)));
  }
  out << "# h=" << csv::format(static_cast<double>(traj.step)) << '\n';
}

}  // namespace tauca
