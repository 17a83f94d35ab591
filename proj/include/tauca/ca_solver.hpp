#pragma once

// The averaged solver: carried values are replaced by their expected values,
// which makes the linear digit a of u advance by exactly one per layer and
// turns the step recursion into sums over layers a = 0, 1, 2, ...
//
// Every curve is parameterised by the layer index a, with u_a = 1 - a/N.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tauca/csv.hpp"
#include "tauca/error.hpp"

namespace tauca {

inline constexpr double kDefaultStop = 1e-6;

/// Expected value of 1 - delta_2 on layer (a, b): (1 - a tau)^2 - (b tau)^2.
inline double expected_delta(std::int64_t a, double b, std::int64_t n) {
  const double tau = 1.0 / static_cast<double>(n);
  const double u = 1.0 - static_cast<double>(a) * tau;
  return u * u - (b * tau) * (b * tau);
}

/// Expected value of 1 - omega_2 on layer (a, b): (1 - a tau)^2 - 2 b tau.
inline double expected_omega(std::int64_t a, double b, std::int64_t n) {
  const double tau = 1.0 / static_cast<double>(n);
  const double u = 1.0 - static_cast<double>(a) * tau;
  return u * u - 2.0 * b * tau;
}

enum class Variant {
  full,        // layer recursion with both expected values
  closed,      // explicit closed-form sums (t_a without the b^2 term)
  asymptotic,  // small-t approximation
};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::full:
      return "full";
    case Variant::closed:
      return "closed";
    case Variant::asymptotic:
      return "asymptotic";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "full") return Variant::full;
  if (s == "closed") return Variant::closed;
  if (s == "asymptotic") return Variant::asymptotic;
  throw RangeError("unknown variant '" + std::string(s) + "' (expected full, closed or asymptotic)");
}

struct CaPoint {
  std::int64_t a = 0;
  double n = 0.0;  // cumulative step count n_a
  double t = 0.0;
  double u = 1.0;
  double v = 0.0;
};

struct CaCurve {
  std::int64_t radix = 0;
  Variant variant = Variant::full;
  std::vector<CaPoint> points;
};

inline double u_of_layer(std::int64_t a, std::int64_t n) {
  return static_cast<double>(n - a) / static_cast<double>(n);
}

/// One row per layer. The closed columns hold tau * sum_{m<a} 1/(1 - m tau)^2;
/// the recursive columns hold n_{a+1} = n_a + 1/E_delta(a, b_a) together with
/// b_{a+1} = b_a + E_omega(a, b_a) / E_delta(a, b_a).
struct LayerTime {
  std::int64_t a = 0;
  double n_closed = 0.0;
  double t_closed = 0.0;
  double n_recursive = 0.0;
  double t_recursive = 0.0;
  double b_recursive = 0.0;
};

namespace detail {

inline void check_extent(std::int64_t a_max, std::int64_t n) {
  if (n < 2) throw RangeError("radix N must be >= 2");
  if (a_max < 0) throw RangeError("a_max must be non-negative");
  if (a_max >= n) throw RangeError("a_max = " + std::to_string(a_max) + " must be < N = " + std::to_string(n));
}

constexpr double kNoStop = std::numeric_limits<double>::infinity();

/// Layers 0..a_max, or fewer if t reaches t_stop first.
inline std::vector<LayerTime> layers(std::int64_t a_max, std::int64_t n, double eps_stop, double t_stop) {
  const double tau = 1.0 / static_cast<double>(n);
  std::vector<LayerTime> out;
  out.reserve(static_cast<std::size_t>(a_max) + 1);
  LayerTime cur;
  out.push_back(cur);
  for (std::int64_t a = 0; a < a_max; ++a) {
    if (cur.t_recursive >= t_stop) break;
    const double ed = expected_delta(a, cur.b_recursive, n);
    if (ed <= eps_stop) {
      throw RangeError("E_delta = " + std::to_string(ed) + " <= " + std::to_string(eps_stop) + " at layer a = " +
                       std::to_string(a) + " (N = " + std::to_string(n) + ")");
    }
    const double ew = expected_omega(a, cur.b_recursive, n);
    const double um = 1.0 - static_cast<double>(a) * tau;

    LayerTime next;
    next.a = a + 1;
    next.n_closed = cur.n_closed + 1.0 / (um * um);
    next.t_closed = next.n_closed * tau;
    next.n_recursive = cur.n_recursive + 1.0 / ed;
    next.t_recursive = next.n_recursive * tau;
    next.b_recursive = cur.b_recursive + ew / ed;
    out.push_back(next);
    cur = next;
  }
  return out;
}

}  // namespace detail

inline std::vector<LayerTime> layer_times(std::int64_t a_max, std::int64_t n, double eps_stop = kDefaultStop) {
  detail::check_extent(a_max, n);
  return detail::layers(a_max, n, eps_stop, detail::kNoStop);
}

/// v_a by the sum-of-products formula and by its equivalent recurrence.
struct VLayers {
  std::vector<double> formula;
  std::vector<double> recurrence;
};

/// v_a = tau + tau * sum_{m=1}^{a-1} prod_{k=m+1}^{a-1} (1 - 2 tau / (1 - k tau)^2), v_0 = 0.
///
/// The recurrence column uses c_a = b_a - 1: c_1 = 0,
/// c_{a+1} = c_a (1 - 2 tau / (1 - a tau)^2) + 1.
inline VLayers v_layers(std::int64_t a_max, std::int64_t n) {
  detail::check_extent(a_max, n);
  const double tau = 1.0 / static_cast<double>(n);
  auto factor = [tau](std::int64_t k) {
    const double d = 1.0 - static_cast<double>(k) * tau;
    return 1.0 - 2.0 * tau / (d * d);
  };

  VLayers out;
  out.formula.assign(static_cast<std::size_t>(a_max) + 1, 0.0);
  out.recurrence.assign(static_cast<std::size_t>(a_max) + 1, 0.0);

  for (std::int64_t a = 1; a <= a_max; ++a) {
    // Walk m downward so each product extends the previous one by one factor.
    double sum = 0.0;
    double prod = 1.0;
    for (std::int64_t m = a - 1; m >= 1; --m) {
      if (m + 1 <= a - 1) prod *= factor(m + 1);
      sum += prod;
    }
    out.formula[static_cast<std::size_t>(a)] = tau + tau * sum;
  }

  double c = 0.0;
  for (std::int64_t a = 1; a <= a_max; ++a) {
    out.recurrence[static_cast<std::size_t>(a)] = tau * (1.0 + c);
    c = c * factor(a) + 1.0;
  }
  return out;
}

namespace detail {

inline CaCurve asymptotic(std::int64_t a_max, std::int64_t n, double t_stop) {
  if (n < 2) throw RangeError("radix N must be >= 2");
  if (a_max < 0) throw RangeError("a_max must be non-negative");
  const double tau = 1.0 / static_cast<double>(n);
  auto inv = [tau, n](std::int64_t m) {
    const double d = 1.0 - 2.0 * static_cast<double>(m) * tau;
    if (d <= 0.0) {
      throw RangeError("asymptotic denominator 1 - 2m/N <= 0 at m = " + std::to_string(m) + " (N = " +
                       std::to_string(n) + ")");
    }
    return 1.0 / d;
  };

  CaCurve curve{n, Variant::asymptotic, {}};
  curve.points.push_back(CaPoint{});
  double t_sum = 0.0;  // sum_{m=0}^{a-1}
  double v_sum = 0.0;  // sum_{m=2}^{a}
  for (std::int64_t a = 1; a <= a_max; ++a) {
    if (curve.points.back().t >= t_stop) break;
    t_sum += inv(a - 1);
    if (a >= 2) v_sum += inv(a);
    CaPoint p;
    p.a = a;
    p.t = tau * t_sum;
    p.n = t_sum;
    p.u = u_of_layer(a, n);
    p.v = tau + tau * (1.0 - 2.0 * tau * static_cast<double>(a + 1)) * v_sum;
    curve.points.push_back(p);
  }
  return curve;
}

inline CaCurve full(std::int64_t a_max, std::int64_t n, double eps_stop, double t_stop) {
  check_extent(a_max, n);
  const double tau = 1.0 / static_cast<double>(n);
  CaCurve curve{n, Variant::full, {}};
  for (const auto& l : layers(a_max, n, eps_stop, t_stop)) {
    curve.points.push_back(CaPoint{l.a, l.n_recursive, l.t_recursive, u_of_layer(l.a, n), l.b_recursive * tau});
  }
  return curve;
}

inline CaCurve closed(std::int64_t a_max, std::int64_t n, double t_stop) {
  check_extent(a_max, n);
  const auto lt = layers(a_max, n, -std::numeric_limits<double>::infinity(), detail::kNoStop);
  const auto vl = v_layers(a_max, n);
  CaCurve curve{n, Variant::closed, {}};
  for (std::size_t i = 0; i < lt.size(); ++i) {
    if (i > 0 && curve.points.back().t >= t_stop) break;
    curve.points.push_back(CaPoint{lt[i].a, lt[i].n_closed, lt[i].t_closed, u_of_layer(lt[i].a, n), vl.formula[i]});
  }
  return curve;
}

}  // namespace detail

/// v_a = tau + tau (1 - 2 tau (a+1)) sum_{m=2}^{a} 1/(1 - 2 m tau),
/// t_a = tau sum_{m=0}^{a-1} 1/(1 - 2 m tau). Needs 2 a_max < N.
inline CaCurve asymptotic_curve(std::int64_t a_max, std::int64_t n) {
  return detail::asymptotic(a_max, n, detail::kNoStop);
}

/// Assembles (a, n_a, t_a, u_a, v_a) for layers 0..a_max.
inline CaCurve solve(std::int64_t a_max, std::int64_t n, Variant variant, double eps_stop = kDefaultStop) {
  switch (variant) {
    case Variant::full:
      return detail::full(a_max, n, eps_stop, detail::kNoStop);
    case Variant::closed:
      return detail::closed(a_max, n, detail::kNoStop);
    case Variant::asymptotic:
      return detail::asymptotic(a_max, n, detail::kNoStop);
  }
  throw RangeError("unknown variant");
}

/// Shortest curve whose last point reaches t_end.
inline CaCurve solve_to_time(double t_end, std::int64_t n, Variant variant, double eps_stop = kDefaultStop) {
  if (!(t_end >= 0.0)) throw RangeError("t_end must be non-negative");
  CaCurve curve;
  switch (variant) {
    case Variant::full:
      curve = detail::full(n - 1, n, eps_stop, t_end);
      break;
    case Variant::closed:
      curve = detail::closed(n - 1, n, t_end);
      break;
    case Variant::asymptotic:
      curve = detail::asymptotic((n - 1) / 2, n, t_end);
      break;
  }
  if (curve.points.back().t < t_end) {
    throw RangeError("variant " + std::string(to_string(variant)) + " at N = " + std::to_string(n) +
                     " ends at t = " + std::to_string(curve.points.back().t) + " before t_end = " +
                     std::to_string(t_end));
  }
  return curve;
}

/// (u, v) at time t, linear in t between layers.
inline std::array<double, 2> interpolate(const CaCurve& curve, double t) {
  const auto& pts = curve.points;
  if (pts.empty() || t < pts.front().t || t > pts.back().t) {
    throw GridError("t = " + std::to_string(t) + " outside the curve range at N = " + std::to_string(curve.radix));
  }
  auto it = std::lower_bound(pts.begin(), pts.end(), t, [](const CaPoint& p, double x) { return p.t < x; });
  if (it->t == t) return {it->u, it->v};
  const CaPoint& hi = *it;
  const CaPoint& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return {lo.u + w * (hi.u - lo.u), lo.v + w * (hi.v - lo.v)};
}

struct Extrapolation {
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> v;
  // Observed order per grid point; empty unless three or more curves were given.
  // NaN where the finer difference vanishes.
  std::vector<double> order_u;
  std::vector<double> order_v;
};

/// First-order Richardson extrapolation tau -> 0 on a common time grid.
///
/// The two finest curves (N_c < N_f, r = N_f / N_c) give
/// y = (r y_f - y_c) / (r - 1), which is 2 y_{2N} - y_N for r = 2.
/// With three curves N_1 < N_2 < N_3 the observed order is
/// log(|y_1 - y_2| / |y_2 - y_3|) / log(N_3 / N_2).
inline Extrapolation limit_extrapolate(std::span<const CaCurve> curves, std::span<const double> grid) {
  if (curves.size() < 2) throw RangeError("extrapolation needs at least two curves");
  std::vector<const CaCurve*> sorted;
  for (const auto& c : curves) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const CaCurve* x, const CaCurve* y) { return x->radix < y->radix; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->radix == sorted[i - 1]->radix) throw RangeError("extrapolation needs curves at distinct N");
  }

  const std::size_t m = sorted.size();
  const CaCurve& fine = *sorted[m - 1];
  const CaCurve& coarse = *sorted[m - 2];
  const double r = static_cast<double>(fine.radix) / static_cast<double>(coarse.radix);

  Extrapolation out;
  out.grid.assign(grid.begin(), grid.end());
  for (double t : grid) {
    const auto yf = interpolate(fine, t);
    const auto yc = interpolate(coarse, t);
    out.u.push_back((r * yf[0] - yc[0]) / (r - 1.0));
    out.v.push_back((r * yf[1] - yc[1]) / (r - 1.0));
    if (m >= 3) {
      const auto y1 = interpolate(*sorted[m - 3], t);
      const double lr = std::log(r);
      auto order = [lr](double a, double b, double c) {
        const double num = std::fabs(a - b);
        const double den = std::fabs(b - c);
        if (den == 0.0 || num == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::log(num / den) / lr;
      };
      out.order_u.push_back(order(y1[0], yc[0], yf[0]));
      out.order_v.push_back(order(y1[1], yc[1], yf[1]));
    }
  }
  return out;
}

/// `a,n_a,t,u,v,variant`
inline void write_curve_csv(std::ostream& out, const CaCurve& curve) {
  out << "a,n_a,t,u,v,variant\n";
  for (const auto& p : curve.points) csv::row(out, p.a, p.n, p.t, p.u, p.v, to_string(curve.variant));
  out << "# N=" << curve.radix << " points=" << curve.points.size() << '\n';
}

}  // namespace tauca
