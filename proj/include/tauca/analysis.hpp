#pragma once

// Statistics over traces and curves: carry averaging error, power-law fits,
// convergence against a reference trajectory, and LCG moments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tauca/ca_solver.hpp"
#include "tauca/csv.hpp"
#include "tauca/error.hpp"
#include "tauca/oracle.hpp"
#include "tauca/tau_machine.hpp"

namespace tauca {

struct PowerLaw {
  double exponent = 0.0;
  double constant = 0.0;
};

/// Least-squares line through (log x, log e): e ~ constant * x^exponent.
inline PowerLaw fit_power_law(std::span<const double> xs, std::span<const double> errors) {
  if (xs.size() != errors.size()) throw DegenerateFitError("xs and errors differ in length");
  if (xs.size() < 3) throw DegenerateFitError("power-law fit needs at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) throw DegenerateFitError("abscissae must be positive");
    if (errors[i] == 0.0) throw DegenerateFitError("error is exactly zero at x = " + csv::format(xs[i]));
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) throw DegenerateFitError("errors must be positive and finite");
    const double lx = std::log(xs[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto n = static_cast<double>(xs.size());
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    throw DegenerateFitError("abscissae are all equal");
  }
  const double den = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / den;
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

struct ErrorReport {
  std::vector<double> xs;
  std::vector<double> errors;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double constant = std::numeric_limits<double>::quiet_NaN();
};

/// Fits the positive entries; exact zeros are left out of the fit.
inline void fit_report(ErrorReport& report) {
  std::vector<double> x, e;
  for (std::size_t i = 0; i < report.xs.size(); ++i) {
    if (report.errors[i] > 0.0) {
      x.push_back(report.xs[i]);
      e.push_back(report.errors[i]);
    }
  }
  if (x.size() < 3) return;
  const PowerLaw fit = fit_power_law(x, e);
  report.exponent = fit.exponent;
  report.constant = fit.constant;
}

/// `x,error` rows and a `# exponent=<v> constant=<v>` footer.
inline void write_report_csv(std::ostream& out, const ErrorReport& report) {
  out << "x,error\n";
  for (std::size_t i = 0; i < report.xs.size(); ++i) csv::row(out, report.xs[i], report.errors[i]);
  out << "# exponent=" << csv::format(report.exponent) << " constant=" << csv::format(report.constant) << '\n';
}

struct LlnReport {
  ErrorReport report;
  std::size_t zero_points = 0;
  /// Smallest C >= 0 with e_n <= 1/n + C tau on every sampled n.
  double bound_constant = 0.0;
};

/// e_n = |mean(carries[0..n)) - mean(expected[0..n))| at n = 1, 2, 4, ...
inline LlnReport lln_error_from(std::span<const double> carries, std::span<const double> expected, double tau) {
  if (carries.empty()) throw EmptyTraceError("no carries to average");
  if (carries.size() != expected.size()) throw RangeError("carries and expectations differ in length");

  LlnReport out;
  double sum_c = 0.0, sum_e = 0.0;
  std::size_t next = 1;
  for (std::size_t m = 0; m < carries.size(); ++m) {
    sum_c += carries[m];
    sum_e += expected[m];
    const std::size_t n = m + 1;
    if (n == next) {
      const double e = std::fabs(sum_c - sum_e) / static_cast<double>(n);
      out.report.xs.push_back(static_cast<double>(n));
      out.report.errors.push_back(e);
      if (e == 0.0) ++out.zero_points;
      out.bound_constant = std::max(out.bound_constant, (e - 1.0 / static_cast<double>(n)) / tau);
      next *= 2;
    }
  }
  fit_report(out.report);
  return out;
}

/// Averaging error of the carries out of digit 2 against their expected
/// values at the trace's own (a1, b1) digits. component 0 uses delta_2 and
/// E_delta, component 1 uses omega_2 and E_omega.
inline LlnReport lln_error(const StepTrace& trace, std::size_t component = 0) {
  if (trace.steps() == 0) throw EmptyTraceError("trace has no steps");
  if (trace.dim() != 2) throw RangeError("carry averaging is defined for two-component traces");
  if (trace.radix.precision() < 2) throw RangeError("carry averaging needs p >= 2");
  const std::int64_t n = trace.radix.base();

  std::vector<double> carries(trace.steps()), expected(trace.steps());
  for (std::size_t m = 0; m < trace.steps(); ++m) {
    const std::int64_t a = trace.digit(m, 0, 1);
    const auto b = static_cast<double>(trace.digit(m, 1, 1));
    carries[m] = static_cast<double>(trace.carry(m, component, 2));
    expected[m] = 1.0 - (component == 0 ? expected_delta(a, b, n) : expected_omega(a, b, n));
  }
  return lln_error_from(carries, expected, trace.radix.tau());
}

/// Max over curve points with t <= t_max of |(u, v) - ref(t)|.
inline double curve_error(const CaCurve& curve, const Trajectory<double>& ref, double t_max) {
  if (curve.points.empty() || curve.points.back().t < t_max) {
    throw GridError("curve at N = " + std::to_string(curve.radix) + " does not reach t = " + csv::format(t_max));
  }
  if (ref.times.empty() || ref.times.back() < t_max) throw GridError("reference does not reach t = " + csv::format(t_max));
  double worst = 0.0;
  for (const auto& p : curve.points) {
    if (p.t > t_max) break;
    const auto y = sample(ref, p.t);
    worst = std::max(worst, std::hypot(p.u - y[0], p.v - y[1]));
  }
  return worst;
}

/// Max over grid times of |(u, v) - ref(t)| for a curve interpolated in t.
inline double grid_error(const CaCurve& curve, const Trajectory<double>& ref, std::span<const double> grid) {
  double worst = 0.0;
  for (double t : grid) {
    const auto y = interpolate(curve, t);
    const auto r = sample(ref, t);
    worst = std::max(worst, std::hypot(y[0] - r[0], y[1] - r[1]));
  }
  return worst;
}

inline double grid_error(const Extrapolation& limit, const Trajectory<double>& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < limit.grid.size(); ++i) {
    const auto r = sample(ref, limit.grid[i]);
    worst = std::max(worst, std::hypot(limit.u[i] - r[0], limit.v[i] - r[1]));
  }
  return worst;
}

/// x_m = (b x_{m-1} + c) mod P
struct LcgParams {
  std::uint64_t multiplier = 16807;
  std::uint64_t increment = 0;
  std::uint64_t modulus = 2147483647;
  std::uint64_t seed = 1;

  static LcgParams minimal_standard(std::uint64_t seed = 1) { return {16807, 0, 2147483647, seed}; }

  void validate() const {
    if (modulus < 2) throw RangeError("LCG modulus must be >= 2");
    if (multiplier >= modulus || increment >= modulus) throw RangeError("LCG needs b, c < P");
    if (seed >= modulus) throw RangeError("LCG seed must lie in [0, P)");
  }
};

/// The `count` values following the seed.
inline std::vector<std::uint64_t> lcg_stream(const LcgParams& p, std::size_t count) {
  p.validate();
  std::vector<std::uint64_t> xs;
  xs.reserve(count);
  unsigned __int128 x = p.seed;
  for (std::size_t i = 0; i < count; ++i) {
    x = (x * p.multiplier + p.increment) % p.modulus;
    xs.push_back(static_cast<std::uint64_t>(x));
  }
  return xs;
}

inline std::vector<double> normalize(std::span<const std::uint64_t> xs, std::uint64_t modulus) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = static_cast<double>(xs[i]) / static_cast<double>(modulus);
  return out;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

inline Moments moment_stats(std::span<const double> xs) {
  if (xs.size() < 2) throw RangeError("moments need at least two samples");
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {static_cast<double>(mean), static_cast<double>(ss / static_cast<long double>(xs.size() - 1))};
}

}  // namespace tauca
