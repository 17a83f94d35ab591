#pragma once

// The tau-machine: an explicit first-order scheme y_{n+1} = y_n + tau f(y_n)
// executed entirely on tau-radix digit vectors, with a carry pass after
// every step.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tauca/csv.hpp"
#include "tauca/error.hpp"
#include "tauca/poly_system.hpp"
#include "tauca/tau_arith.hpp"

namespace tauca {

struct MachineState {
  std::size_t step = 0;
  std::vector<TauNumber> components;
};

struct StepResult {
  MachineState state;
  std::vector<RawTauNumber> raw;      // digits before the carry pass
  std::vector<CarryRecord> carries;
};

inline MachineState initial_state(const PolySystem& sys, const TauRadix& radix) {
  sys.validate();
  MachineState s;
  s.components.reserve(sys.dim());
  for (std::size_t k = 0; k < sys.dim(); ++k) {
    if (sys.sign_patterns[k].size() != radix.size()) {
      throw MixedRadixError("sign pattern of component " + std::to_string(k) + " does not match p = " +
                            std::to_string(radix.precision()));
    }
    s.components.push_back(encode(sys.initial[k], radix, sys.sign_patterns[k]));
  }
  return s;
}

/// One step of y + tau * f(y), truncated at tau^p and normalized.
///
/// Throws RangeError if any component carries out of digit 0.
inline StepResult euler_step(const MachineState& state, const PolySystem& sys) {
  if (state.components.size() != sys.dim()) throw MixedRadixError("state dimension does not match the system");
  const TauRadix radix = state.components.front().radix();

  StepResult out;
  out.state.step = state.step + 1;
  out.state.components.reserve(sys.dim());
  out.raw.reserve(sys.dim());
  out.carries.reserve(sys.dim());

  for (std::size_t k = 0; k < sys.dim(); ++k) {
    std::vector<Term> terms;
    terms.push_back(Term{1, 0, {state.components[k]}});
    for (const auto& m : sys.rhs[k]) {
      Term t{m.coefficient, 1, {}};
      for (std::size_t j = 0; j < m.powers.size(); ++j) {
        for (int e = 0; e < m.powers[j]; ++e) t.factors.push_back(state.components[j]);
      }
      terms.push_back(std::move(t));
    }
    RawTauNumber raw = combine(terms, radix, sys.sign_patterns[k]);
    Normalized norm = carry_normalize(raw);
    if (norm.record.overflow0 != 0) {
      throw RangeError("component " + std::to_string(k) + " overflows digit 0 (carry " +
                       std::to_string(norm.record.overflow0) + ")");
    }
    out.raw.push_back(std::move(raw));
    out.state.components.push_back(std::move(norm.number));
    out.carries.push_back(std::move(norm.record));
  }
  return out;
}

/// Full history of one run: states[0..steps], and for every step m the
/// raw digits and carries produced while going from states[m] to states[m+1].
struct StepTrace {
  TauRadix radix;
  std::vector<MachineState> states;
  std::vector<std::vector<RawTauNumber>> raw;
  std::vector<std::vector<CarryRecord>> carries;

  std::size_t steps() const noexcept { return carries.size(); }
  std::size_t dim() const noexcept { return states.front().components.size(); }

  std::int64_t digit(std::size_t n, std::size_t component, std::size_t i) const {
    return states[n].components[component].digit(i);
  }

  /// Carry out of digit i during step m -> m+1.
  std::int64_t carry(std::size_t m, std::size_t component, std::size_t i) const {
    return carries[m][component].carries[i];
  }
};

inline StepTrace run(const PolySystem& sys, const TauRadix& radix, std::size_t n_steps) {
  StepTrace trace{radix, {}, {}, {}};
  trace.states.reserve(n_steps + 1);
  trace.raw.reserve(n_steps);
  trace.carries.reserve(n_steps);
  trace.states.push_back(initial_state(sys, radix));
  for (std::size_t n = 0; n < n_steps; ++n) {
    StepResult r = [&] {
      try {
        return euler_step(trace.states.back(), sys);
      } catch (const RangeError& e) {
        throw StepRangeError(n, e.what());
      }
    }();
    trace.states.push_back(std::move(r.state));
    trace.raw.push_back(std::move(r.raw));
    trace.carries.push_back(std::move(r.carries));
  }
  return trace;
}

/// Checks, per component and at every step, that the linear digit equals the
/// running sum of its increments minus carries:
///   a1[n+1] = a1[0] + sum_{m<=n} (inc_m + beta1 beta2 delta2_m),
/// where inc_m is the pre-carry growth of digit 1. For system (4) inc_m == 1
/// and beta1 beta2 == -1, i.e. a1[n+1] = sum (1 - delta2_m).
inline std::vector<bool> linear_sum_identity(const StepTrace& trace) {
  if (trace.states.empty()) throw EmptyTraceError("trace has no states");
  const std::size_t dim = trace.dim();
  std::vector<bool> ok(dim, true);
  if (trace.radix.precision() < 2) return ok;

  for (std::size_t k = 0; k < dim; ++k) {
    const auto& beta = trace.states.front().components[k].signs();
    const std::int64_t coupling = beta[1] * beta[2];
    std::int64_t sum = trace.digit(0, k, 1);
    for (std::size_t m = 0; m < trace.steps(); ++m) {
      const std::int64_t inc = trace.raw[m][k].digit(1) - trace.digit(m, k, 1);
      sum += inc + coupling * trace.carry(m, k, 2);
      if (trace.digit(m + 1, k, 1) != sum) {
        ok[k] = false;
        break;
      }
    }
  }
  return ok;
}

/// The hand-derived digit updates for system (4) at p = 3, written out term
/// by term. Requires the ansatz u = 1 - a1 tau + ..., v = b1 tau - ...
inline StepResult system4_explicit_step(const MachineState& state) {
  if (state.components.size() != 2) throw MixedRadixError("system (4) has two components");
  const TauNumber& u = state.components[0];
  const TauNumber& v = state.components[1];
  const TauRadix radix = u.radix();
  if (radix.precision() != 3) throw MixedRadixError("explicit update is written for p = 3");
  if (u.digit(0) != 1 || v.digit(0) != 0) throw RangeError("state left the u = 1 - a tau ansatz");
  const std::int64_t n = radix.base();

  const std::int64_t a1 = u.digit(1), a2 = u.digit(2), a3 = u.digit(3);
  const std::int64_t b1 = v.digit(1), b2 = v.digit(2), b3 = v.digit(3);

  StepResult out;
  out.state.step = state.step + 1;

  // u: raw digits and carries
  const std::vector<std::int64_t> ru{1, a1 + 1, a2 + 2 * a1, a3 - b1 * b1 + a1 * a1 + 2 * a2};
  const std::int64_t d3 = floor_div(ru[3], n);
  const std::int64_t s2u = ru[2] - d3;
  const std::int64_t d2 = floor_div(s2u, n);
  const std::int64_t s1u = ru[1] - d2;
  const std::int64_t d1 = floor_div(s1u, n);
  const std::int64_t s0u = ru[0] - d1;
  const std::int64_t d0 = floor_div(s0u, n);

  // v: raw digits and carries
  const std::vector<std::int64_t> rv{0, b1 + 1, b2 + 2 * a1 + 2 * b1, b3 + a1 * a1 + 2 * a2 + 2 * b2};
  const std::int64_t w3 = floor_div(rv[3], n);
  const std::int64_t s2v = rv[2] - w3;
  const std::int64_t w2 = floor_div(s2v, n);
  const std::int64_t s1v = rv[1] - w2;
  const std::int64_t w1 = floor_div(s1v, n);
  const std::int64_t s0v = rv[0] + w1;
  const std::int64_t w0 = floor_div(s0v, n);

  if (d0 != 0 || w0 != 0) throw RangeError("digit 0 overflow in explicit update");

  out.state.components.emplace_back(
      radix, u.signs(),
      std::vector<std::int64_t>{floor_mod(s0u, n), floor_mod(s1u, n), floor_mod(s2u, n), floor_mod(ru[3], n)});
  out.state.components.emplace_back(
      radix, v.signs(),
      std::vector<std::int64_t>{floor_mod(s0v, n), floor_mod(s1v, n), floor_mod(s2v, n), floor_mod(rv[3], n)});
  out.raw.emplace_back(radix, u.signs(), ru);
  out.raw.emplace_back(radix, v.signs(), rv);
  out.carries.push_back(CarryRecord{{d0, d1, d2, d3}, d0});
  out.carries.push_back(CarryRecord{{w0, w1, w2, w3}, w0});
  return out;
}

/// Digit and carry export for two-component systems. Row n holds the digits of
/// state n and the carries that produced it (zero on row 0). For p = 3 the
/// header is `n,a1,a2,a3,b1,b2,b3,d2,d3,w2,w3`.
inline void write_trace_csv(std::ostream& out, const StepTrace& trace) {
  if (trace.dim() != 2) throw RangeError("trace export supports two-component systems");
  const std::size_t len = trace.radix.size();

  out << "n";
  for (const char* name : {"a", "b"}) {
    for (std::size_t i = 1; i < len; ++i) out << ',' << name << i;
  }
  for (const char* name : {"d", "w"}) {
    for (std::size_t i = 2; i < len; ++i) out << ',' << name << i;
  }
  out << '\n';

  for (std::size_t n = 0; n < trace.states.size(); ++n) {
    out << n;
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t i = 1; i < len; ++i) out << ',' << trace.digit(n, k, i);
    }
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t i = 2; i < len; ++i) out << ',' << (n == 0 ? 0 : trace.carry(n - 1, k, i));
    }
    out << '\n';
  }
  out << "# N=" << trace.radix.base() << " p=" << trace.radix.precision() << " steps=" << trace.steps() << '\n';
}

}  // namespace tauca
