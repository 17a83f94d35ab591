// tauca: command-line driver for the tau-machine, the averaged solver, the
// reference integrators and the statistics harness. Every subcommand writes
// CSV (header row, '#' metadata footer) to --out or to stdout.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tauca/tauca.hpp"

namespace {

struct UsageError : tauca::Error {
  using tauca::Error::Error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

std::vector<double> uniform_grid(double t_max, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tau-radix machine and averaged carry solver for du/dt = v^2 - u^2, dv/dt = u^2 - 2v"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");

  std::int64_t radix = 100;
  std::vector<std::int64_t> radices{100, 200, 400};
  int precision = 3;
  std::size_t steps = 100;
  std::int64_t a_max = -1;
  double t_max = -1.0;
  double h = 1e-5;
  int grid_points = 51;
  std::string variant_name = "full";
  std::string out_path;
  std::string limit_path;
  std::uint64_t seed = 1, lcg_b = 16807, lcg_c = 0, lcg_p = 2147483647;
  std::size_t count = 1000000;

  auto* trace = app.add_subcommand("trace", "run the tau-machine and export digits and carries");
  trace->add_option("--N", radix, "radix N = 1/tau")->capture_default_str();
  trace->add_option("--p", precision, "highest retained power of tau")->capture_default_str();
  trace->add_option("--steps", steps, "number of scheme steps")->capture_default_str();
  trace->add_option("--out", out_path, "output CSV (default stdout)");

  auto* ca = app.add_subcommand("ca", "averaged solver curve (a, n_a, t, u, v)");
  ca->add_option("--N", radix, "radix N = 1/tau")->capture_default_str();
  ca->add_option("--a-max", a_max, "last layer index (default: run to --t-max)");
  ca->add_option("--t-max", t_max, "stop at the first layer with t >= t-max");
  ca->add_option("--variant", variant_name, "full | closed | asymptotic")->capture_default_str();
  ca->add_option("--out", out_path, "output CSV (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "RK4 reference trajectory (t, u, v)");
  oracle->add_option("--t-max", t_max, "end time (default 2)");
  oracle->add_option("--h", h, "RK4 step")->capture_default_str();
  oracle->add_option("--out", out_path, "output CSV (default stdout)");

  auto* compare = app.add_subcommand("compare", "averaged curves vs RK4 over several N, plus the tau -> 0 limit");
  compare->add_option("--N", radices, "comma-separated radices")->delimiter(',')->capture_default_str();
  compare->add_option("--t-max", t_max, "comparison horizon (default 0.5)");
  compare->add_option("--variant", variant_name, "full | closed | asymptotic")->capture_default_str();
  compare->add_option("--h", h, "RK4 step of the reference")->capture_default_str();
  compare->add_option("--grid-points", grid_points, "time grid size for the extrapolated limit")->capture_default_str();
  compare->add_option("--out", out_path, "error report CSV (default stdout)");
  compare->add_option("--limit-out", limit_path, "extrapolated limit curve CSV");

  auto* lln = app.add_subcommand("lln", "carry averaging error vs n (defaults N=100, 10000 steps)");
  lln->add_option("--N", radix, "radix N = 1/tau")->capture_default_str();
  lln->add_option("--p", precision, "highest retained power of tau")->capture_default_str();
  lln->add_option("--steps", steps, "trace length");
  lln->add_option("--out", out_path, "output CSV (default stdout)");

  auto* rng = app.add_subcommand("rng-stats", "mean and variance of a normalized LCG stream");
  rng->add_option("--seed", seed)->capture_default_str();
  rng->add_option("--lcg-b", lcg_b, "multiplier")->capture_default_str();
  rng->add_option("--lcg-c", lcg_c, "increment")->capture_default_str();
  rng->add_option("--lcg-p", lcg_p, "modulus")->capture_default_str();
  rng->add_option("--count", count)->capture_default_str();
  rng->add_option("--out", out_path, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tauca: " << e.what() << '\n';
    return 2;
  }

  try {
    std::ostringstream text;

    if (trace->parsed()) {
      require(radix >= 2, "--N must be >= 2");
      require(precision >= 1, "--p must be >= 1");
      const auto sys = tauca::system4(precision);
      tauca::write_trace_csv(text, tauca::run(sys, tauca::TauRadix(radix, precision), steps));
    } else if (ca->parsed()) {
      require(radix >= 2, "--N must be >= 2");
      const auto variant = tauca::parse_variant(variant_name);
      require(a_max >= 0 || t_max >= 0.0, "ca needs --a-max or --t-max");
      const auto curve = a_max >= 0 ? tauca::solve(a_max, radix, variant) : tauca::solve_to_time(t_max, radix, variant);
      tauca::write_curve_csv(text, curve);
    } else if (oracle->parsed()) {
      if (t_max < 0.0) t_max = 2.0;
      require(h > 0.0, "--h must be positive");
      tauca::write_trajectory_csv(text, tauca::rk4_solve<double>(tauca::system4(), t_max, h));
    } else if (compare->parsed()) {
      if (t_max < 0.0) t_max = 0.5;
      require(t_max > 0.0, "--t-max must be positive");
      require(h > 0.0, "--h must be positive");
      require(grid_points >= 2, "--grid-points must be >= 2");
      require(!radices.empty(), "--N needs at least one radix");
      for (auto n : radices) require(n >= 2, "every --N must be >= 2");
      const auto variant = tauca::parse_variant(variant_name);

      std::vector<std::future<tauca::CaCurve>> jobs;
      for (auto n : radices) {
        jobs.push_back(std::async(std::launch::async, [=] { return tauca::solve_to_time(t_max, n, variant); }));
      }
      const auto ref = tauca::rk4_solve<double>(tauca::system4(), t_max, h);
      std::vector<tauca::CaCurve> curves;
      for (auto& j : jobs) curves.push_back(j.get());

      tauca::ErrorReport report;
      for (const auto& c : curves) {
        report.xs.push_back(static_cast<double>(c.radix));
        report.errors.push_back(tauca::curve_error(c, ref, t_max));
      }
      tauca::fit_report(report);
      tauca::write_report_csv(text, report);

      if (curves.size() >= 2) {
        const auto grid = uniform_grid(t_max, grid_points);
        const auto limit = tauca::limit_extrapolate(curves, grid);
        const double limit_err = tauca::grid_error(limit, ref);
        std::cerr << "exponent=" << tauca::csv::format(report.exponent)
                  << " limit_error=" << tauca::csv::format(limit_err) << '\n';
        if (!limit_path.empty()) {
          std::ostringstream lt;
          lt << "t,u,v\n";
          for (std::size_t i = 0; i < limit.grid.size(); ++i) tauca::csv::row(lt, limit.grid[i], limit.u[i], limit.v[i]);
          lt << "# error=" << tauca::csv::format(limit_err) << '\n';
          emit(limit_path, lt.str());
        }
      }
    } else if (lln->parsed()) {
      require(radix >= 2, "--N must be >= 2");
      require(precision >= 2, "--p must be >= 2 for carry averaging");
      if (lln->count("--steps") == 0) steps = 10000;
      require(steps >= 1, "--steps must be >= 1");
      const auto tr = tauca::run(tauca::system4(precision), tauca::TauRadix(radix, precision), steps);
      const auto rep = tauca::lln_error(tr);
      tauca::write_report_csv(text, rep.report);
      text << "# bound_constant=" << tauca::csv::format(rep.bound_constant) << " zero_points=" << rep.zero_points
           << '\n';
    } else if (rng->parsed()) {
      require(count >= 2, "--count must be >= 2");
      const tauca::LcgParams params{lcg_b, lcg_c, lcg_p, seed};
      params.validate();
      const auto xs = tauca::normalize(tauca::lcg_stream(params, count), lcg_p);
      const auto m = tauca::moment_stats(xs);
      text << "statistic,value,ideal\n";
      tauca::csv::row(text, "mean", m.mean, 0.5);
      tauca::csv::row(text, "variance", m.variance, 1.0 / 12.0);
      text << "# count=" << count << '\n';
    }

    emit(out_path, text.str());
  } catch (const UsageError& e) {
    std::cerr << "tauca: usage: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tauca: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
