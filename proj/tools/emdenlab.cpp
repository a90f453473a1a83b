// emdenlab: command-line front end. Exit codes: 0 verified, 1 verification
// failed, 2 bad input. The last line on stdout is always the verdict.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "emden/format.hpp"
#include "emden/gauge.hpp"
#include "emden/invariants.hpp"
#include "emden/kernels.hpp"
#include "emden/problem_spec.hpp"
#include "emden/solutions.hpp"
#include "emden/vf_algebra.hpp"

using namespace emden;

namespace {

struct Verdict {
  bool pass = false;
  std::string metric;
  double value = 0.0;
};

int emit(const Verdict& v) {
  std::cout << "VERDICT: " << (v.pass ? "PASS" : "FAIL") << " " << v.metric << "=" << fmt(v.value) << "\n";
  return v.pass ? 0 : 1;
}

/// CSV goes to `path` when given, otherwise to stdout ahead of the verdict.
void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

gauge::Interval parse_interval(const std::string& s) {
  const auto sep = s.find_first_of(",:");
  if (sep == std::string::npos) throw InputError("interval must look like 't0,t1' (got '" + s + "')");
  gauge::Interval iv;
  try {
    std::size_t used = 0;
    const std::string lo = s.substr(0, sep), hi = s.substr(sep + 1);
    iv.t0 = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    iv.t1 = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
  } catch (const std::logic_error&) {
    throw InputError("interval must look like 't0,t1' (got '" + s + "')");
  }
  iv.validate();
  return iv;
}

// --- scheme-check ---------------------------------------------------------

int cmd_scheme_check() {
  const auto w = vf::emden_w_basis();
  const auto v = vf::emden_v_basis();
  const auto report = vf::verify_scheme(w, v);
  for (const auto& f : v) std::cout << f.name << " = " << f.field.str() << "\n";
  for (const auto& f : w) std::cout << f.name << " = " << f.field.str() << "\n";
  for (const auto& rel : report.relations)
    std::cout << rel.lhs << " = " << (rel.in_span ? rel.rendered : "NOT IN SPAN: " + rel.value.str()) << "\n";
  if (report.failure) std::cout << "failure: " << *report.failure << "\n";

  const std::map<std::string, std::string> expected{
      {"[Y1,Y2]", "-Y2"}, {"[Y1,Y3]", "0"},      {"[Y2,Y3]", "-Y2"},
      {"[Y1,X2]", "-X2"}, {"[Y1,X3]", "X3"},     {"[Y2,X2]", "0"},
      {"[Y2,X3]", "-X4 + X5"}, {"[Y3,X2]", "n X2"}, {"[Y3,X3]", "-X3"}};
  std::size_t mismatches = report.ok ? 0 : 1;
  for (const auto& rel : report.relations) {
    const auto it = expected.find(rel.lhs);
    if (it != expected.end() && it->second != rel.rendered) {
      std::cout << "mismatch: " << rel.lhs << " expected " << it->second << "\n";
      ++mismatches;
    }
  }
  return emit({mismatches == 0, "mismatches", static_cast<double>(mismatches)});
}

// --- integrate ------------------------------------------------------------

int cmd_integrate(const std::string& spec_path, const std::string& output) {
  const ProblemSpec spec = load_spec(spec_path);
  const auto traj = spec.integrate();
  write_output(ode::to_csv(traj), output);
  std::cerr << "accepted steps " << traj.accepted_steps() << ", rejected " << traj.rejected_steps() << "\n";
  return emit({true, "samples", static_cast<double>(traj.times().size())});
}

// --- invariant ------------------------------------------------------------

struct InvariantOptions {
  std::string method;
  std::string solution;
  std::string output;
  double condition_tol = 1e-8;
};

int cmd_invariant(const std::string& spec_path, const InvariantOptions& opt) {
  const ProblemSpec spec = load_spec(spec_path);
  const auto prob = spec.emden();
  const auto& iv = spec.interval;
  const double inner = spec.inner_lower.value_or(iv.t0);
  const double outer = spec.outer_lower.value_or(iv.t0);

  auto solution = [&]() {
    if (opt.solution.empty()) throw InputError("method '" + opt.method + "' needs --solution <expr>");
    return SmoothFn::parse(opt.solution, spec.params);
  };
  auto condition_failed = [](const gauge::ConditionReport& c) {
    std::cerr << "condition is not constant on the interval: K ~ " << fmt(c.K) << ", variation "
              << fmt(c.variation) << "\n";
    return emit({false, "condition_variation", c.variation});
  };

  std::optional<inv::Invariant> invariant;
  if (opt.method.rfind("particular", 0) == 0) {
    if (opt.method == "particular") {
      invariant = inv::invariant_from_particular_solution(prob, solution(), iv);
    } else if (opt.method.rfind("particular:", 0) == 0) {
      if (!opt.solution.empty()) throw InputError("give either particular:<id> or --solution, not both");
      const auto it = spec.params.find("K");
      const auto entries = sol::catalog(it == spec.params.end() ? 1.0 : it->second);
      const auto& entry = sol::find(entries, opt.method.substr(11));
      invariant = inv::invariant_from_particular_solution(prob, entry.xp, iv);
    } else {
      throw InputError("unknown method '" + opt.method + "'");
    }
  } else if (opt.method == "generic") {
    const auto red = gauge::reduce_via_particular_solution(prob, solution(), iv);
    const auto& s = red.system;
    invariant = inv::pull_back(inv::generic_first_integral(s.c11, s.c12, s.c21, s.c22, s.cx, s.n), red.gauge,
                               "generic");
  } else if (opt.method == "s7a") {
    auto r = inv::exp_gauge_invariant(prob, iv, inner, opt.condition_tol);
    if (!r.invariant) return condition_failed(r.condition);
    invariant = std::move(r.invariant);
  } else if (opt.method == "s7b") {
    auto r = inv::sqrt_gauge_invariant(prob, iv, inner, outer, opt.condition_tol);
    if (!r.invariant) return condition_failed(r.condition);
    invariant = std::move(r.invariant);
  } else {
    throw InputError("unknown method '" + opt.method + "' (particular:<id>, particular, generic, s7a, s7b)");
  }

  const auto traj = spec.integrate();
  const auto report = inv::drift(*invariant, traj, spec.drift_threshold);
  write_output(report.to_csv(), opt.output);
  return emit({report.conserved, "relative_drift", report.relative_drift});
}

// --- kummer-liouville -----------------------------------------------------

int cmd_kummer_liouville(const std::string& spec_path, const std::string& output) {
  const ProblemSpec spec = load_spec(spec_path);
  const auto prob = spec.generalized();
  const auto z0 = spec.initial_state();
  const auto kl = gauge::kummer_liouville(prob, spec.gamma_init, spec.interval, spec.integrator);

  std::string csv = "t,gamma,beta,tau,F\n";
  for (double t : ode::linspace(spec.interval.t0, spec.interval.t1, spec.samples))
    csv += fmt(t) + "," + fmt(kl.gauge.gamma(t)) + "," + fmt(kl.gauge.beta(t)) + "," + fmt(kl.tau(t)) + "," +
           fmt(kl.canonical(t)) + "\n";
  write_output(csv, output);

  const auto check = gauge::verify_canonical(prob, kl, z0);
  std::cerr << "canonical form d2x'/dtau2 = F(tau) x'^n: max residual " << fmt(check.max_residual)
            << ", first-order mismatch " << fmt(check.max_first_order) << " over " << check.samples << " samples\n";
  return emit({check.pass, "canonical_residual", check.max_residual});
}

// --- reduce ---------------------------------------------------------------

int cmd_reduce(const std::string& spec_path, const std::string& solution) {
  const ProblemSpec spec = load_spec(spec_path);
  const auto prob = spec.emden();
  const auto red = gauge::reduce_via_particular_solution(prob, SmoothFn::parse(solution, spec.params), spec.interval);
  std::cout << gauge::render(red);
  if (!spec.x0 || !spec.v0) {
    double worst = 0.0;
    for (const auto& [name, value] : red.checks) worst = std::max(worst, value);
    return emit({true, "max_check", worst});
  }
  const auto g = gauge::verify_gstar(spec.system(), red.gauge, spec.initial_state(), spec.interval, spec.integrator);
  std::cout << "gauge push check: discrepancy " << fmt(g.discrepancy) << " (threshold " << fmt(g.threshold)
            << ", " << g.samples << " samples)\n";
  return emit({g.pass, "gstar_discrepancy", g.discrepancy});
}

// --- superpose ------------------------------------------------------------

int cmd_superpose(const std::string& x1_src, double K, const std::string& interval, std::size_t samples,
                  const std::string& output) {
  const gauge::Interval iv = parse_interval(interval);
  if (samples < 2) throw InputError("--samples must be at least 2");
  const SmoothFn x1 = SmoothFn::parse(x1_src);
  const auto ts = ode::linspace(iv.t0, iv.t1, samples);
  write_output(sol::superpose_csv(x1.value, K, ts), output);

  // The result should solve Lane-Emden n = 5 whenever x1 does. Derivatives
  // by finite differences, skipping samples near a fold of the square root.
  const auto x0 = SmoothFn::finite_difference(TimeFn([x1, K](double t) { return sol::superpose(x1(t), t, K); },
                                                     "x0"));
  const auto le = sol::lane_emden(5.0);
  const auto residual = kernels::sample(ts, [&](double t) {
    const double x = x1(t);
    const double rad = 1.0 - 4.0 * t * t * x * x * x * x / 3.0;
    if (std::sqrt(std::max(rad, 0.0)) < 1e-2 || t <= 0.0) return 0.0;
    const double r = x0.second(t) - le.a(t) * x0.first(t) - le.b(t) * std::pow(x0.value(t), 5.0);
    return std::abs(r) / std::max(1.0, std::abs(x0.second(t)));
  });
  const auto worst = kernels::max_abs(residual);
  std::cerr << "Lane-Emden n=5 residual of the superposed solution: " << fmt(worst.value) << " at t="
            << fmt(ts[worst.index]) << "\n";
  return emit({worst.value < 1e-6, "lane_emden_residual", worst.value});
}

// --- construct ------------------------------------------------------------

int cmd_construct(double n, double K, const std::string& branch_name, const std::string& output) {
  sol::Branch branch;
  if (branch_name == "literal") branch = sol::Branch::Literal;
  else if (branch_name == "decreasing") branch = sol::Branch::Decreasing;
  else throw InputError("--branch must be 'literal' or 'decreasing'");

  const auto entry = sol::construct_equation(n, K, branch);
  ProblemSpec spec;
  spec.kind = ProblemSpec::Kind::Emden;
  spec.n = n;
  spec.a = "m/(2*(K + c*t))";
  spec.b = "-1";
  for (const auto& name : {"K", "c", "m"}) spec.params[name] = entry.parameters.at(name);
  spec.singular_points = entry.problem.singular_points;
  spec.interval = entry.validity;
  spec.x0 = entry.xp(entry.validity.t0);
  spec.v0 = entry.xp.first(entry.validity.t0);

  std::string text;
  std::istringstream manifest(sol::manifest({entry}));
  for (std::string line; std::getline(manifest, line);) text += "# " + line + "\n";
  text += spec.str();
  write_output(text, output);

  const auto res = sol::verify_solution(entry.problem, entry.xp, entry.validity, {100, 1e-10, {}});
  const double ic2 = sol::intcond2_error(entry.xp, n, entry.validity, 100);
  std::cerr << "residual " << fmt(res.max_abs) << " (worst t=" << fmt(res.worst_t) << "), intcond2 error "
            << fmt(ic2) << "\n";
  return emit({res.max_abs < 1e-10 && ic2 < 1e-12, "residual", res.max_abs});
}

// --- catalog --------------------------------------------------------------

int cmd_catalog(double K) {
  const auto entries = sol::catalog(K);
  std::cout << sol::manifest(entries);
  return emit({true, "entries", static_cast<double>(entries.size())});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emden-equation toolkit: gauge reductions, invariants and exact solutions"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("-j,--jobs", jobs, "worker threads for the parallel kernels (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  std::string spec_path, output, solution, interval, branch = "literal", x1;
  InvariantOptions inv_opt;
  double K = 1.0, n = 0.0;
  std::size_t samples = 200;

  auto* scheme = app.add_subcommand("scheme-check", "verify the commutator relations of the two generator bases");

  auto* integrate = app.add_subcommand("integrate", "integrate a spec and print t,x,v");
  integrate->add_option("spec", spec_path, "problem file")->required();
  integrate->add_option("-o,--output", output, "write the CSV here instead of stdout");

  auto* invariant = app.add_subcommand("invariant", "evaluate an invariant along the trajectory and report drift");
  invariant->add_option("spec", spec_path, "problem file")->required();
  invariant->add_option("--method", inv_opt.method, "particular:<id> | particular | generic | s7a (exp gauge) | s7b (sqrt gauge)")
      ->required();
  invariant->add_option("--solution", inv_opt.solution, "particular solution x_p(t)");
  invariant->add_option("--condition-tol", inv_opt.condition_tol, "relative tolerance on the constancy conditions");
  invariant->add_option("-o,--output", inv_opt.output, "write the CSV here instead of stdout");

  auto* kl = app.add_subcommand("kummer-liouville", "gauge a generalized equation to canonical form");
  kl->add_option("spec", spec_path, "problem file")->required();
  kl->add_option("-o,--output", output, "write the CSV here instead of stdout");

  auto* reduce = app.add_subcommand("reduce", "reduce to a Lie system via a particular solution");
  reduce->add_option("spec", spec_path, "problem file")->required();
  reduce->add_option("--solution", solution, "particular solution x_p(t)")->required();

  auto* superpose = app.add_subcommand("superpose", "apply the n=5 superposition rule along x1");
  superpose->add_option("--x1", x1, "Lane-Emden n=5 solution x1(t)")->required();
  superpose->add_option("--K", K, "superposition constant")->required();
  superpose->add_option("interval", interval, "t0,t1")->required();
  superpose->add_option("--samples", samples, "number of samples");
  superpose->add_option("-o,--output", output, "write the CSV here instead of stdout");

  auto* construct = app.add_subcommand("construct", "build an equation with a known solution of xdot^2 = x^(n+1)");
  construct->add_option("--n", n, "exponent")->required();
  construct->add_option("--K", K, "shift of the base")->required();
  construct->add_option("--branch", branch, "literal | decreasing");
  construct->add_option("-o,--output", output, "write the spec here instead of stdout");

  auto* catalog = app.add_subcommand("catalog", "list the built-in exact solutions");
  catalog->add_option("--K", K, "shift parameter of the shifted entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cout << "VERDICT: FAIL input_error=1\n";
    return 2;
  }

  try {
    kernels::set_threads(jobs);
    if (scheme->parsed()) return cmd_scheme_check();
    if (integrate->parsed()) return cmd_integrate(spec_path, output);
    if (invariant->parsed()) return cmd_invariant(spec_path, inv_opt);
    if (kl->parsed()) return cmd_kummer_liouville(spec_path, output);
    if (reduce->parsed()) return cmd_reduce(spec_path, solution);
    if (superpose->parsed()) return cmd_superpose(x1, K, interval, samples, output);
    if (construct->parsed()) return cmd_construct(n, K, branch, output);
    if (catalog->parsed()) return cmd_catalog(K);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    std::cout << "VERDICT: FAIL input_error=1\n";
    return 2;
  } catch (const ode::IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    std::cout << "VERDICT: FAIL t_reached=" << fmt(e.t_reached()) << "\n";
    return 1;
  } catch (const ConditionError& e) {
    std::cerr << "condition violated: " << e.what() << "\n";
    std::cout << "VERDICT: FAIL condition=0\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    std::cout << "VERDICT: FAIL domain=0\n";
    return 1;
  }
  return 2;
}
