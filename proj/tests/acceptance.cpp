// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "emden/algebraic.hpp"
#include "emden/format.hpp"
#include "emden/gauge.hpp"
#include "emden/invariants.hpp"
#include "emden/solutions.hpp"
#include "emden/vf_algebra.hpp"

using namespace emden;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Collects named measurements; the criterion passes when every one does.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!ok) failures_ += (failures_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome result() const { return {pass_, pass_ ? notes_ : "failed: " + failures_ + " | " + notes_}; }

 private:
  bool pass_ = true;
  std::string failures_;
  std::string notes_;
};

std::string sci(double v) { return fmt(v, 3); }

double relative_spread(const std::vector<double>& xs) {
  double lo = xs.front(), hi = xs.front();
  for (double x : xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return (hi - lo) / std::max(std::abs(lo), std::abs(hi));
}

Outcome scheme_tables() {
  Checks c;
  const auto report = vf::verify_scheme(vf::emden_w_basis(), vf::emden_v_basis());
  const std::map<std::string, std::string> expected{
      {"[Y1,Y2]", "-Y2"}, {"[Y1,Y3]", "0"},       {"[Y2,Y3]", "-Y2"},
      {"[Y1,X2]", "-X2"}, {"[Y1,X3]", "X3"},      {"[Y2,X2]", "0"},
      {"[Y2,X3]", "-X4 + X5"}, {"[Y3,X2]", "n X2"}, {"[Y3,X3]", "-X3"}};
  std::size_t matched = 0;
  for (const auto& rel : report.relations) {
    const auto it = expected.find(rel.lhs);
    if (it == expected.end()) continue;
    c.expect(rel.in_span && rel.rendered == it->second, rel.lhs + " = " + rel.rendered);
    ++matched;
  }
  c.expect(report.ok, "scheme inclusions");
  c.expect(matched == expected.size(), "relations missing");
  c.note(std::to_string(matched) + "/9 relations exact");
  return c.result();
}

Outcome particular_expansion() {
  Checks c;
  const alg::PowerLaw xp{alg::AlgebraicScalar::power(2, Rational(-1, 2)), Rational(-1, 2), Rational(1)};
  const auto got = alg::particular_invariant(xp, Rational(5));
  alg::Expansion want;
  want.add(Rational(4, 3), {3, 6, 0});
  want.add(Rational(4), {3, 0, 2});
  want.add(Rational(4), {2, 1, 1});
  const auto residual = got - want;
  c.expect(residual.is_zero(), "residual " + residual.str("t"));
  c.note("I = " + got.str("t"));
  return c.result();
}

Outcome drift_suite() {
  Checks c;
  const auto entries = sol::catalog(1.0);
  const gauge::Interval iv{0.5, 5.0};
  ode::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  for (const char* id : {"lane_emden_n5", "emden_n2", "emden_n9", "emden_n7", "powerlaw_n3"}) {
    const auto& e = sol::find(entries, id);
    const auto I = inv::invariant_from_particular_solution(e.problem, e.xp, iv);
    const auto traj = ode::integrate<2>(gauge::SchemeSystem::from(e.problem).rhs(), iv.t0, {1.3, -0.2}, iv.t1, cfg,
                                        ode::linspace(iv.t0, iv.t1, 500));
    const auto d = inv::drift(I, traj, 1e-6);
    c.expect(d.conserved, std::string(id) + " drift " + sci(d.relative_drift));
    c.note(std::string(id) + " " + sci(d.relative_drift));
  }
  return c.result();
}

Outcome zero_level() {
  Checks c;
  const auto le = sol::lane_emden(5.0);
  const auto I = inv::invariant_from_particular_solution(le, SmoothFn::parse("(2*t)^(-1/2)"), {0.1, 10});
  const auto x = SmoothFn::parse("(1+t^2/3)^(-1/2)");
  ode::IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const auto traj = ode::integrate<2>(gauge::SchemeSystem::from(le).rhs(), 0.1, {x(0.1), x.first(0.1)}, 10.0, cfg,
                                      ode::linspace(0.1, 10, 100));
  double worst = 0.0, worst_x = 0.0;
  for (const auto& s : ode::samples(traj)) {
    worst = std::max(worst, std::abs(I(s.t, s.x, s.v)));
    worst_x = std::max(worst_x, std::abs(s.x - x(s.t)));
  }
  c.expect(worst < 1e-8, "max |I| " + sci(worst));
  c.note("max |I| " + sci(worst) + " over 100 samples, trajectory error " + sci(worst_x));
  return c.result();
}

Outcome superposition_family() {
  Checks c;
  const auto x1 = SmoothFn::parse("(1+t^2/3)^(-1/2)");
  const auto k1 = sol::k_family(1.0);
  double id_err = 0.0;
  for (double t : ode::linspace(0.1, 50, 1000)) id_err = std::max(id_err, std::abs(k1(t) - x1(t)));
  c.expect(id_err < 1e-12, "k_family(1) differs by " + sci(id_err));
  double worst_res = 0.0, worst_sup = 0.0, worst_tail = 0.0;
  for (double K : {0.25, 0.5, 2.0, 4.0}) {
    const auto kf = sol::k_family(K);
    sol::ResidualOptions opt;
    opt.threshold = 1e-8;
    opt.excluded = {{std::sqrt(3.0) - 1e-6, std::sqrt(3.0) + 1e-6}};
    const auto r = sol::verify_solution(sol::lane_emden(5.0), kf, {0.1, 50}, opt);
    c.expect(r.pass, "residual K=" + fmt(K) + " " + sci(r.max_abs));
    worst_res = std::max(worst_res, r.max_abs);
    for (double t : ode::linspace(0.1, 50, 1000)) {
      if (std::abs(t - std::sqrt(3.0)) < 1e-3) continue;
      worst_sup = std::max(worst_sup, std::abs(sol::superpose(k1(t), t, K) - kf(t)));
    }
    worst_tail = std::max(worst_tail, kf(1e3));
  }
  c.expect(worst_sup < 1e-12, "superpose vs k_family " + sci(worst_sup));
  c.expect(worst_tail < 1e-2, "x0(1000) = " + sci(worst_tail));
  c.note("identity " + sci(id_err) + ", residual " + sci(worst_res) + ", superpose " + sci(worst_sup) +
         ", x0(1000) <= " + sci(worst_tail));
  return c.result();
}

Outcome kummer_liouville() {
  Checks c;
  const double n = 5.0;
  const gauge::GeneralizedProblem prob{TimeFn::parse("2/t"), TimeFn::constant(0.0), TimeFn::constant(1.0), n, {0.0}};
  const gauge::Interval iv{1.0, 5.0};
  const auto kl = gauge::kummer_liouville(prob, {1.0, -1.0}, iv);
  std::vector<double> gt, bt, ft;
  double gb = 0.0;
  for (double t : ode::linspace(iv.t0, iv.t1, 100)) {
    gt.push_back(kl.gauge.gamma(t) * t);
    bt.push_back(kl.gauge.beta(t) * t);
    ft.push_back(kl.canonical(t) / std::pow(t, 1.0 - n));
    gb = std::max(gb, std::abs(kl.gauge.gamma(t) / kl.gauge.beta(t) - 1.0));
  }
  const double sg = relative_spread(gt), sb = relative_spread(bt), sf = relative_spread(ft);
  c.expect(sg < 1e-9 && sb < 1e-9, "gamma t, beta t spread " + sci(sg) + ", " + sci(sb));
  c.expect(gb < 1e-9, "gamma/beta - 1 = " + sci(gb));
  c.expect(sf < 1e-9, "canonical coefficient / t^(1-n) spread " + sci(sf));
  const auto chk = gauge::verify_canonical(prob, kl, {0.5, 0.0});
  c.expect(chk.pass && chk.max_residual < 1e-6, "canonical residual " + sci(chk.max_residual));
  c.note("gamma t spread " + sci(sg) + ", F t^(n-1) spread " + sci(sf) + ", canonical residual " +
         sci(chk.max_residual));
  return c.result();
}

Outcome time_dependent_invariants() {
  Checks c;
  ode::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  auto run = [&](const std::string& label, const gauge::EmdenProblem& prob, const gauge::Interval& iv,
                 std::array<double, 2> z0, const inv::ConditionalInvariant& r) {
    c.expect(r.invariant.has_value(), label + " condition rejected (variation " + sci(r.condition.variation) + ")");
    if (!r.invariant) return;
    const auto traj = ode::integrate<2>(gauge::SchemeSystem::from(prob).rhs(), iv.t0, z0, iv.t1, cfg,
                                        ode::linspace(iv.t0, iv.t1, 300));
    const auto d = inv::drift(*r.invariant, traj, 1e-6);
    c.expect(d.conserved, label + " drift " + sci(d.relative_drift));
    c.note(label + " " + sci(d.relative_drift));
  };
  expr::Bindings K{{"K", -0.8}};
  {
    // a = 0, b matched to the nested integral with lower limit 0
    const gauge::EmdenProblem prob{TimeFn::constant(0.0), TimeFn::parse("K*(2*t)^(-4)", K), 5.0, {0.0}};
    const gauge::Interval iv{1, 10};
    run("a=0 matched b", prob, iv, {0.7, 0.1}, inv::sqrt_gauge_invariant(prob, iv, 0.0, 0.0));
  }
  {
    const gauge::EmdenProblem prob{TimeFn::constant(0.0), TimeFn::constant(0.5), -3.0, {}};
    const gauge::Interval iv{0, 3};
    run("n=-3 b=K second", prob, iv, {1.0, 0.3}, inv::sqrt_gauge_invariant(prob, iv, 0.0, 0.0));
    run("n=-3 b=K first", prob, iv, {1.0, 0.3}, inv::exp_gauge_invariant(prob, iv, 0.0));
  }
  {
    const auto le = sol::lane_emden(5.0);
    const auto r = inv::exp_gauge_invariant(le, {0.5, 5}, 0.5);
    c.expect(!r.condition.holds && !r.invariant, "a=-2/t, b=-1 should fail the first condition");
    c.note("a=-2/t b=-1 rejected, variation " + sci(r.condition.variation));
  }
  return c.result();
}

Outcome gauge_correspondence() {
  Checks c;
  const auto le = sol::lane_emden(5.0);
  const gauge::Interval iv{0.5, 5};
  const auto red = gauge::reduce_via_particular_solution(le, SmoothFn::parse("(2*t)^(-1/2)"), iv);
  const auto g = gauge::verify_gstar(gauge::SchemeSystem::from(le), red.gauge, {1.3, -0.2}, iv);
  c.expect(g.discrepancy < 1e-6, "discrepancy " + sci(g.discrepancy));
  c.note("sup discrepancy " + sci(g.discrepancy) + " over " + std::to_string(g.samples) + " samples");
  return c.result();
}

Outcome third_integral() {
  Checks c;
  ode::IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  double worst = 0.0;
  for (auto [sigma, tend] : {std::pair{1, 0.4}, {-1, 2.0}}) {
    const double a = 0.9, b = 0.6;
    const ode::State<4> z0{a, sol::zero_level_velocity(a, sigma), b, sol::zero_level_velocity(b, sigma)};
    const auto traj = ode::integrate<4>(sol::coupled_field(), 0, z0, tend, cfg, ode::linspace(0, tend, 200));
    const double K0 = sol::third_integral(z0[0], z0[1], z0[2], z0[3]);
    for (const auto& z : traj.states()) {
      c.expect(sol::zero_level_branch(z[0], z[1]) == sigma && sol::zero_level_branch(z[2], z[3]) == sigma,
               "trajectory left its branch");
      worst = std::max(worst, std::abs(sol::third_integral(z[0], z[1], z[2], z[3]) - K0) / std::abs(K0));
    }
  }
  c.expect(worst < 1e-7, "relative variation " + sci(worst));
  bool rejected = false;
  try {
    sol::third_integral(0.8, 0.0, 0.7, sol::zero_level_velocity(0.7, 1));
  } catch (const DomainError&) {
    rejected = true;
  }
  c.expect(rejected, "off-level input accepted");
  c.note("relative variation " + sci(worst) + ", off-level input rejected");
  return c.result();
}

Outcome inverse_construction() {
  Checks c;
  for (double n : {2.0, 5.0, 7.0, 9.0}) {
    const auto e = sol::construct_equation(n, 1.0);
    sol::ResidualOptions opt;
    opt.threshold = 1e-10;
    const auto r = sol::verify_solution(e.problem, e.xp, e.validity, opt);
    const double ic = sol::intcond2_error(e.xp, n, e.validity);
    c.expect(r.pass, "n=" + fmt(n) + " residual " + sci(r.max_abs));
    c.expect(ic < 1e-12, "n=" + fmt(n) + " intcond2 " + sci(ic));
    c.note("n=" + fmt(n) + " " + sci(r.max_abs) + "/" + sci(ic));
  }
  return c.result();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "scheme tables", 1.0, scheme_tables},
      {2, "particular-solution invariant expansion", 1.0, particular_expansion},
      {3, "drift suite over the catalog", 10.0, drift_suite},
      {4, "zero-level solution", 0.0, zero_level},
      {5, "superposition family", 10.0, superposition_family},
      {6, "Kummer-Liouville canonical form", 0.0, kummer_liouville},
      {7, "time-dependent invariants", 0.0, time_dependent_invariants},
      {8, "gauge correspondence of trajectories", 0.0, gauge_correspondence},
      {9, "third integral", 0.0, third_integral},
      {10, "inverse construction round trip", 0.0, inverse_construction},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_s > 0.0 && secs > cr.budget_s) {
      out.pass = false;
      out.detail += " | over the " + fmt(cr.budget_s, 3) + " s budget";
    }
    if (!out.pass) ++failed;
    std::printf("%s criterion %2d  %-40s %7.3f s  %s\n", out.pass ? "PASS" : "FAIL", cr.id, cr.name, secs,
                out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
