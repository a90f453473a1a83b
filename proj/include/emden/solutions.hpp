#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emden/algebraic.hpp"
#include "emden/gauge.hpp"

namespace emden::sol {

/// Exact particular solutions of the power-law type carry a symbolic form so
/// the invariant they generate can be expanded exactly.
struct SymbolicForm {
  alg::PowerLaw xp;           // x_p = C w^e, w affine in t
  Rational n;
  std::string w;              // how w depends on t, e.g. "t + K"
  alg::Expansion reference;   // the expected invariant, up to a constant factor
};

struct CatalogEntry {
  std::string id;
  gauge::EmdenProblem problem;
  SmoothFn xp;
  std::map<std::string, double> parameters;
  gauge::Interval validity;
  bool intcond2 = false;  // xdot_p^2 = x_p^(n+1) is claimed
  std::string equation;
  std::string solution;
  std::string reference;
  std::optional<SymbolicForm> symbolic;
};

struct ResidualReport {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double worst_t = 0.0;
  double threshold = 1e-9;
  std::size_t samples = 0;
  bool pass = false;
};

struct ResidualOptions {
  std::size_t samples = 1000;
  double threshold = 1e-9;
  std::vector<std::pair<double, double>> excluded;  // open windows skipped by the grid
};

/// |xdd - a xd - b x^n| over a grid of the interval.
ResidualReport verify_solution(const gauge::EmdenProblem& prob, const SmoothFn& x, const gauge::Interval& iv,
                               const ResidualOptions& opt = {});
/// |xdd + p xd + q x - r x^n| over a grid of the interval.
ResidualReport verify_solution(const gauge::GeneralizedProblem& prob, const SmoothFn& x, const gauge::Interval& iv,
                               const ResidualOptions& opt = {});

/// max relative error of xdot_p^2 = x_p^(n+1) over the grid.
double intcond2_error(const SmoothFn& xp, double n, const gauge::Interval& iv, std::size_t samples = 200);

enum class Branch {
  Literal,     // (K + (1-n) t/2)^(-2/(n-1)), increasing in t
  Decreasing,  // (K + (n-1) t/2)^(-2/(n-1)), its time reversal
};

/// Solutions of xdot^2 = x^(n+1). The base must be positive unless the
/// exponent -2/(n-1) is an integer.
SmoothFn intcond2_family(double n, double K, Branch branch = Branch::Literal);

/// Interval on which the intcond2 base runs through [0.5, 2].
gauge::Interval intcond2_interval(double n, double K, Branch branch = Branch::Literal);

/// a(t) = xdd_p/xdot_p + x_p^n/xdot_p with b = -1, so that x_p solves the equation.
CatalogEntry construct_equation(double n, double K, Branch branch = Branch::Literal);

/// xdd = -xd/(K1 + K3 t) - x^n with x_p = K2 (K1 + K3 t)^(-nu).
CatalogEntry powerlaw_solution(double n, double K1);

/// Built-in examples; `K` is the shift of the shifted equations and the K1
/// of the power-law entry. Every entry is checked on construction.
std::vector<CatalogEntry> catalog(double K = 1.0);
/// Residual (threshold 1e-10, 100 samples) and, where claimed, IntCond2.
void check_entry(const CatalogEntry& e);
const CatalogEntry& find(const std::vector<CatalogEntry>& entries, const std::string& id);

/// Human-readable manifest: one block per entry.
std::string manifest(const std::vector<CatalogEntry>& entries);

/// x0 = sqrt(6 K x1^2 (1 - S + K^2 (1 + S)) / (12 K^2 + (1 - K^2)^2 4 t^2 x1^4)),
/// S = sqrt(1 - 4 t^2 x1^4 / 3).
double superpose(double x1, double t, double K);

/// Closed-form family of n = 5 Lane-Emden solutions through the superposition rule.
SmoothFn k_family(double K);

struct SeamReport {
  double x_jump = 0.0;      // |x0(sqrt3+) - x0(sqrt3-)|
  double xdot_jump = 0.0;   // |xd0(sqrt3+) - xd0(sqrt3-)|
};
SeamReport k_family_seam(double K);

/// Lane-Emden n = 5: xdd = -2 xd/t - x^5.
gauge::EmdenProblem lane_emden(double n = 5.0);

/// I_i = x^6/6 + v^2/2 + x v for one copy of the reduced n = 5 system.
double zero_level_integral(double x, double v);
/// Point of the zero level set: v = x (-1 + sigma sqrt(1 - x^4/3)).
double zero_level_velocity(double x, int sigma);
/// Branch sigma of a zero-level point; K below is conserved only while both
/// copies stay on the same branch (the fold x^4 = 3 switches it).
int zero_level_branch(double x, double v);
/// Two copies of the autonomous field (x + v) d/dx - (v + x^5) d/dv.
ode::Rhs<4> coupled_field();

/// K = (x0^2/x1^2) (1 + sqrt(1 - x1^4/3)) / (1 + sqrt(1 - x0^4/3)) for points of
/// the zero level set; throws DomainError off it (tolerance on I_i).
double third_integral(double x0, double v0, double x1, double v1, double tol = 1e-9);

/// "t,x0" CSV of the superposition rule applied along x1.
std::string superpose_csv(const TimeFn& x1, double K, const std::vector<double>& ts);

}  // namespace emden::sol
