#include "emden/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

namespace emden::quad {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double sample(const TimeFn& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) throw DomainError("non-finite integrand at t=" + std::to_string(t));
  return v;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod15(const TimeFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = sample(f, center);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = sample(f, center - dx);
    const double f2 = sample(f, center + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * half, std::abs((kron - gauss) * half)};
}

}  // namespace

QuadResult integrate(const TimeFn& f, double a, double b, double tol, std::size_t max_intervals) {
  if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<Panel> heap;
  Panel first = kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t count = 1;
  // Roundoff floor: no estimate can beat a few ulps of the accumulated magnitude.
  auto floor = [&] { return 50.0 * std::numeric_limits<double>::epsilon() * std::abs(total); };
  while (error > std::max(tol, floor())) {
    if (count >= max_intervals)
      throw Error("quadrature refinement limit reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                  "], error estimate " + std::to_string(error));
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) throw Error("quadrature interval collapsed near t=" + std::to_string(mid));
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, count};
}

double quad(const TimeFn& f, double a, double b, double tol) { return integrate(f, a, b, tol).value; }

Antiderivative::Antiderivative(TimeFn integrand, double lower, double range_lo, double range_hi, std::size_t panels,
                               double tol)
    : integrand_(std::move(integrand)), lower_(lower), tol_(tol) {
  if (range_hi < range_lo) std::swap(range_lo, range_hi);
  range_lo = std::min(range_lo, lower);
  range_hi = std::max(range_hi, lower);
  panels = std::max<std::size_t>(panels, 1);
  for (std::size_t i = 0; i <= panels; ++i)
    nodes_.push_back(range_lo + (range_hi - range_lo) * static_cast<double>(i) / static_cast<double>(panels));
  nodes_.push_back(lower);
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  values_.assign(nodes_.size(), 0.0);
  const auto base = static_cast<std::size_t>(std::find(nodes_.begin(), nodes_.end(), lower) - nodes_.begin());
  for (std::size_t i = base + 1; i < nodes_.size(); ++i)
    values_[i] = values_[i - 1] + quad(integrand_, nodes_[i - 1], nodes_[i], tol_);
  for (std::size_t i = base; i-- > 0;) values_[i] = values_[i + 1] - quad(integrand_, nodes_[i], nodes_[i + 1], tol_);
}

double Antiderivative::operator()(double t) const {
  if (t == lower_) return 0.0;
  // Nearest node, preferring the lower-limit node when equally close.
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t idx;
  if (it == nodes_.end())
    idx = nodes_.size() - 1;
  else if (it == nodes_.begin())
    idx = 0;
  else {
    const auto hi = static_cast<std::size_t>(it - nodes_.begin());
    idx = (t - nodes_[hi - 1] <= nodes_[hi] - t) ? hi - 1 : hi;
  }
  return values_[idx] + quad(integrand_, nodes_[idx], t, tol_);
}

TimeFn Antiderivative::as_timefn() const {
  auto self = std::make_shared<const Antiderivative>(*this);
  return TimeFn([self](double t) { return (*self)(t); }, "int_{" + std::to_string(lower_) + "}^t " + integrand_.label());
}

}  // namespace emden::quad
