#pragma once

// Globally adaptive Gauss-Kronrod 15(7) quadrature on a finite interval.
// Plumbing for the spectral-integral bounds; the error estimate is the plain
// Kronrod/Gauss difference, which over-refines smooth integrands a little but
// never under-reports at these scales.

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "roqs/errors.hpp"

namespace roqs {

namespace detail {

struct GkResult {
  double value = 0.0;
  double error = 0.0;
};

template <typename F>
GkResult gauss_kronrod_15(const F& f, double a, double b) {
  // Kronrod abscissae (positive half) and weights; Gauss-7 weights beneath.
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += wgk[i] * fsum;
    if (i % 2 == 1) gauss += wg[i / 2] * fsum;
  }
  GkResult r;
  r.value = kronrod * h;
  r.error = std::abs((kronrod - gauss) * h);
  return r;
}

}  // namespace detail

// Integrates f over [a, b] to absolute tolerance abs_tol, bisecting the
// segment with the largest error estimate until the total clears the
// tolerance. Narrow features (resonance peaks) sit between the nodes of a
// wide panel and evade the error estimator, so callers that know where they
// are must pass them as interior breakpoints seeding the initial segments.
// Throws QuadratureFailureError when the interval budget runs out.
template <typename F>
double adaptive_integrate(const F& f, double a, double b, double abs_tol,
                          std::span<const double> interior, int max_intervals = 20000) {
  struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  auto eval = [&](double lo, double hi) {
    detail::GkResult r = detail::gauss_kronrod_15(f, lo, hi);
    return Segment{lo, hi, r.value, r.error};
  };

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double x : interior) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> queue;
  double total_error = 0.0;
  int intervals = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = eval(cuts[i], cuts[i + 1]);
    total_error += s.error;
    queue.push(s);
    ++intervals;
  }
  while (total_error > abs_tol) {
    if (intervals >= max_intervals) {
      throw QuadratureFailureError("adaptive_integrate: tolerance " + std::to_string(abs_tol) +
                                   " unreachable within " + std::to_string(max_intervals) +
                                   " intervals (error " + std::to_string(total_error) + ")");
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = eval(worst.a, mid);
    Segment right = eval(mid, worst.b);
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  double sum = 0.0;
  std::vector<Segment> segments;
  segments.reserve(intervals);
  while (!queue.empty()) {
    segments.push_back(queue.top());
    queue.pop();
  }
  // Fixed summation order (ascending error estimate) for reproducibility.
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) sum += it->value;
  return sum;
}

template <typename F>
double adaptive_integrate(const F& f, double a, double b, double abs_tol,
                          int max_intervals = 20000) {
  return adaptive_integrate(f, a, b, abs_tol, std::span<const double>{}, max_intervals);
}

}  // namespace roqs
