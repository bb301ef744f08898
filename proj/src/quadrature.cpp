#include "bosonize/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace bosonize {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss points.
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

struct Segment {
  double a;
  double b;
  double value;
  double error;
  friend bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol, int max_subdivisions) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }

  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod_15(f, a, b);
  heap.push(first);
  result.evaluations = 15;
  double total = first.value;
  double total_error = first.error;

  int subdivisions = 0;
  while (total_error > std::max(abs_tol, rel_tol * std::fabs(total)) && subdivisions < max_subdivisions) {
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted at double precision
    heap.pop();
    const Segment left = gauss_kronrod_15(f, worst.a, mid);
    const Segment right = gauss_kronrod_15(f, mid, worst.b);
    result.evaluations += 30;
    ++subdivisions;
    heap.push(left);
    heap.push(right);

    // Re-sum from scratch every so often so that running-sum drift cannot
    // masquerade as convergence.
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }

  // Final deterministic summation in ascending order of position.
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  total = 0.0;
  total_error = 0.0;
  for (const auto& s : segments) {
    total += s.value;
    total_error += s.error;
  }

  result.value = total;
  result.error_estimate = total_error;
  result.subdivisions = subdivisions;
  result.converged = total_error <= std::max(abs_tol, rel_tol * std::fabs(total));
  return result;
}

}  // namespace bosonize
