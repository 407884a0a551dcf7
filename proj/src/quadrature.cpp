#include "cwrisk/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "cwrisk/types.hpp"

namespace cwrisk {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0)
    throw NumericError("adaptive quadrature failed to converge");
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate_segment(const std::function<double(double)>& f, double a,
                         double b, double tol, int max_depth) {
  // Segments are the pieces between known jump points, so the integrand is
  // smooth inside but may take the *other* side's value exactly at a
  // boundary.  Sampling a hair inside the segment reads the one-sided limit
  // instead; the perturbation of the integral is O(inset * jump), far below
  // any budget, while a boundary sample from the wrong side would stall the
  // refinement (its error term scales with h exactly like the budget does).
  const double inset = (b - a) * 1e-12;
  const auto g = [&f, a, b, inset](double x) {
    return f(std::clamp(x, a + inset, b - inset));
  };
  const double m = 0.5 * (a + b);
  const double fa = g(a), fb = g(b), fm = g(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw NumericError("non-finite integrand");
  return adapt(g, a, fa, b, fb, m, fm, simpson(fa, fm, fb, b - a), tol,
               max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breakpoints,
                 int max_depth) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b must be >= a");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tol <= 0");
  if (a == b) return 0.0;

  std::vector<double> pts;
  pts.reserve(breakpoints.size() + 2);
  pts.push_back(a);
  for (double t : breakpoints)
    if (t > a && t < b) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  const double span = b - a;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    if (hi - lo < 1e-15) continue;  // degenerate sliver between duplicates
    const double budget = std::max(abs_tol * (hi - lo) / span, 1e-16);
    total += integrate_segment(f, lo, hi, budget, max_depth);
  }
  return total;
}

}  // namespace cwrisk
