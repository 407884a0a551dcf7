#include "cwrisk/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cwrisk {

namespace {

constexpr double kFeasibilitySlack = 1e-12;

void check_risks(const std::vector<double>& per_class, std::size_t k) {
  if (per_class.size() != k)
    throw std::invalid_argument("risk/probability dimension mismatch");
  for (double r : per_class)
    if (!std::isfinite(r))
      throw std::invalid_argument("non-finite class risk");
}

// Indices sorted by decreasing risk; equal risks keep ascending class order.
std::vector<std::size_t> sort_by_risk(const std::vector<double>& r) {
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });
  return order;
}

// Core greedy fill over caps u_i: spend the p-mass budget of 1 on the
// riskiest classes first.  The class where the budget runs out is the pivot
// and defines lambda.
DualSolution greedy_fill(const std::vector<double>& per_class,
                         const ClassProbabilities& probs,
                         const std::vector<double>& caps) {
  const std::size_t k = probs.size();
  const std::vector<std::size_t> order = sort_by_risk(per_class);

  std::vector<double> q(k, 0.0);
  double spent = 0.0;
  std::size_t pivot = k;  // k = not found
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t i = order[pos];
    const double mass = probs[i] * caps[i];
    if (probs[i] > 0.0 && spent + mass >= 1.0) {
      pivot = i;
      q[i] = (1.0 - spent) / probs[i];
      break;
    }
    q[i] = caps[i];
    spent += mass;
  }
  if (pivot == k) {
    // Total cap mass fell inside the feasibility slack below 1: everything
    // is at its cap; the lowest-risk positive-mass class plays pivot.
    for (std::size_t pos = k; pos-- > 0;) {
      if (probs[order[pos]] > 0.0) {
        pivot = order[pos];
        break;
      }
    }
    if (pivot == k) throw std::invalid_argument("all class masses are zero");
  }

  DualSolution out;
  out.lambda = per_class[pivot];
  out.q_star = std::move(q);
  double value = 0.0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t i = order[pos];
    value += out.q_star[i] * probs[i] * per_class[i];
  }
  out.value = value;
  for (std::size_t i = 0; i < k; ++i)
    if (per_class[i] > out.lambda) out.active_set.push_back(i);
  return out;
}

}  // namespace

BoxUncertaintySet::BoxUncertaintySet(ClassProbabilities probs_,
                                     std::vector<double> upper_)
    : probs(std::move(probs_)), upper(std::move(upper_)) {
  if (upper.size() != probs.size())
    throw std::invalid_argument("cap/probability dimension mismatch");
  double mass = 0.0;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (!(upper[i] >= 0.0) || !std::isfinite(upper[i]))
      throw std::invalid_argument("caps must be finite and non-negative");
    mass += probs[i] * upper[i];
  }
  if (mass < 1.0 - kFeasibilitySlack)
    throw std::invalid_argument("infeasible box set: sum p_i u_i < 1");
}

DualSolution robust_sup_box(const std::vector<double>& per_class,
                            const BoxUncertaintySet& set) {
  check_risks(per_class, set.size());
  return greedy_fill(per_class, set.probs, set.upper);
}

double dual_objective(const std::vector<double>& per_class,
                      const ClassProbabilities& probs,
                      const std::vector<double>& alpha, double lambda) {
  if (per_class.size() != probs.size() || alpha.size() != probs.size())
    throw std::invalid_argument("dual_objective dimension mismatch");
  double v = lambda;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(alpha[i] > 0.0))
      throw std::invalid_argument("alpha levels must be positive");
    const double excess = per_class[i] - lambda;
    if (excess > 0.0) v += probs[i] / alpha[i] * excess;
  }
  return v;
}

namespace {

std::vector<double> caps_from_alpha(const ClassProbabilities& probs,
                                    const std::vector<double>& alpha) {
  if (alpha.size() != probs.size())
    throw std::invalid_argument("alpha/probability dimension mismatch");
  double mass = 0.0;
  std::vector<double> caps(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i]))
      throw std::invalid_argument("alpha levels must be positive and finite");
    caps[i] = 1.0 / alpha[i];
    mass += probs[i] * caps[i];
  }
  if (mass < 1.0 - kFeasibilitySlack)
    throw std::invalid_argument("infeasible levels: sum p_i / alpha_i < 1");
  return caps;
}

}  // namespace

double water_fill_lambda(const std::vector<double>& per_class,
                         const ClassProbabilities& probs,
                         const std::vector<double>& alpha) {
  check_risks(per_class, probs.size());
  return greedy_fill(per_class, probs, caps_from_alpha(probs, alpha)).lambda;
}

DualSolution lcvar_dual(const std::vector<double>& per_class,
                        const ClassProbabilities& probs, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("alpha must be positive");
  if (alpha > 1.0)
    throw std::invalid_argument("alpha > 1 makes the weight set infeasible");
  check_risks(per_class, probs.size());
  const std::vector<double> levels(probs.size(), alpha);
  return greedy_fill(per_class, probs, caps_from_alpha(probs, levels));
}

DualSolution lhcvar_dual(const std::vector<double>& per_class,
                         const ClassProbabilities& probs,
                         const std::vector<double>& alpha) {
  check_risks(per_class, probs.size());
  return greedy_fill(per_class, probs, caps_from_alpha(probs, alpha));
}

AlphaSchedule alpha_schedule(const ClassProbabilities& probs, double kappa,
                             double c) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be positive and finite");
  if (!(c > 0.0) || c > 1.0)
    throw std::invalid_argument("c must lie in (0, 1]");
  const std::size_t k = probs.size();
  // p_i^(1/kappa) computed in log space so extreme kappa stays stable.
  std::vector<double> logw(k);
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (probs[i] <= 0.0)
      throw std::invalid_argument("schedule needs every class present");
    logw[i] = std::log(probs[i]) / kappa;
    lmax = std::max(lmax, logw[i]);
  }
  double z = 0.0;
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = std::exp(logw[i] - lmax);
    z += w[i];
  }
  AlphaSchedule out;
  out.kappa = kappa;
  out.c = c;
  out.alpha.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.alpha[i] = c * w[i] / z;
  return out;
}

std::vector<double> project_onto_set(const std::vector<double>& q,
                                     const BoxUncertaintySet& set) {
  const std::size_t k = set.size();
  if (q.size() != k)
    throw std::invalid_argument("projection dimension mismatch");
  for (double v : q)
    if (!std::isfinite(v))
      throw std::invalid_argument("non-finite point in projection");

  const auto& p = set.probs;
  const auto& u = set.upper;
  const auto x_of = [&](double nu, std::vector<double>& x) {
    double mass = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = std::clamp(q[i] - nu * p[i], 0.0, u[i]);
      mass += p[i] * x[i];
    }
    return mass;
  };

  // Bracket nu: far left puts every coordinate at its cap (mass >= 1), far
  // right zeroes every coordinate (mass 0); the constraint mass is
  // nonincreasing in nu.
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (p[i] <= 0.0) continue;
    lo = std::min(lo, (q[i] - u[i]) / p[i] - 1.0);
    hi = std::max(hi, q[i] / p[i] + 1.0);
  }
  std::vector<double> x(k);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (x_of(mid, x) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double mass = x_of(0.5 * (lo + hi), x);
  if (std::fabs(mass - 1.0) > 1e-9)
    throw NumericError("projection bisection failed to meet the constraint");
  return x;
}

}  // namespace cwrisk
