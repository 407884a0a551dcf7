#pragma once

#include <cstddef>
#include <vector>

#include "cwrisk/types.hpp"

namespace cwrisk {

// Box-constrained weight polytope  Q = { q : sum_i p_i q_i = 1,
// 0 <= q_i <= u_i }.  Feasibility requires sum_i p_i u_i >= 1 (a slack of
// 1e-12 is tolerated before construction fails).
struct BoxUncertaintySet {
  ClassProbabilities probs;
  std::vector<double> upper;

  BoxUncertaintySet(ClassProbabilities probs_, std::vector<double> upper_);

  std::size_t size() const { return upper.size(); }
};

// Per-class tail levels alpha_i produced by the interpolation schedule.
struct AlphaSchedule {
  double kappa = 1.0;
  double c = 1.0;
  std::vector<double> alpha;
};

// Result of maximizing sum_i q_i p_i R_i over a box set, together with the
// matching dual certificate.
struct DualSolution {
  double value = 0.0;                   // optimal weighted risk
  double lambda = 0.0;                  // dual threshold (pivot-class risk)
  std::vector<double> q_star;           // a maximizer
  std::vector<std::size_t> active_set;  // classes with R_i > lambda
};

// Exact maximizer of sum_i q_i p_i R_i over the box set, by greedily filling
// classes in order of decreasing risk (ties broken by lower class index)
// until the p-mass budget of 1 is spent; the class where the budget runs out
// receives the fractional remainder and defines lambda.
DualSolution robust_sup_box(const std::vector<double>& per_class,
                            const BoxUncertaintySet& set);

// Minimizer of the piecewise-linear dual
//   D(lambda) = sum_i (p_i / alpha_i) (R_i - lambda)_+ + lambda.
// Classes are sorted by decreasing risk, each carrying its own mass
// p_i/alpha_i through the sort; the returned lambda is the risk of the class
// at which the accumulated mass first reaches 1.  Requires
// sum_i p_i/alpha_i >= 1 (tolerance 1e-12).
double water_fill_lambda(const std::vector<double>& per_class,
                         const ClassProbabilities& probs,
                         const std::vector<double>& alpha);

// Dual value of D at a given lambda (used by tests and grid cross-checks).
double dual_objective(const std::vector<double>& per_class,
                      const ClassProbabilities& probs,
                      const std::vector<double>& alpha, double lambda);

// Tail-weighted objective with a single level alpha in (0, 1]:
//   inf_lambda (1/alpha) sum_i p_i (R_i - lambda)_+ + lambda.
// Equals robust_sup_box with uniform caps u_i = 1/alpha.
DualSolution lcvar_dual(const std::vector<double>& per_class,
                        const ClassProbabilities& probs, double alpha);

// Heterogeneous-level variant with per-class alpha_i; caps u_i = 1/alpha_i.
DualSolution lhcvar_dual(const std::vector<double>& per_class,
                         const ClassProbabilities& probs,
                         const std::vector<double>& alpha);

// Interpolation schedule alpha_i = c * p_i^(1/kappa) / sum_j p_j^(1/kappa).
// kappa > 0 controls how strongly levels track the marginals (large kappa ->
// uniform c/k, small kappa -> mass concentrates on the largest p_i); c in
// (0, 1] scales the budget.  The schedule is always feasible.
AlphaSchedule alpha_schedule(const ClassProbabilities& probs, double kappa,
                             double c);

// Euclidean projection onto the box set: argmin ||x - q||_2 subject to
// sum p_i x_i = 1, 0 <= x_i <= u_i, via monotone bisection on the equality
// multiplier nu with x_i(nu) = clip(q_i - nu p_i, 0, u_i).
std::vector<double> project_onto_set(const std::vector<double>& q,
                                     const BoxUncertaintySet& set);

}  // namespace cwrisk
