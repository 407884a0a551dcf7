#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cwrisk/types.hpp"

namespace cwrisk {

// One-dimensional binary world: X ~ U[0,1], P(Y=1 | X=x) = x^(p/(1-p)),
// so P(Y=0) = p.  Requires p in (0, 1).
struct SyntheticWorld {
  double p;

  explicit SyntheticWorld(double p_);

  double exponent() const { return p / (1.0 - p); }
  double eta(double x) const;          // P(Y=1 | x)
  double eta_inverse(double t) const;  // x with eta(x) = t, t in [0,1]
};

// Closed-form optimum of the unweighted risk: the rule 1{x > threshold_x}
// and its two class-conditional error rates.
struct BayesQuantities {
  double threshold_x;  // (1/2)^((1-p)/p), the x-space cut of the optimal rule
  double r0;           // class-0 risk: 1 - ((1+p)/p) * (1/2)^(1/p)
  double r1;           // class-1 risk: (1/2)^(1/p)
};
BayesQuantities bayes_quantities(const SyntheticWorld& world);

// n iid draws from the world (d = 1, k = 2), deterministic in the seed.
LabeledDataset synth_sample(const SyntheticWorld& world, std::size_t n,
                            std::uint64_t seed);

// The eta-space threshold q0 / (q0 + q1) of the optimal rule under class
// weights (q0, q1).  Requires q0, q1 >= 0 and not both zero.
double weighted_threshold(double q0, double q1);

// Box-kernel regression estimate of eta from a 1-D sample:
// etahat(x) = mean{ y_j : |x_j - x| <= bandwidth }, 1/2 on empty windows.
struct EtaHat {
  double bandwidth = 0.0;
  std::vector<double> xs;     // sorted sample positions
  std::vector<double> ysum;   // prefix sums of labels in xs order, size n+1

  double operator()(double x) const;
  // Window edges x_j +- bandwidth inside (0, 1): everywhere else the
  // estimate is locally constant, so these are the only decision jumps.
  std::vector<double> breakpoints() const;
};
EtaHat fit_eta_hat(const LabeledDataset& data, double bandwidth);

// Plug-in rule predicting 1{ regressor(x) > threshold } where threshold is
// in eta space.  split_hints lists the x positions where the decision can
// change; the risk quadrature splits there.
struct ThresholdClassifier {
  std::function<double(double)> regressor;
  double threshold = 0.5;
  std::vector<double> split_hints;

  int predict(double x) const { return regressor(x) > threshold ? 1 : 0; }
};

// Rule built on the true eta (its unique decision cut is known).
ThresholdClassifier exact_rule(const SyntheticWorld& world, double threshold);
// Rule built on a fitted regressor.
ThresholdClassifier plugin_rule(const EtaHat& eta_hat, double threshold);

// Weighted risk of a threshold rule under the world's distribution:
//   R_q(f) = integral_0^1 [ q0 (1-eta(x)) 1{f(x)=1} + q1 eta(x) 1{f(x)=0} ] dx
// by adaptive quadrature with splits at the rule's decision jumps.
double q_risk_of_threshold(const SyntheticWorld& world,
                           const ThresholdClassifier& rule, double q0,
                           double q1, double tol = 1e-8);

// Decomposition of the deployment-weighted regret of a rule trained under
// weights q but scored under weights q': each term is its own quadrature.
//   excess      = R_q'(fhat_q)  - R_q'(f*_q')
//   estimation  = R_q'(fhat_q)  - R_q'(f*_q)
//   irreducible = R_q'(f*_q)    - R_q'(f*_q')
// ie_bound is the analytic cap (q0'+q1') |t_q - t_q'| P(tlo <= eta <= thi).
// When eta_hat is absent, fhat_q is the exact rule at t_q (estimation 0).
struct ErrorDecomposition {
  double excess = 0.0;
  double estimation = 0.0;
  double irreducible = 0.0;
  double ie_bound = 0.0;
};
ErrorDecomposition error_decomposition(const SyntheticWorld& world, double q0,
                                       double q1, double q0_prime,
                                       double q1_prime,
                                       const EtaHat* eta_hat = nullptr,
                                       double tol = 1e-8);

// Coefficients of a linear-fractional metric
//   M = (a0 + a11 TP + a10 FP + a01 FN + a00 TN)
//     / (b0 + b11 TP + b10 FP + b01 FN + b00 TN).
struct LinearFractionalCoeffs {
  double a0 = 0, a11 = 0, a10 = 0, a01 = 0, a00 = 0;
  double b0 = 0, b11 = 0, b10 = 0, b01 = 0, b00 = 0;
};

struct MetricThreshold {
  double delta;  // optimal eta-space threshold
  double q0;     // equivalent class weights: delta = q0 / (q0 + q1)
  double q1;
};

// Optimal threshold of a linear-fractional metric given its optimal value
// l_star, plus the equivalent weighting.  Requires the denominator
//   a11 - a10 - a01 + a00 - (b11 - b10 - b01 + b00) l_star
// to be strictly positive (otherwise the optimum is not a threshold rule of
// this orientation and an exception is thrown).
MetricThreshold metric_to_threshold(const LinearFractionalCoeffs& coeffs,
                                    double l_star);

}  // namespace cwrisk
