#pragma once

#include <functional>
#include <vector>

#include "cwrisk/model.hpp"
#include "cwrisk/types.hpp"
#include "cwrisk/uncertainty.hpp"

namespace cwrisk {

// Projected gradient-descent-ascent on a convex-concave payoff.  Step sizes
// default to the diameter/Lipschitz schedule eta_t = D / (L sqrt(t)).
struct SaddleConfig {
  std::size_t rounds = 1000;
  double diam_a = 2.0;  // diameter of the minimizing player's domain
  double lip_a = 1.0;   // Lipschitz bound on the payoff in a
  double diam_b = 2.0;  // diameter of the maximizing player's domain
  double lip_b = 1.0;   // Lipschitz bound on the payoff in b
};

struct SaddleResult {
  std::vector<double> a_bar;  // average of visited minimizer iterates
  std::vector<double> b_bar;  // average of visited maximizer iterates
};

// Generic simultaneous GDA.  grad_a/grad_b evaluate payoff gradients at the
// current pair; proj_a/proj_b project a point back onto each domain in
// place.  Returns the averaged iterates (1/T) sum_t a_t and (1/T) sum_t b_t.
SaddleResult gda_saddle(
    const std::function<std::vector<double>(const std::vector<double>&,
                                            const std::vector<double>&)>&
        grad_a,
    const std::function<std::vector<double>(const std::vector<double>&,
                                            const std::vector<double>&)>&
        grad_b,
    const std::function<void(std::vector<double>&)>& proj_a,
    const std::function<void(std::vector<double>&)>& proj_b,
    std::vector<double> a0, std::vector<double> b0,
    const SaddleConfig& config);

struct GdaResult {
  LinearModel model;            // averaged parameters
  std::vector<double> q_bar;    // averaged weights
};

// GDA on the weighted cross-entropy game
//   L(W, q) = sum_i q_i p_i Rce_i(W)
// with q constrained to the box set and W to the Euclidean ball of diameter
// diam_a around the origin.  Returns averaged iterates of both players.
GdaResult gda(const LabeledDataset& data, const BoxUncertaintySet& set,
              const SaddleConfig& config, const LinearModel& init_model,
              const std::vector<double>& init_q);

}  // namespace cwrisk
