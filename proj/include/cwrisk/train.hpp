#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwrisk/model.hpp"
#include "cwrisk/risk.hpp"
#include "cwrisk/types.hpp"
#include "cwrisk/uncertainty.hpp"

namespace cwrisk {

enum class Objective { Standard, Balanced, LCVaR, LHCVaR };

// Which scalar objective to train or evaluate.  alpha applies to LCVaR;
// kappa and c parameterize the level schedule of LHCVaR.
struct ObjectiveSpec {
  Objective kind = Objective::Standard;
  double alpha = 0.1;
  double kappa = 1.0;
  double c = 0.05;

  static ObjectiveSpec standard() { return {Objective::Standard, 0, 0, 0}; }
  static ObjectiveSpec balanced() { return {Objective::Balanced, 0, 0, 0}; }
  static ObjectiveSpec lcvar(double alpha) {
    return {Objective::LCVaR, alpha, 0, 0};
  }
  static ObjectiveSpec lhcvar(double kappa, double c) {
    return {Objective::LHCVaR, 0, kappa, c};
  }
  std::string name() const;
};

// Full-batch gradient descent configuration.  The learning rate anneals
// linearly from lr_start at epoch 0 to lr_end at the final epoch.
struct TrainConfig {
  ObjectiveSpec objective;
  std::size_t epochs = 2000;
  double lr_start = 0.01;
  double lr_end = 0.0001;
};

// Per-class level values used by the surrogate objective: uniform alpha for
// LCVaR, the schedule for LHCVaR (computed from the dataset marginals).
std::vector<double> objective_levels(const ObjectiveSpec& spec,
                                     const ClassProbabilities& probs);

// Value and parameter gradient of the robust surrogate objective
//   sup_q sum_i q_i p_i Rce_i(W)  over the box set with caps 1/alpha_i,
// where Rce_i are the per-class mean cross-entropy risks.  The gradient is
// the envelope gradient sum_i q*_i p_i grad Rce_i at the maximizing q*.
struct ValueGrad {
  double value = 0.0;
  std::vector<double> grad;  // k * (d+1), layout matches LinearModel::w
};
ValueGrad robust_surrogate_value_grad(const LinearModel& model,
                                      const LabeledDataset& data,
                                      const std::vector<double>& alpha);

// Trains the multiclass linear model from zero initialization with
// deterministic full-batch gradient descent on the configured objective
// (cross-entropy surrogate throughout).  Throws NumericError if the
// objective stops being finite.
LinearModel train(const LabeledDataset& data, const TrainConfig& config);

// Evaluates a model: per-class ZeroOne risks plus the requested scalar
// objective on those risks.  probs_label annotates which marginals were
// used (the dataset's own empirical counts).
RiskReport evaluate(const LinearModel& model, const LabeledDataset& data,
                    const ObjectiveSpec& spec,
                    const std::string& probs_label = "empirical");

std::vector<RiskReport> evaluate(const LinearModel& model,
                                 const LabeledDataset& data,
                                 const std::vector<ObjectiveSpec>& specs,
                                 const std::string& probs_label = "empirical");

}  // namespace cwrisk
