#pragma once

#include <vector>

#include "cwrisk/model.hpp"
#include "cwrisk/types.hpp"

namespace cwrisk {

// Mean loss of the model on each class: R_i = (1/N_i) sum_{y_j = i} loss_j.
// Every class in {0,...,k-1} must have at least one example.
std::vector<double> class_conditional_risks(const LinearModel& model,
                                            const LabeledDataset& data,
                                            LossKind loss);

// The weighted objective sum_i q_i p_i R_i.  Dimensions must agree and the
// weights must be normalized against `probs` (the WeightVector's reference
// marginals are revalidated against the ones passed here).
double weighted_risk(const std::vector<double>& per_class,
                     const ClassProbabilities& probs, const WeightVector& q);

// Weights q_i = 1 / (k p_i), which turn the weighted objective into the
// unweighted mean of per-class risks.  Requires p_i > 0 for all i.
WeightVector balanced_weights(const ClassProbabilities& probs);

}  // namespace cwrisk
