#include "cwrisk/risk.hpp"

#include <cmath>
#include <cstdio>

namespace cwrisk {

std::vector<double> class_conditional_risks(const LinearModel& model,
                                            const LabeledDataset& data,
                                            LossKind loss) {
  if (model.k != data.k || model.d != data.d)
    throw std::invalid_argument("model/dataset shape mismatch");
  for (std::size_t i = 0; i < data.k; ++i) {
    if (data.counts[i] == 0) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "class %zu has no examples", i);
      throw std::invalid_argument(buf);
    }
  }
  std::vector<double> sums(data.k, 0.0);
  std::vector<double> s(data.k);
  for (std::size_t i = 0; i < data.n; ++i) {
    model.scores(data.row(i), s.data());
    sums[static_cast<std::size_t>(data.y[i])] +=
        sample_loss(loss, s.data(), data.k, data.y[i]);
  }
  for (std::size_t c = 0; c < data.k; ++c)
    sums[c] /= static_cast<double>(data.counts[c]);
  return sums;
}

double weighted_risk(const std::vector<double>& per_class,
                     const ClassProbabilities& probs, const WeightVector& q) {
  if (per_class.size() != probs.size() || q.size() != probs.size())
    throw std::invalid_argument("weighted_risk dimension mismatch");
  double norm = 0.0, value = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    norm += q[i] * probs[i];
    value += q[i] * probs[i] * per_class[i];
  }
  if (std::fabs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("weights are not normalized for these probs");
  return value;
}

WeightVector balanced_weights(const ClassProbabilities& probs) {
  const std::size_t k = probs.size();
  std::vector<double> q(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (probs[i] <= 0.0)
      throw std::invalid_argument("balanced weights need every class present");
    q[i] = 1.0 / (static_cast<double>(k) * probs[i]);
  }
  return WeightVector(std::move(q), probs);
}

}  // namespace cwrisk
