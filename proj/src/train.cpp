#include "cwrisk/train.hpp"

#include <cmath>
#include <cstdio>

namespace cwrisk {

std::string ObjectiveSpec::name() const {
  switch (kind) {
    case Objective::Standard: return "standard";
    case Objective::Balanced: return "balanced";
    case Objective::LCVaR: return "lcvar";
    case Objective::LHCVaR: return "lhcvar";
  }
  return "unknown";
}

std::vector<double> objective_levels(const ObjectiveSpec& spec,
                                     const ClassProbabilities& probs) {
  switch (spec.kind) {
    case Objective::LCVaR: {
      if (!(spec.alpha > 0.0) || spec.alpha > 1.0)
        throw std::invalid_argument("alpha must lie in (0, 1]");
      return std::vector<double>(probs.size(), spec.alpha);
    }
    case Objective::LHCVaR:
      return alpha_schedule(probs, spec.kappa, spec.c).alpha;
    default:
      throw std::invalid_argument("objective has no level parameters");
  }
}

namespace {

// One full pass: softmax probabilities for every sample (row-major n*k)
// plus per-class mean cross-entropy risks.
void forward_pass(const LinearModel& model, const LabeledDataset& data,
                  std::vector<double>& probs_buf,
                  std::vector<double>& ce_risks) {
  const std::size_t n = data.n, k = data.k;
  probs_buf.resize(n * k);
  ce_risks.assign(k, 0.0);
  std::vector<double> s(k);
  for (std::size_t i = 0; i < n; ++i) {
    model.scores(data.row(i), s.data());
    double smax = s[0];
    for (std::size_t j = 1; j < k; ++j) smax = std::max(smax, s[j]);
    double z = 0.0;
    double* row = probs_buf.data() + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = std::exp(s[j] - smax);
      z += row[j];
    }
    for (std::size_t j = 0; j < k; ++j) row[j] /= z;
    const std::size_t y = static_cast<std::size_t>(data.y[i]);
    ce_risks[y] += std::log(z) - (s[y] - smax);
  }
  for (std::size_t c = 0; c < k; ++c)
    ce_risks[c] /= static_cast<double>(data.counts[c]);
}

// Accumulates grad += sum_j w_j (softmax_j - e_{y_j}) [x_j; 1]^T where the
// per-sample weight is sample_w[y_j].
void accumulate_gradient(const LabeledDataset& data,
                         const std::vector<double>& probs_buf,
                         const std::vector<double>& sample_w,
                         std::vector<double>& grad) {
  const std::size_t n = data.n, k = data.k, d = data.d, cols = d + 1;
  grad.assign(k * cols, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sample_w[static_cast<std::size_t>(data.y[i])];
    if (w == 0.0) continue;
    const double* xr = data.row(i);
    const double* pr = probs_buf.data() + i * k;
    for (std::size_t c = 0; c < k; ++c) {
      const double g =
          w * (pr[c] - (c == static_cast<std::size_t>(data.y[i]) ? 1.0 : 0.0));
      double* gr = grad.data() + c * cols;
      for (std::size_t f = 0; f < d; ++f) gr[f] += g * xr[f];
      gr[d] += g;
    }
  }
}

void require_finite_risks(const std::vector<double>& risks, std::size_t epoch) {
  for (double r : risks) {
    if (!std::isfinite(r)) {
      char buf[80];
      std::snprintf(buf, sizeof(buf),
                    "training diverged: non-finite risk at epoch %zu", epoch);
      throw NumericError(buf);
    }
  }
}

}  // namespace

ValueGrad robust_surrogate_value_grad(const LinearModel& model,
                                      const LabeledDataset& data,
                                      const std::vector<double>& alpha) {
  const ClassProbabilities probs = ClassProbabilities::from_dataset(data);
  for (std::size_t c = 0; c < data.k; ++c)
    if (data.counts[c] == 0)
      throw std::invalid_argument("every class needs examples");
  std::vector<double> probs_buf, risks;
  forward_pass(model, data, probs_buf, risks);
  for (double r : risks)
    if (!std::isfinite(r)) throw NumericError("surrogate risk is not finite");

  const DualSolution sol = lhcvar_dual(risks, probs, alpha);
  // Envelope gradient at the maximizing weights: per-sample weight
  // q*_{y} p_{y} / N_{y} = q*_{y} / n.
  std::vector<double> sample_w(data.k);
  for (std::size_t c = 0; c < data.k; ++c)
    sample_w[c] = sol.q_star[c] / static_cast<double>(data.n);

  ValueGrad out;
  out.value = sol.value;
  accumulate_gradient(data, probs_buf, sample_w, out.grad);
  return out;
}

LinearModel train(const LabeledDataset& data, const TrainConfig& config) {
  if (config.epochs == 0)
    throw std::invalid_argument("epochs must be positive");
  if (!(config.lr_start > 0.0) || !(config.lr_end > 0.0))
    throw std::invalid_argument("learning rates must be positive");
  for (std::size_t c = 0; c < data.k; ++c)
    if (data.counts[c] == 0)
      throw std::invalid_argument("every class needs training examples");

  const ClassProbabilities probs = ClassProbabilities::from_dataset(data);
  const std::size_t k = data.k, n = data.n;
  const ObjectiveSpec& spec = config.objective;

  std::vector<double> levels;
  if (spec.kind == Objective::LCVaR || spec.kind == Objective::LHCVaR)
    levels = objective_levels(spec, probs);

  // Fixed per-sample weights for the non-robust objectives.
  std::vector<double> sample_w(k, 0.0);
  if (spec.kind == Objective::Standard) {
    for (std::size_t c = 0; c < k; ++c) sample_w[c] = 1.0 / double(n);
  } else if (spec.kind == Objective::Balanced) {
    for (std::size_t c = 0; c < k; ++c)
      sample_w[c] = 1.0 / (double(k) * double(data.counts[c]));
  }

  LinearModel model(k, data.d);
  std::vector<double> probs_buf, risks, grad;
  for (std::size_t t = 0; t < config.epochs; ++t) {
    forward_pass(model, data, probs_buf, risks);
    require_finite_risks(risks, t);

    if (!levels.empty()) {
      // Weights of the envelope gradient at the current surrogate risks.
      const DualSolution sol = lhcvar_dual(risks, probs, levels);
      for (std::size_t c = 0; c < k; ++c)
        sample_w[c] = sol.q_star[c] / double(n);
    }
    accumulate_gradient(data, probs_buf, sample_w, grad);

    const double frac =
        config.epochs == 1 ? 0.0 : double(t) / double(config.epochs - 1);
    const double lr = config.lr_start + (config.lr_end - config.lr_start) * frac;
    for (std::size_t i = 0; i < model.w.size(); ++i) model.w[i] -= lr * grad[i];
  }
  return model;
}

RiskReport evaluate(const LinearModel& model, const LabeledDataset& data,
                    const ObjectiveSpec& spec,
                    const std::string& probs_label) {
  const std::vector<double> risks =
      class_conditional_risks(model, data, LossKind::ZeroOne);
  const ClassProbabilities probs = ClassProbabilities::from_dataset(data);

  RiskReport report;
  report.per_class = risks;
  report.worst_class = argmax_lowest(risks.data(), risks.size());
  report.probs_label = probs_label;
  switch (spec.kind) {
    case Objective::Standard: {
      double v = 0.0;
      for (std::size_t c = 0; c < data.k; ++c) v += probs[c] * risks[c];
      report.objective_value = v;
      break;
    }
    case Objective::Balanced:
      report.objective_value =
          weighted_risk(risks, probs, balanced_weights(probs));
      break;
    case Objective::LCVaR: {
      const DualSolution sol = lcvar_dual(risks, probs, spec.alpha);
      report.objective_value = sol.value;
      report.lambda_opt = sol.lambda;
      report.q_star = sol.q_star;
      break;
    }
    case Objective::LHCVaR: {
      const DualSolution sol =
          lhcvar_dual(risks, probs, objective_levels(spec, probs));
      report.objective_value = sol.value;
      report.lambda_opt = sol.lambda;
      report.q_star = sol.q_star;
      break;
    }
  }
  return report;
}

std::vector<RiskReport> evaluate(const LinearModel& model,
                                 const LabeledDataset& data,
                                 const std::vector<ObjectiveSpec>& specs,
                                 const std::string& probs_label) {
  std::vector<RiskReport> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(evaluate(model, data, s, probs_label));
  return out;
}

}  // namespace cwrisk
