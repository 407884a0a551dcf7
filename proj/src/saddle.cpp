#include "cwrisk/saddle.hpp"

#include <cmath>

#include "cwrisk/risk.hpp"

namespace cwrisk {

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
    const SaddleConfig& config) {
  if (config.rounds == 0)
    throw std::invalid_argument("saddle solver needs at least one round");
  if (!(config.diam_a > 0.0) || !(config.lip_a > 0.0) ||
      !(config.diam_b > 0.0) || !(config.lip_b > 0.0))
    throw std::invalid_argument("diameters and Lipschitz bounds must be > 0");

  std::vector<double> a = std::move(a0), b = std::move(b0);
  proj_a(a);
  proj_b(b);
  std::vector<double> a_sum(a.size(), 0.0), b_sum(b.size(), 0.0);
  for (std::size_t t = 1; t <= config.rounds; ++t) {
    for (std::size_t i = 0; i < a.size(); ++i) a_sum[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) b_sum[i] += b[i];

    // Simultaneous step: both gradients at the current pair.
    const std::vector<double> ga = grad_a(a, b);
    const std::vector<double> gb = grad_b(a, b);
    const double root = std::sqrt(static_cast<double>(t));
    const double eta_a = config.diam_a / (config.lip_a * root);
    const double eta_b = config.diam_b / (config.lip_b * root);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= eta_a * ga[i];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += eta_b * gb[i];
    proj_a(a);
    proj_b(b);
  }

  SaddleResult out;
  out.a_bar = std::move(a_sum);
  out.b_bar = std::move(b_sum);
  const double inv = 1.0 / static_cast<double>(config.rounds);
  for (double& v : out.a_bar) v *= inv;
  for (double& v : out.b_bar) v *= inv;
  return out;
}

GdaResult gda(const LabeledDataset& data, const BoxUncertaintySet& set,
              const SaddleConfig& config, const LinearModel& init_model,
              const std::vector<double>& init_q) {
  if (init_model.k != data.k || init_model.d != data.d)
    throw std::invalid_argument("model/dataset shape mismatch");
  if (set.size() != data.k)
    throw std::invalid_argument("weight set/dataset class mismatch");
  for (std::size_t c = 0; c < data.k; ++c)
    if (data.counts[c] == 0)
      throw std::invalid_argument("every class needs examples");

  const std::size_t k = data.k, d = data.d, cols = d + 1, n = data.n;
  const ClassProbabilities probs = ClassProbabilities::from_dataset(data);

  // Payoff L(W, q) = sum_i q_i p_i Rce_i(W).
  const auto grad_model = [&](const std::vector<double>& w,
                              const std::vector<double>& q) {
    LinearModel m(k, d);
    m.w = w;
    std::vector<double> g(k * cols, 0.0), s(k), pr(k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t y = static_cast<std::size_t>(data.y[i]);
      const double wj = q[y] / static_cast<double>(n);  // q_y p_y / N_y
      if (wj == 0.0) continue;
      m.scores(data.row(i), s.data());
      softmax(s.data(), k, pr.data());
      const double* xr = data.row(i);
      for (std::size_t c = 0; c < k; ++c) {
        const double gc = wj * (pr[c] - (c == y ? 1.0 : 0.0));
        double* gr = g.data() + c * cols;
        for (std::size_t f = 0; f < d; ++f) gr[f] += gc * xr[f];
        gr[d] += gc;
      }
    }
    return g;
  };
  const auto grad_weights = [&](const std::vector<double>& w,
                                const std::vector<double>&) {
    LinearModel m(k, d);
    m.w = w;
    std::vector<double> risks =
        class_conditional_risks(m, data, LossKind::CrossEntropy);
    for (std::size_t c = 0; c < k; ++c) risks[c] *= probs[c];
    return risks;  // dL/dq_i = p_i Rce_i
  };
  const double radius = 0.5 * config.diam_a;
  const auto proj_model = [radius](std::vector<double>& w) {
    double norm2 = 0.0;
    for (double v : w) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > radius)
      for (double& v : w) v *= radius / norm;
  };
  const auto proj_weights = [&set](std::vector<double>& q) {
    q = project_onto_set(q, set);
  };

  const SaddleResult r = gda_saddle(grad_model, grad_weights, proj_model,
                                    proj_weights, init_model.w, init_q, config);
  GdaResult out;
  out.model = LinearModel(k, d);
  out.model.w = r.a_bar;
  out.q_bar = r.b_bar;
  return out;
}

}  // namespace cwrisk
