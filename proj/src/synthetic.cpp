#include "cwrisk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cwrisk/quadrature.hpp"
#include "cwrisk/rng.hpp"

namespace cwrisk {

SyntheticWorld::SyntheticWorld(double p_) : p(p_) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("world parameter p must lie in (0, 1)");
}

double SyntheticWorld::eta(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::pow(x, exponent());
}

double SyntheticWorld::eta_inverse(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return std::pow(t, (1.0 - p) / p);
}

BayesQuantities bayes_quantities(const SyntheticWorld& world) {
  const double p = world.p;
  BayesQuantities out;
  out.threshold_x = std::pow(0.5, (1.0 - p) / p);
  out.r1 = std::pow(0.5, 1.0 / p);
  out.r0 = 1.0 - (1.0 + p) / p * out.r1;
  return out;
}

LabeledDataset synth_sample(const SyntheticWorld& world, std::size_t n,
                            std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  Rng rng(seed);
  std::vector<double> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform() < world.eta(x[i]) ? 1 : 0;
  }
  return LabeledDataset(2, 1, std::move(x), std::move(y));
}

double weighted_threshold(double q0, double q1) {
  if (!(q0 >= 0.0) || !(q1 >= 0.0))
    throw std::invalid_argument("class weights must be non-negative");
  if (q0 + q1 <= 0.0)
    throw std::invalid_argument("class weights must not both be zero");
  return q0 / (q0 + q1);
}

double EtaHat::operator()(double x) const {
  const auto lo = std::lower_bound(xs.begin(), xs.end(), x - bandwidth);
  const auto hi = std::upper_bound(xs.begin(), xs.end(), x + bandwidth);
  const std::size_t a = static_cast<std::size_t>(lo - xs.begin());
  const std::size_t b = static_cast<std::size_t>(hi - xs.begin());
  if (b == a) return 0.5;  // empty window
  return (ysum[b] - ysum[a]) / static_cast<double>(b - a);
}

std::vector<double> EtaHat::breakpoints() const {
  std::vector<double> pts;
  pts.reserve(2 * xs.size());
  for (double v : xs) {
    const double lo = v - bandwidth, hi = v + bandwidth;
    if (lo > 0.0 && lo < 1.0) pts.push_back(lo);
    if (hi > 0.0 && hi < 1.0) pts.push_back(hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

EtaHat fit_eta_hat(const LabeledDataset& data, double bandwidth) {
  if (data.d != 1 || data.k != 2)
    throw std::invalid_argument("regressor wants 1-D binary data");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw std::invalid_argument("bandwidth must be positive and finite");
  std::vector<std::size_t> order(data.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return data.x[a] < data.x[b];
  });
  EtaHat out;
  out.bandwidth = bandwidth;
  out.xs.resize(data.n);
  out.ysum.assign(data.n + 1, 0.0);
  for (std::size_t i = 0; i < data.n; ++i) {
    out.xs[i] = data.x[order[i]];
    out.ysum[i + 1] = out.ysum[i] + data.y[order[i]];
  }
  return out;
}

ThresholdClassifier exact_rule(const SyntheticWorld& world, double threshold) {
  ThresholdClassifier rule;
  rule.regressor = [world](double x) { return world.eta(x); };
  rule.threshold = threshold;
  if (threshold > 0.0 && threshold < 1.0)
    rule.split_hints = {world.eta_inverse(threshold)};
  return rule;
}

ThresholdClassifier plugin_rule(const EtaHat& eta_hat, double threshold) {
  ThresholdClassifier rule;
  rule.regressor = eta_hat;  // copies the fitted arrays
  rule.threshold = threshold;
  rule.split_hints = eta_hat.breakpoints();
  return rule;
}

namespace {

// Pointwise weighted misclassification cost of a decision at x.
inline double decision_cost(const SyntheticWorld& world, int decide, double x,
                            double q0, double q1) {
  return decide == 1 ? q0 * (1.0 - world.eta(x)) : q1 * world.eta(x);
}

std::vector<double> merged_hints(const ThresholdClassifier& f,
                                 const ThresholdClassifier& g) {
  std::vector<double> pts = f.split_hints;
  pts.insert(pts.end(), g.split_hints.begin(), g.split_hints.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double q_risk_of_threshold(const SyntheticWorld& world,
                           const ThresholdClassifier& rule, double q0,
                           double q1, double tol) {
  if (!(q0 >= 0.0) || !(q1 >= 0.0))
    throw std::invalid_argument("class weights must be non-negative");
  const auto integrand = [&](double x) {
    return decision_cost(world, rule.predict(x), x, q0, q1);
  };
  return integrate(integrand, 0.0, 1.0, tol, rule.split_hints);
}

ErrorDecomposition error_decomposition(const SyntheticWorld& world, double q0,
                                       double q1, double q0_prime,
                                       double q1_prime, const EtaHat* eta_hat,
                                       double tol) {
  const double t_q = weighted_threshold(q0, q1);
  const double t_prime = weighted_threshold(q0_prime, q1_prime);
  const ThresholdClassifier star_q = exact_rule(world, t_q);
  const ThresholdClassifier star_prime = exact_rule(world, t_prime);
  const ThresholdClassifier fitted =
      eta_hat ? plugin_rule(*eta_hat, t_q) : star_q;

  // Each quantity is one quadrature over the pointwise cost difference of
  // the two rules it compares, under the deployment weights.
  const auto risk_gap = [&](const ThresholdClassifier& f,
                            const ThresholdClassifier& g) {
    const auto integrand = [&](double x) {
      return decision_cost(world, f.predict(x), x, q0_prime, q1_prime) -
             decision_cost(world, g.predict(x), x, q0_prime, q1_prime);
    };
    return integrate(integrand, 0.0, 1.0, tol, merged_hints(f, g));
  };

  ErrorDecomposition out;
  out.excess = risk_gap(fitted, star_prime);
  out.estimation = risk_gap(fitted, star_q);
  out.irreducible = risk_gap(star_q, star_prime);

  const double t_lo = std::min(t_q, t_prime);
  const double t_hi = std::max(t_q, t_prime);
  const double x_lo = world.eta_inverse(t_lo);
  const double x_hi = world.eta_inverse(t_hi);
  const auto band = [&](double x) {
    const double e = world.eta(x);
    return (e >= t_lo && e <= t_hi) ? 1.0 : 0.0;
  };
  const double band_mass =
      integrate(band, 0.0, 1.0, tol, std::vector<double>{x_lo, x_hi});
  out.ie_bound = (q0_prime + q1_prime) * std::fabs(t_q - t_prime) * band_mass;
  return out;
}

MetricThreshold metric_to_threshold(const LinearFractionalCoeffs& m,
                                    double l_star) {
  if (!std::isfinite(l_star))
    throw std::invalid_argument("metric value must be finite");
  const double den =
      m.a11 - m.a10 - m.a01 + m.a00 - (m.b11 - m.b10 - m.b01 + m.b00) * l_star;
  if (!(den > 0.0))
    throw std::invalid_argument(
        "metric optimum is not an upward threshold rule (denominator <= 0)");
  MetricThreshold out;
  out.q0 = (m.b10 - m.b00) * l_star - m.a10 + m.a00;
  out.q1 = (m.b01 - m.b11) * l_star - m.a01 + m.a11;
  out.delta = out.q0 / den;
  return out;
}

}  // namespace cwrisk
