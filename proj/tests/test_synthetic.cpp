#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cwrisk/quadrature.hpp"
#include "cwrisk/rng.hpp"
#include "cwrisk/synthetic.hpp"
#include "cwrisk/types.hpp"

using namespace cwrisk;

namespace {

// Closed-form primitive of eta: integral_0^z x^(p/(1-p)) dx = H(z).
double eta_primitive(const SyntheticWorld& w, double z) {
  return (1.0 - w.p) * std::pow(z, 1.0 / (1.0 - w.p));
}

// Class-conditional error rates of the rule 1{x > cut} from the primitive:
//   r0 = P(x > cut | y=0),  r1 = P(x <= cut | y=1).
double r0_of_cut(const SyntheticWorld& w, double cut) {
  const double int_one_minus_eta =
      (1.0 - cut) - ((1.0 - w.p) - eta_primitive(w, cut));
  return int_one_minus_eta / w.p;
}

double r1_of_cut(const SyntheticWorld& w, double cut) {
  return eta_primitive(w, cut) / (1.0 - w.p);
}

}  // namespace

TEST_CASE("world regression function and its inverse") {
  const SyntheticWorld w(0.8);
  CHECK(w.eta(0.0) == 0.0);
  CHECK(w.eta(1.0) == 1.0);
  CHECK(w.eta(0.5) == doctest::Approx(std::pow(0.5, 4.0)).epsilon(1e-12));
  for (double x : {0.1, 0.37, 0.62, 0.93})
    CHECK(std::fabs(w.eta_inverse(w.eta(x)) - x) < 1e-12);
  CHECK_THROWS_AS(SyntheticWorld(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SyntheticWorld(1.0), std::invalid_argument);
}

TEST_CASE("optimal-rule quantities against two independent oracles") {
  for (double p : {0.5, 0.8, 0.9, 0.95}) {
    const SyntheticWorld w(p);
    const BayesQuantities bq = bayes_quantities(w);

    // The unweighted optimum cuts eta at 1/2.
    CHECK(std::fabs(w.eta(bq.threshold_x) - 0.5) < 1e-12);

    // Oracle 1: the closed-form primitive of eta.
    CHECK(std::fabs(bq.r0 - r0_of_cut(w, bq.threshold_x)) < 1e-12);
    CHECK(std::fabs(bq.r1 - r1_of_cut(w, bq.threshold_x)) < 1e-12);

    // Oracle 2: adaptive quadrature of the conditional densities.
    const double q_r0 =
        integrate([&](double x) { return 1.0 - w.eta(x); }, bq.threshold_x,
                  1.0, 1e-9) /
        p;
    const double q_r1 =
        integrate([&](double x) { return w.eta(x); }, 0.0, bq.threshold_x,
                  1e-9) /
        (1.0 - p);
    CHECK(std::fabs(bq.r0 - q_r0) < 1e-7);
    CHECK(std::fabs(bq.r1 - q_r1) < 1e-7);
  }
}

TEST_CASE("symmetric world has equal error rates of one quarter") {
  const BayesQuantities bq = bayes_quantities(SyntheticWorld(0.5));
  CHECK(bq.threshold_x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bq.r0 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(bq.r1 == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("near-degenerate worlds behave at the limits") {
  const BayesQuantities bq = bayes_quantities(SyntheticWorld(0.999));
  CHECK(bq.r1 == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(bq.r0 < 1e-3);
  CHECK(bq.r0 >= 0.0);
}

TEST_CASE("sampling is deterministic and matches the marginal") {
  const SyntheticWorld w(0.9);
  const LabeledDataset a = synth_sample(w, 2000, 991);
  const LabeledDataset b = synth_sample(w, 2000, 991);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  const LabeledDataset c = synth_sample(w, 2000, 992);
  CHECK(a.x != c.x);

  const std::size_t n = 100000;
  const LabeledDataset big = synth_sample(w, n, 1234);
  const double frac0 = double(big.counts[0]) / double(n);
  const double sigma = std::sqrt(0.9 * 0.1 / double(n));
  CHECK(std::fabs(frac0 - 0.9) < 4.0 * sigma);
  CHECK_THROWS_AS(synth_sample(w, 0, 1), std::invalid_argument);
}

TEST_CASE("weight pairs map to thresholds in eta space") {
  CHECK(weighted_threshold(1.0, 1.0) == doctest::Approx(0.5));
  CHECK(weighted_threshold(2.0, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(weighted_threshold(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(weighted_threshold(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(weighted_threshold(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("box-kernel regression tracks the true eta") {
  const SyntheticWorld w(0.8);
  const std::size_t n = 5000;
  const LabeledDataset data = synth_sample(w, n, 5550123);
  const double bw = std::pow(double(n), -1.0 / 3.0);
  const EtaHat fit = fit_eta_hat(data, bw);

  double mad = 0.0;
  int cells = 0;
  for (double x = 0.05; x < 1.0; x += 0.05, ++cells)
    mad += std::fabs(fit(x) - w.eta(x));
  mad /= cells;
  CHECK(mad < 0.05);

  // Windows without samples fall back to 1/2.
  EtaHat tiny;
  tiny.bandwidth = 0.1;
  tiny.xs = {0.40, 0.45, 0.50};
  tiny.ysum = {0.0, 1.0, 1.0, 2.0};
  CHECK(tiny(0.9) == 0.5);
  CHECK(tiny(0.45) == doctest::Approx(2.0 / 3.0));  // window covers all three

  CHECK_THROWS_AS(fit_eta_hat(data, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_eta_hat(data, -0.1), std::invalid_argument);
  const LabeledDataset triple(3, 1, {0.1, 0.2, 0.3}, {0, 1, 2});
  CHECK_THROWS_AS(fit_eta_hat(triple, 0.1), std::invalid_argument);
}

TEST_CASE("regression breakpoints list the window edges inside (0,1)") {
  EtaHat fit;
  fit.bandwidth = 0.25;
  fit.xs = {0.125, 0.5};
  fit.ysum = {0.0, 0.0, 1.0};
  const auto pts = fit.breakpoints();
  REQUIRE(pts.size() == 3);  // 0.125 - 0.25 clipped away
  CHECK(pts[0] == 0.25);
  CHECK(pts[1] == 0.375);
  CHECK(pts[2] == 0.75);

  EtaHat touch;  // edges that land exactly on 0, 1, or each other
  touch.bandwidth = 0.25;
  touch.xs = {0.25, 0.75};
  touch.ysum = {0.0, 1.0, 1.0};
  const auto dedup = touch.breakpoints();
  REQUIRE(dedup.size() == 1);  // 0 and 1 excluded, shared 0.5 emitted once
  CHECK(dedup[0] == 0.5);
}

TEST_CASE("threshold-rule risk agrees with the closed form") {
  Rng rng(808);
  for (double p : {0.5, 0.8, 0.9}) {
    const SyntheticWorld w(p);
    for (int trial = 0; trial < 8; ++trial) {
      const double q0 = 0.1 + 2.0 * rng.uniform();
      const double q1 = 0.1 + 2.0 * rng.uniform();
      const double t = 0.05 + 0.9 * rng.uniform();
      const double cut = w.eta_inverse(t);
      const double want = q0 * w.p * r0_of_cut(w, cut) +
                          q1 * (1.0 - w.p) * r1_of_cut(w, cut);
      const double got = q_risk_of_threshold(w, exact_rule(w, t), q0, q1);
      CHECK(std::fabs(got - want) < 2e-8);
    }
  }
}

TEST_CASE("unweighted risk at the optimal cut is the weighted base rate") {
  const SyntheticWorld w(0.5);
  const double risk = q_risk_of_threshold(w, exact_rule(w, 0.5), 1.0, 1.0);
  CHECK(std::fabs(risk - 0.25) < 1e-8);  // p*r0 + (1-p)*r1 at p = 1/2
}

TEST_CASE("no other threshold beats the matching weighted cut") {
  const SyntheticWorld w(0.85);
  const double q0 = 1.4, q1 = 0.7;
  const double best =
      q_risk_of_threshold(w, exact_rule(w, weighted_threshold(q0, q1)), q0, q1);
  for (double t = 0.05; t < 1.0; t += 0.05) {
    const double other = q_risk_of_threshold(w, exact_rule(w, t), q0, q1);
    CHECK(best <= other + 1e-7);
  }
}

TEST_CASE("plug-in rules use the fitted regressor") {
  const SyntheticWorld w(0.8);
  const LabeledDataset data = synth_sample(w, 4000, 31415);
  const EtaHat fit = fit_eta_hat(data, 0.06);
  const ThresholdClassifier rule = plugin_rule(fit, 0.5);
  // The plug-in risk should be close to (and no better than) the optimum.
  const double plug = q_risk_of_threshold(w, rule, 1.0, 1.0);
  const double best = q_risk_of_threshold(w, exact_rule(w, 0.5), 1.0, 1.0);
  CHECK(plug >= best - 1e-6);
  CHECK(plug - best < 0.05);
}

TEST_CASE("decomposition with the exact regressor has no estimation term") {
  const SyntheticWorld w(0.9);
  const ErrorDecomposition dec = error_decomposition(w, 1.0, 1.0, 3.0, 0.5);
  CHECK(dec.estimation == 0.0);
  CHECK(std::fabs(dec.excess - (dec.estimation + dec.irreducible)) < 2e-7);
  CHECK(dec.irreducible >= -1e-7);
  CHECK(dec.irreducible <= dec.ie_bound + 1e-7);
  CHECK(dec.excess > 1e-4);  // deployment weights genuinely moved
}

TEST_CASE("matching train and deployment weights zero the decomposition") {
  const SyntheticWorld w(0.8);
  const ErrorDecomposition dec = error_decomposition(w, 1.2, 0.6, 1.2, 0.6);
  CHECK(std::fabs(dec.excess) < 1e-12);
  CHECK(std::fabs(dec.irreducible) < 1e-12);
  CHECK(std::fabs(dec.ie_bound) < 1e-12);
}

TEST_CASE("decomposition identity and bound hold with a fitted regressor") {
  const SyntheticWorld w(0.9);
  const LabeledDataset data = synth_sample(w, 3000, 777);
  const EtaHat fit = fit_eta_hat(data, std::pow(3000.0, -1.0 / 3.0));
  for (const auto& [q0, q1, q0p, q1p] :
       {std::array<double, 4>{1.0, 1.0, 2.0, 0.8},
        std::array<double, 4>{0.6, 1.8, 1.0, 1.0},
        std::array<double, 4>{1.0, 1.0, 1.0, 1.0}}) {
    const ErrorDecomposition dec =
        error_decomposition(w, q0, q1, q0p, q1p, &fit);
    CHECK(std::fabs(dec.excess - (dec.estimation + dec.irreducible)) < 2e-7);
    CHECK(dec.excess >= -1e-7);       // deployment optimum is a lower bound
    CHECK(dec.irreducible >= -1e-7);  // train optimum can't beat it either
    CHECK(dec.irreducible <= dec.ie_bound + 1e-7);
  }
}

TEST_CASE("linear-fractional metrics map to thresholds") {
  // Accuracy: numerator TP + TN, denominator 1.
  LinearFractionalCoeffs acc;
  acc.a11 = 1.0;
  acc.a00 = 1.0;
  acc.b0 = 1.0;
  for (double l : {0.2, 0.8}) {
    const MetricThreshold t = metric_to_threshold(acc, l);
    CHECK(t.delta == doctest::Approx(0.5).epsilon(1e-15));
  }

  // Weighting true positives double shifts the cut to 1/3.
  LinearFractionalCoeffs wacc;
  wacc.a11 = 2.0;
  wacc.a00 = 1.0;
  wacc.b0 = 1.0;
  CHECK(metric_to_threshold(wacc, 0.5).delta ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // F1 = 2TP / (2TP + FP + FN): optimal cut is half the optimal value.
  LinearFractionalCoeffs f1;
  f1.a11 = 2.0;
  f1.b11 = 2.0;
  f1.b10 = 1.0;
  f1.b01 = 1.0;
  const MetricThreshold t = metric_to_threshold(f1, 0.7);
  CHECK(t.delta == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(weighted_threshold(t.q0, t.q1) == doctest::Approx(0.35).epsilon(1e-12));

  LinearFractionalCoeffs bad;
  bad.a11 = -1.0;
  bad.a00 = -1.0;
  CHECK_THROWS_AS(metric_to_threshold(bad, 0.5), std::invalid_argument);
}

TEST_CASE("threshold round-trips hold for random valid metrics") {
  Rng rng(112233);
  int accepted = 0;
  while (accepted < 50) {
    LinearFractionalCoeffs m;
    m.a11 = 0.5 + 1.5 * rng.uniform();
    m.a00 = 0.5 + 1.5 * rng.uniform();
    m.a10 = -0.5 * rng.uniform();
    m.a01 = -0.5 * rng.uniform();
    m.b0 = 0.5 + rng.uniform();
    m.b11 = 0.5 * rng.uniform();
    m.b10 = 0.5 * rng.uniform();
    m.b01 = 0.5 * rng.uniform();
    m.b00 = 0.5 * rng.uniform();
    const double l = rng.uniform();
    const double den = m.a11 - m.a10 - m.a01 + m.a00 -
                       (m.b11 - m.b10 - m.b01 + m.b00) * l;
    const double q0 = (m.b10 - m.b00) * l - m.a10 + m.a00;
    const double q1 = (m.b01 - m.b11) * l - m.a01 + m.a11;
    if (!(den > 0.1) || q0 < 0.0 || q1 < 0.0) continue;
    ++accepted;
    const MetricThreshold t = metric_to_threshold(m, l);
    CHECK(std::fabs(t.q0 - q0) < 1e-12);
    CHECK(std::fabs(t.q1 - q1) < 1e-12);
    CHECK(std::fabs(weighted_threshold(t.q0, t.q1) - t.delta) < 1e-12);
  }
}
