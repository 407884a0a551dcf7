#pragma once

#include <cstddef>
#include <vector>

#include "cwrisk/types.hpp"

namespace cwrisk {

// Multiclass linear scorer.  Parameters are a k x (d+1) matrix, row-major,
// with the last column acting on an implicit constant feature 1 (bias).
struct LinearModel {
  std::size_t k = 0;
  std::size_t d = 0;
  std::vector<double> w;  // k * (d+1)

  LinearModel() = default;
  LinearModel(std::size_t k_, std::size_t d_);  // zero-initialized

  std::size_t cols() const { return d + 1; }
  double* param_row(std::size_t c) { return w.data() + c * cols(); }
  const double* param_row(std::size_t c) const { return w.data() + c * cols(); }

  // Writes the k class scores for feature vector x (length d) into out.
  void scores(const double* x, double* out) const;

  // argmax of the scores; ties resolve to the lowest class index.
  int predict(const double* x) const;
};

// Index of the largest score, lowest index on ties.
std::size_t argmax_lowest(const double* v, std::size_t k);

// Per-sample losses on a score vector s (length k) for true class y.
// CrossEntropy is the softmax log-loss with log-sum-exp stabilization.
// MulticlassMargin applies the unit-ramp phi(a) = 1 for a <= 0, 1-a for
// 0 < a <= 1, 0 for a > 1 to the margin a = s_y - max_{c != y} s_c.
double sample_loss(LossKind loss, const double* s, std::size_t k, int y);

// Softmax probabilities of s into out (length k), numerically stabilized.
void softmax(const double* s, std::size_t k, double* out);

}  // namespace cwrisk
