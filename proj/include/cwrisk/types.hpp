#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwrisk {

// Thrown when input data (files, rows, labels) is malformed.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative routine fails numerically (divergence,
// non-convergent quadrature, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense feature matrix with integer class labels in {0, ..., k-1}.
// Rows are stored contiguously; all features must be finite.
struct LabeledDataset {
  std::size_t n = 0;  // number of examples
  std::size_t d = 0;  // feature dimension
  std::size_t k = 0;  // number of classes
  std::vector<double> x;             // row-major, n*d
  std::vector<int> y;                // length n
  std::vector<std::size_t> counts;   // per-class example counts, length k

  LabeledDataset() = default;
  // Validates shapes, label range and feature finiteness; computes counts.
  LabeledDataset(std::size_t k_, std::size_t d_, std::vector<double> x_,
                 std::vector<int> y_);

  const double* row(std::size_t i) const { return x.data() + i * d; }
};

// Class marginals p with p_i >= 0 and sum(p) == 1 (tolerance 1e-12 at
// construction; empirical counts normalize exactly).
struct ClassProbabilities {
  std::vector<double> p;

  explicit ClassProbabilities(std::vector<double> values);
  static ClassProbabilities from_counts(const std::vector<std::size_t>& counts);
  static ClassProbabilities from_dataset(const LabeledDataset& data) {
    return from_counts(data.counts);
  }

  std::size_t size() const { return p.size(); }
  double operator[](std::size_t i) const { return p[i]; }
};

// Per-class weighting q with q_i >= 0 and sum_i q_i p_i == 1 under its
// reference marginals (tolerance 1e-9).
struct WeightVector {
  std::vector<double> q;
  ClassProbabilities ref;

  WeightVector(std::vector<double> q_, ClassProbabilities ref_);

  std::size_t size() const { return q.size(); }
  double operator[](std::size_t i) const { return q[i]; }
};

enum class LossKind { ZeroOne, CrossEntropy, MulticlassMargin };

// Summary of an evaluation: per-class risks plus the scalar objective that
// was requested.  lambda_opt / q_star are set only for robust objectives.
struct RiskReport {
  std::vector<double> per_class;
  double objective_value = 0.0;
  std::size_t worst_class = 0;  // argmax per_class, ties -> lowest index
  std::optional<double> lambda_opt;
  std::optional<std::vector<double>> q_star;
  std::string probs_label;  // which marginals were used, e.g. "train-empirical"
};

}  // namespace cwrisk
