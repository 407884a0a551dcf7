#include "cwrisk/types.hpp"

#include <cmath>
#include <cstdio>

namespace cwrisk {

namespace {

std::string at_index(const char* what, std::size_t i) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s (index %zu)", what, i);
  return buf;
}

}  // namespace

LabeledDataset::LabeledDataset(std::size_t k_, std::size_t d_,
                               std::vector<double> x_, std::vector<int> y_)
    : n(y_.size()), d(d_), k(k_), x(std::move(x_)), y(std::move(y_)) {
  if (n == 0) throw std::invalid_argument("dataset must contain examples");
  if (k < 2) throw std::invalid_argument("dataset needs at least two classes");
  if (d == 0) throw std::invalid_argument("dataset needs at least one feature");
  if (x.size() != n * d)
    throw std::invalid_argument("feature matrix size does not match n*d");
  counts.assign(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= k)
      throw std::invalid_argument(at_index("label out of range", i));
    ++counts[static_cast<std::size_t>(y[i])];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw std::invalid_argument(at_index("non-finite feature", i));
  }
}

ClassProbabilities::ClassProbabilities(std::vector<double> values)
    : p(std::move(values)) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0))
      throw std::invalid_argument(at_index("negative class probability", i));
    sum += p[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("class probabilities must sum to 1");
}

ClassProbabilities ClassProbabilities::from_counts(
    const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("empty count vector");
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("empty dataset in from_counts");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  // Normalize exactly: push rounding residue onto the largest entry.
  double sum = 0.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += p[i];
    if (p[i] > p[imax]) imax = i;
  }
  p[imax] += 1.0 - sum;
  return ClassProbabilities(std::move(p));
}

WeightVector::WeightVector(std::vector<double> q_, ClassProbabilities ref_)
    : q(std::move(q_)), ref(std::move(ref_)) {
  if (q.size() != ref.size())
    throw std::invalid_argument("weight/probability dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= 0.0))
      throw std::invalid_argument(at_index("negative class weight", i));
    sum += q[i] * ref[i];
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights are not normalized: sum q_i p_i != 1");
}

}  // namespace cwrisk
