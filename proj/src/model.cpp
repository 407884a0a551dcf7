#include "cwrisk/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cwrisk {

LinearModel::LinearModel(std::size_t k_, std::size_t d_)
    : k(k_), d(d_), w(k_ * (d_ + 1), 0.0) {
  if (k < 2) throw std::invalid_argument("model needs at least two classes");
  if (d == 0) throw std::invalid_argument("model needs at least one feature");
}

void LinearModel::scores(const double* x, double* out) const {
  const std::size_t c = cols();
  for (std::size_t j = 0; j < k; ++j) {
    const double* row = w.data() + j * c;
    double s = row[d];  // bias
    for (std::size_t f = 0; f < d; ++f) s += row[f] * x[f];
    out[j] = s;
  }
}

std::size_t argmax_lowest(const double* v, std::size_t k) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < k; ++j)
    if (v[j] > v[best]) best = j;
  return best;
}

int LinearModel::predict(const double* x) const {
  std::vector<double> s(k);
  scores(x, s.data());
  return static_cast<int>(argmax_lowest(s.data(), k));
}

void softmax(const double* s, std::size_t k, double* out) {
  double smax = s[0];
  for (std::size_t j = 1; j < k; ++j) smax = std::max(smax, s[j]);
  double z = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = std::exp(s[j] - smax);
    z += out[j];
  }
  for (std::size_t j = 0; j < k; ++j) out[j] /= z;
}

double sample_loss(LossKind loss, const double* s, std::size_t k, int y) {
  const std::size_t yy = static_cast<std::size_t>(y);
  switch (loss) {
    case LossKind::ZeroOne:
      return argmax_lowest(s, k) == yy ? 0.0 : 1.0;
    case LossKind::CrossEntropy: {
      double smax = s[0];
      for (std::size_t j = 1; j < k; ++j) smax = std::max(smax, s[j]);
      double z = 0.0;
      for (std::size_t j = 0; j < k; ++j) z += std::exp(s[j] - smax);
      return std::log(z) - (s[yy] - smax);
    }
    case LossKind::MulticlassMargin: {
      double other = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j)
        if (j != yy) other = std::max(other, s[j]);
      const double a = s[yy] - other;
      if (a <= 0.0) return 1.0;
      if (a <= 1.0) return 1.0 - a;
      return 0.0;
    }
  }
  throw std::invalid_argument("unknown loss kind");
}

}  // namespace cwrisk
