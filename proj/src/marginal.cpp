#include "gencol/marginal.hpp"

#include <cmath>
#include <stdexcept>

namespace gencol {

Marginal make_uniform_marginal(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("marginal needs at least 1 site");
  return Marginal{std::vector<double>(n_sites, 1.0 / n_sites)};
}

Marginal make_sine_marginal(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("marginal needs at least 1 site");
  std::vector<double> w(n_sites);
  for (int i = 1; i <= n_sites; ++i) {
    const double s = std::sin(static_cast<double>(i) / (n_sites + 1));
    w[i - 1] = 0.2 + s * s;
  }
  return make_marginal(std::move(w));
}

Marginal make_marginal(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("marginal: empty weight vector");
  double sum = 0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0)
      throw std::invalid_argument("marginal: weights must be finite and nonnegative");
    sum += v;
  }
  if (sum <= 0) throw std::invalid_argument("marginal: weights sum to zero");
  for (double& v : weights) v /= sum;
  return Marginal{std::move(weights)};
}

void validate_marginal(const Marginal& marginal) {
  if (marginal.weights.empty()) throw std::invalid_argument("marginal: empty");
  double sum = 0;
  for (double v : marginal.weights) {
    if (!(v >= 0)) throw std::invalid_argument("marginal: negative weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("marginal: weights do not sum to 1");
}

}  // namespace gencol
