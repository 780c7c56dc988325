#pragma once

#include <vector>

namespace gencol {

// Probability weights over the grid sites: the prescribed one-point marginal.
struct Marginal {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

Marginal make_uniform_marginal(int n_sites);

// weights[i-1] proportional to 0.2 + sin^2(i / (n_sites + 1)) for i = 1..n_sites,
// argument in radians.
Marginal make_sine_marginal(int n_sites);

// Renormalizes the given weights; rejects negative entries and all-zero input.
Marginal make_marginal(std::vector<double> weights);

// Entries nonnegative, summing to 1 within 1e-12.
void validate_marginal(const Marginal& marginal);

}  // namespace gencol
