#pragma once

#include <string>
#include <vector>

#include "gencol/column.hpp"
#include "gencol/grid.hpp"

namespace gencol {

// Symmetric two-body interaction: either an analytic kernel evaluated on site
// coordinates or a site-indexed table.
class PairPotential {
 public:
  // w(x, y) = 1 / sqrt(epsilon^2 + |x - y|^2). Requires epsilon > 0 so the
  // on-site value w(x, x) = 1/epsilon stays finite.
  static PairPotential coulomb(double epsilon);

  // Square symmetric table of pair values indexed by site.
  static PairPotential tabulated(std::vector<std::vector<double>> table);

  bool is_tabulated() const { return !table_.empty(); }
  double epsilon() const { return epsilon_; }
  const std::vector<std::vector<double>>& table() const { return table_; }

  // Analytic evaluation on coordinate tuples; rejects tabulated potentials.
  double evaluate(const std::vector<double>& x, const std::vector<double>& y) const;

 private:
  PairPotential() = default;
  double epsilon_ = 0;
  std::vector<std::vector<double>> table_;
};

// Dense symmetric matrix of pair costs between sites.
class CostMatrix {
 public:
  CostMatrix() = default;
  // Row-major entries; validated square, symmetric (within 1e-12) and finite.
  CostMatrix(int n, std::vector<double> entries);

  int size() const { return n_; }
  double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  int n_ = 0;
  std::vector<double> entries_;
};

CostMatrix build_cost_matrix(const Grid& grid, const PairPotential& potential);

// CSV with n rows of n comma-separated values.
CostMatrix load_cost_matrix_csv(const std::string& path);

// Interaction energy of a configuration: the sum of pair costs over unordered
// particle pairs. Evaluated on the occupied sites only, via
//   c = (N^2/2) lambda^T C lambda - (N/2) diag(C)^T lambda,  lambda = occupancy/N.
double column_cost(const Column& column, const CostMatrix& cost);

// Same value by direct summation over the N(N-1)/2 particle pairs.
double column_cost_bruteforce(const Column& column, const CostMatrix& cost);

// Symmetric nonnegative matrix summing to 1; row sums reproduce the
// one-point marginal.
class PairDensity {
 public:
  PairDensity() = default;
  PairDensity(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {}

  int size() const { return n_; }
  double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  int n_ = 0;
  std::vector<double> entries_;
};

// Two-point marginal of the symmetrized configuration:
//   M2 = N/(N-1) lambda lambda^T - 1/(N-1) sum_i lambda_i e_i e_i^T.
// Requires n_particles >= 2.
PairDensity pair_marginal(const Column& column);

// Convex combination of configuration pair marginals. Weights must be
// nonnegative and sum to 1 within 1e-9.
PairDensity plan_pair_marginal(const std::vector<Column>& columns,
                               const std::vector<double>& weights);

}  // namespace gencol
