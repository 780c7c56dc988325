#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gencol/column.hpp"
#include "gencol/cost.hpp"
#include "gencol/marginal.hpp"

namespace gencol {

// The column-restricted transport LP:
//   minimize costs^T alpha
//   subject to sum_k alpha_k * prob(columns[k]) = marginal,  alpha >= 0.
struct RestrictedProblem {
  std::vector<Column> columns;
  std::vector<double> costs;
  Marginal marginal;

  int n_columns() const { return static_cast<int>(columns.size()); }
};

RestrictedProblem make_restricted_problem(std::vector<Column> columns,
                                          const CostMatrix& cost,
                                          Marginal marginal);

enum class SolveStatus { optimal, infeasible, numerical_failure };
const char* to_string(SolveStatus status);

struct RmpSolution {
  std::vector<double> alpha;  // primal weight per column
  std::vector<double> dual;   // potential iterate, one entry per site
  double value = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::numerical_failure;
  long iterations = 0;
  // Final basis as column indices, -1 where an artificial variable remained
  // basic (possible on degenerate or rank-deficient instances).
  std::vector<int> basis;
};

struct SolveOptions {
  double tol = 1e-9;
  long max_iterations = 0;      // 0 picks 50 * n_sites^2
  std::vector<int> warm_basis;  // optional starting basis (column indices)
};

RmpSolution solve_rmp(const RestrictedProblem& problem, double tol = 1e-9);
RmpSolution solve_rmp(const RestrictedProblem& problem, const SolveOptions& options);

inline bool is_active(const RmpSolution& solution, int column_index,
                      double activity_tol = 1e-10) {
  return solution.alpha[column_index] > activity_tol;
}

// Residuals of the optimality certificates; each should be <= tol for a
// successful solve.
struct CertificateReport {
  double primal_residual = 0;   // ||A alpha - marginal||_inf
  double alpha_negativity = 0;  // max(0, -min_k alpha_k)
  double dual_violation = 0;    // max_k (lambda_k^T y - c_k), clamped at 0
  double duality_gap = 0;       // |c^T alpha - marginal^T y| / (1 + |value|)
  double slackness = 0;         // max_k alpha_k (c_k - lambda_k^T y), clamped at 0

  double max_residual() const;
};
CertificateReport verify_certificates(const RestrictedProblem& problem,
                                      const RmpSolution& solution);

// Plain-text LP-format dump (objective, equality rows, default nonnegative
// bounds) for cross-checking against external solvers.
void write_lp_format(const RestrictedProblem& problem, const std::string& path);

}  // namespace gencol
