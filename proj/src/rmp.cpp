#include "gencol/rmp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_util.hpp"

namespace gencol {

namespace {

struct SparseCol {
  std::vector<int> idx;
  std::vector<double> val;
};

constexpr double kPivotTol = 1e-9;      // ratio-test eligibility threshold
constexpr double kSingularTol = 1e-11;  // factorization pivot floor
constexpr double kDriveOutTol = 1e-7;   // pivot floor for removing artificials
constexpr int kRefactorEvery = 64;      // pivots between dense refactorizations
constexpr int kStallLimit = 100;        // degenerate pivots before Bland's rule

// Two-phase revised simplex on  min c^T x, A x = b, x >= 0  with b >= 0.
// The basis inverse is kept dense and updated per pivot; it is rebuilt from
// scratch every kRefactorEvery pivots to bound drift. Entering variables use
// Dantzig pricing with lowest-index tie-breaking, switching to Bland's rule
// after a run of degenerate pivots so cycling cannot occur. All choices are
// index-ordered, so solves are bitwise deterministic.
class RevisedSimplex {
 public:
  RevisedSimplex(const std::vector<SparseCol>& cols, const std::vector<double>& costs,
                 const std::vector<double>& rhs, double tol, long iter_cap)
      : cols_(cols),
        c_(costs),
        b_(rhs),
        m_(static_cast<int>(rhs.size())),
        n_(static_cast<int>(cols.size())),
        tol_(tol),
        iter_cap_(iter_cap) {}

  SolveStatus solve(const std::vector<int>& warm_basis) {
    bool warm = !warm_basis.empty() && try_warm_basis(warm_basis);
    if (!warm) {
      start_artificial_basis();
      const SolveStatus s1 = iterate();
      if (s1 != SolveStatus::optimal) return s1;
      double scale = 0;
      for (double v : b_) scale += std::abs(v);
      if (artificial_mass() > std::max(tol_, 1e-9) * (1.0 + scale))
        return SolveStatus::infeasible;
      if (!drive_out_artificials()) return SolveStatus::numerical_failure;
      phase_ = 2;
      bland_ = false;
      stall_ = 0;
    }
    const SolveStatus s2 = iterate();
    if (s2 != SolveStatus::optimal) return s2;
    value_ = 0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) value_ += c_[basis_[r]] * xb_[r];
    compute_duals();  // final potentials under the true costs
    return SolveStatus::optimal;
  }

  double value() const { return value_; }
  long iterations() const { return iter_; }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = xb_[r];
    return x;
  }

  std::vector<double> dual() const { return y_; }

  std::vector<int> basis_columns() const {
    std::vector<int> out(m_);
    for (int r = 0; r < m_; ++r) out[r] = basis_[r] < n_ ? basis_[r] : -1;
    return out;
  }

 private:
  const std::vector<SparseCol>& cols_;
  const std::vector<double>& c_;
  const std::vector<double>& b_;
  int m_;
  int n_;
  double tol_;
  long iter_cap_;

  int phase_ = 1;
  bool bland_ = false;
  int stall_ = 0;
  long iter_ = 0;
  int pivots_since_refactor_ = 0;
  double value_ = 0;

  std::vector<int> basis_;      // size m; entry < n_ is a column, n_ + r artificial
  std::vector<char> in_basis_;  // real columns only
  std::vector<double> binv_;    // m x m row-major basis inverse
  std::vector<double> xb_;      // basic variable values
  std::vector<double> y_;       // simplex multipliers for the current phase

  double phase_cost(int k) const {
    if (k >= n_) return phase_ == 1 ? 1.0 : 0.0;
    return phase_ == 1 ? 0.0 : c_[k];
  }

  void start_artificial_basis() {
    phase_ = 1;
    bland_ = false;
    stall_ = 0;
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;
    in_basis_.assign(n_, 0);
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    xb_ = b_;
  }

  bool try_warm_basis(const std::vector<int>& warm) {
    if (static_cast<int>(warm.size()) != m_) return false;
    std::vector<char> seen(n_, 0);
    for (int k : warm) {
      if (k < 0 || k >= n_ || seen[k]) return false;
      seen[k] = 1;
    }
    basis_ = warm;
    in_basis_ = std::move(seen);
    phase_ = 2;
    bland_ = false;
    stall_ = 0;
    if (!refactorize()) return false;
    for (double v : xb_)
      if (v < 0) return false;  // refactorize already clamped small drift
    return true;
  }

  // Rebuilds binv_ and xb_ from the current basis by Gauss-Jordan elimination
  // with partial pivoting. Returns false when the basis is singular or the
  // recomputed basic values are meaningfully negative.
  bool refactorize() {
    std::vector<double> a(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int k = basis_[r];
      if (k >= n_) {
        a[static_cast<std::size_t>(k - n_) * m_ + r] = 1.0;
      } else {
        const SparseCol& col = cols_[k];
        for (std::size_t t = 0; t < col.idx.size(); ++t)
          a[static_cast<std::size_t>(col.idx[t]) * m_ + r] = col.val[t];
      }
    }
    std::vector<double>& inv = binv_;
    inv.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(a[static_cast<std::size_t>(col) * m_ + col]);
      for (int r = col + 1; r < m_; ++r) {
        const double v = std::abs(a[static_cast<std::size_t>(r) * m_ + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best < kSingularTol) return false;
      if (piv != col) {
        for (int j = 0; j < m_; ++j) {
          std::swap(a[static_cast<std::size_t>(piv) * m_ + j],
                    a[static_cast<std::size_t>(col) * m_ + j]);
          std::swap(inv[static_cast<std::size_t>(piv) * m_ + j],
                    inv[static_cast<std::size_t>(col) * m_ + j]);
        }
      }
      const double s = 1.0 / a[static_cast<std::size_t>(col) * m_ + col];
      for (int j = 0; j < m_; ++j) {
        a[static_cast<std::size_t>(col) * m_ + j] *= s;
        inv[static_cast<std::size_t>(col) * m_ + j] *= s;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = a[static_cast<std::size_t>(r) * m_ + col];
        if (f == 0.0) continue;
        for (int j = 0; j < m_; ++j) {
          a[static_cast<std::size_t>(r) * m_ + j] -=
              f * a[static_cast<std::size_t>(col) * m_ + j];
          inv[static_cast<std::size_t>(r) * m_ + j] -=
              f * inv[static_cast<std::size_t>(col) * m_ + j];
        }
      }
    }
    // Gauss-Jordan left inv = B^-1 with rows permuted along the way; the row
    // swaps applied to both matrices keep them consistent.
    xb_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double s = 0;
      for (int j = 0; j < m_; ++j) s += binv_[static_cast<std::size_t>(r) * m_ + j] * b_[j];
      if (s < -1e-7) return false;
      xb_[r] = s < 0 ? 0.0 : s;
    }
    pivots_since_refactor_ = 0;
    return true;
  }

  void compute_duals() {
    y_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double cb = phase_cost(basis_[r]);
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(r) * m_];
      for (int i = 0; i < m_; ++i) y_[i] += cb * row[i];
    }
  }

  double reduced_cost(int j) const {
    const SparseCol& col = cols_[j];
    double dot = 0;
    for (std::size_t t = 0; t < col.idx.size(); ++t) dot += y_[col.idx[t]] * col.val[t];
    return (phase_ == 1 ? 0.0 : c_[j]) - dot;
  }

  int price() const {
    int best = -1;
    double best_rc = -tol_;
    for (int j = 0; j < n_; ++j) {
      if (in_basis_[j]) continue;
      const double rc = reduced_cost(j);
      if (rc < -tol_ && bland_) return j;  // lowest eligible index
      if (rc < best_rc) {
        best_rc = rc;
        best = j;
      }
    }
    return best;
  }

  void direction(int j, std::vector<double>& d) const {
    d.assign(m_, 0.0);
    const SparseCol& col = cols_[j];
    for (std::size_t t = 0; t < col.idx.size(); ++t) {
      const int i = col.idx[t];
      const double v = col.val[t];
      for (int r = 0; r < m_; ++r) d[r] += binv_[static_cast<std::size_t>(r) * m_ + i] * v;
    }
  }

  int choose_leaving(const std::vector<double>& d, double& theta) const {
    int leave = -1;
    theta = 0;
    for (int r = 0; r < m_; ++r) {
      if (d[r] <= kPivotTol) continue;
      double ratio = xb_[r] / d[r];
      if (ratio < 0) ratio = 0;  // drift clamp
      if (leave < 0 || ratio < theta - 1e-12) {
        leave = r;
        theta = ratio;
      } else if (ratio <= theta + 1e-12) {
        // tie: prefer evicting an artificial, then the smaller variable index
        const bool cand_art = basis_[r] >= n_;
        const bool cur_art = basis_[leave] >= n_;
        if (cand_art && !cur_art) {
          leave = r;
          theta = ratio;
        } else if (cand_art == cur_art && basis_[r] < basis_[leave]) {
          leave = r;
          theta = ratio;
        }
      }
    }
    return leave;
  }

  void apply_pivot(int leave, int enter, const std::vector<double>& d, double theta) {
    double* rowL = &binv_[static_cast<std::size_t>(leave) * m_];
    const double inv_piv = 1.0 / d[leave];
    for (int j = 0; j < m_; ++j) rowL[j] *= inv_piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave) continue;
      const double f = d[r];
      if (f == 0.0) continue;
      double* row = &binv_[static_cast<std::size_t>(r) * m_];
      for (int j = 0; j < m_; ++j) row[j] -= f * rowL[j];
      xb_[r] -= f * theta;
      if (xb_[r] < 0) xb_[r] = 0;
    }
    xb_[leave] = theta;
    if (basis_[leave] < n_) in_basis_[basis_[leave]] = 0;
    basis_[leave] = enter;
    in_basis_[enter] = 1;
    ++pivots_since_refactor_;
  }

  SolveStatus iterate() {
    std::vector<double> d;
    for (;;) {
      if (iter_ >= iter_cap_) return SolveStatus::numerical_failure;
      compute_duals();
      const int enter = price();
      if (enter < 0) return SolveStatus::optimal;
      ++iter_;
      direction(enter, d);
      double theta = 0;
      const int leave = choose_leaving(d, theta);
      if (leave < 0) return SolveStatus::numerical_failure;  // unbounded direction
      apply_pivot(leave, enter, d, theta);
      if (theta > 1e-12) {
        stall_ = 0;
      } else if (!bland_ && ++stall_ > kStallLimit) {
        bland_ = true;
      }
      if (pivots_since_refactor_ >= kRefactorEvery && !refactorize())
        return SolveStatus::numerical_failure;
    }
  }

  double artificial_mass() const {
    double s = 0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= n_) s += xb_[r];
    return s;
  }

  // Pivots remaining artificials out wherever some column has a usable pivot
  // element in their row. Rows where none exists are linearly dependent; the
  // artificial stays basic at zero and never moves again.
  bool drive_out_artificials() {
    std::vector<double> d;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        direction(j, d);
        if (std::abs(d[r]) <= kDriveOutTol) continue;
        apply_pivot(r, j, d, xb_[r] / d[r] < 0 ? 0.0 : xb_[r] / d[r]);
        if (pivots_since_refactor_ >= kRefactorEvery && !refactorize()) return false;
        break;
      }
    }
    return true;
  }
};

std::vector<SparseCol> sparse_columns(const RestrictedProblem& problem) {
  std::vector<SparseCol> cols(problem.columns.size());
  for (std::size_t k = 0; k < problem.columns.size(); ++k) {
    const Column& c = problem.columns[k];
    const double inv = 1.0 / c.n_particles;
    for (int i = 0; i < c.n_sites(); ++i) {
      if (c.occupancy[i] == 0) continue;
      cols[k].idx.push_back(i);
      cols[k].val.push_back(c.occupancy[i] * inv);
    }
  }
  return cols;
}

void check_problem(const RestrictedProblem& problem) {
  if (problem.columns.empty())
    throw std::invalid_argument("restricted problem: no columns");
  if (problem.columns.size() != problem.costs.size())
    throw std::invalid_argument("restricted problem: one cost per column required");
  validate_marginal(problem.marginal);
  const int m = problem.marginal.size();
  for (const auto& col : problem.columns) {
    validate_column(col);
    if (col.n_sites() != m)
      throw std::invalid_argument("restricted problem: column dimension mismatch");
  }
}

}  // namespace

RestrictedProblem make_restricted_problem(std::vector<Column> columns,
                                          const CostMatrix& cost, Marginal marginal) {
  RestrictedProblem problem;
  problem.columns = std::move(columns);
  problem.marginal = std::move(marginal);
  problem.costs.reserve(problem.columns.size());
  for (const auto& col : problem.columns)
    problem.costs.push_back(column_cost(col, cost));
  check_problem(problem);
  return problem;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

RmpSolution solve_rmp(const RestrictedProblem& problem, double tol) {
  SolveOptions options;
  options.tol = tol;
  return solve_rmp(problem, options);
}

RmpSolution solve_rmp(const RestrictedProblem& problem, const SolveOptions& options) {
  check_problem(problem);
  const auto cols = sparse_columns(problem);
  const int m = problem.marginal.size();
  const long cap = options.max_iterations > 0
                       ? options.max_iterations
                       : 50L * static_cast<long>(m) * static_cast<long>(m);
  RevisedSimplex simplex(cols, problem.costs, problem.marginal.weights, options.tol, cap);
  RmpSolution out;
  out.status = simplex.solve(options.warm_basis);
  out.iterations = simplex.iterations();
  if (out.status == SolveStatus::optimal) {
    out.alpha = simplex.primal();
    out.dual = simplex.dual();
    out.value = simplex.value();
    out.basis = simplex.basis_columns();
  }
  return out;
}

double CertificateReport::max_residual() const {
  return std::max({primal_residual, alpha_negativity, dual_violation, duality_gap, slackness});
}

CertificateReport verify_certificates(const RestrictedProblem& problem,
                                      const RmpSolution& solution) {
  CertificateReport report;
  const int m = problem.marginal.size();
  const int n = problem.n_columns();
  std::vector<double> residual(problem.marginal.weights);
  for (double& v : residual) v = -v;
  double primal_cost = 0;
  for (int k = 0; k < n; ++k) {
    const double a = solution.alpha[k];
    report.alpha_negativity = std::max(report.alpha_negativity, -a);
    primal_cost += problem.costs[k] * a;
    const Column& col = problem.columns[k];
    const double inv = 1.0 / col.n_particles;
    double lam_dot_y = 0;
    for (int i = 0; i < m; ++i) {
      if (col.occupancy[i] == 0) continue;
      const double li = col.occupancy[i] * inv;
      residual[i] += a * li;
      lam_dot_y += li * solution.dual[i];
    }
    report.dual_violation = std::max(report.dual_violation, lam_dot_y - problem.costs[k]);
    report.slackness = std::max(report.slackness, a * (problem.costs[k] - lam_dot_y));
  }
  report.alpha_negativity = std::max(report.alpha_negativity, 0.0);
  report.dual_violation = std::max(report.dual_violation, 0.0);
  report.slackness = std::max(report.slackness, 0.0);
  for (int i = 0; i < m; ++i)
    report.primal_residual = std::max(report.primal_residual, std::abs(residual[i]));
  double dual_value = 0;
  for (int i = 0; i < m; ++i) dual_value += problem.marginal.weights[i] * solution.dual[i];
  report.duality_gap = std::abs(primal_cost - dual_value) / (1.0 + std::abs(solution.value));
  return report;
}

void write_lp_format(const RestrictedProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  const int n = problem.n_columns();
  const int m = problem.marginal.size();
  out << "\\ column-restricted transport problem: " << n << " columns, " << m
      << " sites\n";
  out << "Minimize\n obj:";
  int terms = 0;
  for (int k = 0; k < n; ++k) {
    const double c = problem.costs[k];
    out << (c < 0 ? " - " : (terms ? " + " : " ")) << detail::format_double(std::abs(c))
        << " a" << k;
    if (++terms % 6 == 0) out << "\n     ";
  }
  out << "\nSubject To\n";
  for (int i = 0; i < m; ++i) {
    out << " site" << (i + 1) << ":";
    terms = 0;
    for (int k = 0; k < n; ++k) {
      const Column& col = problem.columns[k];
      if (col.occupancy[i] == 0) continue;
      const double v = static_cast<double>(col.occupancy[i]) / col.n_particles;
      out << (terms ? " + " : " ") << detail::format_double(v) << " a" << k;
      if (++terms % 6 == 0) out << "\n      ";
    }
    if (terms == 0) out << " 0 a0";
    out << " = " << detail::format_double(problem.marginal.weights[i]) << "\n";
  }
  out << "End\n";
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace gencol
