#include "gencol/cost.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_util.hpp"

namespace gencol {

PairPotential PairPotential::coulomb(double epsilon) {
  if (!(epsilon > 0))
    throw std::invalid_argument("coulomb potential: epsilon must be positive");
  PairPotential p;
  p.epsilon_ = epsilon;
  return p;
}

PairPotential PairPotential::tabulated(std::vector<std::vector<double>> table) {
  const std::size_t n = table.size();
  if (n == 0) throw std::invalid_argument("tabulated potential: empty table");
  for (const auto& row : table)
    if (row.size() != n) throw std::invalid_argument("tabulated potential: table not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(table[i][j]))
        throw std::invalid_argument("tabulated potential: non-finite entry");
      if (std::abs(table[i][j] - table[j][i]) > 1e-12)
        throw std::invalid_argument("tabulated potential: table not symmetric");
    }
  PairPotential p;
  p.table_ = std::move(table);
  return p;
}

double PairPotential::evaluate(const std::vector<double>& x,
                               const std::vector<double>& y) const {
  if (is_tabulated())
    throw std::logic_error("tabulated potential has no coordinate evaluation");
  double d2 = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    d2 += d * d;
  }
  return 1.0 / std::sqrt(epsilon_ * epsilon_ + d2);
}

CostMatrix::CostMatrix(int n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 1 || entries_.size() != static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("cost matrix: bad dimensions");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const double v = entries_[static_cast<std::size_t>(i) * n_ + j];
      if (!std::isfinite(v))
        throw std::invalid_argument("cost matrix: non-finite entry");
      if (std::abs(v - entries_[static_cast<std::size_t>(j) * n_ + i]) > 1e-12)
        throw std::invalid_argument("cost matrix: not symmetric");
    }
}

CostMatrix build_cost_matrix(const Grid& grid, const PairPotential& potential) {
  const int n = grid.n_sites();
  std::vector<double> entries(static_cast<std::size_t>(n) * n);
  if (potential.is_tabulated()) {
    const auto& t = potential.table();
    if (static_cast<int>(t.size()) != n)
      throw std::invalid_argument("cost matrix: table size does not match the grid");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) entries[static_cast<std::size_t>(i) * n + j] = t[i][j];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = potential.evaluate(grid.sites[i], grid.sites[j]);
        entries[static_cast<std::size_t>(i) * n + j] = v;
        entries[static_cast<std::size_t>(j) * n + i] = v;
      }
  }
  return CostMatrix(n, std::move(entries));
}

CostMatrix load_cost_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    for (const auto& tok : detail::split(t, ','))
      row.push_back(detail::parse_double(tok, path));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument(path + ": empty cost table");
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument(path + ": cost table not square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return CostMatrix(n, std::move(entries));
}

// Both cost evaluations touch only the occupied sites, so they cost O(s^2)
// for s = number of occupied sites, independent of the grid size.

double column_cost(const Column& column, const CostMatrix& cost) {
  if (column.n_sites() != cost.size())
    throw std::invalid_argument("column cost: dimension mismatch");
  const double n = column.n_particles;
  double quad = 0;   // lambda^T C lambda over the support
  double diag = 0;   // diag(C)^T lambda
  const int sites = column.n_sites();
  for (int i = 0; i < sites; ++i) {
    if (column.occupancy[i] == 0) continue;
    const double li = column.occupancy[i] / n;
    diag += cost(i, i) * li;
    quad += cost(i, i) * li * li;
    for (int j = i + 1; j < sites; ++j) {
      if (column.occupancy[j] == 0) continue;
      quad += 2.0 * cost(i, j) * li * (column.occupancy[j] / n);
    }
  }
  return 0.5 * n * n * quad - 0.5 * n * diag;
}

double column_cost_bruteforce(const Column& column, const CostMatrix& cost) {
  if (column.n_sites() != cost.size())
    throw std::invalid_argument("column cost: dimension mismatch");
  // expand to explicit particle positions and sum over unordered pairs
  std::vector<int> positions;
  positions.reserve(column.n_particles);
  for (int i = 0; i < column.n_sites(); ++i)
    for (int k = 0; k < column.occupancy[i]; ++k) positions.push_back(i);
  double total = 0;
  for (std::size_t a = 0; a < positions.size(); ++a)
    for (std::size_t b = a + 1; b < positions.size(); ++b)
      total += cost(positions[a], positions[b]);
  return total;
}

PairDensity pair_marginal(const Column& column) {
  if (column.n_particles < 2)
    throw std::invalid_argument("pair marginal: needs at least 2 particles");
  const int n = column.n_sites();
  const double N = column.n_particles;
  // N/(N-1) lambda_i lambda_j off the diagonal and lambda_i (N lambda_i - 1)/(N-1)
  // on it, evaluated as integer pair counts over N(N-1) so entries stay exactly
  // nonnegative
  const double pairs = N * (N - 1);
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double ni = column.occupancy[i];
    if (ni == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (column.occupancy[j] == 0) continue;
      m[static_cast<std::size_t>(i) * n + j] = ni * column.occupancy[j] / pairs;
    }
    m[static_cast<std::size_t>(i) * n + i] = ni * (ni - 1) / pairs;
  }
  return PairDensity(n, std::move(m));
}

PairDensity plan_pair_marginal(const std::vector<Column>& columns,
                               const std::vector<double>& weights) {
  if (columns.empty() || columns.size() != weights.size())
    throw std::invalid_argument("plan pair marginal: mismatched columns and weights");
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw std::invalid_argument("plan pair marginal: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("plan pair marginal: weights do not sum to 1");
  const int n = columns[0].n_sites();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].n_sites() != n)
      throw std::invalid_argument("plan pair marginal: mixed column dimensions");
    if (weights[k] == 0) continue;
    const PairDensity part = pair_marginal(columns[k]);
    for (std::size_t idx = 0; idx < m.size(); ++idx)
      m[idx] += weights[k] * part.entries()[idx];
  }
  return PairDensity(n, std::move(m));
}

}  // namespace gencol
