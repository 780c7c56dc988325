#include "gencol/column.hpp"

#include <cmath>
#include <stdexcept>

namespace gencol {

Column make_column(std::vector<std::int32_t> occupancy) {
  Column column;
  column.occupancy = std::move(occupancy);
  std::int64_t total = 0;
  for (const auto v : column.occupancy) total += v;
  if (total > INT32_MAX) throw std::invalid_argument("column: particle count overflow");
  column.n_particles = static_cast<std::int32_t>(total);
  validate_column(column);
  return column;
}

Column stack_column(int n_sites, int site, int n_particles) {
  if (site < 0 || site >= n_sites) throw std::invalid_argument("column: site out of range");
  if (n_particles < 1) throw std::invalid_argument("column: need at least 1 particle");
  Column column;
  column.occupancy.assign(n_sites, 0);
  column.occupancy[site] = n_particles;
  column.n_particles = n_particles;
  return column;
}

Column random_column(int n_sites, int n_particles, Rng& rng) {
  if (n_sites < 1 || n_particles < 1)
    throw std::invalid_argument("column: sites and particles must be positive");
  Column column;
  column.occupancy.assign(n_sites, 0);
  column.n_particles = n_particles;
  for (int k = 0; k < n_particles; ++k)
    ++column.occupancy[rng.uniform_index(static_cast<std::uint64_t>(n_sites))];
  return column;
}

void validate_column(const Column& column) {
  if (column.occupancy.empty()) throw std::invalid_argument("column: empty occupancy");
  std::int64_t total = 0;
  for (const auto v : column.occupancy) {
    if (v < 0) throw std::invalid_argument("column: negative occupancy");
    total += v;
  }
  if (total != column.n_particles || column.n_particles < 1)
    throw std::invalid_argument("column: occupancies do not sum to the particle count");
}

std::vector<double> column_to_probability(const Column& column) {
  std::vector<double> p(column.occupancy.size());
  const double inv = 1.0 / column.n_particles;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = column.occupancy[i] * inv;
  return p;
}

namespace {

// binomial(n, k) computed multiplicatively; every prefix is itself a binomial
// coefficient, so the division is exact at each step.
std::uint64_t binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw std::overflow_error("column universe exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t column_universe_size(int n_sites, int n_particles) {
  if (n_sites < 1 || n_particles < 1)
    throw std::invalid_argument("column universe: sites and particles must be positive");
  return binomial_exact(static_cast<std::uint64_t>(n_particles) + n_sites - 1,
                        static_cast<std::uint64_t>(n_particles));
}

double column_universe_size_approx(int n_sites, int n_particles) {
  if (n_sites < 1 || n_particles < 1)
    throw std::invalid_argument("column universe: sites and particles must be positive");
  const double n = static_cast<double>(n_particles) + n_sites - 1;
  const double k = n_particles;
  return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

std::vector<Column> enumerate_columns(int n_sites, int n_particles, std::uint64_t cap) {
  std::uint64_t total = 0;
  try {
    total = column_universe_size(n_sites, n_particles);
  } catch (const std::overflow_error&) {
    throw std::length_error("column enumeration: universe exceeds the cap");
  }
  if (total > cap) throw std::length_error("column enumeration: universe exceeds the cap");

  std::vector<Column> out;
  out.reserve(total);
  // walk the non-decreasing position tuples in lexicographic order
  std::vector<int> pos(n_particles, 0);
  for (;;) {
    Column column;
    column.occupancy.assign(n_sites, 0);
    column.n_particles = n_particles;
    for (int p : pos) ++column.occupancy[p];
    out.push_back(std::move(column));

    int k = n_particles - 1;
    while (k >= 0 && pos[k] == n_sites - 1) --k;
    if (k < 0) break;
    const int next = pos[k] + 1;
    for (int j = k; j < n_particles; ++j) pos[j] = next;
  }
  return out;
}

Column mutate(const Column& parent, const Grid& grid, Rng& rng) {
  const std::int64_t r =
      static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(parent.n_particles)));
  int site = 0;
  std::int64_t acc = parent.occupancy[0];
  while (acc <= r) {
    ++site;
    acc += parent.occupancy[site];
  }
  const auto& nbs = grid.neighbors[site];
  const int dest = nbs[rng.uniform_index(nbs.size())];
  Column child = parent;
  --child.occupancy[site];
  ++child.occupancy[dest];
  return child;
}

}  // namespace gencol
