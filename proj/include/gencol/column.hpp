#pragma once

#include <cstdint>
#include <vector>

#include "gencol/grid.hpp"
#include "gencol/rng.hpp"

namespace gencol {

// An N-particle configuration on the grid, stored as per-site occupation
// numbers. occupancy/N is the induced probability vector on the sites; that
// vector is also the column this configuration contributes to the marginal
// constraint matrix.
struct Column {
  std::vector<std::int32_t> occupancy;
  std::int32_t n_particles = 0;

  int n_sites() const { return static_cast<int>(occupancy.size()); }
  bool operator==(const Column&) const = default;
};

struct ColumnHash {
  std::size_t operator()(const Column& column) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto v : column.occupancy) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Derives the particle count from the occupancies; validates.
Column make_column(std::vector<std::int32_t> occupancy);

// All particles sitting on one site.
Column stack_column(int n_sites, int site, int n_particles);

// n_particles independent uniform site draws.
Column random_column(int n_sites, int n_particles, Rng& rng);

// Occupancies nonnegative and summing to n_particles >= 1.
void validate_column(const Column& column);

std::vector<double> column_to_probability(const Column& column);

// Number of distinct n_particles-point configurations on n_sites sites:
// binomial(n_particles + n_sites - 1, n_particles). The exact version throws
// std::overflow_error when the count does not fit in 64 bits.
std::uint64_t column_universe_size(int n_sites, int n_particles);
double column_universe_size_approx(int n_sites, int n_particles);

// Every configuration, ordered lexicographically by the sorted tuple of
// particle positions. Throws std::length_error when the universe exceeds cap.
std::vector<Column> enumerate_columns(int n_sites, int n_particles,
                                      std::uint64_t cap = 1000000);

// Moves one uniformly chosen particle to a uniformly chosen neighboring site,
// so the source site is selected with probability occupancy[a]/n_particles.
Column mutate(const Column& parent, const Grid& grid, Rng& rng);

}  // namespace gencol
