#pragma once

#include <string>
#include <vector>

namespace gencol {

// Discretization points in R^dim together with an explicit neighbor relation.
// Neighbors define the single-particle moves available to the genetic search.
struct Grid {
  int dim = 1;
  std::vector<std::vector<double>> sites;   // per site: coordinate tuple
  std::vector<std::vector<int>> neighbors;  // per site: adjacent site indices

  int n_sites() const { return static_cast<int>(sites.size()); }
};

// Chain of n_sites points at coordinates spacing*{1,...,n_sites}. Interior
// sites have two neighbors, endpoints one. Requires n_sites >= 2, spacing > 0.
Grid make_uniform_grid_1d(int n_sites, double spacing = 1.0);

// Chain over explicit 1D coordinates, linked in the given order.
Grid make_chain_grid(std::vector<double> coordinates);

// General grid from explicit coordinates and neighbor lists; validated.
Grid make_grid(std::vector<std::vector<double>> sites,
               std::vector<std::vector<int>> neighbors);

// Throws std::invalid_argument when coordinates repeat, dimensions are
// inconsistent, the neighbor relation is not symmetric, a site neighbors
// itself, or a site has no neighbor at all.
void validate_grid(const Grid& grid);

// CSV with one row per site: coordinates..., weight. Returns the coordinate
// table and the raw (unnormalized) weights.
struct SiteTable {
  std::vector<std::vector<double>> coordinates;
  std::vector<double> weights;
};
SiteTable load_site_table_csv(const std::string& path);

// CSV with one row per site listing its 1-based neighbor indices.
std::vector<std::vector<int>> load_neighbor_lists_csv(const std::string& path,
                                                      int n_sites);

}  // namespace gencol
