#include "gencol/grid.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "text_util.hpp"

namespace gencol {

namespace {

std::vector<std::string> read_data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (!t.empty()) lines.push_back(t);
  }
  return lines;
}

bool looks_numeric(const std::string& token) {
  const std::string t = detail::trim(token);
  if (t.empty()) return false;
  const char c = t[0];
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

}  // namespace

Grid make_uniform_grid_1d(int n_sites, double spacing) {
  if (n_sites < 2) throw std::invalid_argument("grid needs at least 2 sites");
  if (!(spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
  std::vector<double> coords(n_sites);
  for (int i = 0; i < n_sites; ++i) coords[i] = spacing * (i + 1);
  return make_chain_grid(std::move(coords));
}

Grid make_chain_grid(std::vector<double> coordinates) {
  const int n = static_cast<int>(coordinates.size());
  if (n < 2) throw std::invalid_argument("grid needs at least 2 sites");
  Grid grid;
  grid.dim = 1;
  grid.sites.reserve(n);
  for (double c : coordinates) grid.sites.push_back({c});
  grid.neighbors.resize(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) grid.neighbors[i].push_back(i - 1);
    if (i + 1 < n) grid.neighbors[i].push_back(i + 1);
  }
  validate_grid(grid);
  return grid;
}

Grid make_grid(std::vector<std::vector<double>> sites,
               std::vector<std::vector<int>> neighbors) {
  Grid grid;
  grid.sites = std::move(sites);
  grid.neighbors = std::move(neighbors);
  grid.dim = grid.sites.empty() ? 0 : static_cast<int>(grid.sites[0].size());
  validate_grid(grid);
  return grid;
}

void validate_grid(const Grid& grid) {
  const int n = grid.n_sites();
  if (n < 2) throw std::invalid_argument("grid needs at least 2 sites");
  if (static_cast<int>(grid.neighbors.size()) != n)
    throw std::invalid_argument("grid: one neighbor list per site required");
  std::set<std::vector<double>> seen;
  for (const auto& s : grid.sites) {
    if (static_cast<int>(s.size()) != grid.dim)
      throw std::invalid_argument("grid: inconsistent coordinate dimension");
    for (double v : s)
      if (!std::isfinite(v)) throw std::invalid_argument("grid: non-finite coordinate");
    if (!seen.insert(s).second)
      throw std::invalid_argument("grid: repeated site coordinates");
  }
  for (int i = 0; i < n; ++i) {
    if (grid.neighbors[i].empty())
      throw std::invalid_argument("grid: site without neighbors");
    for (int j : grid.neighbors[i]) {
      if (j < 0 || j >= n) throw std::invalid_argument("grid: neighbor index out of range");
      if (j == i) throw std::invalid_argument("grid: site neighbors itself");
      const auto& back = grid.neighbors[j];
      bool sym = false;
      for (int k : back)
        if (k == i) { sym = true; break; }
      if (!sym) throw std::invalid_argument("grid: neighbor relation not symmetric");
    }
  }
}

SiteTable load_site_table_csv(const std::string& path) {
  SiteTable table;
  bool first = true;
  for (const auto& line : read_data_lines(path)) {
    const auto tokens = detail::split(line, ',');
    if (first && !looks_numeric(tokens[0])) { first = false; continue; }  // header
    first = false;
    if (tokens.size() < 2)
      throw std::invalid_argument(path + ": each row needs coordinates and a weight");
    std::vector<double> coords;
    for (std::size_t k = 0; k + 1 < tokens.size(); ++k)
      coords.push_back(detail::parse_double(tokens[k], path));
    table.coordinates.push_back(std::move(coords));
    table.weights.push_back(detail::parse_double(tokens.back(), path));
  }
  if (table.coordinates.empty()) throw std::invalid_argument(path + ": no data rows");
  for (const auto& c : table.coordinates)
    if (c.size() != table.coordinates[0].size())
      throw std::invalid_argument(path + ": rows have different widths");
  return table;
}

std::vector<std::vector<int>> load_neighbor_lists_csv(const std::string& path,
                                                      int n_sites) {
  std::vector<std::vector<int>> lists;
  for (const auto& line : read_data_lines(path)) {
    std::vector<int> row;
    for (const auto& tok : detail::split(line, ',')) {
      const std::string t = detail::trim(tok);
      if (t.empty()) continue;
      const long long v = detail::parse_integer(t, path);
      if (v < 1 || v > n_sites)
        throw std::invalid_argument(path + ": neighbor index out of range");
      row.push_back(static_cast<int>(v - 1));  // file is 1-based
    }
    lists.push_back(std::move(row));
  }
  if (static_cast<int>(lists.size()) != n_sites)
    throw std::invalid_argument(path + ": expected one row per site");
  return lists;
}

}  // namespace gencol
