#include "gencol/io.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace gencol {

namespace {

using detail::format_double;

void write_trace_header(std::ostream& out) {
  out << "iteration,value,gain,samples,pool_size\n";
}

void write_trace_row(std::ostream& out, long iteration, const IterationRecord& r) {
  out << iteration << ',' << format_double(r.rmp_value) << ','
      << format_double(r.accepted_gain) << ',' << r.samples_used << ','
      << r.pool_size << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  return out;
}

Termination parse_termination(const std::string& s) {
  if (s == "maxiter_reached") return Termination::maxiter_reached;
  if (s == "sampling_budget_exhausted") return Termination::sampling_budget_exhausted;
  if (s == "converged_to_reference") return Termination::converged_to_reference;
  throw std::invalid_argument("unknown termination: " + s);
}

bool looks_numeric(const std::string& token) {
  const std::string t = detail::trim(token);
  if (t.empty()) return false;
  const char c = t[0];
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

}  // namespace

SummaryRecord make_summary(const GenColResult& result,
                           std::optional<double> reference_cost, double match_tol,
                           double wall_seconds) {
  SummaryRecord s;
  s.final_cost = result.final_cost;
  s.reference_cost = reference_cost;
  if (reference_cost)
    s.matched = std::abs(result.final_cost - *reference_cost) <= match_tol;
  s.accepted_columns = result.trace.total_accepted;
  s.sampled_columns = result.trace.total_sampled;
  s.wall_seconds = wall_seconds;
  s.termination = result.trace.termination;
  return s;
}

void emit_results(const GenColResult& result, const Grid& grid,
                  const SummaryRecord& summary, const std::string& out_dir) {
  fs::create_directories(out_dir);

  {
    auto out = open_out(out_dir + "/summary.json");
    out << "{\n";
    out << "  \"final_cost\": " << format_double(summary.final_cost) << ",\n";
    out << "  \"reference_cost\": "
        << (summary.reference_cost ? format_double(*summary.reference_cost) : "null")
        << ",\n";
    out << "  \"matched\": "
        << (summary.matched ? (*summary.matched ? "true" : "false") : "null") << ",\n";
    out << "  \"accepted_columns\": " << summary.accepted_columns << ",\n";
    out << "  \"sampled_columns\": " << summary.sampled_columns << ",\n";
    out << "  \"termination\": \"" << to_string(summary.termination) << "\",\n";
    out << "  \"wall_seconds\": " << format_double(summary.wall_seconds) << "\n";
    out << "}\n";
  }

  {
    auto out = open_out(out_dir + "/trace.csv");
    write_trace_header(out);
    for (std::size_t k = 0; k < result.trace.iterations.size(); ++k)
      write_trace_row(out, static_cast<long>(k) + 1, result.trace.iterations[k]);
  }

  {
    auto out = open_out(out_dir + "/columns.csv");
    out << "weight";
    for (int i = 1; i <= grid.n_sites(); ++i) out << ",n" << i;
    out << "\n";
    for (std::size_t k = 0; k < result.active_columns.size(); ++k) {
      out << format_double(result.weights[k]);
      for (const auto v : result.active_columns[k].occupancy) out << ',' << v;
      out << "\n";
    }
  }

  {
    auto out = open_out(out_dir + "/potential.csv");
    out << "site";
    if (grid.dim == 1) {
      out << ",coordinate";
    } else {
      for (int d = 1; d <= grid.dim; ++d) out << ",coordinate_" << d;
    }
    out << ",potential\n";
    for (int i = 0; i < grid.n_sites(); ++i) {
      out << (i + 1);
      for (const double c : grid.sites[i]) out << ',' << format_double(c);
      out << ',' << format_double(result.dual[i]) << "\n";
    }
  }

  {
    auto out = open_out(out_dir + "/pair_density.csv");
    out << "i,j,value\n";
    if (!result.active_columns.empty()) {
      const PairDensity density =
          plan_pair_marginal(result.active_columns, result.weights);
      for (int i = 0; i < density.size(); ++i)
        for (int j = 0; j < density.size(); ++j) {
          const double v = density(i, j);
          if (v != 0.0)
            out << (i + 1) << ',' << (j + 1) << ',' << format_double(v) << "\n";
        }
    }
  }
}

WeightedColumns load_columns_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  WeightedColumns out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto tokens = detail::split(t, ',');
    if (first && !looks_numeric(tokens[0])) {
      first = false;
      continue;
    }
    first = false;
    if (tokens.size() < 2)
      throw std::invalid_argument(path + ": row needs a weight and occupancies");
    out.weights.push_back(detail::parse_double(tokens[0], path));
    std::vector<std::int32_t> occ;
    for (std::size_t k = 1; k < tokens.size(); ++k)
      occ.push_back(static_cast<std::int32_t>(detail::parse_integer(tokens[k], path)));
    out.columns.push_back(make_column(std::move(occ)));
  }
  if (out.columns.empty()) throw std::invalid_argument(path + ": no data rows");
  return out;
}

SummaryRecord load_summary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  SummaryRecord s;
  s.final_cost = j.at("final_cost").get<double>();
  if (!j.at("reference_cost").is_null())
    s.reference_cost = j.at("reference_cost").get<double>();
  if (!j.at("matched").is_null()) s.matched = j.at("matched").get<bool>();
  s.accepted_columns = j.at("accepted_columns").get<long>();
  s.sampled_columns = j.at("sampled_columns").get<long>();
  s.termination = parse_termination(j.at("termination").get<std::string>());
  s.wall_seconds = j.at("wall_seconds").get<double>();
  return s;
}

bool apply_solve_key(SolveParams& params, const std::string& key,
                     const std::string& value, const std::string& context) {
  if (key == "particles") {
    params.particles = static_cast<int>(detail::parse_integer(value, context));
  } else if (key == "gridpoints") {
    params.gridpoints = static_cast<int>(detail::parse_integer(value, context));
  } else if (key == "beta") {
    params.beta = static_cast<int>(detail::parse_integer(value, context));
  } else if (key == "epsilon") {
    params.epsilon = detail::parse_double(value, context);
  } else if (key == "marginal") {
    params.marginal = value;
  } else if (key == "seed") {
    params.seed = static_cast<std::uint64_t>(detail::parse_integer(value, context));
  } else if (key == "maxiter") {
    params.maxiter = static_cast<long>(detail::parse_integer(value, context));
  } else if (key == "maxsamples") {
    params.maxsamples = static_cast<long>(detail::parse_integer(value, context));
  } else if (key == "init-random" || key == "init_random") {
    params.init_random = value;
  } else if (key == "mutation") {
    params.mutation = value;
  } else if (key == "reference") {
    params.reference = value;
  } else if (key == "full-lp-cap" || key == "full_lp_cap") {
    params.full_lp_cap =
        static_cast<std::uint64_t>(detail::parse_integer(value, context));
  } else {
    return false;
  }
  return true;
}

GenColConfig build_config(const SolveParams& params) {
  GenColConfig config;
  config.n_particles = params.particles;
  config.potential = PairPotential::coulomb(params.epsilon);
  config.beta = params.beta;
  config.maxiter = params.maxiter;
  config.maxsamples = params.maxsamples;
  config.seed = params.seed;

  if (params.marginal.rfind("file:", 0) == 0) {
    const std::string path = params.marginal.substr(5);
    const SiteTable table = load_site_table_csv(path);
    if (table.coordinates[0].size() != 1)
      throw std::invalid_argument("file marginal: coordinates must be one-dimensional");
    if (params.gridpoints > 0 &&
        params.gridpoints != static_cast<int>(table.coordinates.size()))
      throw std::invalid_argument("file marginal: row count disagrees with gridpoints");
    std::vector<double> coords;
    coords.reserve(table.coordinates.size());
    for (const auto& c : table.coordinates) coords.push_back(c[0]);
    config.grid = make_chain_grid(std::move(coords));
    config.marginal = make_marginal(table.weights);
  } else {
    if (params.gridpoints < 2)
      throw std::invalid_argument("gridpoints must be at least 2");
    config.grid = make_uniform_grid_1d(params.gridpoints, 1.0);
    if (params.marginal == "uniform") {
      config.marginal = make_uniform_marginal(params.gridpoints);
    } else if (params.marginal == "sine") {
      config.marginal = make_sine_marginal(params.gridpoints);
    } else {
      throw std::invalid_argument("unknown marginal: " + params.marginal);
    }
  }

  if (params.init_random == "betaminus1") {
    config.init_random_columns = -1;
  } else if (params.init_random == "ntimesl") {
    config.init_random_columns =
        static_cast<long>(params.particles) * config.grid.n_sites();
  } else {
    const long long v = detail::parse_integer(params.init_random, "init-random");
    if (v < 0) throw std::invalid_argument("init-random count must be nonnegative");
    config.init_random_columns = static_cast<long>(v);
  }

  if (params.mutation == "stochastic") {
    config.mutation = MutationRule::stochastic;
  } else if (params.mutation == "best_neighbor") {
    config.mutation = MutationRule::best_neighbor;
  } else {
    throw std::invalid_argument("unknown mutation rule: " + params.mutation);
  }

  validate_config(config);
  return config;
}

std::optional<double> resolve_reference(const SolveParams& params,
                                        const GenColConfig& config,
                                        const CostMatrix& cost) {
  if (params.reference == "none") return std::nullopt;
  if (params.reference == "full-lp" || params.reference == "full_lp") {
    const FullLpSolution lp =
        solve_full_lp(config.grid.n_sites(), config.n_particles, cost,
                      config.marginal, params.full_lp_cap);
    return lp.value;
  }
  if (params.reference == "monge") {
    if (params.marginal != "uniform")
      throw std::invalid_argument("monge reference requires the uniform marginal");
    const WeightedColumns plan =
        homogeneous_monge_solution(config.grid.n_sites(), config.n_particles);
    return weighted_plan_cost(plan, cost);
  }
  throw std::invalid_argument("unknown reference: " + params.reference);
}

SummaryRecord run_and_emit(const SolveParams& params, const std::string& out_dir,
                           std::ostream* log) {
  const GenColConfig base = build_config(params);
  const CostMatrix cost = build_cost_matrix(base.grid, base.potential);
  GenColConfig config = base;
  config.reference_value = resolve_reference(params, base, cost);

  fs::create_directories(out_dir);
  auto trace_stream = open_out(out_dir + "/trace.csv");
  write_trace_header(trace_stream);
  RunHooks hooks;
  hooks.on_iteration = [&trace_stream](long iteration, const IterationRecord& r) {
    write_trace_row(trace_stream, iteration, r);
    trace_stream.flush();
  };

  const auto t0 = std::chrono::steady_clock::now();
  const GenColResult result = run(config, hooks);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  trace_stream.close();

  const SummaryRecord summary =
      make_summary(result, config.reference_value, config.reference_tol, wall);
  emit_results(result, config.grid, summary, out_dir);

  if (log) {
    *log << out_dir << ": cost " << detail::format_short(summary.final_cost);
    if (summary.reference_cost)
      *log << " (reference " << detail::format_short(*summary.reference_cost) << ", "
           << (summary.matched.value() ? "matched" : "NOT matched") << ")";
    *log << ", " << to_string(summary.termination) << ", " << summary.accepted_columns
         << " accepted / " << summary.sampled_columns << " sampled, "
         << detail::format_short(summary.wall_seconds) << " s\n";
  }
  return summary;
}

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& value,
                                           const std::string& context) {
  std::vector<std::uint64_t> seeds;
  std::string normalized = value;
  for (char& c : normalized)
    if (c == ',') c = ' ';
  std::istringstream in(normalized);
  std::string tok;
  while (in >> tok) {
    const long long v = detail::parse_integer(tok, context);
    if (v < 0) throw std::invalid_argument(context + ": seeds must be nonnegative");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  if (seeds.empty()) throw std::invalid_argument(context + ": empty seed list");
  for (std::size_t a = 0; a < seeds.size(); ++a)
    for (std::size_t b = a + 1; b < seeds.size(); ++b)
      if (seeds[a] == seeds[b])
        throw std::invalid_argument(context + ": duplicate seed");
  return seeds;
}

}  // namespace

ExperimentManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  ExperimentManifest manifest;
  SolveParams defaults;
  std::vector<std::uint64_t> default_seeds;
  SolveParams params = defaults;
  std::vector<std::uint64_t> seeds;
  std::string name;
  bool in_section = false;
  int line_no = 0;

  auto finalize = [&]() {
    ExperimentManifest::Experiment exp;
    exp.name = name.empty()
                   ? "exp" + std::to_string(manifest.experiments.size() + 1)
                   : name;
    for (const auto& prev : manifest.experiments)
      if (prev.name == exp.name)
        throw std::invalid_argument(path + ": duplicate experiment name " + exp.name);
    exp.params = params;
    exp.seeds = seeds.empty() ? std::vector<std::uint64_t>{params.seed} : seeds;
    manifest.experiments.push_back(std::move(exp));
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (t == "[experiment]") {
      if (in_section) finalize();
      if (!in_section) {
        defaults = params;  // keys seen so far become the suite defaults
        default_seeds = seeds;
      }
      in_section = true;
      params = defaults;
      seeds = default_seeds;
      name.clear();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(where + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (value.empty()) throw std::invalid_argument(where + ": empty value");

    if (key == "out") {
      if (in_section)
        throw std::invalid_argument(where + ": out is a suite-level key");
      manifest.out_dir = value;
    } else if (key == "name") {
      if (!in_section)
        throw std::invalid_argument(where + ": name belongs in an [experiment]");
      name = value;
    } else if (key == "seeds") {
      seeds = parse_seed_list(value, where);
    } else if (!apply_solve_key(params, key, value, where)) {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
  if (in_section) finalize();
  if (manifest.experiments.empty())
    throw std::invalid_argument(path + ": no [experiment] sections");
  return manifest;
}

int run_suite(const ExperimentManifest& manifest, std::ostream& log) {
  fs::create_directories(manifest.out_dir);
  auto summary_csv = open_out(manifest.out_dir + "/summary.csv");
  summary_csv << "experiment,seed,final_cost,reference_cost,matched,accepted,"
                 "sampled,termination,wall_seconds\n";
  auto averages_csv = open_out(manifest.out_dir + "/averages.csv");
  averages_csv << "experiment,particles,gridpoints,runs,matched,avg_accepted,"
                  "avg_sampled,avg_wall_seconds\n";

  int mismatches = 0;
  for (const auto& exp : manifest.experiments) {
    double sum_accepted = 0, sum_sampled = 0, sum_wall = 0;
    long matched_runs = 0;
    for (const std::uint64_t seed : exp.seeds) {
      SolveParams p = exp.params;
      p.seed = seed;
      const std::string dir =
          manifest.out_dir + "/" + exp.name + "/seed" + std::to_string(seed);
      const SummaryRecord s = run_and_emit(p, dir, &log);

      summary_csv << exp.name << ',' << seed << ','
                  << detail::format_double(s.final_cost) << ','
                  << (s.reference_cost ? detail::format_double(*s.reference_cost) : "")
                  << ',' << (s.matched ? (*s.matched ? "true" : "false") : "") << ','
                  << s.accepted_columns << ',' << s.sampled_columns << ','
                  << to_string(s.termination) << ','
                  << detail::format_double(s.wall_seconds) << "\n";
      summary_csv.flush();

      sum_accepted += static_cast<double>(s.accepted_columns);
      sum_sampled += static_cast<double>(s.sampled_columns);
      sum_wall += s.wall_seconds;
      if (s.matched) {
        if (*s.matched)
          ++matched_runs;
        else
          ++mismatches;
      }
    }
    const double runs = static_cast<double>(exp.seeds.size());
    averages_csv << exp.name << ',' << exp.params.particles << ','
                 << exp.params.gridpoints << ',' << exp.seeds.size() << ','
                 << matched_runs << ',' << detail::format_double(sum_accepted / runs)
                 << ',' << detail::format_double(sum_sampled / runs) << ','
                 << detail::format_double(sum_wall / runs) << "\n";
    averages_csv.flush();
    log << exp.name << ": " << matched_runs << "/" << exp.seeds.size()
        << " matched, avg accepted " << detail::format_short(sum_accepted / runs)
        << ", avg sampled " << detail::format_short(sum_sampled / runs) << "\n";
  }
  return mismatches;
}

}  // namespace gencol
