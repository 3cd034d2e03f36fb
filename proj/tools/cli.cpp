#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hetsim/dense.hpp"
#include "hetsim/experiment.hpp"
#include "hetsim/io.hpp"
#include "hetsim/lowrank.hpp"
#include "hetsim/operators.hpp"
#include "hetsim/quality.hpp"
#include "hetsim/synth.hpp"

namespace hetsim::cli {

namespace fs = std::filesystem;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

/// Collects `key=value` pairs for the effective-config line.
class ConfigLine {
 public:
  explicit ConfigLine(std::string command) { line_ << "config: command=" << command; }

  template <class T>
  ConfigLine& add(const std::string& key, const T& value) {
    line_ << ' ' << key << '=' << value;
    return *this;
  }
  ConfigLine& add(const std::string& key, double value) {
    line_ << ' ' << key << '=' << format_double(value);
    return *this;
  }
  ConfigLine& add(const std::string& key, const fs::path& value) {
    line_ << ' ' << key << '=' << value.string();
    return *this;
  }

  std::string str() const { return line_.str(); }

 private:
  std::ostringstream line_;
};

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ConfigError(origin + ": expected a non-negative integer seed, got '" + text + "'");
  }
  return v;
}

std::uint64_t effective_seed(const Common& common) {
  if (common.seed) return *common.seed;
  if (const char* env = std::getenv("HETSIM_SEED"); env != nullptr && *env != '\0') {
    return parse_seed_text(env, "HETSIM_SEED");
  }
  return 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ConfigError("invalid " + what + " '" + text + "'");
  }
  return v;
}

std::string join(const std::vector<Index>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

SolverKind parse_solver(const std::string& name) {
  if (name == "dense") return SolverKind::dense;
  if (name == "lowrank") return SolverKind::lowrank;
  if (name == "lyapunov") return SolverKind::lyapunov;
  throw ConfigError("unknown solver '" + name + "' (expected dense, lowrank or lyapunov)");
}

/// `full`, a single rank for every type, or one rank per type.
std::vector<Index> parse_ranks(const std::string& text, const HeteroNetwork& net) {
  std::vector<Index> ranks;
  if (text == "full") {
    for (const auto& t : net.types()) ranks.push_back(t.size());
    return ranks;
  }
  for (const auto& part : split(text, ',')) ranks.push_back(parse_number<Index>(part, "rank"));
  if (ranks.size() == 1) ranks.assign(net.num_types(), ranks.front());
  if (ranks.size() != net.num_types()) {
    throw ConfigError("--ranks lists " + std::to_string(ranks.size()) + " values but the network has " +
                      std::to_string(net.num_types()) + " types");
  }
  for (Index r : ranks) {
    if (r < 1) throw ConfigError("--ranks values must be at least 1");
  }
  return ranks;
}

std::vector<Index> parse_counts(const std::string& text) {
  std::vector<Index> counts;
  for (const auto& part : split(text, ',')) counts.push_back(parse_number<Index>(part, "count"));
  return counts;
}

std::string describe_report(const HeteroNetwork& net, const ConditionReport& report) {
  std::ostringstream s;
  for (const auto& v : report.non_stochastic_columns) {
    s << "  relation '" << net.relation(v.relation).name << "' ("
      << (v.direction == Direction::forward ? "forward" : "reverse") << ") column " << v.column
      << " sums to " << format_double(v.sum) << '\n';
  }
  for (const auto& o : report.overweight_types) {
    s << "  type '" << net.type(o.type).name() << "' has incident weight sum " << format_double(o.sum)
      << " > 1\n";
  }
  for (const auto& k : report.negative_weights) {
    s << "  negative weight on (" << net.type(k.type).name() << ", " << net.type(k.partner).name()
      << ", " << net.relation(k.relation).name << ")\n";
  }
  for (const auto& k : report.unknown_weights) {
    s << "  weight key (" << k.type << ", " << k.partner << ", " << k.relation
      << ") does not match any relation role\n";
  }
  return s.str();
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  fs::path bundle;
  fs::path out;
  std::string solver = "dense";
  double tol = 1e-9;
  int max_iter = 100;
  double c = 0.8;
  std::string ranks;
  Index oversampling = 10;
  int power_iterations = 2;
  bool skip_check = false;
  bool write_dense = false;
};

int cmd_solve(const SolveArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const SolverKind kind = parse_solver(a.solver);
  if (kind != SolverKind::lowrank && !a.ranks.empty()) {
    throw ConfigError("--ranks applies only to --solver lowrank");
  }
  if (kind == SolverKind::lowrank && a.ranks.empty()) {
    throw ConfigError("--solver lowrank needs --ranks (a number, a comma list or 'full')");
  }
  if (kind != SolverKind::lowrank && a.write_dense) {
    throw ConfigError("--write-dense applies only to --solver lowrank");
  }
  const auto bundle = load_bundle(a.bundle);
  const auto& net = bundle.network;
  const WeightMatrix weights = bundle.weights ? *bundle.weights : default_weights(net);
  const std::uint64_t seed = effective_seed(common);

  SolverConfig cfg;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.damping = a.c;
  cfg.skip_condition_check = a.skip_check;
  cfg.threads = common.threads;

  ConfigLine line("solve");
  line.add("bundle", a.bundle).add("out", a.out).add("solver", a.solver).add("tol", a.tol)
      .add("max_iter", a.max_iter);
  if (kind == SolverKind::lyapunov) line.add("c", a.c);
  LowRankConfig lr;
  if (kind == SolverKind::lowrank) {
    lr.ranks = parse_ranks(a.ranks, net);
    lr.oversampling = a.oversampling;
    lr.power_iterations = a.power_iterations;
    lr.seed = seed;
    line.add("ranks", join(lr.ranks)).add("oversampling", a.oversampling)
        .add("power_iterations", a.power_iterations).add("write_dense", a.write_dense);
  }
  line.add("weights", bundle.weights ? "bundle" : "default").add("skip_check", a.skip_check)
      .add("seed", seed).add("threads", common.threads);
  out << line.str() << '\n';

  SolveTrace trace;
  std::ostringstream drift;
  if (kind == SolverKind::lowrank) {
    const auto sol = solve_lowrank(net, weights, cfg, lr);
    trace = sol.trace;
    save_factors(label_factors(net, sol.factors, seed, static_cast<std::uint64_t>(trace.iterations())),
                 a.out / "factors.csv");
    if (a.write_dense) {
      SimilaritySet dense;
      for (const auto& f : sol.factors) dense.blocks.push_back(f.to_dense());
      save_similarity(label_similarity(net, dense), a.out / "similarity.csv");
    }
    for (std::size_t t = 0; t < net.num_types(); ++t) {
      drift << "diagonal drift " << net.type(t).name() << ' '
            << format_double(sol.factors[t].diagonal_drift()) << '\n';
    }
  } else {
    const auto sol = kind == SolverKind::dense ? solve_dense(net, weights, cfg)
                                               : solve_lyapunov(net, weights, cfg);
    trace = sol.trace;
    save_similarity(label_similarity(net, sol.similarity), a.out / "similarity.csv");
  }
  save_trace(trace, a.out / "trace.csv");
  for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
    out << "iteration " << k + 1 << " residual " << format_double(trace.residuals[k]) << '\n';
  }
  out << drift.str();
  if (!trace.converged) {
    err << "error: residual " << format_double(trace.residuals.back()) << " above tolerance "
        << format_double(a.tol) << " after " << trace.iterations()
        << " iterations; raise --max-iter or --tol\n";
    return not_converged;
  }
  out << "converged after " << trace.iterations() << " iterations\n";
  return ok;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  fs::path out;
  int k = 3;
  Index n = 10;
  std::string counts = "30,30,30";
  int layers = 0;
  double r = 0.3;
  Index books = 3625, authors = 99, years = 65, publishers = 554;
};

int cmd_synth(const std::string& mode, const SynthArgs& a, const Common& common, std::ostream& out) {
  const std::uint64_t seed = effective_seed(common);
  ConfigLine line("synth");
  line.add("mode", mode).add("out", a.out);
  if (mode == "random") {
    line.add("K", a.k).add("N", a.n).add("seed", seed);
    out << line.str() << '\n';
    RandomNetworkSpec spec{a.k, a.n, seed};
    const auto net = random_network(spec);
    save_network(net, a.out);
    out << "wrote " << net.num_types() << " types, " << net.num_relations() << " relations\n";
  } else if (mode == "layered") {
    const auto counts = parse_counts(a.counts);
    if (a.layers != 0 && static_cast<std::size_t>(a.layers) != counts.size()) {
      throw ConfigError("--layers is " + std::to_string(a.layers) + " but --counts lists " +
                        std::to_string(counts.size()) + " layers");
    }
    line.add("counts", join(counts)).add("r", a.r).add("seed", seed);
    out << line.str() << '\n';
    const auto [net, cloud] = layered_points_graph({counts, a.r, seed});
    save_network(net, a.out);
    save_points(cloud, a.out / "points.csv");
    std::size_t edges = 0;
    for (const auto& rel : net.relations()) edges += rel.edges.size();
    out << "wrote " << net.num_types() << " layers, " << edges << " edges\n";
  } else {
    line.add("books", a.books).add("authors", a.authors).add("years", a.years)
        .add("publishers", a.publishers).add("seed", seed);
    out << line.str() << '\n';
    const auto net = book_shaped_network({a.books, a.authors, a.years, a.publishers, seed});
    save_network(net, a.out);
    out << "wrote " << net.total_entities() << " entities\n";
  }
  return ok;
}

// ---------------------------------------------------------------- eval-q

struct EvalArgs {
  fs::path points;
  fs::path similarity;
  std::string sweep;
  int trials = 20;
  std::string counts = "40,40,40";
  std::string solver = "dense";
  Index rank = 10;
  int max_iter = 100;
  double tol = 1e-6;
  double c = 0.8;
  fs::path out;
};

/// Index of every similarity row in point order; ids must be point indices.
std::vector<Index> point_order(const SimilarityBlock& block, std::size_t layer_size) {
  if (block.ids.size() != layer_size) {
    throw ConfigError("similarity block '" + block.type + "' has " + std::to_string(block.ids.size()) +
                      " entities but the layer has " + std::to_string(layer_size) + " points");
  }
  std::vector<Index> order(layer_size, -1);
  for (std::size_t i = 0; i < block.ids.size(); ++i) {
    const auto p = parse_number<Index>(block.ids[i], "point id");
    if (p < 0 || static_cast<std::size_t>(p) >= layer_size || order[static_cast<std::size_t>(p)] >= 0) {
      throw ConfigError("similarity id '" + block.ids[i] + "' is not a point index");
    }
    order[static_cast<std::size_t>(p)] = static_cast<Index>(i);
  }
  return order;
}

int cmd_eval_q(const EvalArgs& a, const Common& common, std::ostream& out) {
  const std::uint64_t seed = effective_seed(common);
  if (!a.sweep.empty()) {
    const auto parts = split(a.sweep, ':');
    if (parts.size() != 3) throw ConfigError("--sweep expects r0:r1:step");
    RadiusSweepSpec spec;
    try {
      spec.radii = radius_range(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
    } catch (const std::logic_error& e) {
      throw ConfigError(std::string("--sweep: ") + e.what());
    }
    spec.counts = parse_counts(a.counts);
    spec.trials = a.trials;
    spec.seed = seed;
    spec.solver = parse_solver(a.solver);
    spec.solver_config.max_iter = a.max_iter;
    spec.solver_config.tol = a.tol;
    spec.solver_config.damping = a.c;
    spec.solver_config.threads = common.threads;
    spec.rank = a.rank;
    ConfigLine line("eval-q");
    line.add("sweep", a.sweep).add("trials", a.trials).add("counts", join(spec.counts))
        .add("solver", a.solver).add("max_iter", a.max_iter).add("tol", a.tol);
    if (spec.solver == SolverKind::lowrank) line.add("rank", a.rank);
    if (spec.solver == SolverKind::lyapunov) line.add("c", a.c);
    line.add("seed", seed).add("threads", common.threads);
    if (!a.out.empty()) line.add("out", a.out);
    out << line.str() << '\n';

    const auto result = radius_sweep(spec);
    std::ostringstream csv;
    csv << "r,trial,layer,q\n";
    out << "r,mean_q,std_q\n";
    for (std::size_t i = 0; i < result.radii.size(); ++i) {
      const double mean = result.mean(i);
      double var = 0.0;
      for (const auto& trial : result.quality[i]) var += (trial[0] - mean) * (trial[0] - mean);
      const double sd = result.quality[i].size() > 1
                            ? std::sqrt(var / static_cast<double>(result.quality[i].size() - 1))
                            : 0.0;
      out << format_double(result.radii[i]) << ',' << format_double(mean) << ',' << format_double(sd)
          << '\n';
      for (std::size_t t = 0; t < result.quality[i].size(); ++t) {
        for (std::size_t l = 0; l < result.quality[i][t].size(); ++l) {
          csv << format_double(result.radii[i]) << ',' << t << ',' << l << ','
              << format_double(result.quality[i][t][l]) << '\n';
        }
      }
    }
    if (!a.out.empty()) {
      if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
      std::ofstream f(a.out, std::ios::binary);
      if (!(f << csv.str())) throw IoError("cannot write '" + a.out.string() + "'");
    }
    return ok;
  }

  if (a.points.empty() || a.similarity.empty()) {
    throw ConfigError("eval-q needs --points and --similarity, or --sweep");
  }
  ConfigLine line("eval-q");
  line.add("points", a.points).add("similarity", a.similarity);
  out << line.str() << '\n';
  const auto cloud = load_points(a.points);
  const auto blocks = load_similarity(a.similarity);
  std::optional<double> headline;
  for (std::size_t k = 0; k < cloud.layers.size(); ++k) {
    const std::string name = "L" + std::to_string(k);
    const auto it = std::find_if(blocks.begin(), blocks.end(),
                                 [&](const SimilarityBlock& b) { return b.type == name; });
    if (it == blocks.end()) continue;
    const auto order = point_order(*it, cloud.layers[k].size());
    const Index n = static_cast<Index>(order.size());
    Eigen::MatrixXd est(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) est(i, j) = it->values(order[i], order[j]);
    }
    const double q = ordering_quality(geometric_ground_truth(cloud.layers[k]), est);
    out << "layer " << name << " Q " << format_double(q) << '\n';
    if (!headline) headline = q;
  }
  if (!headline) throw ConfigError("similarity file has no block named after a point layer (L0, L1, ...)");
  out << "Q " << format_double(*headline) << '\n';
  return ok;
}

// ---------------------------------------------------------------- query / heatmap

struct SourceArgs {
  fs::path factors;
  fs::path similarity;
  std::string type;
};

/// Loads the requested type from a factor or similarity file.
struct LoadedType {
  std::vector<std::string> ids;
  std::optional<FactoredSimilarity> factors;
  Eigen::MatrixXd dense;
};

LoadedType load_type(const SourceArgs& a) {
  if (a.factors.empty() == a.similarity.empty()) {
    throw ConfigError("give exactly one of --factors and --similarity");
  }
  LoadedType out;
  if (!a.factors.empty()) {
    for (auto& b : load_factors(a.factors)) {
      if (b.type != a.type) continue;
      out.ids = std::move(b.ids);
      out.factors = std::move(b.factors);
      return out;
    }
  } else {
    for (auto& b : load_similarity(a.similarity)) {
      if (b.type != a.type) continue;
      out.ids = std::move(b.ids);
      out.dense = std::move(b.values);
      return out;
    }
  }
  throw ConfigError("no type '" + a.type + "' in the input file");
}

int cmd_query(const SourceArgs& src, const std::string& id, Index k, std::ostream& out) {
  ConfigLine line("query");
  if (!src.factors.empty()) line.add("factors", src.factors);
  if (!src.similarity.empty()) line.add("similarity", src.similarity);
  line.add("type", src.type).add("id", id).add("k", k);
  out << line.str() << '\n';
  if (k < 1) throw ConfigError("--k must be at least 1");
  const auto loaded = load_type(src);
  const auto it = std::find(loaded.ids.begin(), loaded.ids.end(), id);
  if (it == loaded.ids.end()) throw ConfigError("unknown " + src.type + " id '" + id + "'");
  const Index a = it - loaded.ids.begin();
  const auto top = loaded.factors ? top_k(*loaded.factors, a, k) : top_k(loaded.dense, a, k);
  out << "rank,id,score\n";
  for (std::size_t i = 0; i < top.size(); ++i) {
    out << i + 1 << ',' << loaded.ids[static_cast<std::size_t>(top[i].index)] << ','
        << format_double(top[i].score) << '\n';
  }
  return ok;
}

int cmd_heatmap(const SourceArgs& src, const fs::path& path, std::ostream& out) {
  ConfigLine line("heatmap");
  if (!src.factors.empty()) line.add("factors", src.factors);
  if (!src.similarity.empty()) line.add("similarity", src.similarity);
  line.add("type", src.type).add("out", path);
  out << line.str() << '\n';
  const auto loaded = load_type(src);
  export_heatmap(loaded.factors ? loaded.factors->to_dense() : loaded.dense, path);
  out << "wrote " << path.string() << '\n';
  return ok;
}

// ---------------------------------------------------------------- check

int cmd_check(const fs::path& bundle_path, std::ostream& out, std::ostream& err) {
  ConfigLine line("check");
  line.add("bundle", bundle_path);
  out << line.str() << '\n';
  const auto bundle = load_bundle(bundle_path);
  const auto& net = bundle.network;
  const WeightMatrix weights = bundle.weights ? *bundle.weights : default_weights(net);
  const auto report = check_convergence_conditions(net, weights);
  out << "type,incident_weight_sum,lyapunov_bound\n";
  for (std::size_t t = 0; t < net.num_types(); ++t) {
    out << net.type(t).name() << ',' << format_double(weights.incident_sum(t)) << ','
        << format_double(report.lyapunov_bound[t]) << '\n';
  }
  if (!report.ok()) {
    err << "convergence conditions not met:\n" << describe_report(net, report);
    return not_converged;
  }
  out << "conditions hold\n";
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity search on heterogeneous networks", "hetsim"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Common common;
  std::string seed_text;
  app.add_option("--threads", common.threads, "worker threads for per-type sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_text, "seed for all randomness (fallback: HETSIM_SEED, then 0)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "iterate similarities to a fixed point");
  solve_cmd->add_option("--bundle", solve.bundle, "network bundle directory or schema.json")->required();
  solve_cmd->add_option("--out", solve.out, "output directory")->required();
  solve_cmd->add_option("--solver", solve.solver, "dense | lowrank | lyapunov");
  solve_cmd->add_option("--tol", solve.tol, "stop when the residual is at most this");
  solve_cmd->add_option("--max-iter", solve.max_iter, "iteration cap");
  solve_cmd->add_option("--c", solve.c, "damping for the lyapunov solver");
  solve_cmd->add_option("--ranks", solve.ranks, "lowrank ranks: N, N1,N2,... or full");
  solve_cmd->add_option("--oversampling", solve.oversampling, "extra sketch columns");
  solve_cmd->add_option("--power-iterations", solve.power_iterations, "subspace iterations");
  solve_cmd->add_flag("--skip-check", solve.skip_check, "run even if convergence conditions fail");
  solve_cmd->add_flag("--write-dense", solve.write_dense, "lowrank: also write similarity.csv");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic network bundle");
  synth_cmd->require_subcommand(1);
  auto* random_cmd = synth_cmd->add_subcommand("random", "random sparse network");
  random_cmd->add_option("--K", synth.k, "number of types");
  random_cmd->add_option("--N", synth.n, "type size upper bound");
  random_cmd->add_option("--out", synth.out, "bundle directory")->required();
  auto* layered_cmd = synth_cmd->add_subcommand("layered", "layered point graph");
  layered_cmd->add_option("--counts", synth.counts, "points per layer, comma separated");
  layered_cmd->add_option("--layers", synth.layers, "number of layers (checked against --counts)");
  layered_cmd->add_option("--r", synth.r, "connection radius");
  layered_cmd->add_option("--out", synth.out, "bundle directory (points.csv is written alongside)")->required();
  auto* book_cmd = synth_cmd->add_subcommand("bookshape", "Book/Author/Year/Publisher network");
  book_cmd->add_option("--books", synth.books, "Book entities");
  book_cmd->add_option("--authors", synth.authors, "Author entities");
  book_cmd->add_option("--years", synth.years, "Year entities");
  book_cmd->add_option("--publishers", synth.publishers, "Publisher entities");
  book_cmd->add_option("--out", synth.out, "bundle directory")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval-q", "ordering quality against point geometry");
  eval_cmd->add_option("--points", eval.points, "points CSV");
  eval_cmd->add_option("--similarity", eval.similarity, "similarity CSV");
  eval_cmd->add_option("--sweep", eval.sweep, "radius sweep r0:r1:step on generated graphs");
  eval_cmd->add_option("--trials", eval.trials, "point clouds per radius")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--counts", eval.counts, "sweep: points per layer");
  eval_cmd->add_option("--solver", eval.solver, "sweep: dense | lowrank | lyapunov");
  eval_cmd->add_option("--rank", eval.rank, "sweep: per-type rank for lowrank");
  eval_cmd->add_option("--max-iter", eval.max_iter, "sweep: iteration cap");
  eval_cmd->add_option("--tol", eval.tol, "sweep: residual tolerance");
  eval_cmd->add_option("--c", eval.c, "sweep: lyapunov damping");
  eval_cmd->add_option("--out", eval.out, "sweep: per-trial CSV");

  SourceArgs query_src;
  std::string query_id;
  Index query_k = 10;
  auto* query_cmd = app.add_subcommand("query", "top-k most similar entities");
  query_cmd->add_option("--factors", query_src.factors, "factors CSV from a lowrank solve");
  query_cmd->add_option("--similarity", query_src.similarity, "similarity CSV");
  query_cmd->add_option("--type", query_src.type, "entity type")->required();
  query_cmd->add_option("--id", query_id, "entity id")->required();
  query_cmd->add_option("--k", query_k, "number of results");

  SourceArgs heat_src;
  fs::path heat_out;
  auto* heat_cmd = app.add_subcommand("heatmap", "render one similarity block as SVG");
  heat_cmd->add_option("--factors", heat_src.factors, "factors CSV from a lowrank solve");
  heat_cmd->add_option("--similarity", heat_src.similarity, "similarity CSV");
  heat_cmd->add_option("--type", heat_src.type, "block to render")->required();
  heat_cmd->add_option("--out", heat_out, "SVG path")->required();

  fs::path check_bundle;
  auto* check_cmd = app.add_subcommand("check", "report the convergence conditions of a bundle");
  check_cmd->add_option("--bundle", check_bundle, "network bundle directory or schema.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? ok : config_error;
  }

  try {
    if (!seed_text.empty()) common.seed = parse_seed_text(seed_text, "--seed");
    if (solve_cmd->parsed()) return cmd_solve(solve, common, out, err);
    if (synth_cmd->parsed()) {
      const std::string mode = random_cmd->parsed() ? "random" : layered_cmd->parsed() ? "layered" : "bookshape";
      return cmd_synth(mode, synth, common, out);
    }
    if (eval_cmd->parsed()) return cmd_eval_q(eval, common, out);
    if (query_cmd->parsed()) return cmd_query(query_src, query_id, query_k, out);
    if (heat_cmd->parsed()) return cmd_heatmap(heat_src, heat_out, out);
    if (check_cmd->parsed()) return cmd_check(check_bundle, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return io_error;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return io_error;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return io_error;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return not_converged;
  } catch (const ConditionError& e) {
    err << "error: " << e.what() << "; run `hetsim check` for details or pass --skip-check\n";
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  return config_error;
}

}  // namespace hetsim::cli
