// kclust: solve, select, generate, verify and bench from the command line.
// Exit codes: 0 yes / success, 1 no / disagreement, 2 error.

#include "kclust/generators.hpp"
#include "kclust/io.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <thread>

using namespace kclust;

namespace {

constexpr int kYes = 0, kNo = 1, kError = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string policy = "auto";
  std::string mode = "paper";
  std::string tol = "1e-12";
  std::size_t jobs = 1;
  std::uint64_t cap_iterations = 100'000;
  std::uint64_t cap_colorings = 1'000'000;
  std::uint64_t cap_T = 64;
  std::uint64_t cap_tuples = 1'000'000;
  std::uint64_t cap_centroids = 50'000'000;
  std::uint64_t cap_patterns = 2'000'000;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "RNG seed");
  app->add_option("--policy", c.policy, "auto | exhaustive | iters=<n>");
  app->add_option("--mode", c.mode, "paper (specialized solvers) | oracle (brute force)")
      ->check(CLI::IsMember({"paper", "oracle"}));
  app->add_option("--tol", c.tol, "tolerance for irrational cost comparisons");
  app->add_option("--jobs", c.jobs, "worker threads for sweeps (solving is sequential)")->check(CLI::PositiveNumber);
  app->add_option("--cap-iterations", c.cap_iterations, "max random colorings");
  app->add_option("--cap-colorings", c.cap_colorings, "max canonical colorings (exhaustive policy)");
  app->add_option("--cap-T", c.cap_T, "max number of colors");
  app->add_option("--cap-tuples", c.cap_tuples, "max tuples for brute-force selection");
  app->add_option("--cap-centroids", c.cap_centroids, "max candidate centroids per selection call");
  app->add_option("--cap-patterns", c.cap_patterns, "max hypergraph pattern candidates");
}

SelectionConfig selection_config(const Common& c) {
  SelectionConfig s;
  s.tol = Real(c.tol);
  s.bruteforce_cap = c.cap_tuples;
  s.centroid_cap = c.cap_centroids;
  s.pattern_caps.max_candidates = c.cap_patterns;
  return s;
}

SolveConfig solve_config(const Common& c) {
  SolveConfig s;
  s.seed = c.seed;
  s.max_iterations = c.cap_iterations;
  s.coloring_cap = c.cap_colorings;
  s.max_T = c.cap_T;
  s.selection = selection_config(c);
  s.selection_mode = c.mode == "oracle" ? SelectionMode::Oracle : SelectionMode::Specialized;
  if (c.policy == "auto") {
    s.policy = IterationPolicy::Auto;
  } else if (c.policy == "exhaustive") {
    s.policy = IterationPolicy::Exhaustive;
  } else if (c.policy.rfind("iters=", 0) == 0) {
    s.policy = IterationPolicy::Explicit;
    try {
      s.iterations = std::stoull(c.policy.substr(6));
    } catch (const std::exception&) {
      throw InvalidInput("bad --policy " + c.policy);
    }
  } else {
    throw InvalidInput("bad --policy " + c.policy);
  }
  return s;
}

void print_cluster(std::ostream& os, std::size_t i, const WeightedCluster& c, const Centroid& centroid,
                   const CostValue& cost) {
  os << "cluster " << i + 1 << ": cost " << cost.to_string() << " centroid " << to_string(centroid) << " vectors";
  for (std::size_t v = 0; v < c.points.size(); ++v) {
    os << ' ' << to_string(c.points[v]);
    if (c.weights[v] != 1) os << 'x' << c.weights[v];
  }
  os << '\n';
}

int cmd_solve(const std::string& path, const Common& common) {
  auto file = load_instance(path);
  if (!file.is_clustering()) throw InvalidInput("solve needs a clustering instance");
  const auto& inst = std::get<ClusteringInstance>(file.instance);
  auto res = solve_color_coding(inst, solve_config(common));
  std::cout << "decision: " << (res.decision ? "yes" : "no") << '\n';
  std::cout << "budget: " << format_budget(inst.budget, inst.order) << '\n';
  if (res.clustering) {
    const auto& c = *res.clustering;
    std::cout << "cost: " << c.total_cost.to_string() << '\n';
    std::cout << "clusters: " << c.clusters.size() << '\n';
    for (std::size_t i = 0; i < c.clusters.size(); ++i) print_cluster(std::cout, i, c.clusters[i], c.centroids[i], c.costs[i]);
  }
  const auto& s = res.stats;
  std::cout << "colors: " << s.T << '\n'
            << "iterations: " << s.iterations_run << " of " << s.iterations_planned << '\n'
            << "partitions: " << s.partitions_tried << '\n'
            << "selection calls: " << s.selection_calls << " (cached " << s.cache_hits << ")\n"
            << "confidence: " << s.confidence << '\n';
  return res.decision ? kYes : kNo;
}

int cmd_select(const std::string& path, const Common& common) {
  auto file = load_instance(path);
  if (file.is_clustering()) throw InvalidInput("select needs a selection instance");
  const auto& inst = std::get<SelectionInstance>(file.instance);
  auto cfg = selection_config(common);
  SelectionStats stats;
  auto res = common.mode == "oracle" ? select_bruteforce(inst, cfg, &stats) : select_specialized(inst, cfg, &stats);
  std::cout << "decision: " << (res.feasible ? "yes" : "no") << '\n';
  std::cout << "budget: " << format_budget(inst.budget, inst.order) << '\n';
  if (res.feasible || common.mode == "oracle") {
    std::cout << (res.feasible ? "cost: " : "minimum cost: ") << res.cost.to_string() << '\n';
    std::cout << "centroid: " << to_string(res.centroid) << '\n';
    std::cout << "tuple:";
    for (std::size_t g = 0; g < res.chosen.size(); ++g)
      std::cout << ' ' << g + 1 << ':' << to_string(inst.groups[g].points[res.chosen[g]]);
    std::cout << '\n';
  }
  std::cout << "fixed-centroid calls: " << stats.fixed_centroid_calls << '\n'
            << "coordinate sets: " << stats.coordinate_sets << '\n'
            << "patterns: " << stats.patterns << '\n'
            << "tuples: " << stats.tuples << '\n';
  return res.feasible ? kYes : kNo;
}

struct GenParams {
  std::size_t k = 3;
  std::string p = "2";
  bool figure_mode = false;
};

Json gen_parameters(Reduction r, const GenParams& gp) {
  Json j;
  if (r != Reduction::SatHioctLinf2) j["k"] = gp.k;
  if (r == Reduction::LpMcc) j["p"] = gp.p;
  if (r == Reduction::SatHioctLinf2) j["figure_mode"] = gp.figure_mode;
  return j;
}

InstanceFile generate(Reduction r, const GraphFile& src, const GenParams& gp) {
  InstanceFile out;
  Json prov;
  prov["reduction"] = reduction_name(r);
  prov["parameters"] = gen_parameters(r, gp);
  prov["source_hash"] = source_hash(src);
  auto graph = [&]() -> const Graph& {
    if (!std::holds_alternative<Graph>(src.source)) throw InvalidInput(reduction_name(r) + " needs a graph file");
    return std::get<Graph>(src.source);
  };
  switch (r) {
    case Reduction::L0Clique: out.instance = gen_l0_clustering_from_clique(graph(), gp.k); break;
    case Reduction::L0Mcc: out.instance = gen_l0_selection_from_mcc(graph(), gp.k); break;
    case Reduction::L1Mcc: out.instance = gen_l1_selection_from_mcc(graph(), gp.k); break;
    case Reduction::LinfClique: out.instance = gen_linf_clustering_from_clique(graph(), gp.k); break;
    case Reduction::LinfMcc: out.instance = gen_linf_selection_from_mcc(graph(), gp.k); break;
    case Reduction::LpMcc: {
      Rational p = parse_rational(gp.p);
      if (p != 2) throw InvalidInput("lp-mcc instance files exist for p = 2 only; use verify for other p");
      out.instance = gen_lp_selection_from_mcc(graph(), gp.k, p).as_l2();
      break;
    }
    case Reduction::SatHioctLinf2: {
      HioctInstance h;
      if (const auto* f = std::get_if<CnfFormula>(&src.source)) {
        h = gen_hioct_from_3sat(*f);
      } else if (const auto* hi = std::get_if<HioctInstance>(&src.source)) {
        h = *hi;
      } else {
        throw InvalidInput("3sat-hioct-linf2 needs a 3sat or hioct file");
      }
      auto lin = gen_linf2_from_hioct(h, gp.figure_mode);
      prov["trivial"] = lin.trivial;
      out.instance = std::move(lin.instance);
      break;
    }
  }
  out.provenance = prov;
  return out;
}

int cmd_generate(const std::string& name, const std::string& graph_path, const GenParams& gp, const std::string& out) {
  Reduction r = parse_reduction(name);
  auto src = load_graph_file(graph_path);
  InstanceFile file;
  try {
    file = generate(r, src, gp);
  } catch (const VacuousInstance& e) {
    std::cerr << e.what() << "; the source instance is a no-instance, nothing written\n";
    return kNo;
  }
  std::string text = serialize_instance(file);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw InvalidInput("cannot write " + out);
    os << text;
  }
  return kYes;
}

// A sweep case: a graph, or a formula for the SAT chain.
using Case = std::variant<Graph, CnfFormula>;

std::vector<Case> sweep_cases(Reduction r, std::size_t n, std::size_t k, bool labelled, std::size_t max_clauses) {
  std::vector<Case> out;
  if (r == Reduction::SatHioctLinf2) {
    std::vector<std::vector<int>> clauses;
    for (int a = 1; a <= static_cast<int>(n); ++a)
      for (int b = a + 1; b <= static_cast<int>(n); ++b)
        for (int c = b + 1; c <= static_cast<int>(n); ++c)
          for (int s = 0; s < 8; ++s) clauses.push_back({(s & 1) ? -a : a, (s & 2) ? -b : b, (s & 4) ? -c : c});
    // Clause multisets of size <= max_clauses, as nondecreasing index sequences.
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      CnfFormula f{n, {}};
      for (auto i : pick) f.clauses.push_back(clauses[i]);
      out.push_back(std::move(f));
      if (pick.size() == max_clauses) return;
      for (std::size_t i = from; i < clauses.size(); ++i) {
        pick.push_back(i);
        rec(i);
        pick.pop_back();
      }
    };
    rec(0);
    return out;
  }
  const bool colored = r != Reduction::L0Clique && r != Reduction::LinfClique;
  for (auto& g : all_graphs(n, !labelled)) {
    if (!colored) {
      out.push_back(g);
      continue;
    }
    std::vector<std::size_t> colors(n, 1);
    while (true) {
      g.colors = colors;
      out.push_back(g);
      std::size_t i = 0;
      while (i < n && colors[i] == k) colors[i++] = 1;
      if (i == n) break;
      ++colors[i];
    }
  }
  return out;
}

std::vector<Case> seeded_cases(Reduction r, std::size_t count, std::uint64_t seed, std::size_t k) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (r == Reduction::SatHioctLinf2) {
      std::size_t n = 3 + rng() % 3, m = 1 + rng() % 8;
      out.push_back(random_3cnf(rng, n, m));
    } else if (r == Reduction::L0Clique || r == Reduction::LinfClique) {
      Graph g = random_colored_graph(rng, 1 + rng() % 6, 1, 0.0);
      g.colors.clear();
      for (std::size_t v = 2; v <= g.n; ++v)
        for (std::size_t u = 1; u < v; ++u)
          if (rng() % 2) g.edges.emplace_back(u, v);
      out.push_back(g);
    } else {
      out.push_back(random_colored_graph(rng, 3 + rng() % 5, k, 0.6));
    }
  }
  return out;
}

std::string describe(const Case& c) {
  if (const auto* g = std::get_if<Graph>(&c)) {
    std::string s = "n=" + std::to_string(g->n) + " E={";
    for (std::size_t e = 0; e < g->edges.size(); ++e)
      s += (e ? " " : "") + std::to_string(g->edges[e].first) + "-" + std::to_string(g->edges[e].second);
    s += "}";
    if (g->colored()) {
      s += " colors=";
      for (auto c : g->colors) s += std::to_string(c);
    }
    return s;
  }
  const auto& f = std::get<CnfFormula>(c);
  std::string s = "n=" + std::to_string(f.num_vars) + " F=";
  for (const auto& cl : f.clauses) s += "(" + std::to_string(cl[0]) + "," + std::to_string(cl[1]) + "," + std::to_string(cl[2]) + ")";
  return s;
}

int cmd_verify(const std::string& name, const std::string& path, const GenParams& gp, const Common& common,
               std::optional<std::size_t> sweep, std::size_t seeded, bool labelled, std::size_t max_clauses) {
  Reduction r = parse_reduction(name);
  VerifyConfig vc;
  vc.k = gp.k;
  vc.p = parse_rational(gp.p);
  vc.figure_mode = gp.figure_mode;
  vc.tol = Real(common.tol);

  std::vector<Case> cases;
  if (!path.empty()) {
    auto src = load_graph_file(path);
    if (const auto* g = std::get_if<Graph>(&src.source)) cases.push_back(*g);
    else if (const auto* f = std::get_if<CnfFormula>(&src.source)) cases.push_back(*f);
    else throw InvalidInput("verify takes a graph or 3sat file");
  }
  if (sweep) {
    auto more = sweep_cases(r, *sweep, gp.k, labelled, max_clauses);
    cases.insert(cases.end(), more.begin(), more.end());
  }
  if (seeded > 0) {
    auto more = seeded_cases(r, seeded, common.seed, gp.k);
    cases.insert(cases.end(), more.begin(), more.end());
  }
  if (cases.empty()) throw InvalidInput("nothing to verify: give a file, --sweep or --seeded");

  std::vector<std::optional<ReductionReport>> reports(cases.size());
  std::vector<std::string> errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cases.size();) {
      try {
        if (const auto* g = std::get_if<Graph>(&cases[i])) reports[i] = verify_reduction(r, *g, vc);
        else reports[i] = verify_reduction(std::get<CnfFormula>(cases[i]), vc);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(common.jobs, cases.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t agree = 0, disagree = 0, failed = 0;
  std::cout << "case\tsource\ttarget\tagree\tbudget\tmin_cost\tnote\tinstance\n";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!reports[i]) {
      ++failed;
      std::cout << i + 1 << "\t-\t-\terror\t-\t-\t" << errors[i] << '\t' << describe(cases[i]) << '\n';
      continue;
    }
    const auto& rep = *reports[i];
    (rep.agree ? agree : disagree) += 1;
    std::string note = rep.vacuous ? "vacuous" : rep.trivial ? "trivial" : "";
    if (rep.intermediate) note += std::string(note.empty() ? "" : ",") + "hioct=" + (*rep.intermediate ? "yes" : "no");
    std::cout << i + 1 << '\t' << (rep.source ? "yes" : "no") << '\t' << (rep.target ? "yes" : "no") << '\t'
              << (rep.agree ? "agree" : "DISAGREE") << '\t' << (rep.budget.empty() ? "-" : rep.budget) << '\t'
              << rep.min_cost.value_or("-") << '\t' << (note.empty() ? "-" : note) << '\t' << describe(cases[i]) << '\n';
  }
  std::cout << "summary: " << agree << " agree, " << disagree << " disagree, " << failed << " errors of "
            << cases.size() << '\n';
  if (failed > 0) return kError;
  return disagree == 0 ? kYes : kNo;
}

struct BenchRow {
  std::string suite, solver, instance;
  std::size_t size = 0;
  std::string budget;
  double wall_ms = 0;
  std::uint64_t patterns = 0, centroids = 0, partitions = 0;
  std::string decision;
};

template <class F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<BenchRow> bench_select_lp01(std::uint64_t seed, const Common& common) {
  std::vector<BenchRow> rows;
  std::mt19937_64 rng(seed);
  for (const auto& order : {DistanceOrder::l1(), DistanceOrder::lp(Rational(1, 2))}) {
    SelectionInstance base;
    base.order = order;
    base.dimension = 5;
    for (int g = 0; g < 3; ++g) {
      WeightedCluster c;
      for (int v = 0; v < 3; ++v) {
        Point x;
        for (int j = 0; j < 5; ++j) x.push_back(Int(static_cast<long>(rng() % 4)));
        c.add(x, 1);
      }
      base.groups.push_back(c);
    }
    for (int D = 1; D <= 4; ++D)
      for (auto mode : {CoordinateMode::Paper, CoordinateMode::Exhaustive}) {
        auto inst = base;
        inst.budget = CostValue::integer(D);
        auto cfg = selection_config(common);
        cfg.coordinate_mode = mode;
        SelectionStats st;
        SelectionResult res;
        double ms = time_ms([&] { res = select_lp01(inst, cfg, &st); });
        rows.push_back({"select-lp01", mode == CoordinateMode::Paper ? "lp01-patterns" : "lp01-subsets",
                        "p=" + order.to_string(), inst.num_vectors(), std::to_string(D), ms, st.patterns,
                        st.fixed_centroid_calls, 0, res.feasible ? "yes" : "no"});
      }
  }
  return rows;
}

std::vector<BenchRow> bench_solve(std::uint64_t seed, const Common& common) {
  std::vector<BenchRow> rows;
  std::mt19937_64 rng(seed);
  ClusteringInstance inst;
  inst.order = DistanceOrder::l1();
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(Point{Int(static_cast<long>(rng() % 4)), Int(static_cast<long>(rng() % 4))});
  inst.dataset = Dataset(2, pts);
  inst.k = 3;
  // Size of the color-partition family that each coloring with T colors scans.
  for (std::size_t T = 2; T <= 5; ++T) {
    std::vector<std::size_t> used(T);
    std::iota(used.begin(), used.end(), 0);
    std::size_t count = 0;
    double ms = time_ms([&] { count = enumerate_color_partitions(used).size(); });
    rows.push_back({"solve", "color-partitions", "T=" + std::to_string(T), T, "-", ms, 0, 0, count, "-"});
  }
  // With alpha = 1 the color count is ceil(2D), so D = T/2 gives T colors.
  for (int T = 2; T <= 5; ++T) {
    inst.budget = CostValue::rational(Rational(T, 2));
    auto cfg = solve_config(common);
    cfg.policy = IterationPolicy::Exhaustive;
    SolveResult res;
    double ms = time_ms([&] { res = solve_color_coding(inst, cfg); });
    rows.push_back({"solve", "color-coding-exhaustive", "T=" + std::to_string(res.stats.T), inst.dataset.points.size(),
                    format_budget(inst.budget, inst.order), ms, res.stats.selection.patterns,
                    res.stats.selection.fixed_centroid_calls, res.stats.partitions_tried, res.decision ? "yes" : "no"});
  }
  return rows;
}

int cmd_bench(const std::string& suite, const Common& common, const std::string& csv_path) {
  std::vector<BenchRow> rows;
  if (suite == "select-lp01") rows = bench_select_lp01(common.seed, common);
  else if (suite == "solve") rows = bench_solve(common.seed, common);
  else if (suite != "empty") throw InvalidInput("unknown bench suite '" + suite + "' (select-lp01, solve, empty)");
  std::ofstream file;
  if (!csv_path.empty() && csv_path != "-") {
    file.open(csv_path, std::ios::binary);
    if (!file) throw InvalidInput("cannot write " + csv_path);
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  os << "suite,solver,instance,size,D,wall_ms,patterns,centroids,partitions,decision\n";
  for (const auto& r : rows)
    os << r.suite << ',' << r.solver << ',' << r.instance << ',' << r.size << ',' << r.budget << ',' << r.wall_ms << ',' << r.patterns << ','
       << r.centroids << ',' << r.partitions << ',' << r.decision << '\n';
  return kYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact k-clustering and cluster selection under Minkowski-type distances"};
  app.require_subcommand(1);
  Common common;
  GenParams gp;
  std::string input, reduction, graph_path, out_path, suite, csv_path;
  std::optional<std::size_t> sweep;
  std::size_t seeded = 0, max_clauses = 2;
  bool labelled = false;

  auto* solve = app.add_subcommand("solve", "decide a clustering instance by color coding");
  solve->add_option("instance", input, "instance file")->required();
  add_common(solve, common);

  auto* select = app.add_subcommand("select", "decide a cluster selection instance");
  select->add_option("instance", input, "instance file")->required();
  add_common(select, common);

  auto* gen = app.add_subcommand("generate", "build a target instance from a graph or formula");
  gen->add_option("reduction", reduction, "l0-clique | l0-mcc | l1-mcc | linf-clique | linf-mcc | lp-mcc | 3sat-hioct-linf2")
      ->required();
  gen->add_option("source", graph_path, "graph / 3sat / hioct file")->required();
  gen->add_option("-k", gp.k, "clique size");
  gen->add_option("--p", gp.p, "exponent for lp-mcc");
  gen->add_flag("--figure-mode", gp.figure_mode, "linf2: keep isolated vertices, add no isolated edges");
  gen->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check a reduction against brute-force oracles on both sides");
  verify->add_option("reduction", reduction)->required();
  verify->add_option("source", graph_path, "graph or 3sat file");
  verify->add_option("-k", gp.k, "clique size");
  verify->add_option("--p", gp.p, "exponent for lp-mcc");
  verify->add_flag("--figure-mode", gp.figure_mode, "linf2 figure mode");
  verify->add_option("--sweep", sweep, "all graphs on n vertices (all colorings for MCC), or all formulas on n variables");
  verify->add_flag("--labelled", labelled, "sweep labelled graphs instead of isomorphism classes");
  verify->add_option("--max-clauses", max_clauses, "formula sweep: clauses per formula");
  verify->add_option("--seeded", seeded, "additionally verify this many seeded random inputs");
  add_common(verify, common);

  auto* bench = app.add_subcommand("bench", "time solvers, CSV output");
  bench->add_option("suite", suite, "select-lp01 | solve | empty")->required();
  bench->add_option("--csv", csv_path, "output file (default stdout)");
  add_common(bench, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*solve) return cmd_solve(input, common);
    if (*select) return cmd_select(input, common);
    if (*gen) return cmd_generate(reduction, graph_path, gp, out_path);
    if (*verify) return cmd_verify(reduction, graph_path, gp, common, sweep, seeded, labelled, max_clauses);
    if (*bench) return cmd_bench(suite, common, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
