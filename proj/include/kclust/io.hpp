#pragma once

// JSON instance and graph files. Integers are JSON numbers when they fit in
// 64 bits and decimal strings otherwise; budgets are typed strings.

#include "kclust/graphs.hpp"
#include "kclust/instances.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

namespace kclust {

using Json = nlohmann::ordered_json;

struct InstanceFile {
  std::variant<ClusteringInstance, SelectionInstance> instance;
  std::optional<Json> provenance;

  bool is_clustering() const { return std::holds_alternative<ClusteringInstance>(instance); }
};

struct GraphFile {
  std::variant<Graph, CnfFormula, HioctInstance> source;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

namespace detail {

inline Json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

inline Int int_from_json(const Json& j, const char* what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    Rational q = parse_rational(s);
    if (mp::denominator(q) != 1 || s.find('.') != std::string::npos) throw InvalidInput(std::string(what) + " must be an integer");
    return mp::numerator(q);
  }
  throw InvalidInput(std::string(what) + " must be an integer");
}

inline std::uint64_t count_from_json(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw InvalidInput(std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline const Json& field(const Json& j, const char* name) {
  if (!j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

inline std::vector<Point> matrix_from_json(const Json& j, std::size_t d) {
  if (!j.is_array()) throw InvalidInput("'vectors' must be an array of rows");
  std::vector<Point> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != d) throw InvalidInput("every vector needs exactly 'dimension' entries");
    Point p;
    for (const auto& v : row) p.push_back(int_from_json(v, "vector entry"));
    out.push_back(std::move(p));
  }
  return out;
}

inline Json point_to_json(const Point& p) {
  Json row = Json::array();
  for (const auto& v : p) row.push_back(int_to_json(v));
  return row;
}

// Type errors inside well-formed JSON become InvalidInput too.
template <class F>
auto json_errors_as_invalid(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad field type: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

inline InstanceFile parse_instance(const std::string& text) {
  return detail::json_errors_as_invalid([&] {
    Json j = detail::parse_json(text);
    if (!j.is_object()) throw InvalidInput("instance file must be a JSON object");
    const std::string kind = detail::field(j, "kind").get<std::string>();
    const DistanceOrder order = DistanceOrder::parse(detail::field(j, "p").get<std::string>());
    const std::size_t d = detail::count_from_json(detail::field(j, "dimension"), "dimension");
    auto pts = detail::matrix_from_json(detail::field(j, "vectors"), d);
    if (!detail::field(j, "budget").is_string()) throw InvalidInput("'budget' must be a string");
    CostValue budget = parse_budget(j.at("budget").get<std::string>(), order);
    InstanceFile f;
    if (j.contains("provenance")) f.provenance = j.at("provenance");

    if (kind == "clustering") {
      std::vector<Weight> mult;
      if (j.contains("multiplicities")) {
        const auto& m = j.at("multiplicities");
        if (!m.is_array() || m.size() != pts.size()) throw InvalidInput("one multiplicity per vector required");
        for (const auto& v : m) mult.push_back(detail::count_from_json(v, "multiplicity"));
      }
      ClusteringInstance c;
      c.dataset = Dataset(d, std::move(pts), std::move(mult));
      c.k = detail::count_from_json(detail::field(j, "k"), "k");
      c.budget = budget;
      c.order = order;
      c.validate();
      f.instance = std::move(c);
    } else if (kind == "selection") {
      const auto& gj = detail::field(j, "groups");
      if (!gj.is_array() || gj.size() != pts.size()) throw InvalidInput("one group index per vector required");
      std::vector<Weight> weights(pts.size(), 1);
      if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (!w.is_array() || w.size() != pts.size()) throw InvalidInput("one weight per vector required");
        for (std::size_t i = 0; i < w.size(); ++i) weights[i] = detail::count_from_json(w[i], "weight");
      }
      std::size_t t = 0;
      std::vector<std::size_t> idx;
      for (const auto& g : gj) {
        idx.push_back(detail::count_from_json(g, "group index"));
        if (idx.back() < 1) throw InvalidInput("group indices start at 1");
        t = std::max(t, idx.back());
      }
      SelectionInstance s;
      s.dimension = d;
      s.order = order;
      s.budget = budget;
      s.groups.resize(t);
      for (std::size_t i = 0; i < pts.size(); ++i) s.groups[idx[i] - 1].add(pts[i], weights[i]);
      for (std::size_t g = 0; g < t; ++g)
        if (s.groups[g].points.empty()) throw InvalidInput("group indices must be contiguous 1..t (group " + std::to_string(g + 1) + " is empty)");
      s.validate();
      f.instance = std::move(s);
    } else {
      throw InvalidInput("unknown instance kind '" + kind + "'");
    }
    return f;
  });
}

inline std::string serialize_instance(const InstanceFile& f) {
  Json j;
  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, ClusteringInstance>) {
          j["kind"] = "clustering";
          j["p"] = inst.order.to_string();
          j["dimension"] = inst.dataset.dimension;
          j["k"] = inst.k;
          j["budget"] = format_budget(inst.budget, inst.order);
          Json rows = Json::array();
          for (const auto& p : inst.dataset.points) rows.push_back(detail::point_to_json(p));
          j["vectors"] = rows;
          j["multiplicities"] = inst.dataset.multiplicities;
        } else {
          j["kind"] = "selection";
          j["p"] = inst.order.to_string();
          j["dimension"] = inst.dimension;
          j["budget"] = format_budget(inst.budget, inst.order);
          Json rows = Json::array(), groups = Json::array(), weights = Json::array();
          for (std::size_t g = 0; g < inst.groups.size(); ++g)
            for (std::size_t i = 0; i < inst.groups[g].points.size(); ++i) {
              rows.push_back(detail::point_to_json(inst.groups[g].points[i]));
              groups.push_back(g + 1);
              weights.push_back(inst.groups[g].weights[i]);
            }
          j["vectors"] = rows;
          j["groups"] = groups;
          j["weights"] = weights;
        }
      },
      f.instance);
  if (f.provenance) j["provenance"] = *f.provenance;
  return j.dump(2) + "\n";
}

inline InstanceFile load_instance(const std::string& path) { return parse_instance(detail::read_file(path)); }

// {"n", "edges", "colors"?, "t"?} for graphs (with t: a HIOCT instance) or
// {"kind": "3sat", "num_vars", "clauses"} for formulas.
inline GraphFile parse_graph_file(const std::string& text) {
  return detail::json_errors_as_invalid([&] {
    Json j = detail::parse_json(text);
    if (!j.is_object()) throw InvalidInput("graph file must be a JSON object");
    GraphFile f;
    std::string kind = j.contains("kind") ? j.at("kind").get<std::string>() : "graph";
    if (kind == "3sat") {
      CnfFormula cnf;
      cnf.num_vars = detail::count_from_json(detail::field(j, "num_vars"), "num_vars");
      for (const auto& c : detail::field(j, "clauses")) {
        std::vector<int> clause;
        for (const auto& lit : c) {
          if (!lit.is_number_integer()) throw InvalidInput("literals must be integers");
          clause.push_back(lit.get<int>());
        }
        cnf.clauses.push_back(std::move(clause));
      }
      cnf.validate();
      f.source = std::move(cnf);
      return f;
    }
    if (kind != "graph" && kind != "hioct") throw InvalidInput("unknown graph file kind '" + kind + "'");
    Graph g;
    g.n = detail::count_from_json(detail::field(j, "n"), "n");
    for (const auto& e : detail::field(j, "edges")) {
      if (!e.is_array() || e.size() != 2) throw InvalidInput("edges are vertex pairs");
      g.edges.emplace_back(detail::count_from_json(e[0], "vertex"), detail::count_from_json(e[1], "vertex"));
    }
    if (j.contains("colors"))
      for (const auto& c : j.at("colors")) g.colors.push_back(detail::count_from_json(c, "color"));
    g.validate();
    if (kind == "hioct" || j.contains("t")) {
      f.source = HioctInstance{std::move(g), detail::count_from_json(detail::field(j, "t"), "t")};
    } else {
      f.source = std::move(g);
    }
    return f;
  });
}

inline std::string serialize_graph_file(const GraphFile& f) {
  Json j;
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        auto put_graph = [&](const Graph& g) {
          j["n"] = g.n;
          Json edges = Json::array();
          for (auto [u, v] : g.edges) edges.push_back(Json::array({u, v}));
          j["edges"] = edges;
          if (g.colored()) j["colors"] = g.colors;
        };
        if constexpr (std::is_same_v<T, CnfFormula>) {
          j["kind"] = "3sat";
          j["num_vars"] = src.num_vars;
          j["clauses"] = src.clauses;
        } else if constexpr (std::is_same_v<T, HioctInstance>) {
          j["kind"] = "hioct";
          put_graph(src.graph);
          j["t"] = src.t;
        } else {
          put_graph(src);
        }
      },
      f.source);
  return j.dump(2) + "\n";
}

inline GraphFile load_graph_file(const std::string& path) { return parse_graph_file(detail::read_file(path)); }

// Hash of a source file's canonical form, recorded in provenance headers.
inline std::string source_hash(const GraphFile& f) { return "fnv1a64:" + hex64(fnv1a64(serialize_graph_file(f))); }

}  // namespace kclust
