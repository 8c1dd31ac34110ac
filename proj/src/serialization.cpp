#include "lpdual/serialization.hpp"

#include "lpdual/errors.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace lpdual {

namespace {

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractError(std::string(what) + ": missing key '" + key + "'");
  }
  return j.at(key);
}

std::vector<Eigen::VectorXd> vectors_from_json(const json& j) {
  if (!j.is_array()) throw ContractError("expected an array of vectors");
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : j) out.push_back(vector_from_json(v));
  return out;
}

json vectors_to_json(const std::vector<Eigen::VectorXd>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vector_to_json(v));
  return out;
}

}  // namespace

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ContractError("expected a number, got " + j.dump());
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v[i]));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw ContractError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number_from_json(j[i]);
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, std::optional<Eigen::Index> cols) {
  if (!j.is_array()) throw ContractError("expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index c = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols.value_or(0);
  Eigen::MatrixXd m(rows, c);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<size_t>(r)]);
    if (row.size() != c) throw DimensionError("matrix rows have different lengths");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_json(const MeasureSpace& space) {
  json atoms = json::array();
  for (const auto& a : space.atoms()) atoms.push_back({{"id", a.id}, {"w", number_to_json(a.weight)}});
  return {{"atoms", atoms}};
}

MeasureSpace measure_space_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : require(j, "atoms", "MeasureSpace")) {
    const json& id = require(a, "id", "MeasureSpace atom");
    atoms.push_back({id.is_string() ? id.get<std::string>() : id.dump(), number_from_json(require(a, "w", "MeasureSpace atom"))});
  }
  return MeasureSpace(std::move(atoms));
}

json to_json(const LpTuple& tuple) {
  return {{"space", to_json(tuple.space())},
          {"p", number_to_json(tuple.p())},
          {"n", tuple.n()},
          {"values", matrix_to_json(tuple.values())}};
}

LpTuple lp_tuple_from_json(const json& j) {
  std::optional<Eigen::Index> cols;
  if (j.contains("n")) cols = j.at("n").get<Eigen::Index>();
  return LpTuple(measure_space_from_json(require(j, "space", "LpTuple")),
                 matrix_from_json(require(j, "values", "LpTuple"), cols), number_from_json(require(j, "p", "LpTuple")));
}

json to_json(const SpanOperator& op) { return {{"domain", to_json(op.domain())}, {"codomain", to_json(op.codomain())}}; }

SpanOperator span_operator_from_json(const json& j) {
  return SpanOperator(lp_tuple_from_json(require(j, "domain", "SpanOperator")),
                      lp_tuple_from_json(require(j, "codomain", "SpanOperator")));
}

json to_json(const ProjAtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"z", vector_to_json(a.point.rep())}, {"mass", number_to_json(a.mass)}});
  return {{"n", mu.n()}, {"p", number_to_json(mu.p())}, {"atoms", atoms}};
}

ProjAtomicMeasure proj_measure_from_json(const json& j) {
  const int n = require(j, "n", "ProjAtomicMeasure").get<int>();
  const double p = j.contains("p") ? number_from_json(j.at("p")) : 2.0;
  std::vector<std::pair<Eigen::VectorXd, double>> raw;
  for (const auto& a : require(j, "atoms", "ProjAtomicMeasure")) {
    raw.emplace_back(vector_from_json(require(a, "z", "ProjAtomicMeasure atom")),
                     number_from_json(require(a, "mass", "ProjAtomicMeasure atom")));
  }
  return ProjAtomicMeasure::from_directions(n, p, raw);
}

json to_json(const NormOracle& oracle) {
  switch (oracle.kind()) {
    case NormOracle::Kind::Lq: {
      json w = json::array();
      for (double x : oracle.weights()) w.push_back(number_to_json(x));
      return {{"kind", "lq"}, {"q", number_to_json(oracle.q())}, {"weights", w}};
    }
    case NormOracle::Kind::Quadratic:
      return {{"kind", "quadratic"}, {"G", matrix_to_json(oracle.matrix())}};
    case NormOracle::Kind::Polytope:
      return {{"kind", "polytope"}, {"rows", matrix_to_json(oracle.matrix())}};
    case NormOracle::Kind::TupleInduced:
      return {{"kind", "tuple_induced"}, {"space", to_json(oracle.inner())}, {"vectors", vectors_to_json(oracle.vectors())}};
  }
  throw ContractError("NormOracle: unknown kind");
}

NormOracle norm_oracle_from_json(const json& j) {
  const std::string kind = require(j, "kind", "NormOracle").get<std::string>();
  if (kind == "lq") {
    std::vector<double> w;
    for (const auto& x : require(j, "weights", "NormOracle lq")) w.push_back(number_from_json(x));
    return NormOracle::lq(number_from_json(require(j, "q", "NormOracle lq")), std::move(w));
  }
  if (kind == "quadratic") return NormOracle::quadratic(matrix_from_json(require(j, "G", "NormOracle quadratic")));
  if (kind == "polytope") return NormOracle::polytope(matrix_from_json(require(j, "rows", "NormOracle polytope")));
  if (kind == "tuple_induced") {
    return NormOracle::tuple_induced(norm_oracle_from_json(require(j, "space", "NormOracle tuple_induced")),
                                     vectors_from_json(require(j, "vectors", "NormOracle tuple_induced")));
  }
  throw ContractError("NormOracle: unknown kind '" + kind + "'");
}

json to_json(const Graph& graph) {
  json edges = json::array();
  for (const auto& [u, v] : graph.edges()) {
    edges.push_back({graph.vertices()[static_cast<size_t>(u)], graph.vertices()[static_cast<size_t>(v)]});
  }
  return {{"vertices", graph.vertices()}, {"edges", edges}, {"symmetrize", false}};
}

Graph graph_from_json(const json& j) {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const auto& v : require(j, "vertices", "Graph")) {
    names.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    index.emplace(names.back(), static_cast<int>(names.size()) - 1);
  }
  auto endpoint = [&](const json& e) {
    const std::string key = e.is_string() ? e.get<std::string>() : e.dump();
    auto it = index.find(key);
    if (it == index.end()) throw ContractError("Graph: unknown vertex '" + key + "' in edge list");
    return it->second;
  };
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : require(j, "edges", "Graph")) {
    if (!e.is_array() || e.size() != 2) throw ContractError("Graph: each edge must be a pair");
    edges.push_back({endpoint(e[0]), endpoint(e[1])});
  }
  const bool symmetrize = j.value("symmetrize", false);
  return Graph(std::move(names), std::move(edges), symmetrize);
}

json to_json(const TupleGenerator& gen) {
  return {{"space", to_json(gen.space)}, {"vectors", vectors_to_json(gen.vectors)}};
}

TupleGenerator tuple_generator_from_json(const json& j) {
  return {norm_oracle_from_json(require(j, "space", "tuple")), vectors_from_json(require(j, "vectors", "tuple"))};
}

std::vector<TupleGenerator> ConeSpec::expand() const {
  std::vector<TupleGenerator> out;
  for (const auto& e : generators) {
    if (e.tuple) {
      out.push_back(*e.tuple);
    } else {
      const auto lines = scalar_line_generators(n, e.scalar_lines);
      out.insert(out.end(), lines.begin(), lines.end());
    }
  }
  return out;
}

SphereGrid ConeSpec::grid() const { return SphereGrid::make(n, grid_points, p); }

ConeSample ConeSpec::build() const { return cone_from_tuples(expand(), grid()); }

json to_json(const ConeSpec& spec) {
  json gens = json::array();
  for (const auto& e : spec.generators) {
    if (e.tuple) {
      gens.push_back(to_json(*e.tuple));
    } else {
      gens.push_back({{"family", "scalar_lines"}, {"count", e.scalar_lines}});
    }
  }
  return {{"p", number_to_json(spec.p)}, {"n", spec.n}, {"generators", gens}, {"grid", {{"M", spec.grid_points}}}};
}

ConeSpec cone_spec_from_json(const json& j) {
  ConeSpec spec;
  spec.p = number_from_json(require(j, "p", "Cone"));
  spec.n = require(j, "n", "Cone").get<int>();
  spec.grid_points = require(require(j, "grid", "Cone"), "M", "Cone grid").get<int>();
  for (const auto& g : require(j, "generators", "Cone")) {
    ConeSpec::Entry entry;
    if (g.contains("family")) {
      if (g.at("family") != "scalar_lines") throw ContractError("Cone: unknown generator family " + g.at("family").dump());
      entry.scalar_lines = require(g, "count", "Cone family").get<int>();
      if (entry.scalar_lines < 1) throw ContractError("Cone: family count must be positive");
    } else {
      entry.tuple = tuple_generator_from_json(g);
    }
    spec.generators.push_back(std::move(entry));
  }
  return spec;
}

json to_json(const OpNormResult& result) {
  json out = {{"lower", number_to_json(result.lower)},
              {"method", to_string(result.method)},
              {"unbounded", result.unbounded},
              {"witness", vectors_to_json(result.witness)}};
  out["upper"] = result.upper ? number_to_json(*result.upper) : json(nullptr);
  return out;
}

json to_json(const SandwichResult& result) {
  json out = {{"feasible", result.feasible}, {"s", number_to_json(result.s)}, {"exact", result.exact},
              {"tightened", result.tightened}};
  out["coefficients"] = result.coefficients ? vector_to_json(*result.coefficients) : json(nullptr);
  if (result.certificate) {
    out["certificate"] = {{"mu", to_json(result.certificate->mu)}, {"nu", to_json(result.certificate->nu)}};
  } else {
    out["certificate"] = nullptr;
  }
  return out;
}

json to_json(const WitnessReport& report) {
  return {{"operator", to_json(report.op)},
          {"rank", report.rank},
          {"rank_note", report.rank_note ? json(*report.rank_note) : json(nullptr)},
          {"degenerate", report.degenerate},
          {"generator_margin", number_to_json(report.generator_margin)},
          {"in_sampled_polar", report.in_sampled_polar},
          {"psi_ratio", number_to_json(report.psi_ratio)},
          {"threshold", number_to_json(report.threshold)},
          {"violates", report.violates}};
}

}  // namespace lpdual
