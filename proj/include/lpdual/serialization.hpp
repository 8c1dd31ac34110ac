#pragma once

// JSON forms of the library types. Every to_json/from_json pair round-trips:
// dump(to_json(from_json(j))) == dump(j) for any j produced by to_json.

#include "lpdual/hspace.hpp"
#include "lpdual/measure_core.hpp"
#include "lpdual/polarity.hpp"
#include "lpdual/projective.hpp"
#include "lpdual/vector_norms.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lpdual {

using json = nlohmann::json;

/// Doubles, with +-inf and nan written as the strings "inf", "-inf", "nan".
json number_to_json(double v);
double number_from_json(const json& j);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXd& m);
/// `cols` is needed for empty matrices.
Eigen::MatrixXd matrix_from_json(const json& j, std::optional<Eigen::Index> cols = std::nullopt);

json to_json(const MeasureSpace& space);
MeasureSpace measure_space_from_json(const json& j);

json to_json(const LpTuple& tuple);
LpTuple lp_tuple_from_json(const json& j);

json to_json(const SpanOperator& op);
SpanOperator span_operator_from_json(const json& j);

json to_json(const ProjAtomicMeasure& mu);
ProjAtomicMeasure proj_measure_from_json(const json& j);

json to_json(const NormOracle& oracle);
NormOracle norm_oracle_from_json(const json& j);

json to_json(const Graph& graph);
/// Edge endpoints may be vertex names or indices; "symmetrize" defaults to false.
Graph graph_from_json(const json& j);

/// z -> ||sum z_i x_i||_X^p: {"space": NormOracle, "vectors": [[...], ...]}.
json to_json(const TupleGenerator& gen);
TupleGenerator tuple_generator_from_json(const json& j);

/// Cone description: explicit tuple generators and generator families.
struct ConeSpec {
  struct Entry {
    std::optional<TupleGenerator> tuple;
    /// {"family": "scalar_lines", "count": K}
    int scalar_lines = 0;
  };
  double p = 2.0;
  int n = 2;
  std::vector<Entry> generators;
  int grid_points = 0;  ///< "grid": {"M": ...}

  std::vector<TupleGenerator> expand() const;
  SphereGrid grid() const;
  ConeSample build() const;
};

json to_json(const ConeSpec& spec);
ConeSpec cone_spec_from_json(const json& j);

json to_json(const OpNormResult& result);
json to_json(const SandwichResult& result);
json to_json(const WitnessReport& report);

}  // namespace lpdual
