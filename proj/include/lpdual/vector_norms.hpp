#pragma once

// Vector-valued operator norms ||T_X|| = ||T (x) id_X||, the classical test
// operators (parallelogram, type, cotype, K-convexity) and graph Poincare
// constants.

#include "lpdual/hspace.hpp"
#include "lpdual/measure_core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lpdual {

enum class OpNormMethod {
  Grid,        ///< dense net on the unit sphere of X^n, certified upper bound; needs n * dim(X) <= 4
  Multistart,  ///< projected ascent from random starts; lower bound only
  Auto,        ///< Grid when allowed, otherwise Multistart
};

std::string to_string(OpNormMethod method);
OpNormMethod parse_method(const std::string& name);

struct OpNormParams {
  int starts = 64;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  /// Subdivisions per edge of the cube [-1,1]^(n*d) whose surface is the grid net.
  int grid_divisions = 40;
  /// Grid points used as seeds for local ascent after the grid scan.
  int polish_starts = 4;
  /// Extra starting tuples for Multistart (each a list of n vectors in X).
  std::vector<std::vector<Eigen::VectorXd>> warm_starts;
  /// Worker threads for Multistart; 0 = hardware concurrency.
  int threads = 0;
};

struct OpNormResult {
  double lower = 0.0;
  std::optional<double> upper;
  /// n vectors of X at which the ratio equals `lower`.
  std::vector<Eigen::VectorXd> witness;
  OpNormMethod method = OpNormMethod::Multistart;
  /// The ratio blew up: some x makes sum f_i x_i vanish but not sum Tf_i x_i.
  bool unbounded = false;
};

/// Largest grid dimension n * dim(X) accepted by OpNormMethod::Grid.
inline constexpr int kMaxGridDimension = 4;

/// (<mu_Tf, phi_x> / <mu_f, phi_x>)^(1/p) with phi_x(z) = ||sum z_i x_i||^p.
double pairing_ratio(const SpanOperator& op, const NormOracle& space, const std::vector<Eigen::VectorXd>& x);

/// sup over nonzero x in X^n of pairing_ratio(op, space, x).
OpNormResult vector_opnorm(const SpanOperator& op, const NormOracle& space, OpNormMethod method = OpNormMethod::Auto,
                           const OpNormParams& params = {});

/// 2 x 2 rotation (1/sqrt2)[[1, 1], [-1, 1]] on l_2^2; ||T_X|| <= 1 iff X
/// satisfies the parallelogram inequality.
SpanOperator parallelogram_operator();

/// e_i in l_p^n -> eps_i / Tp, eps_i the Rademacher functions on {-1,1}^n
/// (probability weights). ||T_X|| <= 1 iff X has type p with constant Tp.
SpanOperator type_operator(int n, double p, double type_constant);
/// eps_i -> e_i / Cp. ||T_X|| <= 1 iff X has cotype p with constant Cp.
SpanOperator cotype_operator(int n, double p, double cotype_constant);
/// Orthogonal projection of L_2({-1,1}^n) onto the span of the coordinate
/// functions, with the full Walsh basis as domain basis.
SpanOperator kconvexity_projection(int n);

/// Largest cube dimension accepted by the Rademacher/Walsh builders.
inline constexpr int kMaxCubeDimension = 12;

/// Finite graph stored with ordered edges; each undirected edge appears in
/// both orientations.
class Graph {
 public:
  /// `edges` index into `vertices`. With `symmetrize`, missing reverse
  /// orientations are added; otherwise they must be present.
  Graph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges, bool symmetrize = false);

  static Graph cycle(int n);
  static Graph complete(int n);
  static Graph petersen();

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  int size() const noexcept { return static_cast<int>(vertices_.size()); }
  int degree(int v) const { return degrees_[static_cast<size_t>(v)]; }
  bool connected() const;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> degrees_;
};

/// Inverse of the edge-difference map f -> (f(v) - f(w))_{(v,w) in E} on
/// functions with sum_v deg(v) f(v) = 0 (vertex weights deg(v)).
SpanOperator poincare_operator(const Graph& graph, double p);

/// X-valued p-Poincare constant of the graph, as ||T_X|| for poincare_operator.
OpNormResult poincare_constant(const Graph& graph, double p, const NormOracle& space,
                               OpNormMethod method = OpNormMethod::Multistart, const OpNormParams& params = {});

/// (2 - 2 lambda_2)^(-1/2) with lambda_2 the second largest eigenvalue of the
/// random walk operator D^-1 A.
double spectral_check(const Graph& graph);

/// ||T_X|| for X = l_inf^k, a lower bound for the regular norm; nondecreasing
/// in k (each level is warm-started from the previous witness).
double regular_norm_estimate(const SpanOperator& op, int k, const OpNormParams& params = {});

}  // namespace lpdual
