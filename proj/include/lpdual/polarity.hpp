#pragma once

// Polar membership, the grid-sampled sandwich LP psi <= sum c_j phi_j <= s psi,
// its minimal s, and the operator read off an infeasibility certificate.

#include "lpdual/hspace.hpp"
#include "lpdual/lp.hpp"
#include "lpdual/measure_core.hpp"
#include "lpdual/projective.hpp"
#include "lpdual/vector_norms.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace lpdual {

/// Generators of a cone of norm-power functions, sampled on a grid.
/// Every generator is nonnegative on the grid and shares (n, p) with it.
class ConeSample {
 public:
  ConeSample(std::vector<HFunction> generators, SphereGrid grid);
  /// Reuses an already sampled matrix (grid points x generators).
  ConeSample(std::vector<HFunction> generators, SphereGrid grid, Eigen::MatrixXd sampled);

  int n() const noexcept { return grid_.n(); }
  double p() const noexcept { return grid_.p(); }
  int size() const noexcept { return static_cast<int>(generators_.size()); }
  const std::vector<HFunction>& generators() const noexcept { return generators_; }
  const SphereGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& sampled() const noexcept { return sampled_; }

 private:
  void validate() const;
  std::vector<HFunction> generators_;
  SphereGrid grid_;
  Eigen::MatrixXd sampled_;
};

/// A generator z -> ||sum z_i x_i||_X^p given by a space and n vectors in it.
struct TupleGenerator {
  NormOracle space;
  std::vector<Eigen::VectorXd> vectors;
};

ConeSample cone_from_tuples(const std::vector<TupleGenerator>& tuples, const SphereGrid& grid);

/// `count` lines of the scalar field: z -> |<a, z>|^p for unit directions a
/// (angles k*pi/count for n = 2, Halton directions otherwise).
std::vector<TupleGenerator> scalar_line_generators(int n, int count);

struct PolarCheck {
  bool in_polar = true;
  double worst = 0.0;  ///< +inf when some norm is unbounded
  int worst_space = -1;
  std::vector<Eigen::VectorXd> witness;
};

/// max over spaces of ||T_X|| (lower estimates); in the polar iff <= 1 + tol.
PolarCheck in_polar_check(const SpanOperator& op, const std::vector<NormOracle>& spaces, double tol = 1e-6,
                          const OpNormParams& params = {});

struct SandwichOptions {
  LpOptions lp;
  /// Shrink the grid constraints by Lipschitz slack so that a feasible answer
  /// holds on the whole sphere. Needs Lipschitz bounds for psi and all
  /// generators; no certificate is reported in this mode.
  bool lipschitz_tighten = false;
};

struct SandwichCertificate {
  ProjAtomicMeasure mu;  ///< from the upper rows  sum c_j phi_j <= s psi
  ProjAtomicMeasure nu;  ///< from the lower rows  sum c_j phi_j >= psi
};

struct SandwichResult {
  bool feasible = false;
  double s = 1.0;
  std::optional<Eigen::VectorXd> coefficients;
  std::optional<SandwichCertificate> certificate;
  bool exact = false;
  bool tightened = false;
};

SandwichResult sandwich_feasible(const HFunction& psi, const ConeSample& cone, double s,
                                 const SandwichOptions& options = {});

struct BisectionStep {
  double s;
  bool feasible;
};

struct MinimalSandwich {
  /// Smallest s found feasible; s_max when even s_max is infeasible.
  double s_star = 1.0;
  /// s_star^(1/p), the Banach-Mazur distance estimate.
  double distance = 1.0;
  /// True when s_max was infeasible, so s_star is only a lower bound.
  bool lower_bound_only = false;
  std::vector<BisectionStep> trace;
  /// The infeasible run closest to s_star, carrying its certificate.
  std::optional<SandwichResult> last_infeasible;
};

inline constexpr double kDefaultSMax = 1e6;

/// Doubling bracket from s = 1, then bisection until (hi - lo) <= tol * hi.
MinimalSandwich minimal_sandwich_s(const HFunction& psi, const ConeSample& cone, double tol = 1e-3,
                                   double s_max = kDefaultSMax, const SandwichOptions& options = {});

struct WitnessReport {
  SpanOperator op;
  int rank = 0;
  /// Set when mu's atoms do not span R^n; op is then restricted to a maximal
  /// independent subset of coordinate functions.
  std::optional<std::string> rank_note{};
  /// nu = 0: the zero operator, which violates nothing.
  bool degenerate = false;
  /// min_j <mu - nu, phi_j>.
  double generator_margin = 0.0;
  bool in_sampled_polar = false;
  /// (<nu, psi> / <mu, psi>)^(1/p).
  double psi_ratio = 0.0;
  double threshold = 1.0;
  bool violates = false;
};

/// T : f_i -> g_i with f built from mu's atoms (atom z of mass m -> weight m,
/// row z) and g from nu's. Throws ContractError on a feasible result.
WitnessReport extract_witness_operator(const SandwichResult& result, const HFunction& psi, const ConeSample& cone,
                                       double tol = 1e-8);

/// Adds the sums of every 2..k distinct generators (l_p-direct sums of the
/// corresponding spaces).
ConeSample hull_generators(const ConeSample& cone, int k);

}  // namespace lpdual
