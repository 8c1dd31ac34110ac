#include "lpdual/polarity.hpp"

#include "lpdual/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lpdual {

namespace {

// Generators may dip this far below zero on the grid from rounding.
constexpr double kNonnegativitySlack = 1e-12;
constexpr long kMaxHullGenerators = 100000;

Eigen::MatrixXd sample_all(const std::vector<HFunction>& generators, const SphereGrid& grid) {
  Eigen::MatrixXd out(grid.size(), static_cast<Eigen::Index>(generators.size()));
  for (size_t j = 0; j < generators.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = sample(generators[j], grid);
  return out;
}

ProjAtomicMeasure measure_on_grid(const SphereGrid& grid, const Eigen::VectorXd& weights) {
  std::vector<ProjAtom> atoms;
  for (int t = 0; t < grid.size(); ++t) {
    if (weights[t] > 0.0) atoms.push_back({grid[t], weights[t]});
  }
  return ProjAtomicMeasure(grid.n(), grid.p(), std::move(atoms));
}

// Tuple whose atoms are the atoms of mu: weight = mass, row = representative.
LpTuple tuple_from_measure(const ProjAtomicMeasure& mu, const std::string& prefix) {
  std::vector<Atom> atoms;
  Eigen::MatrixXd values(mu.size(), mu.n());
  for (int a = 0; a < mu.size(); ++a) {
    const auto& atom = mu.atoms()[static_cast<size_t>(a)];
    atoms.push_back({prefix + std::to_string(a), atom.mass});
    values.row(a) = atom.point.rep().transpose();
  }
  return LpTuple(MeasureSpace(std::move(atoms)), std::move(values), mu.p());
}

}  // namespace

ConeSample::ConeSample(std::vector<HFunction> generators, SphereGrid grid)
    : generators_(std::move(generators)), grid_(std::move(grid)) {
  sampled_ = sample_all(generators_, grid_);
  validate();
}

ConeSample::ConeSample(std::vector<HFunction> generators, SphereGrid grid, Eigen::MatrixXd sampled)
    : generators_(std::move(generators)), grid_(std::move(grid)), sampled_(std::move(sampled)) {
  if (sampled_.rows() != grid_.size() || sampled_.cols() != static_cast<Eigen::Index>(generators_.size())) {
    throw DimensionError("ConeSample: sampled matrix shape mismatch");
  }
  validate();
}

void ConeSample::validate() const {
  if (generators_.empty()) throw ContractError("ConeSample: no generators");
  for (const auto& g : generators_) {
    if (g.n() != grid_.n() || g.p() != grid_.p()) throw DimensionError("ConeSample: generator (n, p) differs from grid");
  }
  if (sampled_.size() > 0 && sampled_.minCoeff() < -kNonnegativitySlack) {
    throw ContractError("ConeSample: generator negative on the grid");
  }
}

ConeSample cone_from_tuples(const std::vector<TupleGenerator>& tuples, const SphereGrid& grid) {
  std::vector<HFunction> gens;
  gens.reserve(tuples.size());
  for (const auto& t : tuples) {
    if (static_cast<int>(t.vectors.size()) != grid.n()) throw DimensionError("cone_from_tuples: tuple length differs from n");
    gens.push_back(phi_from_tuple(t.space, t.vectors, grid.p()));
  }
  return ConeSample(std::move(gens), grid);
}

std::vector<TupleGenerator> scalar_line_generators(int n, int count) {
  if (n < 1 || count < 1) throw ContractError("scalar_line_generators: n and count must be positive");
  std::vector<Eigen::VectorXd> directions;
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double theta = std::numbers::pi * k / count;
      directions.push_back(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    }
  } else {
    directions = halton_directions(n, count);
  }
  std::vector<TupleGenerator> out;
  for (const auto& a : directions) {
    TupleGenerator g{NormOracle::scalar(), {}};
    for (int i = 0; i < n; ++i) g.vectors.push_back(Eigen::VectorXd::Constant(1, a[i]));
    out.push_back(std::move(g));
  }
  return out;
}

PolarCheck in_polar_check(const SpanOperator& op, const std::vector<NormOracle>& spaces, double tol,
                          const OpNormParams& params) {
  PolarCheck out;
  for (size_t k = 0; k < spaces.size(); ++k) {
    const OpNormResult r = vector_opnorm(op, spaces[k], OpNormMethod::Auto, params);
    if (out.worst_space < 0 || r.lower > out.worst) {
      out.worst = r.lower;
      out.worst_space = static_cast<int>(k);
      out.witness = r.witness;
    }
    if (r.unbounded) break;
  }
  out.in_polar = out.worst <= 1.0 + tol;
  return out;
}

SandwichResult sandwich_feasible(const HFunction& psi, const ConeSample& cone, double s,
                                 const SandwichOptions& options) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw ContractError("sandwich_feasible: s must be a finite number >= 1");
  if (psi.n() != cone.n() || psi.p() != cone.p()) throw DimensionError("sandwich_feasible: psi (n, p) differs from cone");
  const SphereGrid& grid = cone.grid();
  const Eigen::VectorXd psi_t = sample(psi, grid);
  if (psi_t.minCoeff() < 0.0) throw ContractError("sandwich_feasible: psi negative on the grid");

  LpProblem lp;
  lp.a_ub = cone.sampled();
  lp.b_ub = s * psi_t;
  lp.a_lb = cone.sampled();
  lp.b_lb = psi_t;
  if (options.lipschitz_tighten) {
    // For z within the mesh h of grid point t:
    //   phi_j(z) in [phi_j(t) - L_j h, phi_j(t) + L_j h],  psi(z) in [psi(t) - L h, psi(t) + L h].
    if (!grid.certified()) throw ContractError("sandwich_feasible: Lipschitz tightening needs a certified grid");
    const double h = grid.mesh();
    const auto lpsi = psi.lipschitz(grid);
    if (!lpsi) throw ContractError("sandwich_feasible: psi has no Lipschitz bound");
    for (int j = 0; j < cone.size(); ++j) {
      const auto lj = cone.generators()[static_cast<size_t>(j)].lipschitz(grid);
      if (!lj) throw ContractError("sandwich_feasible: generator has no Lipschitz bound");
      lp.a_ub.col(j).array() += *lj * h;
      lp.a_lb.col(j).array() -= *lj * h;
    }
    lp.b_ub.array() -= s * *lpsi * h;
    lp.b_lb.array() += *lpsi * h;
  }

  const LpResult res = lp_solve(lp, options.lp);
  SandwichResult out;
  out.s = s;
  out.feasible = res.feasible;
  out.exact = res.exact;
  out.tightened = options.lipschitz_tighten;
  if (res.feasible) {
    out.coefficients = res.point;
  } else if (!options.lipschitz_tighten) {
    out.certificate = SandwichCertificate{measure_on_grid(grid, res.y_ub), measure_on_grid(grid, res.y_lb)};
  }
  return out;
}

MinimalSandwich minimal_sandwich_s(const HFunction& psi, const ConeSample& cone, double tol, double s_max,
                                   const SandwichOptions& options) {
  if (!(tol > 0.0)) throw ContractError("minimal_sandwich_s: tol must be positive");
  if (!(s_max >= 1.0)) throw ContractError("minimal_sandwich_s: s_max must be >= 1");
  MinimalSandwich out;
  auto probe = [&](double s) {
    SandwichResult r = sandwich_feasible(psi, cone, s, options);
    out.trace.push_back({s, r.feasible});
    if (!r.feasible) out.last_infeasible = std::move(r);
    return out.trace.back().feasible;
  };
  auto done = [&](double s) {
    out.s_star = s;
    out.distance = std::pow(s, 1.0 / cone.p());
    return out;
  };

  if (probe(1.0)) return done(1.0);
  double lo = 1.0, hi = 2.0;
  while (true) {
    if (hi >= s_max) {
      hi = s_max;
      if (!probe(hi)) {
        out.lower_bound_only = true;
        return done(s_max);
      }
      break;
    }
    if (probe(hi)) break;
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return done(hi);
}

WitnessReport extract_witness_operator(const SandwichResult& result, const HFunction& psi, const ConeSample& cone,
                                       double tol) {
  if (result.feasible || !result.certificate) {
    throw ContractError("extract_witness_operator: needs an infeasible result with a certificate");
  }
  const ProjAtomicMeasure& mu = result.certificate->mu;
  const ProjAtomicMeasure& nu = result.certificate->nu;
  const int n = mu.n();
  const double p = mu.p();
  if (mu.size() == 0) throw ContractError("extract_witness_operator: mu has no atoms");

  LpTuple f = tuple_from_measure(mu, "mu");
  LpTuple g = nu.size() > 0 ? tuple_from_measure(nu, "nu")
                            : LpTuple(MeasureSpace(), Eigen::MatrixXd::Zero(0, n), p);

  // Restrict to a maximal independent set of coordinate functions if needed.
  std::optional<std::string> note;
  const int rank = f.rank();
  if (rank < n) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f.weighted_values());
    qr.setThreshold(kIndependenceTolerance);
    std::vector<int> keep;
    for (int k = 0; k < rank; ++k) keep.push_back(static_cast<int>(qr.colsPermutation().indices()[k]));
    std::sort(keep.begin(), keep.end());
    Eigen::MatrixXd fv(f.values().rows(), rank), gv(g.values().rows(), rank);
    for (int k = 0; k < rank; ++k) {
      fv.col(k) = f.values().col(keep[static_cast<size_t>(k)]);
      gv.col(k) = g.values().col(keep[static_cast<size_t>(k)]);
    }
    std::ostringstream msg;
    msg << "mu spans a " << rank << "-dimensional subspace of R^" << n << "; operator restricted to coordinates";
    for (int k : keep) msg << ' ' << k;
    note = msg.str();
    f = LpTuple(f.space(), std::move(fv), p);
    g = LpTuple(g.space(), std::move(gv), p);
  }

  WitnessReport report{SpanOperator(std::move(f), std::move(g))};
  report.rank = rank;
  report.rank_note = std::move(note);
  report.degenerate = nu.size() == 0;

  // Both checks read mu and nu directly, so they also hold for the full
  // coordinate system when the operator had to be restricted.
  report.generator_margin = std::numeric_limits<double>::infinity();
  for (const auto& phi : cone.generators()) {
    report.generator_margin = std::min(report.generator_margin, pairing(mu, phi) - pairing(nu, phi));
  }
  report.in_sampled_polar = report.generator_margin >= -tol;
  const double num = pairing(nu, psi);
  const double den = pairing(mu, psi);
  report.psi_ratio = den > 0.0 ? std::pow(num / den, 1.0 / p) : std::numeric_limits<double>::infinity();
  report.threshold = std::pow(result.s, 1.0 / p);
  report.violates = !report.degenerate && report.psi_ratio > report.threshold;
  return report;
}

ConeSample hull_generators(const ConeSample& cone, int k) {
  if (k < 1) throw ContractError("hull_generators: k must be at least 1");
  const int base = cone.size();
  std::vector<HFunction> gens = cone.generators();
  std::vector<Eigen::VectorXd> columns;
  for (int j = 0; j < base; ++j) columns.push_back(cone.sampled().col(j));

  // Subsets in lexicographic order by size; each new sum extends a smaller one.
  std::vector<std::vector<int>> frontier;
  for (int j = 0; j < base; ++j) frontier.push_back({j});
  std::vector<HFunction> frontier_fn = cone.generators();
  std::vector<Eigen::VectorXd> frontier_col = columns;
  for (int size = 2; size <= std::min(k, base); ++size) {
    std::vector<std::vector<int>> next;
    std::vector<HFunction> next_fn;
    std::vector<Eigen::VectorXd> next_col;
    for (size_t s = 0; s < frontier.size(); ++s) {
      for (int j = frontier[s].back() + 1; j < base; ++j) {
        auto subset = frontier[s];
        subset.push_back(j);
        next.push_back(std::move(subset));
        next_fn.push_back(frontier_fn[s] + cone.generators()[static_cast<size_t>(j)]);
        next_col.push_back(frontier_col[s] + columns[static_cast<size_t>(j)]);
        if (static_cast<long>(gens.size() + next_fn.size()) > kMaxHullGenerators) {
          throw ResourceError("hull_generators: too many generators");
        }
      }
    }
    gens.insert(gens.end(), next_fn.begin(), next_fn.end());
    columns.insert(columns.end(), next_col.begin(), next_col.end());
    frontier = std::move(next);
    frontier_fn = std::move(next_fn);
    frontier_col = std::move(next_col);
  }
  Eigen::MatrixXd sampled(cone.grid().size(), static_cast<Eigen::Index>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j) sampled.col(static_cast<Eigen::Index>(j)) = columns[j];
  return ConeSample(std::move(gens), cone.grid(), std::move(sampled));
}

}  // namespace lpdual
