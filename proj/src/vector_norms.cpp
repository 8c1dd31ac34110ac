#include "lpdual/vector_norms.hpp"

#include "lpdual/errors.hpp"
#include "lpdual/projective.hpp"
#include "lpdual/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <thread>

namespace lpdual {

namespace {

constexpr double kDenominatorFloor = 1e-14;
constexpr double kNumeratorFloor = 1e-10;
constexpr double kFiniteDifferenceStep = 1e-7;

// mu_f and mu_Tf flattened for fast evaluation of <mu, phi_x> = sum m ||X z||^p.
class RatioProblem {
 public:
  RatioProblem(const SpanOperator& op, const NormOracle& space)
      : space_(space), n_(op.n()), d_(space.dim()), p_(op.p()) {
    flatten(mu_of_tuple(op.domain()), zf_, mf_);
    flatten(mu_of_tuple(op.codomain()), zg_, mg_);
  }

  int dimension() const { return n_ * d_; }
  int d() const { return d_; }
  double p() const { return p_; }

  struct Value {
    double num;
    double den;
  };

  // y stacks x_1, ..., x_n (each of length d).
  Value evaluate(const Eigen::VectorXd& y) const {
    const Eigen::Map<const Eigen::MatrixXd> x(y.data(), d_, n_);
    return {pair(zg_, mg_, x), pair(zf_, mf_, x)};
  }

  // Ratio in p-th powers; -inf for points to skip, +inf for blow-ups.
  double ratio(const Eigen::VectorXd& y) const {
    const Value v = evaluate(y);
    if (v.den < kDenominatorFloor) {
      return v.num > kNumeratorFloor ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
    }
    return v.num / v.den;
  }

  std::vector<Eigen::VectorXd> unstack(const Eigen::VectorXd& y) const {
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < n_; ++i) out.emplace_back(y.segment(i * d_, d_));
    return out;
  }

 private:
  static void flatten(const ProjAtomicMeasure& mu, Eigen::MatrixXd& z, Eigen::VectorXd& m) {
    z.resize(mu.size(), mu.n());
    m.resize(mu.size());
    for (int a = 0; a < mu.size(); ++a) {
      z.row(a) = mu.atoms()[static_cast<size_t>(a)].point.rep().transpose();
      m[a] = mu.atoms()[static_cast<size_t>(a)].mass;
    }
  }

  double pair(const Eigen::MatrixXd& z, const Eigen::VectorXd& m, const Eigen::Map<const Eigen::MatrixXd>& x) const {
    double total = 0.0;
    Eigen::VectorXd image(d_);
    for (Eigen::Index a = 0; a < z.rows(); ++a) {
      image.noalias() = x * z.row(a).transpose();
      total += m[a] * std::pow(space_.norm(image), p_);
    }
    return total;
  }

  NormOracle space_;
  int n_;
  int d_;
  double p_;
  Eigen::MatrixXd zf_, zg_;
  Eigen::VectorXd mf_, mg_;
};

struct AscentResult {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd y;
};

// Normalized finite-difference gradient ascent on the l2 sphere with an
// adaptive step: doubled after success, halved until improvement.
AscentResult ascend(const RatioProblem& prob, Eigen::VectorXd y, int max_iterations) {
  y.normalize();
  double value = prob.ratio(y);
  if (!std::isfinite(value)) return {value, y};
  const int dim = prob.dimension();
  double step = 0.1;
  Eigen::VectorXd grad(dim), probe(dim);
  for (int it = 0; it < max_iterations; ++it) {
    for (int k = 0; k < dim; ++k) {
      probe = y;
      probe[k] += kFiniteDifferenceStep;
      const double up = prob.ratio(probe);
      probe[k] = y[k] - kFiniteDifferenceStep;
      const double down = prob.ratio(probe);
      grad[k] = (std::isfinite(up) && std::isfinite(down)) ? (up - down) / (2.0 * kFiniteDifferenceStep) : 0.0;
    }
    grad -= grad.dot(y) * y;
    const double gnorm = grad.norm();
    if (!(gnorm > 1e-14)) break;
    grad /= gnorm;
    bool improved = false;
    while (step > 1e-15) {
      Eigen::VectorXd candidate = (y + step * grad).normalized();
      const double v = prob.ratio(candidate);
      if (v > value) {
        if (std::isinf(v)) return {v, candidate};
        y = std::move(candidate);
        value = v;
        step = std::min(2.0 * step, 1.0);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return {value, y};
}

int worker_count(int requested, int jobs) {
  int hw = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(hw, 1, std::max(1, jobs));
}

// Runs ascent from every start in parallel; the best value wins, ties go to
// the lowest start index.
AscentResult best_ascent(const RatioProblem& prob, const std::vector<Eigen::VectorXd>& starts, int max_iterations,
                         int threads) {
  std::vector<AscentResult> results(starts.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < starts.size(); i = next++) results[i] = ascend(prob, starts[i], max_iterations);
  };
  {
    std::vector<std::jthread> pool;
    const int count = worker_count(threads, static_cast<int>(starts.size()));
    for (int t = 1; t < count; ++t) pool.emplace_back(work);
    work();
  }
  AscentResult best;
  for (auto& r : results) {
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

Eigen::VectorXd stack(const std::vector<Eigen::VectorXd>& x, int n, int d) {
  if (static_cast<int>(x.size()) != n) throw DimensionError("vector_opnorm: warm start has the wrong number of vectors");
  Eigen::VectorXd y(n * d);
  for (int i = 0; i < n; ++i) {
    if (x[static_cast<size_t>(i)].size() != d) throw DimensionError("vector_opnorm: warm start vector has wrong dimension");
    y.segment(i * d, d) = x[static_cast<size_t>(i)];
  }
  return y;
}

OpNormResult finish(const SpanOperator& op, const NormOracle& space, const RatioProblem& prob, const AscentResult& best,
                    OpNormMethod method) {
  OpNormResult out;
  out.method = method;
  if (best.y.size() == 0 || best.value == -std::numeric_limits<double>::infinity()) {
    // Every probed x killed both sides: T vanishes on the searched region.
    out.lower = 0.0;
    out.witness = prob.unstack(Eigen::VectorXd::Zero(prob.dimension()));
    return out;
  }
  out.witness = prob.unstack(best.y);
  if (std::isinf(best.value)) {
    out.unbounded = true;
    out.lower = std::numeric_limits<double>::infinity();
    return out;
  }
  out.lower = pairing_ratio(op, space, out.witness);
  return out;
}

OpNormResult grid_opnorm(const SpanOperator& op, const NormOracle& space, const RatioProblem& prob,
                         const OpNormParams& params) {
  const int dim = prob.dimension();
  if (dim > kMaxGridDimension) throw ResourceError("vector_opnorm: grid method needs n * dim(X) <= 4");
  const int divisions = params.grid_divisions;
  if (divisions < 1) throw ContractError("vector_opnorm: grid_divisions must be positive");
  const double p = prob.p();

  // Surface of [-1,1]^dim modulo y -> -y: faces y_c = +1 with the other
  // coordinates on the lattice -1 + 2j/K.
  const int free = dim - 1;
  long cells = 1;
  for (int k = 0; k < free; ++k) cells *= divisions + 1;

  double best_ratio = -std::numeric_limits<double>::infinity();
  double min_seminorm = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_y;
  using Scored = std::pair<double, long>;  // (ratio, point index)
  std::priority_queue<Scored, std::vector<Scored>, std::greater<>> top;
  Eigen::VectorXd y(dim);
  auto decode = [&](long index) {
    const int face = static_cast<int>(index / cells);
    long rest = index % cells;
    for (int c = 0; c < dim; ++c) {
      if (c == face) {
        y[c] = 1.0;
        continue;
      }
      const long j = rest % (divisions + 1);
      rest /= divisions + 1;
      y[c] = -1.0 + 2.0 * static_cast<double>(j) / divisions;
    }
  };
  const long total = cells * dim;
  for (long index = 0; index < total; ++index) {
    decode(index);
    const auto v = prob.evaluate(y);
    min_seminorm = std::min(min_seminorm, std::pow(std::max(v.den, 0.0), 1.0 / p));
    if (v.den < kDenominatorFloor) {
      if (v.num > kNumeratorFloor) {
        OpNormResult out;
        out.method = OpNormMethod::Grid;
        out.unbounded = true;
        out.lower = std::numeric_limits<double>::infinity();
        out.upper = std::numeric_limits<double>::infinity();
        out.witness = prob.unstack(y);
        return out;
      }
      continue;
    }
    const double r = v.num / v.den;
    if (r > best_ratio) {
      best_ratio = r;
      best_y = y;
    }
    top.emplace(r, index);
    if (static_cast<int>(top.size()) > std::max(params.polish_starts, 0)) top.pop();
  }

  AscentResult best{best_ratio, best_y};
  std::vector<Eigen::VectorXd> seeds;
  while (!top.empty()) {
    decode(top.top().second);
    seeds.push_back(y);
    top.pop();
  }
  if (!seeds.empty()) {
    std::reverse(seeds.begin(), seeds.end());
    AscentResult polished = best_ascent(prob, seeds, params.max_iterations, params.threads);
    if (polished.value > best.value) best = std::move(polished);
  }
  OpNormResult out = finish(op, space, prob, best, OpNormMethod::Grid);
  if (out.unbounded) {
    out.upper = std::numeric_limits<double>::infinity();
    return out;
  }

  // For y on the surface and its nearest lattice point x (|y - x|_inf <= 1/K):
  // G(y) <= G(x) + L_G d <= r F(x) + L_G d <= r (F(y) + L_F d) + L_G d, where F, G
  // are the L_p(X) seminorms of sum f_i x_i and sum Tf_i x_i and L_F = sum_c F(e_c).
  double lip_f = 0.0, lip_g = 0.0;
  for (int c = 0; c < dim; ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, c);
    const auto v = prob.evaluate(e);
    lip_f += std::pow(v.den, 1.0 / p);
    lip_g += std::pow(v.num, 1.0 / p);
  }
  const double delta = 1.0 / divisions;
  const double r_grid = std::pow(std::max(best_ratio, 0.0), 1.0 / p);
  const double floor = min_seminorm - lip_f * delta;
  double upper = std::numeric_limits<double>::infinity();
  if (floor > 0.0) upper = r_grid + (r_grid * lip_f + lip_g) * delta / floor;
  out.upper = std::max(upper, out.lower);
  return out;
}

OpNormResult multistart_opnorm(const SpanOperator& op, const NormOracle& space, const RatioProblem& prob,
                               const OpNormParams& params) {
  const int dim = prob.dimension();
  std::vector<Eigen::VectorXd> starts;
  for (const auto& w : params.warm_starts) {
    Eigen::VectorXd y = stack(w, op.n(), prob.d());
    if (y.norm() > 0.0) starts.push_back(std::move(y));
  }
  for (int s = 0; s < params.starts; ++s) {
    CounterRng rng(params.seed, static_cast<std::uint64_t>(s));
    std::normal_distribution<double> normal;
    Eigen::VectorXd y(dim);
    do {
      for (int k = 0; k < dim; ++k) y[k] = normal(rng);
    } while (y.norm() == 0.0);
    starts.push_back(std::move(y));
  }
  if (starts.empty()) throw ContractError("vector_opnorm: no starting points");
  const AscentResult best = best_ascent(prob, starts, params.max_iterations, params.threads);
  return finish(op, space, prob, best, OpNormMethod::Multistart);
}

Eigen::MatrixXd rademacher_matrix(int n) {
  const int atoms = 1 << n;
  Eigen::MatrixXd eps(atoms, n);
  for (int w = 0; w < atoms; ++w) {
    for (int i = 0; i < n; ++i) eps(w, i) = ((w >> i) & 1) ? -1.0 : 1.0;
  }
  return eps;
}

MeasureSpace cube_space(int n) {
  const int atoms = 1 << n;
  std::vector<Atom> out;
  out.reserve(static_cast<size_t>(atoms));
  for (int w = 0; w < atoms; ++w) {
    std::string id(static_cast<size_t>(n), '+');
    for (int i = 0; i < n; ++i) {
      if ((w >> i) & 1) id[static_cast<size_t>(i)] = '-';
    }
    out.push_back({std::move(id), 1.0 / atoms});
  }
  return MeasureSpace(std::move(out));
}

void require_cube_dimension(int n, const char* who) {
  if (n < 1) throw ContractError(std::string(who) + ": n must be positive");
  if (n > kMaxCubeDimension) throw ResourceError(std::string(who) + ": n exceeds the cube dimension limit");
}

}  // namespace

std::string to_string(OpNormMethod method) {
  switch (method) {
    case OpNormMethod::Grid:
      return "grid";
    case OpNormMethod::Multistart:
      return "multistart";
    case OpNormMethod::Auto:
      return "auto";
  }
  return "auto";
}

OpNormMethod parse_method(const std::string& name) {
  if (name == "grid") return OpNormMethod::Grid;
  if (name == "multistart") return OpNormMethod::Multistart;
  if (name == "auto") return OpNormMethod::Auto;
  throw ContractError("unknown opnorm method '" + name + "'");
}

double pairing_ratio(const SpanOperator& op, const NormOracle& space, const std::vector<Eigen::VectorXd>& x) {
  const HFunction phi = phi_from_tuple(space, x, op.p());
  const double num = pairing(mu_of_tuple(op.codomain()), phi);
  const double den = pairing(mu_of_tuple(op.domain()), phi);
  if (den < kDenominatorFloor) {
    if (num > kNumeratorFloor) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return std::pow(num / den, 1.0 / op.p());
}

OpNormResult vector_opnorm(const SpanOperator& op, const NormOracle& space, OpNormMethod method,
                           const OpNormParams& params) {
  if (space.dim() < 1) throw DimensionError("vector_opnorm: space dimension must be positive");
  const RatioProblem prob(op, space);
  if (method == OpNormMethod::Auto) {
    method = prob.dimension() <= kMaxGridDimension ? OpNormMethod::Grid : OpNormMethod::Multistart;
  }
  if (method == OpNormMethod::Grid) return grid_opnorm(op, space, prob, params);
  return multistart_opnorm(op, space, prob, params);
}

SpanOperator parallelogram_operator() {
  const MeasureSpace space({{"0", 1.0}, {"1", 1.0}});
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd images(2, 2);
  // Columns are T e_1 = (1, -1)/sqrt2 and T e_2 = (1, 1)/sqrt2.
  images << r, r, -r, r;
  return SpanOperator(LpTuple(space, Eigen::MatrixXd::Identity(2, 2), 2.0), LpTuple(space, images, 2.0));
}

SpanOperator type_operator(int n, double p, double type_constant) {
  require_cube_dimension(n, "type_operator");
  if (!(type_constant > 0.0)) throw ContractError("type_operator: constant must be positive");
  // e_i -> eps_i / Tp, so that ||T_X|| <= 1 is exactly the type inequality.
  LpTuple source(MeasureSpace::uniform(n), Eigen::MatrixXd::Identity(n, n), p);
  LpTuple rademacher(cube_space(n), rademacher_matrix(n) / type_constant, p);
  return SpanOperator(std::move(source), std::move(rademacher));
}

SpanOperator cotype_operator(int n, double p, double cotype_constant) {
  require_cube_dimension(n, "cotype_operator");
  if (!(cotype_constant > 0.0)) throw ContractError("cotype_operator: constant must be positive");
  // eps_i -> e_i / Cp, so that ||T_X|| <= 1 is exactly the cotype inequality.
  LpTuple rademacher(cube_space(n), rademacher_matrix(n), p);
  LpTuple target(MeasureSpace::uniform(n), Eigen::MatrixXd::Identity(n, n) / cotype_constant, p);
  return SpanOperator(std::move(rademacher), std::move(target));
}

SpanOperator kconvexity_projection(int n) {
  require_cube_dimension(n, "kconvexity_projection");
  const int atoms = 1 << n;
  const Eigen::MatrixXd eps = rademacher_matrix(n);
  // Column S is the Walsh character prod_{i in S} eps_i.
  Eigen::MatrixXd walsh = Eigen::MatrixXd::Ones(atoms, atoms);
  for (int s = 0; s < atoms; ++s) {
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1) walsh.col(s).array() *= eps.col(i).array();
    }
  }
  Eigen::MatrixXd images = Eigen::MatrixXd::Zero(atoms, atoms);
  for (int i = 0; i < n; ++i) images.col(1 << i) = walsh.col(1 << i);
  const MeasureSpace space = cube_space(n);
  return SpanOperator(LpTuple(space, std::move(walsh), 2.0), LpTuple(space, std::move(images), 2.0),
                      SpanOperator::TrustedBasis{});
}

Graph::Graph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges, bool symmetrize)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const int count = static_cast<int>(vertices_.size());
  if (count < 1) throw ContractError("Graph: no vertices");
  if (std::set<std::string>(vertices_.begin(), vertices_.end()).size() != vertices_.size()) {
    throw ContractError("Graph: duplicate vertex names");
  }
  std::multiset<std::pair<int, int>> present;
  for (const auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= count || v >= count) throw ContractError("Graph: edge endpoint out of range");
    if (u == v) throw ContractError("Graph: self-loops are not supported");
    present.insert({u, v});
  }
  // Each orientation must be matched by a reverse one, with multiplicity.
  std::vector<std::pair<int, int>> missing;
  for (const auto& [u, v] : edges_) {
    auto it = present.find({v, u});
    if (it != present.end()) {
      present.erase(it);
    } else {
      missing.push_back({v, u});
    }
  }
  if (!missing.empty()) {
    if (!symmetrize) throw ContractError("Graph: edge list is not closed under orientation swap");
    edges_.insert(edges_.end(), missing.begin(), missing.end());
  }
  degrees_.assign(static_cast<size_t>(count), 0);
  for (const auto& e : edges_) ++degrees_[static_cast<size_t>(e.first)];
}

Graph Graph::cycle(int n) {
  if (n < 3) throw ContractError("Graph::cycle: need at least 3 vertices");
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    edges.push_back({i, (i + 1) % n});
  }
  return Graph(std::move(names), std::move(edges), true);
}

Graph Graph::complete(int n) {
  if (n < 2) throw ContractError("Graph::complete: need at least 2 vertices");
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  return Graph(std::move(names), std::move(edges));
}

Graph Graph::petersen() {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 10; ++i) names.push_back(std::to_string(i));
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5});
    edges.push_back({5 + i, 5 + (i + 2) % 5});
    edges.push_back({i, 5 + i});
  }
  return Graph(std::move(names), std::move(edges), true);
}

bool Graph::connected() const {
  const size_t count = vertices_.size();
  std::vector<std::vector<int>> adj(count);
  for (const auto& [u, v] : edges_) adj[static_cast<size_t>(u)].push_back(v);
  std::vector<bool> seen(count, false);
  std::vector<int> stack{0};
  seen[0] = true;
  size_t reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<size_t>(u)]) {
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == count;
}

SpanOperator poincare_operator(const Graph& graph, double p) {
  if (!graph.connected()) throw ContractError("poincare: graph is disconnected");
  const int count = graph.size();
  if (count < 2) throw ContractError("poincare: need at least 2 vertices");
  const int n = count - 1;
  // Mean-zero basis g_j = e_{v_j} - (deg v_j / deg v_0) e_{v_0}, j = 1..|V|-1.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(count, n);
  for (int j = 1; j < count; ++j) {
    g(j, j - 1) = 1.0;
    g(0, j - 1) = -static_cast<double>(graph.degree(j)) / graph.degree(0);
  }
  std::vector<Atom> vertex_atoms;
  for (int v = 0; v < count; ++v) {
    vertex_atoms.push_back({graph.vertices()[static_cast<size_t>(v)], static_cast<double>(graph.degree(v))});
  }
  const auto& edges = graph.edges();
  Eigen::MatrixXd diff(static_cast<Eigen::Index>(edges.size()), n);
  std::vector<Atom> edge_atoms;
  for (size_t e = 0; e < edges.size(); ++e) {
    diff.row(static_cast<Eigen::Index>(e)) = g.row(edges[e].first) - g.row(edges[e].second);
    edge_atoms.push_back({"e" + std::to_string(e), 1.0});
  }
  return SpanOperator(LpTuple(MeasureSpace(std::move(edge_atoms)), std::move(diff), p),
                      LpTuple(MeasureSpace(std::move(vertex_atoms)), std::move(g), p));
}

OpNormResult poincare_constant(const Graph& graph, double p, const NormOracle& space, OpNormMethod method,
                               const OpNormParams& params) {
  return vector_opnorm(poincare_operator(graph, p), space, method, params);
}

double spectral_check(const Graph& graph) {
  const int count = graph.size();
  if (count < 2) throw ContractError("spectral_check: need at least 2 vertices");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(count, count);
  for (const auto& [u, v] : graph.edges()) a(u, v) += 1.0;
  // D^-1/2 A D^-1/2 is symmetric and similar to D^-1 A.
  Eigen::VectorXd scale(count);
  for (int v = 0; v < count; ++v) {
    if (graph.degree(v) == 0) return std::numeric_limits<double>::infinity();
    scale[v] = 1.0 / std::sqrt(static_cast<double>(graph.degree(v)));
  }
  const Eigen::MatrixXd sym = scale.asDiagonal() * a * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const double lambda2 = eig.eigenvalues()[count - 2];
  const double gap = 2.0 - 2.0 * lambda2;
  if (gap <= 1e-12) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(gap);
}

double regular_norm_estimate(const SpanOperator& op, int k, const OpNormParams& params) {
  if (k < 1) throw ContractError("regular_norm_estimate: k must be at least 1");
  double best = 0.0;
  std::vector<Eigen::VectorXd> previous;
  for (int level = 1; level <= k; ++level) {
    OpNormParams local = params;
    if (!previous.empty()) {
      std::vector<Eigen::VectorXd> padded;
      for (const auto& x : previous) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(level);
        y.head(x.size()) = x;
        padded.push_back(std::move(y));
      }
      local.warm_starts.push_back(std::move(padded));
    }
    const OpNormResult r = vector_opnorm(op, NormOracle::linf(level), OpNormMethod::Auto, local);
    if (r.unbounded) return std::numeric_limits<double>::infinity();
    // l_inf^(k-1) embeds isometrically in l_inf^k, so the running max is a valid bound.
    best = std::max(best, r.lower);
    previous = r.witness;
  }
  return best;
}

}  // namespace lpdual
