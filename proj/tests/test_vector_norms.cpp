#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpdual/errors.hpp"
#include "lpdual/vector_norms.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace lpdual;
using testsupport::CounterRng;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

OpNormParams quick(std::uint64_t seed = 7) {
  OpNormParams params;
  params.seed = seed;
  params.starts = 24;
  params.max_iterations = 300;
  return params;
}

// Closed-form (2 - 2 lambda_2)^(-1/2) from the random-walk eigenvalue.
double from_lambda(double lambda2) { return 1.0 / std::sqrt(2.0 - 2.0 * lambda2); }

}  // namespace

TEST_CASE("method names") {
  for (OpNormMethod m : {OpNormMethod::Grid, OpNormMethod::Multistart, OpNormMethod::Auto}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("simplex"), ContractError);
}

TEST_CASE("identity has norm one") {
  CounterRng rng(41);
  const LpTuple f = testsupport::random_tuple(rng, 3, 2, 3.0);
  const OpNormResult r = vector_opnorm(SpanOperator(f, f), NormOracle::euclidean(2));
  CHECK(r.method == OpNormMethod::Grid);
  CHECK(r.lower == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(r.upper.has_value());
  CHECK(*r.upper >= 1.0);
}

TEST_CASE("parallelogram operator") {
  const SpanOperator t = parallelogram_operator();
  const OpNormResult hilbert = vector_opnorm(t, NormOracle::euclidean(2));
  CHECK(hilbert.lower == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(hilbert.upper.has_value());
  CHECK(*hilbert.upper >= 1.0);

  const OpNormResult l1 = vector_opnorm(t, NormOracle::l1(2));
  CHECK(l1.lower == doctest::Approx(kSqrt2).epsilon(1e-6));
  CHECK(*l1.upper >= kSqrt2);

  const OpNormResult linf = vector_opnorm(t, NormOracle::linf(2));
  CHECK(linf.lower == doctest::Approx(kSqrt2).epsilon(1e-6));

  const OpNormResult hilbert3 = vector_opnorm(t, NormOracle::euclidean(3), OpNormMethod::Multistart, quick());
  CHECK(hilbert3.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(hilbert3.upper.has_value());
}

TEST_CASE("grid method refuses large dimensions") {
  CHECK_THROWS_AS(vector_opnorm(parallelogram_operator(), NormOracle::euclidean(3), OpNormMethod::Grid),
                  ResourceError);
}

TEST_CASE("type and cotype operators") {
  const SpanOperator type = type_operator(2, 2.0, 1.0);
  CHECK(vector_opnorm(type, NormOracle::scalar()).lower == doctest::Approx(1.0).epsilon(1e-9));

  const std::vector<Eigen::VectorXd> witness{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  CHECK(pairing_ratio(type, NormOracle::l1(2), witness) >= kSqrt2 * (1.0 - 1e-3));

  // type o cotype acts on the Rademacher span as 1/(Tp Cp).
  const SpanOperator chain = compose_operators(type_operator(3, 2.0, 2.0), cotype_operator(3, 2.0, 4.0));
  CHECK((chain.codomain().values() - chain.domain().values() / 8.0).norm() <= 1e-12);

  CHECK_THROWS_AS(type_operator(kMaxCubeDimension + 1, 2.0, 1.0), ResourceError);
  CHECK_THROWS_AS(cotype_operator(2, 2.0, 0.0), ContractError);
}

TEST_CASE("K-convexity projection") {
  const SpanOperator k = kconvexity_projection(2);
  CHECK(k.n() == 4);
  CHECK(vector_opnorm(k, NormOracle::scalar()).lower == doctest::Approx(1.0).epsilon(1e-9));

  const SpanOperator kk = compose_operators(k, k);
  CHECK((kk.codomain().values() - k.codomain().values()).norm() <= 1e-12);

  // With two coordinates the projection keeps the odd part (f - f(-.))/2,
  // a contraction for every X.
  CHECK(vector_opnorm(k, NormOracle::l1(2), OpNormMethod::Multistart, quick()).lower <= 1.0 + 1e-9);

  const OpNormResult l1 = vector_opnorm(kconvexity_projection(3), NormOracle::l1(2), OpNormMethod::Multistart, quick());
  CHECK(l1.lower > 1.1);
}

TEST_CASE("Poincare constants of classical graphs") {
  struct Case {
    Graph graph;
    double expected;
  };
  const std::vector<Case> cases{
      {Graph::cycle(4), from_lambda(std::cos(2.0 * std::numbers::pi / 4))},
      {Graph::cycle(5), from_lambda(std::cos(2.0 * std::numbers::pi / 5))},
      {Graph::cycle(6), from_lambda(std::cos(2.0 * std::numbers::pi / 6))},
      {Graph::complete(4), from_lambda(-1.0 / 3.0)},
      {Graph::complete(5), from_lambda(-1.0 / 4.0)},
      {Graph::petersen(), from_lambda(1.0 / 3.0)},
  };
  for (const auto& c : cases) {
    CHECK(spectral_check(c.graph) == doctest::Approx(c.expected).epsilon(1e-12));
    const OpNormResult r = poincare_constant(c.graph, 2.0, NormOracle::scalar(), OpNormMethod::Multistart, quick());
    CHECK(std::abs(r.lower - c.expected) <= 1e-6);
  }
}

TEST_CASE("graph contracts") {
  const Graph split({"a", "b", "c", "d"}, {{0, 1}, {2, 3}}, true);
  CHECK_FALSE(split.connected());
  CHECK_THROWS_AS(poincare_operator(split, 2.0), ContractError);
  CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 1}}, false), ContractError);
  CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 0}}, true), ContractError);
  CHECK_THROWS_AS(Graph({"a", "a"}, {{0, 1}}, true), ContractError);
  CHECK_THROWS_AS(Graph({"a", "b"}, {{0, 2}}, true), ContractError);
  const Graph c = Graph::cycle(5);
  CHECK(c.edges().size() == 10);
  for (int v = 0; v < c.size(); ++v) CHECK(c.degree(v) == 2);
  CHECK(Graph::petersen().size() == 10);
  CHECK(Graph::petersen().edges().size() == 30);
}

TEST_CASE("the reported lower bound is attained at the witness") {
  CounterRng rng(42);
  for (int trial = 0; trial < 16; ++trial) {
    const int d = testsupport::uniform_int(rng, 1, 3);
    const SpanOperator op = testsupport::random_operator(rng, 2, 3, 3, testsupport::uniform(rng, 1.0, 3.0));
    const NormOracle x = testsupport::random_oracle(rng, trial, d);
    const OpNormResult r = vector_opnorm(op, x, OpNormMethod::Auto, quick(static_cast<std::uint64_t>(trial)));
    REQUIRE(r.witness.size() == 2);
    CHECK(std::abs(r.lower - testsupport::direct_ratio(op, x, r.witness)) <= 1e-9 * r.lower);
    if (r.upper) CHECK(r.lower <= *r.upper);
  }
}

TEST_CASE("the zero tuple contributes ratio zero") {
  // For a basis the denominator vanishes only at x = 0, where num vanishes too.
  const std::vector<Eigen::VectorXd> zero{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  CHECK(pairing_ratio(parallelogram_operator(), NormOracle::scalar(), zero) == 0.0);
}

TEST_CASE("regular norm estimates are nondecreasing in k") {
  CounterRng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const SpanOperator op = testsupport::random_operator(rng, 2, 3, 3, 2.0);
    OpNormParams params = quick(static_cast<std::uint64_t>(trial));
    params.grid_divisions = 12;
    const double r1 = regular_norm_estimate(op, 1, params);
    const double r2 = regular_norm_estimate(op, 2, params);
    const double r3 = regular_norm_estimate(op, 3, params);
    CHECK(r1 <= r2);
    CHECK(r2 <= r3);
  }
  CHECK_THROWS_AS(regular_norm_estimate(parallelogram_operator(), 0), ContractError);
}

TEST_CASE("composition is submultiplicative") {
  CounterRng rng(44);
  for (int trial = 0; trial < 8; ++trial) {
    const SpanOperator outer = testsupport::random_operator(rng, 2, 3, 3, 2.0);
    // inner maps into dom(outer): its images are combinations of outer's basis.
    const Eigen::MatrixXd mix = testsupport::random_matrix(rng, 2, 2);
    const SpanOperator inner(testsupport::random_tuple(rng, 3, 2, 2.0, "s"),
                             LpTuple(outer.domain().space(), outer.domain().values() * mix, 2.0));
    const SpanOperator both = compose_operators(outer, inner);
    const NormOracle x = testsupport::random_oracle(rng, trial, 2);
    const OpNormResult a = vector_opnorm(both, x);
    const OpNormResult b = vector_opnorm(outer, x);
    const OpNormResult c = vector_opnorm(inner, x);
    CHECK(a.lower <= *b.upper * *c.upper);
  }
}

TEST_CASE("block sums take the larger norm") {
  CounterRng rng(45);
  for (int trial = 0; trial < 8; ++trial) {
    const SpanOperator s = testsupport::random_operator(rng, 1, 2, 2, 2.0);
    const SpanOperator t = testsupport::random_operator(rng, 1, 2, 2, 2.0);
    const NormOracle x = testsupport::random_oracle(rng, trial, 2);
    const OpNormResult rs = vector_opnorm(s, x);
    const OpNormResult rt = vector_opnorm(t, x);
    const OpNormResult rb = vector_opnorm(block_sum({s, t}), x);
    CHECK(rb.lower <= std::max(*rs.upper, *rt.upper));
    CHECK(*rb.upper >= std::max(rs.lower, rt.lower));
    CHECK(rb.lower >= std::max(rs.lower, rt.lower) * (1.0 - 1e-6));
  }
}
