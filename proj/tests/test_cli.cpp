#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpdual/cli.hpp"
#include "lpdual/errors.hpp"
#include "lpdual/serialization.hpp"
#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace lpdual;
using testsupport::CounterRng;
namespace fs = std::filesystem;

namespace {

template <class T, class From>
void check_round_trip(const T& value, From from) {
  const json j = to_json(value);
  CHECK(to_json(from(j)).dump() == j.dump());
  // Through text as well, since files are what the CLI reads.
  CHECK(to_json(from(json::parse(j.dump(2)))).dump() == j.dump());
}

struct Workspace {
  fs::path dir;
  Workspace() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("lpdual_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string write(const std::string& name, const json& j) const {
    const fs::path path = dir / name;
    std::ofstream(path) << j.dump(2);
    return path.string();
  }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json linf_psi() {
  return to_json(TupleGenerator{NormOracle::linf(2), {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}});
}

json line_cone() {
  ConeSpec spec;
  spec.generators.push_back({std::nullopt, 36});
  spec.grid_points = 72;
  return to_json(spec);
}

}  // namespace

TEST_CASE("numbers keep non-finite values") {
  CHECK(number_to_json(INFINITY) == "inf");
  CHECK(number_to_json(-INFINITY) == "-inf");
  CHECK(number_to_json(NAN) == "nan");
  CHECK(std::isinf(number_from_json("inf")));
  CHECK(std::isnan(number_from_json("nan")));
  CHECK(number_from_json(json(0.25)) == 0.25);
  CHECK_THROWS(number_from_json("many"));
  CHECK(matrix_from_json(json::array(), 3).cols() == 3);
}

TEST_CASE("schema round trips are byte identical") {
  CounterRng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = testsupport::uniform(rng, 1.0, 4.0);
    const LpTuple f = testsupport::random_tuple(rng, 4, 2, p);
    check_round_trip(f.space(), measure_space_from_json);
    check_round_trip(f, lp_tuple_from_json);
    check_round_trip(testsupport::random_operator(rng, 2, 3, 4, p), span_operator_from_json);
    check_round_trip(mu_of_tuple(f), proj_measure_from_json);
    const NormOracle x = testsupport::random_oracle(rng, trial, 3);
    check_round_trip(x, norm_oracle_from_json);
    check_round_trip(TupleGenerator{x, testsupport::random_vectors(rng, 2, 3)}, tuple_generator_from_json);
  }
  check_round_trip(NormOracle::linf(3), norm_oracle_from_json);
  check_round_trip(Graph::petersen(), graph_from_json);

  ConeSpec spec;
  spec.p = 3.0;
  spec.generators.push_back({std::nullopt, 8});
  spec.generators.push_back({TupleGenerator{NormOracle::l1(2), {Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 1)}}, 0});
  spec.grid_points = 40;
  check_round_trip(spec, cone_spec_from_json);
  CHECK(spec.build().size() == 9);
}

TEST_CASE("graphs accept names or indices") {
  const json by_index = {{"vertices", {0, 1, 2}}, {"edges", {{0, 1}, {1, 2}, {2, 0}}}, {"symmetrize", true}};
  const Graph g = graph_from_json(by_index);
  CHECK(g.edges().size() == 6);
  const json unknown = json::parse(R"({"vertices": ["a", "b"], "edges": [["a", "z"]]})");
  CHECK_THROWS_WITH_AS(graph_from_json(unknown), doctest::Contains("unknown vertex"), ContractError);
}

TEST_CASE("sha256") {
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("mu command") {
  const Workspace ws;
  const LpTuple f(MeasureSpace({{"a", 1}, {"b", 1}}), Eigen::Matrix2d::Identity(), 2.0);
  const std::string path = ws.write("f.json", to_json(f));
  const Outcome r = invoke({"mu", "--tuple", path});
  REQUIRE(r.code == cli::kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc["command"] == "mu");
  CHECK(doc["result"]["total_variation"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["result"]["norm_power_sum"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["inputs"]["tuple"] == cli::sha256_hex(to_json(f).dump(2)));
  CHECK(proj_measure_from_json(doc["result"]["measure"]).size() == 2);
}

TEST_CASE("isometry-check command") {
  const Workspace ws;
  const LpTuple f(MeasureSpace({{"a", 1}, {"b", 2}}), Eigen::Matrix2d::Identity(), 2.0);
  const LpTuple g = change_of_density(f, Eigen::Vector2d(2.0, -0.5));
  const std::string fp = ws.write("f.json", to_json(f));
  const std::string gp = ws.write("g.json", to_json(g));
  const json yes = json::parse(invoke({"isometry-check", "--f", fp, "--g", gp}).out);
  CHECK(yes["result"]["equal"] == true);
  const LpTuple h(f.space(), 1.5 * f.values(), 2.0);
  const json no = json::parse(invoke({"isometry-check", "--f", fp, "--g", ws.write("h.json", to_json(h))}).out);
  CHECK(no["result"]["equal"] == false);
}

TEST_CASE("poincare command") {
  const Workspace ws;
  const std::string path = ws.write("k4.json", to_json(Graph::complete(4)));
  const Outcome r = invoke({"--seed", "3", "poincare", "--graph", path, "--starts", "16"});
  REQUIRE(r.code == cli::kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc["result"]["constant"].get<double>() == doctest::Approx(0.612372).epsilon(1e-6));
  CHECK(doc["result"]["spectral"].get<double>() == doctest::Approx(std::sqrt(3.0 / 8.0)));
  CHECK(doc["config"]["seed"] == 3);
}

TEST_CASE("opnorm and polar-check commands") {
  const Workspace ws;
  const std::string op = ws.write("par.json", to_json(parallelogram_operator()));
  const std::string l1 = ws.write("l1.json", to_json(NormOracle::l1(2)));
  const std::string l2 = ws.write("l2.json", to_json(NormOracle::euclidean(2)));
  const json norm = json::parse(invoke({"opnorm", "--operator", op, "--space", l1}).out);
  CHECK(norm["result"]["lower"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(norm["result"]["method"] == "grid");
  const json polar = json::parse(invoke({"polar-check", "--operator", op, "--space", l2, "--space", l1}).out);
  CHECK(polar["result"]["in_polar"] == false);
}

TEST_CASE("bm-distance and witness commands") {
  const Workspace ws;
  const std::string psi = ws.write("psi.json", linf_psi());
  const std::string cone = ws.write("cone.json", line_cone());
  const Outcome bm = invoke({"--tol", "1e-4", "bm-distance", "--psi", psi, "--cone", cone});
  REQUIRE(bm.code == cli::kExitOk);
  const json doc = json::parse(bm.out);
  CHECK(doc["result"]["distance"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  const Outcome csv = invoke({"--format", "csv", "bm-distance", "--psi", psi, "--cone", cone});
  REQUIRE(csv.code == cli::kExitOk);
  CHECK(csv.out.rfind("# ", 0) == 0);
  CHECK(csv.out.find("step,s,feasible") != std::string::npos);

  const json w = json::parse(invoke({"witness", "--psi", psi, "--cone", cone, "--s", "1.8"}).out);
  CHECK(w["result"]["report"]["violates"] == true);
  CHECK(w["result"]["report"]["in_sampled_polar"] == true);
  CHECK(invoke({"witness", "--psi", psi, "--cone", cone, "--s", "2.5"}).code == cli::kExitContract);
}

TEST_CASE("orbit-rank command") {
  const json doc = json::parse(invoke({"orbit-rank", "--p", "4", "--directions", "16", "--grid", "180"}).out);
  CHECK(doc["result"]["rank"] == 5);
  CHECK(doc["result"]["polynomial_dimension"] == 5);
  const Outcome csv = invoke({"--format", "csv", "orbit-rank", "--p", "2"});
  CHECK(csv.out.find("# rank=3") != std::string::npos);
}

TEST_CASE("output files and determinism") {
  const Workspace ws;
  const std::string path = ws.write("pet.json", to_json(Graph::petersen()));
  const std::string a = (ws.dir / "a.json").string();
  const std::string b = (ws.dir / "b.json").string();
  REQUIRE(invoke({"--seed", "9", "--out", a, "poincare", "--graph", path, "--starts", "8"}).code == cli::kExitOk);
  REQUIRE(invoke({"--seed", "9", "--out", b, "poincare", "--graph", path, "--starts", "8"}).code == cli::kExitOk);
  std::ifstream fa(a), fb(b);
  const std::string ta((std::istreambuf_iterator<char>(fa)), {});
  const std::string tb((std::istreambuf_iterator<char>(fb)), {});
  CHECK_FALSE(ta.empty());
  CHECK(ta == tb);
  // The output path is not part of the configuration hash.
  CHECK(json::parse(ta)["config_sha256"] ==
        json::parse(invoke({"--seed", "9", "poincare", "--graph", path, "--starts", "8"}).out)["config_sha256"]);
}

TEST_CASE("exit codes") {
  const Workspace ws;
  CHECK(invoke({}).code == cli::kExitContract);
  CHECK(invoke({"frobnicate"}).code == cli::kExitContract);
  CHECK(invoke({"mu", "--tuple", (ws.dir / "missing.json").string()}).code == cli::kExitContract);
  std::ofstream(ws.dir / "bad.json") << "{ not json";
  CHECK(invoke({"mu", "--tuple", (ws.dir / "bad.json").string()}).code == cli::kExitContract);
  const std::string disconnected =
      ws.write("split.json", json::parse(R"({"vertices": ["a", "b", "c"], "edges": [["a", "b"]], "symmetrize": true})"));
  const Outcome r = invoke({"poincare", "--graph", disconnected});
  CHECK(r.code == cli::kExitContract);
  CHECK(r.err.find("disconnected") != std::string::npos);
  CounterRng rng(72);
  const std::string tuple = ws.write("f.json", to_json(testsupport::random_tuple(rng, 2, 2, 2.0)));
  CHECK(invoke({"--format", "csv", "mu", "--tuple", tuple}).code == cli::kExitContract);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}
