#include "lpdual/cli.hpp"

#include "lpdual/errors.hpp"
#include "lpdual/orbit.hpp"
#include "lpdual/polarity.hpp"
#include "lpdual/serialization.hpp"
#include "lpdual/vector_norms.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace lpdual::cli {

namespace {

struct Input {
  std::string role;
  std::string text;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& role) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractError("input '" + role + "' is not valid JSON: " + e.what());
  }
}

// Everything a command needs besides its inputs. The output path is not part
// of the config: it does not influence the result.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string format = "json";
  std::map<std::string, json> params;

  double tolerance(double fallback) const { return tol.value_or(fallback); }

  json to_json() const {
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    return {{"command", command},
            {"seed", seed},
            {"tol", tol ? number_to_json(*tol) : json(nullptr)},
            {"format", format},
            {"params", p}};
  }
};

struct Emitted {
  json result;
  std::string csv;  // used when format == csv
};

class Session {
 public:
  explicit Session(RunConfig config) : config_(std::move(config)) {}

  json load(const std::string& role, const std::string& path) {
    Input in{role, read_file(path)};
    json j = parse_json(in.text, role);
    inputs_.push_back(std::move(in));
    return j;
  }

  RunConfig& config() { return config_; }

  std::string render(const Emitted& emitted) const {
    const json config = config_.to_json();
    json hashes = json::object();
    std::string joined;
    for (const auto& in : inputs_) {
      hashes[in.role] = sha256_hex(in.text);
      joined += in.role + '\n' + std::to_string(in.text.size()) + '\n' + in.text;
    }
    const std::string input_hash = sha256_hex(joined);
    const std::string config_hash = sha256_hex(config.dump());
    if (config_.format == "csv") {
      std::ostringstream out;
      out << "# command=" << config_.command << "\n# config=" << config.dump() << "\n# config_sha256=" << config_hash
          << "\n# input_sha256=" << input_hash << '\n'
          << emitted.csv;
      return out.str();
    }
    json doc = {{"command", config_.command},
                {"config", config},
                {"config_sha256", config_hash},
                {"inputs", hashes},
                {"input_sha256", input_hash},
                {"result", emitted.result}};
    return doc.dump(2) + "\n";
  }

 private:
  RunConfig config_;
  std::vector<Input> inputs_;
};

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

void require_json_format(const RunConfig& config) {
  if (config.format != "json") throw ContractError("command '" + config.command + "' only supports --format json");
}

OpNormParams opnorm_params(const RunConfig& config, int starts, int max_iter, int divisions) {
  OpNormParams params;
  params.seed = config.seed;
  params.starts = starts;
  params.max_iterations = max_iter;
  params.grid_divisions = divisions;
  return params;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scale workbench for L_p operator duality", "lpdual"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out_path;
  std::string format = "json";
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--tol", tol, "Command tolerance (each command documents its default)");
  app.add_option("--out", out_path, "Write the result here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::function<Emitted(Session&)> action;
  auto command = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  // mu
  std::string tuple_path;
  auto* mu_cmd = command("mu", "Projective measure mu_f of a tuple");
  mu_cmd->add_option("--tuple", tuple_path, "LpTuple JSON")->required();
  mu_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      const LpTuple f = lp_tuple_from_json(s.load("tuple", tuple_path));
      const ProjAtomicMeasure mu = mu_of_tuple(f);
      double power_sum = 0.0;
      for (int i = 0; i < f.n(); ++i) power_sum += std::pow(lp_norm(f.column(i), f.space(), f.p()), f.p());
      return Emitted{{{"measure", to_json(mu)},
                      {"total_variation", number_to_json(mu.total_variation())},
                      {"norm_power_sum", number_to_json(power_sum)}},
                     {}};
    };
  });

  // isometry-check
  std::string f_path, g_path;
  auto* iso_cmd = command("isometry-check", "Do two tuples have the same projective measure (tol default 1e-10)");
  iso_cmd->add_option("--f", f_path, "First LpTuple JSON")->required();
  iso_cmd->add_option("--g", g_path, "Second LpTuple JSON")->required();
  iso_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      const LpTuple f = lp_tuple_from_json(s.load("f", f_path));
      const LpTuple g = lp_tuple_from_json(s.load("g", g_path));
      if (f.n() != g.n() || f.p() != g.p()) throw ContractError("isometry-check: tuples differ in n or p");
      const double diff = (mu_of_tuple(f) - mu_of_tuple(g)).total_variation();
      const double t = s.config().tolerance(1e-10);
      return Emitted{{{"equal", diff <= t}, {"tv_difference", number_to_json(diff)}}, {}};
    };
  });

  // opnorm
  std::string op_path, space_path, method = "auto";
  int starts = 64, max_iter = 500, divisions = 40;
  auto* opnorm_cmd = command("opnorm", "Vector-valued operator norm ||T_X||");
  opnorm_cmd->add_option("--operator", op_path, "SpanOperator JSON")->required();
  opnorm_cmd->add_option("--space", space_path, "NormOracle JSON")->required();
  opnorm_cmd->add_option("--method", method, "grid, multistart or auto")
      ->check(CLI::IsMember({"grid", "multistart", "auto"}))
      ->capture_default_str();
  opnorm_cmd->add_option("--starts", starts, "Multistart starting points")->capture_default_str();
  opnorm_cmd->add_option("--max-iter", max_iter, "Ascent iterations per start")->capture_default_str();
  opnorm_cmd->add_option("--divisions", divisions, "Grid subdivisions per cube edge")->capture_default_str();
  opnorm_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      s.config().params = {{"method", method}, {"starts", starts}, {"max_iter", max_iter}, {"divisions", divisions}};
      const SpanOperator op = span_operator_from_json(s.load("operator", op_path));
      const NormOracle space = norm_oracle_from_json(s.load("space", space_path));
      const auto r = vector_opnorm(op, space, parse_method(method), opnorm_params(s.config(), starts, max_iter, divisions));
      return Emitted{to_json(r), {}};
    };
  });

  // poincare
  std::string graph_path, poincare_space;
  double poincare_p = 2.0;
  std::string poincare_method = "multistart";
  auto* poincare_cmd = command("poincare", "Graph Poincare constant pi_{p,G}(X)");
  poincare_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  poincare_cmd->add_option("--p", poincare_p, "Exponent p >= 1")->capture_default_str();
  poincare_cmd->add_option("--space", poincare_space, "NormOracle JSON (default: the scalar field)");
  poincare_cmd->add_option("--method", poincare_method, "grid, multistart or auto")
      ->check(CLI::IsMember({"grid", "multistart", "auto"}))
      ->capture_default_str();
  poincare_cmd->add_option("--starts", starts, "Multistart starting points")->capture_default_str();
  poincare_cmd->add_option("--max-iter", max_iter, "Ascent iterations per start")->capture_default_str();
  poincare_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      s.config().params = {
          {"p", number_to_json(poincare_p)}, {"method", poincare_method}, {"starts", starts}, {"max_iter", max_iter}};
      const Graph graph = graph_from_json(s.load("graph", graph_path));
      const NormOracle space =
          poincare_space.empty() ? NormOracle::scalar() : norm_oracle_from_json(s.load("space", poincare_space));
      const auto r = poincare_constant(graph, poincare_p, space, parse_method(poincare_method),
                                       opnorm_params(s.config(), starts, max_iter, divisions));
      json result = {{"constant", number_to_json(r.lower)}, {"opnorm", to_json(r)}};
      result["spectral"] = poincare_p == 2.0 ? number_to_json(spectral_check(graph)) : json(nullptr);
      return Emitted{result, {}};
    };
  });

  // bm-distance
  std::string psi_path, cone_path;
  double s_max = kDefaultSMax;
  auto* bm_cmd = command("bm-distance", "Minimal sandwich s and distance s^(1/p) (tol default 1e-3)");
  bm_cmd->add_option("--psi", psi_path, "psi tuple JSON {space, vectors}")->required();
  bm_cmd->add_option("--cone", cone_path, "Cone JSON")->required();
  bm_cmd->add_option("--s-max", s_max, "Upper end of the search")->capture_default_str();
  bm_cmd->callback([&] {
    action = [&](Session& s) {
      s.config().params = {{"s_max", number_to_json(s_max)}};
      const TupleGenerator psi_tuple = tuple_generator_from_json(s.load("psi", psi_path));
      const ConeSpec spec = cone_spec_from_json(s.load("cone", cone_path));
      const ConeSample cone = spec.build();
      const HFunction psi = phi_from_tuple(psi_tuple.space, psi_tuple.vectors, spec.p);
      const MinimalSandwich ms = minimal_sandwich_s(psi, cone, s.config().tolerance(1e-3), s_max);
      json trace = json::array();
      std::ostringstream csv;
      csv << "step,s,feasible\n";
      for (size_t k = 0; k < ms.trace.size(); ++k) {
        trace.push_back({{"s", number_to_json(ms.trace[k].s)}, {"feasible", ms.trace[k].feasible}});
        csv << k << ',' << format_double(ms.trace[k].s) << ',' << (ms.trace[k].feasible ? 1 : 0) << '\n';
      }
      return Emitted{{{"s_star", number_to_json(ms.s_star)},
                      {"distance", number_to_json(ms.distance)},
                      {"lower_bound_only", ms.lower_bound_only},
                      {"trace", trace}},
                     csv.str()};
    };
  });

  // witness
  double witness_s = 1.0;
  auto* witness_cmd = command("witness", "Separating operator from an infeasible sandwich LP (tol default 1e-8)");
  witness_cmd->add_option("--psi", psi_path, "psi tuple JSON {space, vectors}")->required();
  witness_cmd->add_option("--cone", cone_path, "Cone JSON")->required();
  witness_cmd->add_option("--s", witness_s, "Sandwich constant s >= 1")->required();
  witness_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      s.config().params = {{"s", number_to_json(witness_s)}};
      const TupleGenerator psi_tuple = tuple_generator_from_json(s.load("psi", psi_path));
      const ConeSpec spec = cone_spec_from_json(s.load("cone", cone_path));
      const ConeSample cone = spec.build();
      const HFunction psi = phi_from_tuple(psi_tuple.space, psi_tuple.vectors, spec.p);
      const SandwichResult res = sandwich_feasible(psi, cone, witness_s);
      if (res.feasible) throw ContractError("witness: the sandwich LP is feasible at this s; nothing to separate");
      const WitnessReport report = extract_witness_operator(res, psi, cone, s.config().tolerance(1e-8));
      return Emitted{{{"report", to_json(report)}, {"certificate", to_json(res)["certificate"]}}, {}};
    };
  });

  // polar-check
  std::vector<std::string> polar_spaces;
  auto* polar_cmd = command("polar-check", "Is ||T_X|| <= 1 + tol for every listed space (tol default 1e-6)");
  polar_cmd->add_option("--operator", op_path, "SpanOperator JSON")->required();
  polar_cmd->add_option("--space", polar_spaces, "NormOracle JSON (repeatable)")->required();
  polar_cmd->add_option("--starts", starts, "Multistart starting points")->capture_default_str();
  polar_cmd->callback([&] {
    action = [&](Session& s) {
      require_json_format(s.config());
      s.config().params = {{"starts", starts}};
      const SpanOperator op = span_operator_from_json(s.load("operator", op_path));
      std::vector<NormOracle> spaces;
      for (size_t k = 0; k < polar_spaces.size(); ++k) {
        spaces.push_back(norm_oracle_from_json(s.load("space" + std::to_string(k), polar_spaces[k])));
      }
      const PolarCheck pc =
          in_polar_check(op, spaces, s.config().tolerance(1e-6), opnorm_params(s.config(), starts, max_iter, divisions));
      json witness = json::array();
      for (const auto& x : pc.witness) witness.push_back(vector_to_json(x));
      return Emitted{{{"in_polar", pc.in_polar},
                      {"worst", number_to_json(pc.worst)},
                      {"worst_space", pc.worst_space},
                      {"witness", witness}},
                     {}};
    };
  });

  // orbit-rank
  double orbit_p = 2.0;
  int orbit_n = 2, orbit_directions_count = 64, orbit_grid = 720;
  auto* orbit_cmd = command("orbit-rank", "Numerical rank of the orbit span of |z_1|^p (tol default 1e-8)");
  orbit_cmd->add_option("--p", orbit_p, "Exponent p > 0")->required();
  orbit_cmd->add_option("--n", orbit_n, "Dimension n >= 2")->capture_default_str();
  orbit_cmd->add_option("--directions", orbit_directions_count, "Number of directions c")->capture_default_str();
  orbit_cmd->add_option("--grid", orbit_grid, "Grid points on the sphere")->capture_default_str();
  orbit_cmd->callback([&] {
    action = [&](Session& s) {
      s.config().params = {{"p", number_to_json(orbit_p)},
                           {"n", orbit_n},
                           {"directions", orbit_directions_count},
                           {"grid", orbit_grid}};
      const SphereGrid grid = SphereGrid::make(orbit_n, orbit_grid, 2.0);
      const OrbitMatrix m = orbit_matrix(orbit_p, orbit_n, orbit_directions_count, grid);
      const Eigen::VectorXd sv = singular_values(m);
      const double rel_tol = s.config().tolerance(1e-8);
      const int rank = numerical_rank(sv, rel_tol);
      json result = {{"rank", rank}, {"singular_values", vector_to_json(sv)}};
      const bool even = orbit_p >= 2.0 && orbit_p == std::floor(orbit_p) && static_cast<long>(orbit_p) % 2 == 0;
      result["polynomial_dimension"] =
          even ? json(polynomial_dimension(static_cast<int>(orbit_p), orbit_n)) : json(nullptr);
      std::ostringstream csv;
      csv << "# rank=" << rank << "\nindex,singular_value,above_tol\n";
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        csv << i << ',' << format_double(sv[i]) << ',' << (sv[i] > rel_tol * sv[0] ? 1 : 0) << '\n';
      }
      return Emitted{result, csv.str()};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitContract;
  }

  RunConfig config;
  config.command = app.get_subcommands().front()->get_name();
  config.seed = seed;
  config.tol = tol;
  config.format = format;
  Session session(std::move(config));
  try {
    const Emitted emitted = action(session);
    const std::string text = session.render(emitted);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ContractError("cannot write output file '" + out_path + "'");
      file << text;
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ContractError& e) {
    err << "contract error: " << e.what() << '\n';
    return kExitContract;
  } catch (const json::exception& e) {
    err << "contract error: malformed input: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace lpdual::cli
