#include "lpdual/measure_core.hpp"

#include "lpdual/errors.hpp"
#include "lpdual/vector_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace lpdual {

namespace {

std::string tagged(size_t index, const std::string& id) { return std::to_string(index) + "/" + id; }

std::string untagged(const std::string& id) {
  const auto slash = id.find('/');
  if (slash == std::string::npos || slash == 0) return id;
  for (size_t i = 0; i < slash; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return id;
  }
  return id.substr(slash + 1);
}

void require_same_shape(const std::vector<SpanOperator>& ops, bool same_n, const char* what) {
  if (ops.empty()) throw ContractError(std::string(what) + ": empty operator list");
  for (const auto& op : ops) {
    if (op.p() != ops.front().p()) throw ContractError(std::string(what) + ": operators have different p");
    if (same_n && op.n() != ops.front().n()) throw ContractError(std::string(what) + ": operators have different n");
  }
}

// Largest column lp-norm of a tuple; scale for absolute tolerances.
double tuple_scale(const LpTuple& t) {
  double s = 0.0;
  for (int i = 0; i < t.n(); ++i) s = std::max(s, lp_norm(t.values().col(i), t.space(), t.p()));
  return s;
}

}  // namespace

MeasureSpace::MeasureSpace(std::vector<Atom> atoms) {
  std::unordered_set<std::string> seen;
  atoms_.reserve(atoms.size());
  for (auto& a : atoms) {
    if (!std::isfinite(a.weight) || a.weight < 0.0) {
      throw ContractError("MeasureSpace: atom '" + a.id + "' has invalid weight");
    }
    if (!seen.insert(a.id).second) throw ContractError("MeasureSpace: duplicate atom id '" + a.id + "'");
    if (a.weight > 0.0) atoms_.push_back(std::move(a));
  }
}

MeasureSpace MeasureSpace::uniform(int count, double weight) {
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) atoms.push_back({std::to_string(i), weight});
  return MeasureSpace(std::move(atoms));
}

double MeasureSpace::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight;
  return total;
}

Eigen::VectorXd MeasureSpace::weights() const {
  Eigen::VectorXd w(size());
  for (int i = 0; i < size(); ++i) w[i] = atoms_[static_cast<size_t>(i)].weight;
  return w;
}

int MeasureSpace::find(const std::string& id) const {
  for (int i = 0; i < size(); ++i) {
    if (atoms_[static_cast<size_t>(i)].id == id) return i;
  }
  return -1;
}

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, const MeasureSpace& space, double p) {
  if (v.size() != space.size()) {
    std::ostringstream msg;
    msg << "lp_norm: vector has " << v.size() << " entries but space has " << space.size() << " atoms";
    throw DimensionError(msg.str());
  }
  if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  double sum = 0.0;
  for (int i = 0; i < v.size(); ++i) sum += space[i].weight * std::pow(std::abs(v[i]), p);
  return std::pow(sum, 1.0 / p);
}

LpTuple::LpTuple(MeasureSpace space, Eigen::MatrixXd values, double p)
    : space_(std::move(space)), values_(std::move(values)), p_(p) {
  if (!(p_ >= 1.0)) throw ContractError("LpTuple: p must be >= 1");
  if (values_.rows() != space_.size()) {
    std::ostringstream msg;
    msg << "LpTuple: " << values_.rows() << " rows for " << space_.size() << " atoms";
    throw DimensionError(msg.str());
  }
  if (values_.cols() < 1) throw DimensionError("LpTuple: n must be positive");
  if (!values_.allFinite()) throw ContractError("LpTuple: non-finite values");
}

LpTuple LpTuple::from_atoms(const std::vector<Atom>& atoms, const Eigen::MatrixXd& values, double p) {
  if (static_cast<Eigen::Index>(atoms.size()) != values.rows()) {
    throw DimensionError("LpTuple: row count does not match atom count");
  }
  std::vector<int> rows;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].weight != 0.0) rows.push_back(static_cast<int>(i));
  }
  MeasureSpace space(atoms);  // drops the same zero-weight atoms
  Eigen::MatrixXd trimmed(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (size_t r = 0; r < rows.size(); ++r) trimmed.row(static_cast<Eigen::Index>(r)) = values.row(rows[r]);
  return LpTuple(std::move(space), std::move(trimmed), p);
}

Eigen::MatrixXd LpTuple::weighted_values() const {
  Eigen::MatrixXd out = values_;
  for (int i = 0; i < space_.size(); ++i) out.row(i) *= std::pow(space_[i].weight, 1.0 / p_);
  return out;
}

int LpTuple::rank() const {
  if (space_.empty()) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted_values());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > kIndependenceTolerance * sv[0]) ++r;
  }
  return r;
}

bool LpTuple::operator==(const LpTuple& other) const {
  return p_ == other.p_ && space_ == other.space_ && values_.rows() == other.values_.rows() &&
         values_.cols() == other.values_.cols() && values_ == other.values_;
}

SpanOperator::SpanOperator(LpTuple domain, LpTuple codomain)
    : SpanOperator(std::move(domain), std::move(codomain), TrustedBasis{}) {
  if (domain_.rank() != domain_.n()) {
    throw ContractError("SpanOperator: domain basis is not linearly independent");
  }
}

SpanOperator::SpanOperator(LpTuple domain, LpTuple codomain, TrustedBasis)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (domain_.n() != codomain_.n()) throw DimensionError("SpanOperator: domain and codomain n differ");
  if (domain_.p() != codomain_.p()) throw ContractError("SpanOperator: domain and codomain p differ");
}

MeasureSpace direct_sum_spaces(const std::vector<MeasureSpace>& spaces) {
  if (spaces.empty()) throw ContractError("direct_sum_spaces: empty list");
  std::vector<Atom> atoms;
  for (size_t k = 0; k < spaces.size(); ++k) {
    for (const auto& a : spaces[k].atoms()) atoms.push_back({tagged(k, a.id), a.weight});
  }
  return MeasureSpace(std::move(atoms));
}

LpTuple direct_sum_tuples(const std::vector<LpTuple>& tuples) {
  if (tuples.empty()) throw ContractError("direct_sum_tuples: empty list");
  std::vector<MeasureSpace> spaces;
  Eigen::Index rows = 0;
  for (const auto& t : tuples) {
    if (t.n() != tuples.front().n() || t.p() != tuples.front().p()) {
      throw ContractError("direct_sum_tuples: tuples differ in n or p");
    }
    spaces.push_back(t.space());
    rows += t.values().rows();
  }
  Eigen::MatrixXd values(rows, tuples.front().n());
  Eigen::Index r = 0;
  for (const auto& t : tuples) {
    values.middleRows(r, t.values().rows()) = t.values();
    r += t.values().rows();
  }
  return LpTuple(direct_sum_spaces(spaces), std::move(values), tuples.front().p());
}

SpanOperator oplus_operators(const std::vector<SpanOperator>& ops) {
  require_same_shape(ops, true, "oplus_operators");
  std::vector<LpTuple> doms, cods;
  for (const auto& op : ops) {
    doms.push_back(op.domain());
    cods.push_back(op.codomain());
  }
  return SpanOperator(direct_sum_tuples(doms), direct_sum_tuples(cods));
}

SpanOperator block_sum(const std::vector<SpanOperator>& ops) {
  require_same_shape(ops, false, "block_sum");
  int total_n = 0;
  Eigen::Index dom_rows = 0, cod_rows = 0;
  std::vector<MeasureSpace> dom_spaces, cod_spaces;
  for (const auto& op : ops) {
    total_n += op.n();
    dom_rows += op.domain().values().rows();
    cod_rows += op.codomain().values().rows();
    dom_spaces.push_back(op.domain().space());
    cod_spaces.push_back(op.codomain().space());
  }
  Eigen::MatrixXd dom = Eigen::MatrixXd::Zero(dom_rows, total_n);
  Eigen::MatrixXd cod = Eigen::MatrixXd::Zero(cod_rows, total_n);
  Eigen::Index dr = 0, cr = 0, c = 0;
  for (const auto& op : ops) {
    dom.block(dr, c, op.domain().values().rows(), op.n()) = op.domain().values();
    cod.block(cr, c, op.codomain().values().rows(), op.n()) = op.codomain().values();
    dr += op.domain().values().rows();
    cr += op.codomain().values().rows();
    c += op.n();
  }
  const double p = ops.front().p();
  return SpanOperator(LpTuple(direct_sum_spaces(dom_spaces), std::move(dom), p),
                      LpTuple(direct_sum_spaces(cod_spaces), std::move(cod), p));
}

SpanOperator compose_operators(const SpanOperator& outer, const SpanOperator& inner) {
  if (outer.p() != inner.p()) throw ContractError("compose_operators: p differs");
  const LpTuple& basis = outer.domain();
  const LpTuple& images = inner.codomain();

  // Align both tuples on the union of their atoms; an atom missing on one side
  // carries zero values there.
  std::vector<Atom> atoms = basis.space().atoms();
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(atoms.size()); ++i) index[atoms[static_cast<size_t>(i)].id] = i;
  std::vector<int> image_row(static_cast<size_t>(images.space().size()));
  for (int r = 0; r < images.space().size(); ++r) {
    const Atom& a = images.space()[r];
    auto it = index.find(a.id);
    if (it == index.end()) {
      index[a.id] = static_cast<int>(atoms.size());
      image_row[static_cast<size_t>(r)] = static_cast<int>(atoms.size());
      atoms.push_back(a);
    } else {
      if (std::abs(atoms[static_cast<size_t>(it->second)].weight - a.weight) >
          1e-12 * std::max(1.0, a.weight)) {
        throw ContractError("compose_operators: atom '" + a.id + "' has different weights");
      }
      image_row[static_cast<size_t>(r)] = it->second;
    }
  }
  const auto m = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(m, basis.n());
  F.topRows(basis.values().rows()) = basis.values();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, images.n());
  for (int r = 0; r < images.space().size(); ++r) G.row(image_row[static_cast<size_t>(r)]) = images.values().row(r);

  const MeasureSpace joint(atoms);
  Eigen::VectorXd scale(m);
  for (Eigen::Index r = 0; r < m; ++r) scale[r] = std::pow(joint[static_cast<int>(r)].weight, 1.0 / outer.p());
  const Eigen::MatrixXd Fw = scale.asDiagonal() * F;
  const Eigen::MatrixXd Gw = scale.asDiagonal() * G;
  const Eigen::MatrixXd coords = Fw.colPivHouseholderQr().solve(Gw);

  double max_residual = 0.0;
  double norm_scale = 1e-300;
  for (int j = 0; j < images.n(); ++j) {
    const Eigen::VectorXd res = F * coords.col(j) - G.col(j);
    max_residual = std::max(max_residual, lp_norm(res, joint, outer.p()));
    norm_scale = std::max(norm_scale, lp_norm(G.col(j), joint, outer.p()));
  }
  if (max_residual > kSpanTolerance * std::max(1.0, norm_scale)) {
    std::ostringstream msg;
    msg << "compose_operators: range of inner operator is not in the domain of outer (residual " << max_residual
        << ")";
    throw CompositionError(msg.str(), max_residual);
  }
  LpTuple composed(outer.codomain().space(), outer.codomain().values() * coords, outer.p());
  return SpanOperator(inner.domain(), std::move(composed));
}

SpanOperator augment_with_identity(const SpanOperator& op, const LpTuple& aux) {
  if (aux.n() != op.n() || aux.p() != op.p()) {
    throw ContractError("augment_with_identity: auxiliary tuple differs in n or p");
  }
  return SpanOperator(direct_sum_tuples({op.domain(), aux}), direct_sum_tuples({op.codomain(), aux}));
}

SpanOperator strip_identity_summand(const SpanOperator& op, const std::unordered_set<std::string>& kept,
                                    const StripOptions& options) {
  const LpTuple& dom = op.domain();
  const LpTuple& cod = op.codomain();
  const double p = op.p();

  if (options.require_contraction) {
    const double scalar_norm = vector_opnorm(op, NormOracle::scalar(), OpNormMethod::Multistart).lower;
    if (scalar_norm > 1.0 + options.tolerance) {
      std::ostringstream msg;
      msg << "strip_identity_summand: operator norm " << scalar_norm << " exceeds 1";
      throw NotIdentitySummandError(msg.str(), scalar_norm - 1.0);
    }
  }

  // Off the kept atoms, domain and codomain must share atoms and values.
  std::vector<bool> dom_in_complement(static_cast<size_t>(dom.space().size()), false);
  double deviation = 0.0;
  const double scale = std::max({1.0, tuple_scale(dom), tuple_scale(cod)});
  Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(cod.space().size(), op.n());
  std::vector<Atom> complement_atoms;
  for (int r = 0; r < cod.space().size(); ++r) {
    const Atom& a = cod.space()[r];
    if (kept.count(a.id)) continue;
    const int d = dom.space().find(a.id);
    if (d < 0 || std::abs(dom.space()[d].weight - a.weight) > 1e-12 * std::max(1.0, a.weight)) {
      throw NotIdentitySummandError("strip_identity_summand: atom '" + a.id + "' is not shared with the domain",
                                    std::numeric_limits<double>::infinity());
    }
    dom_in_complement[static_cast<size_t>(d)] = true;
    diff.row(r) = cod.values().row(r) - dom.values().row(d);
  }
  for (int i = 0; i < op.n(); ++i) deviation = std::max(deviation, lp_norm(diff.col(i), cod.space(), p));
  if (deviation > options.tolerance * scale) {
    std::ostringstream msg;
    msg << "strip_identity_summand: operator deviates from the identity outside the kept atoms by " << deviation;
    throw NotIdentitySummandError(msg.str(), deviation);
  }

  std::vector<Atom> dom_atoms;
  std::vector<int> dom_rows;
  for (int r = 0; r < dom.space().size(); ++r) {
    if (!dom_in_complement[static_cast<size_t>(r)]) {
      dom_atoms.push_back(dom.space()[r]);
      dom_rows.push_back(r);
    }
  }
  std::vector<Atom> cod_atoms;
  std::vector<int> cod_rows;
  for (int r = 0; r < cod.space().size(); ++r) {
    if (kept.count(cod.space()[r].id)) {
      cod_atoms.push_back(cod.space()[r]);
      cod_rows.push_back(r);
    }
  }
  Eigen::MatrixXd dvals(static_cast<Eigen::Index>(dom_rows.size()), op.n());
  for (size_t k = 0; k < dom_rows.size(); ++k) dvals.row(static_cast<Eigen::Index>(k)) = dom.values().row(dom_rows[k]);
  Eigen::MatrixXd cvals(static_cast<Eigen::Index>(cod_rows.size()), op.n());
  for (size_t k = 0; k < cod_rows.size(); ++k) cvals.row(static_cast<Eigen::Index>(k)) = cod.values().row(cod_rows[k]);

  LpTuple restricted_dom(MeasureSpace(dom_atoms), dvals, p);
  LpTuple restricted_cod(MeasureSpace(cod_atoms), cvals, p);
  if (restricted_dom.rank() == op.n()) return SpanOperator(std::move(restricted_dom), std::move(restricted_cod));

  // The restrictions f_i|_A are dependent: keep an independent subset and
  // check that the images obey the same relations.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(restricted_dom.weighted_values());
  qr.setThreshold(kIndependenceTolerance);
  const auto r = static_cast<int>(qr.rank());
  if (r == 0) throw NotIdentitySummandError("strip_identity_summand: restricted domain is trivial", 0.0);
  std::vector<int> cols;
  for (int k = 0; k < r; ++k) cols.push_back(static_cast<int>(qr.colsPermutation().indices()[k]));
  std::sort(cols.begin(), cols.end());
  Eigen::MatrixXd basis_d(dvals.rows(), r), basis_c(cvals.rows(), r);
  for (int k = 0; k < r; ++k) {
    basis_d.col(k) = dvals.col(cols[static_cast<size_t>(k)]);
    basis_c.col(k) = cvals.col(cols[static_cast<size_t>(k)]);
  }
  const LpTuple bd(restricted_dom.space(), basis_d, p);
  const Eigen::MatrixXd coords = bd.weighted_values().colPivHouseholderQr().solve(restricted_dom.weighted_values());
  const Eigen::MatrixXd predicted = basis_c * coords;
  double inconsistency = 0.0;
  for (int i = 0; i < op.n(); ++i) {
    inconsistency = std::max(inconsistency, lp_norm(predicted.col(i) - cvals.col(i), restricted_cod.space(), p));
  }
  if (inconsistency > options.tolerance * scale) {
    std::ostringstream msg;
    msg << "strip_identity_summand: images are inconsistent with the restricted basis (" << inconsistency << ")";
    throw NotIdentitySummandError(msg.str(), inconsistency);
  }
  return SpanOperator(bd, LpTuple(restricted_cod.space(), basis_c, p));
}

SpanOperator restrict_to_subspace(const SpanOperator& op, const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != op.n()) throw DimensionError("restrict_to_subspace: coefficient rows must equal n");
  return SpanOperator(LpTuple(op.domain().space(), op.domain().values() * coeffs, op.p()),
                      LpTuple(op.codomain().space(), op.codomain().values() * coeffs, op.p()));
}

SpanOperator inverse(const SpanOperator& op) { return SpanOperator(op.codomain(), op.domain()); }

SpanOperator identity_operator(const LpTuple& basis) { return SpanOperator(basis, basis); }

MeasureSpace strip_tags(const MeasureSpace& space) {
  std::vector<Atom> atoms;
  for (const auto& a : space.atoms()) atoms.push_back({untagged(a.id), a.weight});
  return MeasureSpace(std::move(atoms));
}

SpanOperator strip_tags(const SpanOperator& op) {
  return SpanOperator(LpTuple(strip_tags(op.domain().space()), op.domain().values(), op.p()),
                      LpTuple(strip_tags(op.codomain().space()), op.codomain().values(), op.p()),
                      SpanOperator::TrustedBasis{});
}

}  // namespace lpdual
