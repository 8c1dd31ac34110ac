#include "lpdual/projective.hpp"

#include "lpdual/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpdual {

namespace {

// Coordinates this small (after normalization) do not decide the sign.
constexpr double kSignThreshold = 1e-12;

double lp_length(const Eigen::VectorXd& z, double p) {
  if (std::isinf(p)) return z.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(std::abs(z[i]), p);
  return std::pow(s, 1.0 / p);
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Sorts, merges coincident points and drops zero masses.
std::vector<ProjAtom> canonicalize(std::vector<ProjAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const ProjAtom& a, const ProjAtom& b) { return lex_less(a.point.rep(), b.point.rep()); });
  std::vector<ProjAtom> merged;
  merged.reserve(atoms.size());
  for (auto& atom : atoms) {
    bool absorbed = false;
    // Clusters are sorted by first coordinate; only those within tolerance
    // of it can absorb this atom.
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (it->point.rep()[0] < atom.point.rep()[0] - kPointMergeTolerance) break;
      if ((it->point.rep() - atom.point.rep()).norm() <= kPointMergeTolerance) {
        it->mass += atom.mass;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(std::move(atom));
  }
  std::erase_if(merged, [](const ProjAtom& a) { return a.mass == 0.0; });
  return merged;
}

}  // namespace

ProjPoint ProjPoint::from_vector(const Eigen::VectorXd& z, double p) {
  const double len = lp_length(z, p);
  if (!(len > 0.0) || !std::isfinite(len)) throw ContractError("ProjPoint: zero or non-finite vector");
  // Representatives that are already normalized are kept bit-for-bit, so
  // canonicalization is idempotent.
  Eigen::VectorXd rep = std::abs(len - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? z : Eigen::VectorXd(z / len);
  for (Eigen::Index i = 0; i < rep.size(); ++i) {
    if (std::abs(rep[i]) > kSignThreshold) {
      if (rep[i] < 0.0) rep = -rep;
      break;
    }
  }
  return ProjPoint(std::move(rep));
}

ProjAtomicMeasure::ProjAtomicMeasure(int n, double p) : n_(n), p_(p) {
  if (n_ < 1) throw DimensionError("ProjAtomicMeasure: n must be positive");
}

ProjAtomicMeasure::ProjAtomicMeasure(int n, double p, std::vector<ProjAtom> atoms) : ProjAtomicMeasure(n, p) {
  for (const auto& a : atoms) {
    if (a.point.n() != n_) throw DimensionError("ProjAtomicMeasure: atom dimension mismatch");
    if (!std::isfinite(a.mass)) throw ContractError("ProjAtomicMeasure: non-finite mass");
  }
  atoms_ = canonicalize(std::move(atoms));
}

ProjAtomicMeasure ProjAtomicMeasure::from_directions(int n, double p,
                                                     const std::vector<std::pair<Eigen::VectorXd, double>>& raw) {
  std::vector<ProjAtom> atoms;
  atoms.reserve(raw.size());
  for (const auto& [z, mass] : raw) atoms.push_back({ProjPoint::from_vector(z, p), mass});
  return ProjAtomicMeasure(n, p, std::move(atoms));
}

double ProjAtomicMeasure::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms_) tv += std::abs(a.mass);
  return tv;
}

bool ProjAtomicMeasure::is_positive() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const ProjAtom& a) { return a.mass > 0.0; });
}

void ProjAtomicMeasure::require_compatible(const ProjAtomicMeasure& other) const {
  if (other.n_ != n_) throw DimensionError("ProjAtomicMeasure: dimension mismatch");
  if (other.p_ != p_) throw ContractError("ProjAtomicMeasure: p mismatch");
}

ProjAtomicMeasure ProjAtomicMeasure::operator+(const ProjAtomicMeasure& other) const {
  require_compatible(other);
  std::vector<ProjAtom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return ProjAtomicMeasure(n_, p_, std::move(all));
}

ProjAtomicMeasure ProjAtomicMeasure::operator-(const ProjAtomicMeasure& other) const {
  return *this + other * -1.0;
}

ProjAtomicMeasure ProjAtomicMeasure::operator*(double scale) const {
  std::vector<ProjAtom> scaled = atoms_;
  for (auto& a : scaled) a.mass *= scale;
  return ProjAtomicMeasure(n_, p_, std::move(scaled));
}

std::vector<AlignedAtom> align(const ProjAtomicMeasure& a, const ProjAtomicMeasure& b) {
  if (a.n() != b.n() || a.p() != b.p()) throw DimensionError("align: incompatible measures");
  // Union of supports first, then each measure accumulated on it.
  std::vector<ProjAtom> support;
  for (const auto& atom : a.atoms()) support.push_back({atom.point, 1.0});
  for (const auto& atom : b.atoms()) support.push_back({atom.point, 1.0});
  const ProjAtomicMeasure joint(a.n(), a.p(), std::move(support));

  std::vector<AlignedAtom> out;
  out.reserve(static_cast<size_t>(joint.size()));
  for (const auto& atom : joint.atoms()) out.push_back({atom.point, 0.0, 0.0});
  auto locate = [&](const ProjPoint& pt) -> AlignedAtom& {
    for (auto& cell : out) {
      if ((cell.point.rep() - pt.rep()).norm() <= kPointMergeTolerance) return cell;
    }
    throw ContractError("align: point missing from joint support");
  };
  for (const auto& atom : a.atoms()) locate(atom.point).first += atom.mass;
  for (const auto& atom : b.atoms()) locate(atom.point).second += atom.mass;
  return out;
}

ProjAtomicMeasure mu_of_tuple(const LpTuple& f) {
  std::vector<ProjAtom> atoms;
  const double p = f.p();
  for (int r = 0; r < f.space().size(); ++r) {
    const Eigen::VectorXd z = f.values().row(r).transpose();
    if (z.isZero(0.0)) continue;
    double power = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) power += std::pow(std::abs(z[i]), p);
    atoms.push_back({ProjPoint::from_vector(z, p), f.space()[r].weight * power});
  }
  return ProjAtomicMeasure(f.n(), p, std::move(atoms));
}

JordanParts jordan(const ProjAtomicMeasure& m) {
  std::vector<ProjAtom> pos, neg;
  for (const auto& a : m.atoms()) {
    if (a.mass > 0.0) {
      pos.push_back(a);
    } else {
      neg.push_back({a.point, -a.mass});
    }
  }
  return {ProjAtomicMeasure(m.n(), m.p(), std::move(pos)), ProjAtomicMeasure(m.n(), m.p(), std::move(neg))};
}

JordanParts jordan_transport(const ProjAtomicMeasure& m, const ProjAtomicMeasure& m1, const ProjAtomicMeasure& m2,
                             const ProjAtomicMeasure& m_prime) {
  if (!m1.is_positive() || !m2.is_positive()) throw ContractError("jordan_transport: m1 and m2 must be positive");
  const double scale = std::max(1.0, m1.total_variation() + m2.total_variation());
  const double defect = (m - (m1 - m2)).total_variation();
  if (defect > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "jordan_transport: m differs from m1 - m2 by " << defect;
    throw ContractError(msg.str());
  }
  // m1 - m_+ = m2 - m_- is the positive excess of the given decomposition
  // over the Jordan one.
  const JordanParts jm = jordan(m);
  const ProjAtomicMeasure excess = m1 - jm.positive;
  for (const auto& a : excess.atoms()) {
    if (a.mass < -1e-9 * scale) throw ContractError("jordan_transport: m1 does not dominate the positive part of m");
  }
  const JordanParts jp = jordan(m_prime);
  return {jp.positive + excess, jp.negative + excess};
}

Coupling coupling_decompose(const LpTuple& f, const LpTuple& g) {
  if (f.n() != g.n() || f.p() != g.p()) throw ContractError("coupling_decompose: tuples differ in n or p");
  const ProjAtomicMeasure mf = mu_of_tuple(f);
  const ProjAtomicMeasure mg = mu_of_tuple(g);
  std::vector<ProjAtom> common, only_f, only_g;
  for (const auto& cell : align(mf, mg)) {
    const double shared = std::min(cell.first, cell.second);
    if (shared > 0.0) common.push_back({cell.point, shared});
    if (cell.first - shared > 0.0) only_f.push_back({cell.point, cell.first - shared});
    if (cell.second - shared > 0.0) only_g.push_back({cell.point, cell.second - shared});
  }
  return {ProjAtomicMeasure(f.n(), f.p(), std::move(common)), ProjAtomicMeasure(f.n(), f.p(), std::move(only_f)),
          ProjAtomicMeasure(f.n(), f.p(), std::move(only_g))};
}

bool measures_equal(const LpTuple& f, const LpTuple& g, double tol) {
  if (f.n() != g.n() || f.p() != g.p()) throw ContractError("measures_equal: tuples differ in n or p");
  return (mu_of_tuple(f) - mu_of_tuple(g)).total_variation() <= tol;
}

LpTuple change_of_density(const LpTuple& f, const Eigen::VectorXd& h) {
  if (h.size() != f.space().size()) throw DimensionError("change_of_density: density length mismatch");
  std::vector<Atom> atoms;
  Eigen::MatrixXd values = f.values();
  for (int r = 0; r < f.space().size(); ++r) {
    if (h[r] == 0.0 || !std::isfinite(h[r])) throw ContractError("change_of_density: density must be nonzero");
    atoms.push_back({f.space()[r].id, f.space()[r].weight * std::pow(std::abs(h[r]), -f.p())});
    values.row(r) *= h[r];
  }
  return LpTuple(MeasureSpace(std::move(atoms)), std::move(values), f.p());
}

}  // namespace lpdual
