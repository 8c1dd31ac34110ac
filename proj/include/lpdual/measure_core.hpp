#pragma once

// Finite atomic measure spaces, n-tuples of L_p functions on them, and
// operators between finite-dimensional subspaces given by a basis and its
// images.

#include <Eigen/Dense>

#include <string>
#include <unordered_set>
#include <vector>

namespace lpdual {

struct Atom {
  std::string id;
  double weight = 0.0;

  bool operator==(const Atom&) const = default;
};

/// A finite measure space: distinct atom ids with strictly positive weights.
/// Zero-weight atoms are dropped at construction.
class MeasureSpace {
 public:
  MeasureSpace() = default;
  explicit MeasureSpace(std::vector<Atom> atoms);

  /// `count` atoms with ids "0", "1", ... and the given weight.
  static MeasureSpace uniform(int count, double weight = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  int size() const noexcept { return static_cast<int>(atoms_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }
  const Atom& operator[](int i) const { return atoms_[static_cast<size_t>(i)]; }
  double total_mass() const;
  Eigen::VectorXd weights() const;

  /// Index of the atom with this id, or -1.
  int find(const std::string& id) const;

  bool operator==(const MeasureSpace&) const = default;

 private:
  std::vector<Atom> atoms_;
};

/// (sum_w weight(w) |v(w)|^p)^(1/p). Throws DimensionError on length mismatch.
double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, const MeasureSpace& space, double p);

/// n functions on a measure space; row w of `values` is (f_1(w), ..., f_n(w)).
class LpTuple {
 public:
  LpTuple(MeasureSpace space, Eigen::MatrixXd values, double p);

  /// Builds a tuple from raw atoms, dropping zero-weight atoms together with
  /// their rows.
  static LpTuple from_atoms(const std::vector<Atom>& atoms, const Eigen::MatrixXd& values, double p);

  const MeasureSpace& space() const noexcept { return space_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  int n() const noexcept { return static_cast<int>(values_.cols()); }
  double p() const noexcept { return p_; }

  Eigen::VectorXd column(int i) const { return values_.col(i); }
  /// Rows scaled by weight^(1/p); its singular values measure independence.
  Eigen::MatrixXd weighted_values() const;
  /// Number of weighted singular values above 1e-9 times the largest.
  int rank() const;

  bool operator==(const LpTuple& other) const;

 private:
  MeasureSpace space_;
  Eigen::MatrixXd values_;
  double p_;
};

/// The linear map f_i -> g_i where f = domain (a basis of dom(T)) and
/// g = codomain (the images Tf_i, possibly on a different measure space).
class SpanOperator {
 public:
  SpanOperator(LpTuple domain, LpTuple codomain);

  /// Skips the linear-independence check; for builders whose basis is known
  /// to be orthogonal (Walsh systems with 2^n atoms).
  struct TrustedBasis {};
  SpanOperator(LpTuple domain, LpTuple codomain, TrustedBasis);

  const LpTuple& domain() const noexcept { return domain_; }
  const LpTuple& codomain() const noexcept { return codomain_; }
  int n() const noexcept { return domain_.n(); }
  double p() const noexcept { return domain_.p(); }

  bool operator==(const SpanOperator&) const = default;

 private:
  LpTuple domain_;
  LpTuple codomain_;
};

/// Relative singular-value threshold for domain bases.
inline constexpr double kIndependenceTolerance = 1e-9;
/// Absolute tolerance for "lies in the span" and "agrees with identity" checks,
/// relative to the largest lp-norm involved.
inline constexpr double kSpanTolerance = 1e-9;

/// Disjoint union; atom ids become "<index>/<id>".
MeasureSpace direct_sum_spaces(const std::vector<MeasureSpace>& spaces);

/// Stacks tuples with equal n and p on the direct sum of their spaces; the
/// i-th function is f_i^(1) + ... + f_i^(k) on the disjoint union.
LpTuple direct_sum_tuples(const std::vector<LpTuple>& tuples);

/// l_p-direct sum with the diagonal basis f_i^(1) (+) ... (+) f_i^(k).
/// All operators must share p and n.
SpanOperator oplus_operators(const std::vector<SpanOperator>& ops);

/// Full block-diagonal direct sum S_1 (+) ... (+) S_k on dom(S_1) (+) ... (+) dom(S_k);
/// the basis is the concatenation of the summand bases (n = sum of n_i).
SpanOperator block_sum(const std::vector<SpanOperator>& ops);

/// T o S. Requires every image of S to lie in the span of T's domain basis.
SpanOperator compose_operators(const SpanOperator& outer, const SpanOperator& inner);

/// (f_i (+) h_i) -> (Tf_i (+) h_i).
SpanOperator augment_with_identity(const SpanOperator& op, const LpTuple& aux);

struct StripOptions {
  double tolerance = kSpanTolerance;
  /// Also require the scalar operator norm to be at most 1 (necessary
  /// condition for the identity-summand lemma).
  bool require_contraction = false;
};

/// Given T acting as the identity off the codomain atoms in `kept`, returns S
/// with S(f|_A) = (Tf)|_A. Throws NotIdentitySummandError otherwise.
SpanOperator strip_identity_summand(const SpanOperator& op, const std::unordered_set<std::string>& kept,
                                    const StripOptions& options = {});

/// The operator restricted to span{sum_j coeffs(j, k) f_j}: new basis f * coeffs,
/// new images Tf * coeffs.
SpanOperator restrict_to_subspace(const SpanOperator& op, const Eigen::MatrixXd& coeffs);

/// Inverse map Tf_i -> f_i. Requires the images to be independent.
SpanOperator inverse(const SpanOperator& op);

/// Identity on span of the given tuple.
SpanOperator identity_operator(const LpTuple& basis);

/// Removes a leading "<k>/" tag from every atom id on both sides.
SpanOperator strip_tags(const SpanOperator& op);
MeasureSpace strip_tags(const MeasureSpace& space);

}  // namespace lpdual
