// The unitriangular group UT(n, K) over K = Z or Z/m.
//
// Entries are 1-based, (i, j) with 1 <= i < j <= n; the level of (i, j) is
// j - i.  Only the strictly upper part is stored: the diagonal is implicitly 1
// and everything below it is 0.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keysub/ring.hpp"

namespace keysub {

class UTMatrix {
 public:
  static UTMatrix identity(int n, RingSpec ring);
  /// Builds from an (i, j) -> value map; unspecified entries are 0.
  static UTMatrix from_entries(int n, RingSpec ring, const std::map<std::pair<int, int>, BigInt>& entries);

  int degree() const noexcept { return n_; }
  const RingSpec& ring() const noexcept { return ring_; }

  const BigInt& at(int i, int j) const;
  void set(int i, int j, BigInt value);
  RingElem entry(int i, int j) const { return RingElem(ring_, at(i, j)); }

  bool is_identity() const;
  /// Entries at levels 1..m vanish, i.e. the matrix lies in UT^m(n, K).
  bool in_filtration(int m) const;

  /// `ut(3; 1,2=2; 1,3=3; 2,3=5)`; zero entries are omitted.
  std::string to_literal() const;
  static UTMatrix parse(std::string_view text, const RingSpec& ring);

  friend bool operator==(const UTMatrix&, const UTMatrix&) = default;
  friend bool operator<(const UTMatrix& a, const UTMatrix& b);

  // Packed storage access, row-major over the strict upper triangle.
  std::size_t packed_size() const noexcept { return entries_.size(); }
  const BigInt& packed(std::size_t k) const { return entries_[k]; }

 private:
  UTMatrix(int n, RingSpec ring);
  std::size_t index(int i, int j) const;

  int n_ = 2;
  RingSpec ring_;
  std::vector<BigInt> entries_;

  friend UTMatrix ut_mul(const UTMatrix&, const UTMatrix&);
  friend UTMatrix ut_inv(const UTMatrix&);
};

UTMatrix ut_mul(const UTMatrix& a, const UTMatrix& b);
/// Level-by-level back substitution: n_ij = -m_ij - sum_{i<k<j} m_ik n_kj.
UTMatrix ut_inv(const UTMatrix& m);
/// I + x E_ij.
UTMatrix transvection(int n, int i, int j, const RingElem& x);
/// A B A^-1 B^-1.
UTMatrix commutator(const UTMatrix& a, const UTMatrix& b);
RingElem projection(const UTMatrix& m, int i, int j);

struct CommutatorIdentityResult {
  RingElem lhs;
  RingElem rhs;
  bool equal;
};

/// Evaluates one of the three commutator/projection identities both ways.
///   1: p_ik([M, e_jk(x)])            vs  x p_ij(M)
///   2: p_ik([e_ij(x), M])            vs  -x p_jk(M^-1)
///   3: p_{n-2,n}([e_{n-2,n-1}(x), M]) vs  x p_{n-1,n}(M), indices forced
CommutatorIdentityResult commutator_identity(int variant, const UTMatrix& m, const RingElem& x, int i, int j, int k);

class SubgroupSpec {
 public:
  enum class Kind { Center, OneParam, Filtration, Derived, GradedCongruence, WholeGroup };

  static SubgroupSpec center() { return SubgroupSpec(Kind::Center); }
  static SubgroupSpec one_param(int i, int j);
  /// UT^m: the first m superdiagonals vanish.
  static SubgroupSpec filtration(int m);
  static SubgroupSpec derived() { return SubgroupSpec(Kind::Derived); }
  /// {M : a_d | m_{i,i+d}}, a_d = 0 forcing the level to vanish.  The closure
  /// condition a_{d+e} | a_d a_e is enforced here.
  static SubgroupSpec graded_congruence(std::vector<BigInt> moduli);
  static SubgroupSpec whole_group() { return SubgroupSpec(Kind::WholeGroup); }

  Kind kind() const noexcept { return kind_; }
  int row() const noexcept { return i_; }
  int col() const noexcept { return j_; }
  int depth() const noexcept { return m_; }
  const std::vector<BigInt>& moduli() const noexcept { return moduli_; }

  /// Throws when the spec cannot live in UT(n).
  void check_degree(int n) const;
  bool is_normal(int n) const;
  /// Center and the corner one-parameter group name the same subgroup.
  bool is_center(int n) const;

  std::string to_string() const;
  /// `center`, `derived`, `whole`, `oneparam(1,2)`, `filtration(2)`, `graded(2,1)`.
  static SubgroupSpec parse(std::string_view text);

  friend bool operator==(const SubgroupSpec&, const SubgroupSpec&) = default;

 private:
  explicit SubgroupSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  int i_ = 0;
  int j_ = 0;
  int m_ = 0;
  std::vector<BigInt> moduli_;
};

bool subgroup_membership(const UTMatrix& m, const SubgroupSpec& s);

/// A generating set: transvections e_ij(g) with g the level generator.
std::vector<UTMatrix> subgroup_generators(int n, const RingSpec& ring, const SubgroupSpec& s);

inline constexpr std::size_t kDefaultEnumerationBudget = std::size_t{1} << 22;

/// All members of `s` in UT(n, Z/m); throws std::length_error over budget.
std::vector<UTMatrix> subgroup_members(int n, const RingSpec& ring, const SubgroupSpec& s,
                                       std::size_t budget = kDefaultEnumerationBudget);

/// All m^{n(n-1)/2} elements of UT(n, Z/m).
std::vector<UTMatrix> enumerate_group(int n, const BigInt& m, std::size_t budget = kDefaultEnumerationBudget);

/// U * H = {u h}, as a sorted duplicate-free list.
std::vector<UTMatrix> saturate(const std::vector<UTMatrix>& u, const SubgroupSpec& h,
                               std::size_t budget = kDefaultEnumerationBudget);

}  // namespace keysub
