// Finite-quotient oracles.  Every closed form of the topology engine is
// re-derived here from explicit subsets of UT(n, Z/L): intersections U_k ∩ S
// for subspace topologies, saturations U_k·H for quotient and coset
// topologies.  Filters are compared cofinally over the chain U_0 ⊇ ... ⊇ U_K,
// K = exp_cap + 1; L carries one more power of each prime than the chain
// resolves, so Omega (the entry vanishes) stays distinguishable from p^inf.

#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "keysub/topology.hpp"
#include "keysub/unitriangular.hpp"

namespace keysub {

/// Per-position divisibility constraints {M : c_ij | m_ij} in UT(n, Z/L),
/// stored in packed (row-major upper-triangle) order; 0 forces the entry to 0.
struct PositionBox {
  int n = 2;
  std::vector<BigInt> moduli;

  static PositionBox graded(int n, const std::vector<BigInt>& level_moduli);
  bool contains(const UTMatrix& m) const;
  /// The transvections e_ij(c_ij) (skipping those that vanish mod L).
  std::vector<UTMatrix> generators(const RingSpec& ring) const;
  /// B·g ⊆ B, decided exactly from the moduli.
  bool right_closed_under(int i, int j, const BigInt& g, const RingSpec& ring) const;
};

/// Membership in saturations U(a)·H inside UT(n, Z/L), memoized per
/// (generator, a).  U(a) must be a normal subgroup, which admissible chain
/// members are; then U(a)·H is a subgroup and containment reduces to
/// generators.
class SaturationOracle {
 public:
  SaturationOracle(int n, const BigInt& truncation, const SubgroupSpec& h,
                   std::size_t budget = kDefaultEnumerationBudget);

  const RingSpec& ring() const noexcept { return ring_; }
  int degree() const noexcept { return n_; }

  /// M ∈ U(a)·H: some h ∈ H has M h^-1 ∈ U(a).
  bool contains(const std::vector<BigInt>& moduli, const UTMatrix& m);
  /// U(a1)·H ⊆ U(a2)·H.
  bool saturation_subset(const std::vector<BigInt>& a1, const std::vector<BigInt>& a2);

  std::size_t queries() const noexcept { return queries_; }

 private:
  int n_;
  RingSpec ring_;
  std::vector<UTMatrix> h_inverses_;
  std::map<std::tuple<int, int, BigInt, std::vector<BigInt>>, bool> memo_;
  std::map<std::pair<std::vector<BigInt>, UTMatrix>, bool> membership_memo_;
  std::size_t queries_ = 0;
};

/// Chain moduli of `t` reduced into Z/L, k = 0..box.chain_length().  Throws
/// when `t` leaves the box.
std::vector<std::vector<BigInt>> truncated_chain(const GradedAdicTopology& t, const SearchBox& box);

/// Coset topologies of t1 and t2 on G/H agree at truncation L.
VerdictReport coset_topologies_equal(const GradedAdicTopology& t1, const GradedAdicTopology& t2, const SubgroupSpec& h,
                                     const SearchBox& box);
/// Same comparison against a caller-owned oracle (lets deciders share memo tables).
bool coset_filters_equal(SaturationOracle& oracle, const GradedAdicTopology& t1, const GradedAdicTopology& t2,
                         const SearchBox& box);

/// restrict(t, s) against the explicit intersections U_k ∩ S.
VerdictReport oracle_restrict_check(const GradedAdicTopology& t, const SubgroupSpec& s, const SearchBox& box);
/// The restriction's basic subsets computed by the oracle equal those of `expected`.
bool oracle_restriction_equals(const GradedAdicTopology& t, const SubgroupSpec& s, const GradedAdicTopology& expected,
                               const SearchBox& box);

/// quotient(t, s) for normal s against the saturations U_k·S.
/// `shared` (built for s at the box truncation) lets repeated checks reuse memo tables.
VerdictReport oracle_quotient_check(const GradedAdicTopology& t, const SubgroupSpec& s, const SearchBox& box,
                                    SaturationOracle* shared = nullptr);

/// (t|_O)/I versus (t/I)|_{O/I} for inner ≤ outer, as explicit subset
/// families of `outer` in UT(n, Z/L).
VerdictReport rd_identity_check(const SubgroupSpec& inner, const SubgroupSpec& outer, const GradedAdicTopology& t,
                                const SearchBox& box);

}  // namespace keysub
