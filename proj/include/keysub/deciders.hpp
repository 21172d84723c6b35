// Family-restricted deciders.  Every "for every coarser Hausdorff group
// topology" quantifier ranges over the admissible Hausdorff graded adic
// topologies inside a SearchBox (support in P, finite exponents <= E).
// A "fails" verdict carries witnesses that are real topologies and are
// re-verified before being reported; a "holds" verdict is evidence within the
// box only, and says so in its notes.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keysub/heisenberg.hpp"
#include "keysub/oracle.hpp"
#include "keysub/topology.hpp"

namespace keysub {

struct DeciderConfig {
  SearchBox box = SearchBox::make(PrimeSet{2}, 1);
  /// Closure-oracle trials used to certify each enumerated candidate.
  int oracle_trials = 16;
  std::size_t max_witnesses = 3;
  std::uint64_t seed = 1;
};

/// Every admissible Hausdorff topology on UT(n, Z) inside the box, certified
/// by the closure oracle, in enumeration order.
std::vector<GradedAdicTopology> hausdorff_family(int n, const DeciderConfig& config);
/// The members of hausdorff_family coarser than gamma (gamma included).
std::vector<GradedAdicTopology> coarser_candidates(const GradedAdicTopology& gamma, const DeciderConfig& config);

VerdictReport decide_key(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);
VerdictReport decide_cokey(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);
VerdictReport decide_relatively_minimal(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);
VerdictReport decide_cominimal(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);
VerdictReport decide_injkey(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);

/// Dispatch on "key", "cokey", "relmin", "cominimal", "injkey".
VerdictReport decide(std::string_view property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                     const DeciderConfig& config);

/// Whether t1 and t agree on H (subspace) and on G/H (quotient or coset space).
struct MersonHypotheses {
  bool same_restriction;
  bool same_coset_topology;
};
MersonHypotheses merson_hypotheses(const GradedAdicTopology& t1, const GradedAdicTopology& t, const SubgroupSpec& h,
                                   const SearchBox& box);

/// Holds when both hypotheses hold and t1 = t, vacuous when a hypothesis fails,
/// fails (witness: the pair) when both hold with t1 != t.
VerdictReport merson_check(const GradedAdicTopology& t1, const GradedAdicTopology& t, const SubgroupSpec& h,
                           const SearchBox& box);
/// merson_check over every comparable pair of the Hausdorff family.
VerdictReport merson_exhaustive(int n, const SubgroupSpec& h, const DeciderConfig& config);

/// Product-adic topologies (sigma on E, tau on F, nu on A) for a map in the
/// dot-product family.  Literal: `triple(2^inf; 2^inf; Omega)`, with
/// comma-separated coordinates inside the first two slots.
struct ModulusTriple {
  std::vector<ExtModulus> sigma;
  std::vector<ExtModulus> tau;
  ExtModulus nu;

  std::string to_literal() const;
  static ModulusTriple parse(std::string_view text, const PrimeSet* allowed = nullptr);
  friend bool operator==(const ModulusTriple&, const ModulusTriple&) = default;
};

/// The triple a topology on UT(3, Z) = H(m) induces on (E, F, A): (N_1; N_1; N_2).
ModulusTriple triple_of(const GradedAdicTopology& t);

struct CompatibilityResult {
  bool compatible;
  /// For incompatible triples: `point(x=...; y=...)` where continuity breaks.
  std::string certificate;
};
/// w : (E, sigma) x (F, tau) -> (A, nu) is continuous iff nu | sigma_i and
/// nu | tau_i: at (0, e_i) the map is dx -> dx_i.  Positive answers are
/// spot-checked at random points.
CompatibilityResult triple_compatible(const ModulusTriple& triple, const BiadditiveMap& w, std::uint64_t seed = 1,
                                      int spot_checks = 32);

VerdictReport is_minimal_map(const BiadditiveMap& w, const ModulusTriple& original, const DeciderConfig& config);
VerdictReport is_strongly_minimal_map(const BiadditiveMap& w, const ModulusTriple& original, const DeciderConfig& config);

struct MapTable {
  std::vector<std::pair<GradedAdicTopology, GradedAdicTopology>> rows;  // (source, restriction)
  bool morphism = true;
  bool injective = true;
  bool surjective = true;
  std::vector<std::string> violations;
  VerdictReport report;
};
/// r_H over the coarser fragment, with the sup-morphism law on every pair.
MapTable restriction_map_table(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config);

/// `pair(gt(...); gt(...))` and its inverse.
std::string pair_literal(const GradedAdicTopology& a, const GradedAdicTopology& b);
std::pair<GradedAdicTopology, GradedAdicTopology> parse_pair(std::string_view text, const PrimeSet* allowed = nullptr);

/// Re-parses a decider witness and re-checks it against the property's predicate.
bool verify_witness(std::string_view property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                    std::string_view witness, const DeciderConfig& config);

}  // namespace keysub
