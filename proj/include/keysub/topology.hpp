// Graded adic topologies on UT(n, Z) and the lattice calculus on them.
//
// A topology is a tuple (N_1, ..., N_{n-1}) of extended moduli, N_d governing
// superdiagonal level d.  Its basic open subgroups form the chain
//
//   U_k = { M : a_d(k) | m_{i,i+d} for every position },  a_d(k) = capped_part(N_d, k),
//
// with a_d(k) = 0 (the entry must vanish) when N_d is Omega.  Two admissibility
// conditions make the U_k a neighbourhood base of a group topology:
//
//   A1  N_{d+e} | N_d N_e   (products: the level-(d+e) cross term of a product
//                            is a sum of level-d times level-e entries)
//   A2  N_d | N_e, e < d    (conjugation: [e_{1,j}(1), e_{j,1+d}(x)] puts x at level d)
//
// Under A1+A2 every U_k is a normal subgroup.  The same type also carries the
// topologies induced on subgroups, quotients and abelian coordinate groups.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keysub/adic.hpp"
#include "keysub/unitriangular.hpp"

namespace keysub {

class GradedAdicTopology {
 public:
  enum class Carrier {
    Unitriangular,  // gt(n=3; N1, N2): UT(n, Z)
    Subgroup,       // gs(n=4; N2, N3): UT^m(n, Z) with levels m+1..n-1
    Quotient,       // gq(n=4; N1, N2): UT(n, Z) / UT^m(n, Z) with levels 1..m
    Abelian,        // ab(k=2; N, N): Z^k, coordinates independent
  };

  GradedAdicTopology() = default;
  /// A topology on UT(n, Z); requires n - 1 levels.
  GradedAdicTopology(int n, std::vector<ExtModulus> levels);
  static GradedAdicTopology discrete(int n);
  static GradedAdicTopology subgroup(int n, std::vector<ExtModulus> levels);
  static GradedAdicTopology quotient_model(int n, std::vector<ExtModulus> levels);
  static GradedAdicTopology abelian(std::vector<ExtModulus> coordinates);

  Carrier carrier() const noexcept { return carrier_; }
  /// Ambient degree n (0 for abelian carriers).
  int degree() const noexcept { return n_; }
  const std::vector<ExtModulus>& levels() const noexcept { return levels_; }
  /// Level d, 1-based (for Subgroup carriers the first stored level is m+1).
  const ExtModulus& level(int d) const;
  std::size_t size() const noexcept { return levels_.size(); }

  bool supported_by(const PrimeSet& primes) const;
  /// Largest finite exponent appearing in any level.
  Exponent max_finite_exponent() const;

  std::string to_literal() const;
  /// Accepts gt/gs/gq/ab literals; `gt(...)` may omit `n=`.
  static GradedAdicTopology parse(std::string_view text, const PrimeSet* allowed = nullptr);

  friend bool operator==(const GradedAdicTopology&, const GradedAdicTopology&) = default;
  friend bool operator<(const GradedAdicTopology& a, const GradedAdicTopology& b);

 private:
  Carrier carrier_ = Carrier::Unitriangular;
  int n_ = 2;
  std::vector<ExtModulus> levels_{ExtModulus::omega()};
};

enum class Verdict { Holds, Fails, Vacuous };
std::string to_string(Verdict v);

/// The finite box every quantifier ranges over.
struct SearchBox {
  PrimeSet primes;
  Exponent exp_cap = 1;
  /// Modulus L of the finite quotient UT(n, Z/L) used by the oracles.
  BigInt truncation = 0;

  /// Fills in the default truncation and checks v_p(L) >= E + 2 for p in P.
  static SearchBox make(PrimeSet primes, Exponent exp_cap, std::optional<BigInt> truncation = std::nullopt);
  /// Basic subgroups are resolved up to this index: infinite exponents are capped here.
  Exponent chain_length() const { return exp_cap + 1; }
  std::string to_string() const;
};

/// max(2, (prod P)^{E+2}).
BigInt default_truncation(const PrimeSet& primes, Exponent exp_cap);

struct VerdictReport {
  std::string property;
  std::string subject;
  std::string gamma;
  Verdict verdict = Verdict::Holds;
  /// Re-parseable literals (topologies, pairs, triples, or matrix certificates).
  std::vector<std::string> witnesses;
  std::optional<SearchBox> box;
  std::vector<std::string> notes;
};

/// The moduli a_d(k) of U_k, one per stored level (0 for Omega).
std::vector<BigInt> basic_moduli(const GradedAdicTopology& t, Exponent k);

/// M lies in U(a): a_d | m_{i,i+d} (gcd(a_d, L) over Z/L; 0 forcing the entry to vanish).
bool in_graded(const UTMatrix& m, const std::vector<BigInt>& moduli);

/// Symbolic A1/A2 check; `reason` receives the first violated instance.
bool satisfies_axioms(const GradedAdicTopology& t, std::string* reason = nullptr);

/// A finite certificate that some U_k is not a neighbourhood base element of
/// any group topology: `left * right` (A1) or `right * left * right^-1` (A2)
/// leaves U_k although both inputs lie in U_{k'} for every k' searched.
struct ClosureCounterexample {
  enum class Kind { Product, Conjugation };
  Kind kind;
  Exponent k;
  std::vector<BigInt> moduli;  // of U_k
  UTMatrix left;
  UTMatrix right;
  UTMatrix result;

  std::string to_string() const;
  /// Recomputes `result` over Z and checks the membership claims.
  bool verify() const;
};

std::optional<ClosureCounterexample> find_axiom_counterexample(const GradedAdicTopology& t);

struct ValidateOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  /// Modulus of the oracle's finite quotient; default (prod support)^{2E+3}.
  std::optional<BigInt> truncation;
};

/// Symbolic axioms plus a randomized closure oracle (products, inverses and
/// conjugates of chain members stay in the chain member) in UT(n, Z/L).  A
/// symbolic acceptance that the oracle refutes throws std::logic_error.
VerdictReport validate(const GradedAdicTopology& t, const ValidateOptions& options = {});

bool is_coarser(const GradedAdicTopology& t1, const GradedAdicTopology& t2);
/// Componentwise lcm.
GradedAdicTopology sup_topology(const GradedAdicTopology& t1, const GradedAdicTopology& t2);

struct HausdorffResult {
  bool hausdorff;
  /// For non-Hausdorff: the first finite level and an element in every U_k.
  int level = 0;
  std::string witness;
};
/// Hausdorff iff every level is infinite or Omega: a finite N_d leaves
/// I + N_d E_{1,1+d} inside every basic subgroup.
HausdorffResult is_hausdorff(const GradedAdicTopology& t);

/// Subspace topology on a subgroup: Center / OneParam(i,j) -> ab(k=1; N_{j-i}),
/// Filtration(m) and Derived (= Filtration(1)) -> gs(...), WholeGroup -> t.
GradedAdicTopology restrict(const GradedAdicTopology& t, const SubgroupSpec& s);

/// Quotient topology by a normal subgroup UT^m: levels 1..m survive; m = 1 is
/// the abelian Z^{n-1} with every coordinate N_1.
GradedAdicTopology quotient(const GradedAdicTopology& t, const SubgroupSpec& s);

/// Extension of sigma on the center: (N_1, ..., N_{n-2}, gcd(N_{n-1}, sigma)).
/// Requires sigma | N_{n-1}; the restriction/quotient identities are asserted.
GradedAdicTopology extension_topology(const GradedAdicTopology& gamma, const ExtModulus& sigma);

}  // namespace keysub
