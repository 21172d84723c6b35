// Generalized Heisenberg groups H(w) = (A + E) x| F for biadditive maps
// w : E x F -> A on free modules E = K^e, F = K^f, A = K^a, given by
// structure constants: w(x, y)_r = sum_{p,q} c[p][q][r] x_p y_q.
//
// Group law: (a1, x1, f1)(a2, x2, f2) = (a1 + a2 + w(x2, f1), x1 + x2, f1 + f2).

#pragma once

#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keysub/ring.hpp"
#include "keysub/unitriangular.hpp"

namespace keysub {

using Vec = std::vector<BigInt>;

class BiadditiveMap {
 public:
  /// m : K x K -> K, (x, y) -> xy.
  static BiadditiveMap multiplication(RingSpec ring);
  /// w_n : K^n x K^n -> K, the dot product.
  static BiadditiveMap dot_product(RingSpec ring, int n);
  static BiadditiveMap zero(RingSpec ring, int e, int f, int a);
  /// `coefficients` is indexed [p][q][r] flattened row-major.
  static BiadditiveMap from_tensor(RingSpec ring, int e, int f, int a, Vec coefficients);

  const RingSpec& ring() const noexcept { return ring_; }
  int dim_e() const noexcept { return e_; }
  int dim_f() const noexcept { return f_; }
  int dim_a() const noexcept { return a_; }
  const BigInt& coefficient(int p, int q, int r) const;

  bool is_multiplication() const;
  /// Dimension of the dot-product family member, or 0.
  int dot_product_dim() const;

  /// w(x, y), x in E, y in F.
  Vec evaluate(const Vec& x, const Vec& y) const;

  /// The transposed map (y, x) -> w(x, y) : F x E -> A.
  BiadditiveMap switched() const;

  /// `m(Z)`, `w_n(Z/4, n=2)`; other maps print as `tensor(...)`.
  std::string to_string() const;
  static BiadditiveMap parse(std::string_view text);

  friend bool operator==(const BiadditiveMap&, const BiadditiveMap&) = default;

 private:
  BiadditiveMap(RingSpec ring, int e, int f, int a);

  RingSpec ring_;
  int e_ = 1;
  int f_ = 1;
  int a_ = 1;
  Vec c_;
};

struct HeisenbergElement {
  Vec a;  // A-component (central)
  Vec x;  // E-component
  Vec f;  // F-component

  /// `h(a=1; x=2; f=3)`; vector components are comma-separated.
  std::string to_literal() const;
  static HeisenbergElement parse(std::string_view text, const BiadditiveMap& w);

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
  friend bool operator<(const HeisenbergElement& u, const HeisenbergElement& v);
};

HeisenbergElement h_identity(const BiadditiveMap& w);
/// Reduces and shape-checks `u` against `w`.
HeisenbergElement h_make(const BiadditiveMap& w, Vec a, Vec x, Vec f);
HeisenbergElement h_mul(const HeisenbergElement& u1, const HeisenbergElement& u2, const BiadditiveMap& w);
/// (-a + w(x, f), -x, -f).
HeisenbergElement h_inv(const HeisenbergElement& u, const BiadditiveMap& w);

struct CommutatorResult {
  HeisenbergElement product_form;  // u1 u2 u1^-1 u2^-1
  HeisenbergElement closed_form;   // (w(x2, f1) - w(x1, f2), 0, 0)
  bool agree;
};
CommutatorResult h_comm(const HeisenbergElement& u1, const HeisenbergElement& u2, const BiadditiveMap& w);

struct SeparationVerdict {
  bool separated;
  /// False when the search was bounded (ring Z).
  bool exact;
  /// When not separated: "E" if a nonzero x kills all of F, "F" dually.
  std::string witness_side;
  Vec witness;
};
/// Exhaustive over nonzero points of E and F (over [-bound, bound] for Z);
/// by linearity it suffices to test against unit vectors on the other side.
SeparationVerdict is_separated(const BiadditiveMap& w, long search_bound = 3);

/// For w = m: f -> (1,2), x -> (2,3), a -> (1,3).
UTMatrix to_ut3(const HeisenbergElement& u, const BiadditiveMap& w);
HeisenbergElement from_ut3(const UTMatrix& m, const BiadditiveMap& w);

/// (a, x, f) -> (w(x, f) - a, -f, -x), an element of H(w.switched()).
HeisenbergElement switch_iso(const HeisenbergElement& u, const BiadditiveMap& w);

/// f . (a, x) = (a + w(x, f), x).
std::pair<Vec, Vec> nabla_action(const Vec& f, const Vec& a, const Vec& x, const BiadditiveMap& w);

HeisenbergElement h_random(const BiadditiveMap& w, std::mt19937_64& rng, long bound = 50);
/// Every element over a finite ring; throws std::length_error over budget.
std::vector<HeisenbergElement> h_enumerate(const BiadditiveMap& w, std::size_t budget = std::size_t{1} << 20);

}  // namespace keysub
