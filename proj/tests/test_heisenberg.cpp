#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "keysub/heisenberg.hpp"

using namespace keysub;

namespace {

const RingSpec Z = RingSpec::integers();

HeisenbergElement h(const BiadditiveMap& w, long a, long x, long f) { return h_make(w, {a}, {x}, {f}); }

// Independent oracle for the group law, written directly from the formula.
HeisenbergElement law(const HeisenbergElement& u, const HeisenbergElement& v, const BiadditiveMap& w) {
  const auto& ring = w.ring();
  HeisenbergElement out{Vec(w.dim_a()), Vec(w.dim_e()), Vec(w.dim_f())};
  for (int r = 0; r < w.dim_a(); ++r) {
    BigInt cross = 0;
    for (int p = 0; p < w.dim_e(); ++p)
      for (int q = 0; q < w.dim_f(); ++q) cross += w.coefficient(p, q, r) * v.x[p] * u.f[q];
    out.a[r] = ring.reduce(u.a[r] + v.a[r] + cross);
  }
  for (int p = 0; p < w.dim_e(); ++p) out.x[p] = ring.reduce(u.x[p] + v.x[p]);
  for (int q = 0; q < w.dim_f(); ++q) out.f[q] = ring.reduce(u.f[q] + v.f[q]);
  return out;
}

std::vector<HeisenbergElement> brute_center(const BiadditiveMap& w) {
  const auto all = h_enumerate(w);
  std::vector<HeisenbergElement> out;
  for (const auto& u : all)
    if (std::all_of(all.begin(), all.end(), [&](const auto& v) { return h_mul(u, v, w) == h_mul(v, u, w); })) out.push_back(u);
  return out;
}

}  // namespace

TEST_CASE("group law examples") {
  const auto m = BiadditiveMap::multiplication(Z);
  CHECK(h_mul(h(m, 1, 2, 3), h(m, 4, 5, 6), m) == h(m, 20, 7, 9));
  const auto m5 = BiadditiveMap::multiplication(RingSpec::residues(5));
  CHECK(h_mul(h(m5, 1, 2, 3), h(m5, 4, 5, 6), m5) == h(m5, 0, 2, 4));
  CHECK(h_inv(h(m, 1, 2, 3), m) == h(m, 5, -2, -3));
  CHECK(h_mul(h(m, 1, 2, 3), h(m, 5, -2, -3), m) == h_identity(m));
  const auto c = h_comm(h(m, 0, 2, 3), h(m, 0, 5, 7), m);
  CHECK(c.closed_form == h(m, 1, 0, 0));
  CHECK(c.product_form == h(m, 1, 0, 0));
  CHECK(c.agree);
}

TEST_CASE("isomorphism and action examples") {
  const auto m = BiadditiveMap::multiplication(Z);
  CHECK(to_ut3(h(m, 3, 5, 2), m).to_literal() == "ut(3; 1,2=2; 1,3=3; 2,3=5)");
  CHECK(from_ut3(to_ut3(h(m, 3, 5, 2), m), m) == h(m, 3, 5, 2));
  CHECK(switch_iso(h(m, 1, 2, 3), m) == h(m.switched(), 5, -3, -2));
  const auto [a, x] = nabla_action({3}, {1}, {2}, m);
  CHECK(a == Vec{7});
  CHECK(x == Vec{2});
}

TEST_CASE("separation examples") {
  CHECK(is_separated(BiadditiveMap::multiplication(RingSpec::residues(4))).separated);
  CHECK(is_separated(BiadditiveMap::multiplication(RingSpec::residues(4))).exact);
  const auto zero = is_separated(BiadditiveMap::zero(Z, 1, 1, 1));
  CHECK_FALSE(zero.separated);
  CHECK(zero.witness == Vec{1});
  CHECK(is_separated(BiadditiveMap::dot_product(RingSpec::residues(2), 2)).separated);
  CHECK(is_separated(BiadditiveMap::dot_product(Z, 3)).separated);
}

TEST_CASE("map literals") {
  CHECK(BiadditiveMap::parse("m(Z)") == BiadditiveMap::multiplication(Z));
  CHECK(BiadditiveMap::parse("w_n(Z/4, n=2)") == BiadditiveMap::dot_product(RingSpec::residues(4), 2));
  for (const auto& w : {BiadditiveMap::multiplication(RingSpec::residues(6)), BiadditiveMap::dot_product(Z, 3),
                        BiadditiveMap::zero(Z, 2, 1, 1), BiadditiveMap::from_tensor(Z, 1, 2, 1, {1, 2})})
    CHECK(BiadditiveMap::parse(w.to_string()) == w);
  CHECK(BiadditiveMap::dot_product(Z, 1).is_multiplication());
  CHECK(BiadditiveMap::dot_product(Z, 3).dot_product_dim() == 3);
  CHECK_THROWS_AS(BiadditiveMap::parse("q(Z)"), std::invalid_argument);
  CHECK_THROWS_AS(BiadditiveMap::from_tensor(Z, 1, 1, 1, {1, 2}), std::invalid_argument);

  const auto w2 = BiadditiveMap::dot_product(Z, 2);
  const auto u = h_make(w2, {4}, {1, -2}, {3, 5});
  CHECK(HeisenbergElement::parse(u.to_literal(), w2) == u);
  CHECK_THROWS_AS(HeisenbergElement::parse("h(a=1; x=2; f=3)", w2), std::invalid_argument);
}

TEST_CASE("group law matches the formula oracle and group axioms hold") {
  std::mt19937_64 rng(17);
  for (const auto& w : {BiadditiveMap::multiplication(Z), BiadditiveMap::multiplication(RingSpec::residues(9)),
                        BiadditiveMap::dot_product(Z, 3), BiadditiveMap::dot_product(RingSpec::residues(4), 2),
                        BiadditiveMap::from_tensor(Z, 2, 2, 2, {1, 0, 2, -1, 0, 3, 1, 1})}) {
    for (int t = 0; t < 300; ++t) {
      const auto u = h_random(w, rng), v = h_random(w, rng), x = h_random(w, rng);
      CHECK(h_mul(u, v, w) == law(u, v, w));
      CHECK(h_mul(h_mul(u, v, w), x, w) == h_mul(u, h_mul(v, x, w), w));
      CHECK(h_mul(u, h_inv(u, w), w) == h_identity(w));
      CHECK(h_mul(h_inv(u, w), u, w) == h_identity(w));
      CHECK(h_comm(u, v, w).agree);
      const auto ws = w.switched();
      CHECK(switch_iso(h_mul(u, v, w), w) == h_mul(switch_iso(u, w), switch_iso(v, w), ws));
      CHECK(switch_iso(switch_iso(u, w), ws) == u);
    }
  }
}

TEST_CASE("H(m) is UT(3) exhaustively over Z/4 and on random pairs over Z") {
  const auto m4 = BiadditiveMap::multiplication(RingSpec::residues(4));
  const auto all = h_enumerate(m4);
  REQUIRE(all.size() == 64);
  std::vector<UTMatrix> images;
  for (const auto& u : all) images.push_back(to_ut3(u, m4));
  std::sort(images.begin(), images.end());
  CHECK(std::adjacent_find(images.begin(), images.end()) == images.end());
  for (const auto& u : all)
    for (const auto& v : all) CHECK(to_ut3(h_mul(u, v, m4), m4) == ut_mul(to_ut3(u, m4), to_ut3(v, m4)));

  const auto m = BiadditiveMap::multiplication(Z);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 1000; ++t) {
    const auto u = h_random(m, rng), v = h_random(m, rng);
    CHECK(to_ut3(h_mul(u, v, m), m) == ut_mul(to_ut3(u, m), to_ut3(v, m)));
  }
  CHECK_THROWS_AS(to_ut3(h_identity(BiadditiveMap::dot_product(Z, 2)), BiadditiveMap::dot_product(Z, 2)),
                  std::invalid_argument);
}

TEST_CASE("center is A x 0 x 0 for separated maps") {
  for (const auto& w : {BiadditiveMap::multiplication(RingSpec::residues(4)),
                        BiadditiveMap::dot_product(RingSpec::residues(2), 2)}) {
    REQUIRE(is_separated(w).separated);
    const auto center = brute_center(w);
    CHECK(center.size() == static_cast<std::size_t>(w.ring().modulus().get_ui()));
    for (const auto& u : center) {
      CHECK(std::all_of(u.x.begin(), u.x.end(), [](const BigInt& v) { return v == 0; }));
      CHECK(std::all_of(u.f.begin(), u.f.end(), [](const BigInt& v) { return v == 0; }));
    }
  }
  // The zero map gives an abelian group.
  const auto zero = BiadditiveMap::zero(RingSpec::residues(3), 1, 1, 1);
  CHECK(brute_center(zero).size() == h_enumerate(zero).size());
}
