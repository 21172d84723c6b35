#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "keysub/ring.hpp"

using namespace keysub;

TEST_CASE("ring arithmetic examples") {
  const auto z12 = RingSpec::residues(12);
  const RingElem five(z12, 5), nine(z12, 9);
  CHECK(ring_arith(RingOp::Add, five, &nine).value() == 2);
  const RingElem a(RingSpec::integers(), -3), b(RingSpec::integers(), 4);
  CHECK(ring_arith(RingOp::Mul, a, &b).value() == -12);
  CHECK(ring_arith(RingOp::Neg, RingElem(RingSpec::residues(7), 0)).value() == 0);
}

TEST_CASE("reduction examples") {
  CHECK(reduce_hom(RingElem(RingSpec::integers(), 17), 5).value() == 2);
  CHECK(reduce_hom(RingElem(RingSpec::integers(), -1), 4).value() == 3);
  CHECK(reduce_hom(RingElem(RingSpec::integers(), 0), 9).value() == 0);
  CHECK(reduce_hom(RingElem(RingSpec::integers(), -1), 4).spec() == RingSpec::residues(4));
}

TEST_CASE("element enumeration") {
  const auto z3 = enumerate_elements(RingSpec::residues(3));
  REQUIRE(z3.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(z3[i].value() == i);
  CHECK(enumerate_elements(RingSpec::residues(2)).size() == 2);
  CHECK_THROWS_AS(enumerate_elements(RingSpec::integers()), std::invalid_argument);
}

TEST_CASE("ring literals") {
  CHECK(RingSpec::parse("Z") == RingSpec::integers());
  CHECK(RingSpec::parse("Z/12") == RingSpec::residues(12));
  CHECK(RingSpec::parse("Z/12").to_string() == "Z/12");
  for (const char* bad : {"", "Q", "Z/", "Z/1", "Z/0", "Z/-3", "Z/x"}) CHECK_THROWS_AS(RingSpec::parse(bad), std::invalid_argument);
  CHECK_THROWS_AS(RingSpec::residues(1), std::invalid_argument);
}

TEST_CASE("mixing rings is rejected") {
  const RingElem a(RingSpec::residues(4), 1), b(RingSpec::residues(6), 1);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("reduction is a ring homomorphism") {
  std::mt19937_64 rng(11);
  for (long m : {2L, 4L, 6L, 9L, 12L}) {
    const auto zm = RingSpec::residues(m);
    for (int t = 0; t < 500; ++t) {
      const RingElem x(RingSpec::integers(), random_value(RingSpec::integers(), rng, 1000));
      const RingElem y(RingSpec::integers(), random_value(RingSpec::integers(), rng, 1000));
      CHECK(reduce_hom(x + y, m) == reduce_hom(x, m) + reduce_hom(y, m));
      CHECK(reduce_hom(x * y, m) == reduce_hom(x, m) * reduce_hom(y, m));
      CHECK(reduce_hom(-x, m) == -reduce_hom(x, m));
      const auto r = reduce_hom(x, m).value();
      CHECK(r >= 0);
      CHECK(r < m);
      CHECK((x.value() - r) % m == 0);
    }
    CHECK(reduce_hom(RingElem(RingSpec::integers(), 1), m) == RingElem(zm, 1));
  }
}

TEST_CASE("ring axioms on Z/6 exhaustively") {
  const auto all = enumerate_elements(RingSpec::residues(6));
  const RingElem zero(RingSpec::residues(6), 0), one(RingSpec::residues(6), 1);
  for (const auto& a : all) {
    CHECK(a + zero == a);
    CHECK(a * one == a);
    CHECK(a + (-a) == zero);
    for (const auto& b : all) {
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      for (const auto& c : all) {
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
      }
    }
  }
}

TEST_CASE("random values stay in range") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_value(RingSpec::residues(9), rng);
    CHECK(v >= 0);
    CHECK(v < 9);
    const auto z = random_value(RingSpec::integers(), rng, 7);
    CHECK(z >= -7);
    CHECK(z <= 7);
  }
}
