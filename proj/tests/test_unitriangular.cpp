#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "keysub/unitriangular.hpp"

using namespace keysub;

namespace {

const RingSpec Z = RingSpec::integers();

using Dense = std::vector<std::vector<BigInt>>;

// Independent oracle: full n x n matrices, schoolbook product, then reduction.
Dense dense(const UTMatrix& m) {
  const int n = m.degree();
  Dense d(n, std::vector<BigInt>(n, 0));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 1;
    for (int j = i + 1; j < n; ++j) d[i][j] = m.at(i + 1, j + 1);
  }
  return d;
}

Dense dense_mul(const Dense& a, const Dense& b, const RingSpec& ring) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
      c[i][j] = ring.reduce(c[i][j]);
    }
  return c;
}

UTMatrix random_ut(int n, const RingSpec& ring, std::mt19937_64& rng) {
  auto m = UTMatrix::identity(n, ring);
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) m.set(i, j, random_value(ring, rng));
  return m;
}

UTMatrix m235() { return UTMatrix::from_entries(3, Z, {{{1, 2}, 2}, {{1, 3}, 3}, {{2, 3}, 5}}); }

RingElem z(long v) { return RingElem(Z, v); }

std::vector<RingSpec> rings() { return {Z, RingSpec::residues(2), RingSpec::residues(4), RingSpec::residues(6), RingSpec::residues(9)}; }

// Subgroup generated by `gens` inside a finite UT(n, Z/m), by closure.
std::set<UTMatrix> generated(const std::vector<UTMatrix>& gens, int n, const RingSpec& ring) {
  std::set<UTMatrix> group{UTMatrix::identity(n, ring)};
  std::vector<UTMatrix> frontier{UTMatrix::identity(n, ring)};
  while (!frontier.empty()) {
    std::vector<UTMatrix> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        auto p = ut_mul(g, s);
        if (group.insert(p).second) next.push_back(p);
      }
    frontier = std::move(next);
  }
  return group;
}

}  // namespace

TEST_CASE("product, inverse and commutator examples") {
  const auto p = ut_mul(transvection(3, 1, 2, z(2)), transvection(3, 2, 3, z(5)));
  CHECK(p.at(1, 2) == 2);
  CHECK(p.at(2, 3) == 5);
  CHECK(p.at(1, 3) == 10);
  CHECK(projection(p, 1, 3).value() == 10);

  const auto inv = ut_inv(m235());
  CHECK(inv.at(1, 2) == -2);
  CHECK(inv.at(1, 3) == 7);
  CHECK(inv.at(2, 3) == -5);
  CHECK(ut_mul(m235(), inv).is_identity());

  const auto e23 = transvection(3, 2, 3, z(5));
  CHECK(e23.at(2, 3) == 5);
  CHECK(e23.at(1, 2) == 0);
  CHECK(e23.at(1, 3) == 0);

  CHECK(commutator(transvection(3, 1, 2, z(1)), transvection(3, 2, 3, z(1))) == transvection(3, 1, 3, z(1)));
  CHECK(projection(transvection(3, 1, 3, z(7)), 1, 3).value() == 7);
  CHECK(projection(UTMatrix::identity(3, Z), 1, 2).value() == 0);
}

TEST_CASE("commutator/projection identity examples") {
  const auto v1 = commutator_identity(1, m235(), z(4), 1, 2, 3);
  CHECK(v1.lhs.value() == 8);
  CHECK(v1.rhs.value() == 8);
  CHECK(v1.equal);
  const auto v2 = commutator_identity(2, m235(), z(4), 1, 2, 3);
  CHECK(v2.lhs.value() == 20);
  CHECK(v2.rhs.value() == 20);
  const auto v3 = commutator_identity(3, m235(), z(2), 1, 2, 3);
  CHECK(v3.lhs.value() == 10);
  CHECK(v3.rhs.value() == 10);

  // Oracle for variant 1: the (1,3) entry of the dense commutator.
  const auto c = commutator(m235(), transvection(3, 2, 3, z(4)));
  const auto d = dense_mul(dense_mul(dense(m235()), dense(transvection(3, 2, 3, z(4))), Z),
                           dense_mul(dense(ut_inv(m235())), dense(transvection(3, 2, 3, z(-4))), Z), Z);
  CHECK(d[0][2] == c.at(1, 3));
  CHECK(d[0][2] == 8);

  CHECK_THROWS_AS(commutator_identity(1, m235(), z(1), 2, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(commutator_identity(4, m235(), z(1), 1, 2, 3), std::invalid_argument);
}

TEST_CASE("product agrees with the dense oracle") {
  std::mt19937_64 rng(5);
  for (const auto& ring : rings())
    for (int n = 2; n <= 6; ++n)
      for (int t = 0; t < 60; ++t) {
        const auto a = random_ut(n, ring, rng), b = random_ut(n, ring, rng);
        CHECK(dense(ut_mul(a, b)) == dense_mul(dense(a), dense(b), ring));
      }
}

TEST_CASE("group axioms and identity suites on random samples") {
  std::mt19937_64 rng(9);
  for (const auto& ring : rings())
    for (int n = 2; n <= 6; ++n) {
      const auto id = UTMatrix::identity(n, ring);
      for (int t = 0; t < 60; ++t) {
        const auto a = random_ut(n, ring, rng), b = random_ut(n, ring, rng), c = random_ut(n, ring, rng);
        CHECK(ut_mul(ut_mul(a, b), c) == ut_mul(a, ut_mul(b, c)));
        CHECK(ut_mul(a, id) == a);
        CHECK(ut_mul(id, a) == a);
        CHECK(ut_mul(a, ut_inv(a)).is_identity());
        CHECK(ut_mul(ut_inv(a), a).is_identity());
        CHECK(ut_inv(ut_mul(a, b)) == ut_mul(ut_inv(b), ut_inv(a)));
        CHECK(commutator(a, b).in_filtration(1));
        if (n >= 3) {
          const RingElem x(ring, random_value(ring, rng));
          std::vector<int> idx(n);
          for (int i = 0; i < n; ++i) idx[i] = i + 1;
          std::shuffle(idx.begin(), idx.end(), rng);
          std::sort(idx.begin(), idx.begin() + 3);
          CHECK(commutator_identity(1, a, x, idx[0], idx[1], idx[2]).equal);
          CHECK(commutator_identity(2, a, x, idx[0], idx[1], idx[2]).equal);
          CHECK(commutator_identity(3, a, x, n - 2, n - 1, n).equal);
        }
      }
    }
}

TEST_CASE("matrix literals round-trip") {
  CHECK(m235().to_literal() == "ut(3; 1,2=2; 1,3=3; 2,3=5)");
  CHECK(UTMatrix::parse("ut(3; 1,2=2; 1,3=3; 2,3=5)", Z) == m235());
  CHECK(UTMatrix::parse("ut(3)", Z).is_identity());
  CHECK(UTMatrix::parse("ut(3; 1,2=7)", RingSpec::residues(4)).at(1, 2) == 3);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_ut(5, Z, rng);
    CHECK(UTMatrix::parse(a.to_literal(), Z) == a);
  }
  for (const char* bad : {"ut(3; 2,1=4)", "ut(3; 1,4=1)", "ut(1)", "mat(3)", "ut(3; 1,2)", "ut(3; 1,2=x)"})
    CHECK_THROWS_AS(UTMatrix::parse(bad, Z), std::invalid_argument);
}

TEST_CASE("group enumeration sizes") {
  CHECK(enumerate_group(3, 2).size() == 8);
  CHECK(enumerate_group(3, 4).size() == 64);
  CHECK(enumerate_group(4, 2).size() == 64);
  CHECK_THROWS_AS(enumerate_group(5, 4, 1000), std::length_error);
}

TEST_CASE("membership examples") {
  CHECK(subgroup_membership(transvection(3, 1, 3, z(7)), SubgroupSpec::center()));
  CHECK_FALSE(subgroup_membership(transvection(3, 1, 2, z(1)), SubgroupSpec::derived()));
  CHECK_FALSE(subgroup_membership(m235(), SubgroupSpec::graded_congruence({2, 1})));
  CHECK(subgroup_membership(transvection(3, 1, 2, z(4)), SubgroupSpec::graded_congruence({2, 1})));
  CHECK(subgroup_membership(transvection(4, 2, 3, z(4)), SubgroupSpec::one_param(2, 3)));
  CHECK_FALSE(subgroup_membership(transvection(4, 1, 3, z(4)), SubgroupSpec::one_param(2, 3)));
}

TEST_CASE("subgroup literals") {
  for (const char* text : {"center", "derived", "whole", "oneparam(1,2)", "filtration(2)", "graded(2,1)"})
    CHECK(SubgroupSpec::parse(text).to_string() == text);
  CHECK_THROWS_AS(SubgroupSpec::parse("oneparam(2,1)"), std::invalid_argument);
  CHECK_THROWS_AS(SubgroupSpec::parse("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(SubgroupSpec::one_param(1, 4).check_degree(3), std::invalid_argument);
  // 2 * 2 is not divisible by 8: not closed under products.
  CHECK_THROWS_AS(SubgroupSpec::graded_congruence({2, 8}), std::invalid_argument);
  CHECK(SubgroupSpec::one_param(1, 3).is_center(3));
  CHECK_FALSE(SubgroupSpec::one_param(1, 3).is_center(4));
}

TEST_CASE("center equals brute-force centralizer of the group") {
  for (auto [n, m] : {std::pair{3, 4}, std::pair{4, 2}, std::pair{3, 6}}) {
    const auto ring = RingSpec::residues(m);
    const auto all = enumerate_group(n, m);
    std::vector<UTMatrix> central;
    for (const auto& a : all)
      if (std::all_of(all.begin(), all.end(), [&](const UTMatrix& b) { return ut_mul(a, b) == ut_mul(b, a); }))
        central.push_back(a);
    auto members = subgroup_members(n, ring, SubgroupSpec::center());
    std::sort(central.begin(), central.end());
    std::sort(members.begin(), members.end());
    CHECK(central == members);
    CHECK(members.size() == static_cast<std::size_t>(m));
  }
}

TEST_CASE("derived subgroup equals the closure of all commutators") {
  for (auto [n, m] : {std::pair{3, 4}, std::pair{4, 2}}) {
    const auto ring = RingSpec::residues(m);
    const auto all = enumerate_group(n, m);
    std::set<UTMatrix> commutators;
    for (const auto& a : all)
      for (const auto& b : all) commutators.insert(commutator(a, b));
    const auto closure = generated({commutators.begin(), commutators.end()}, n, ring);
    const auto members = subgroup_members(n, ring, SubgroupSpec::derived());
    CHECK(closure == std::set<UTMatrix>(members.begin(), members.end()));
  }
}

TEST_CASE("generators generate the members") {
  const auto ring = RingSpec::residues(4);
  for (const auto& s : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2),
                        SubgroupSpec::filtration(2), SubgroupSpec::graded_congruence({2, 2, 1}), SubgroupSpec::whole_group()}) {
    const auto members = subgroup_members(4, ring, s);
    const auto closure = generated(subgroup_generators(4, ring, s), 4, ring);
    CHECK(closure == std::set<UTMatrix>(members.begin(), members.end()));
    for (const auto& g : members) CHECK(subgroup_membership(g, s));
  }
}

TEST_CASE("normal subgroups are closed under conjugation") {
  const auto ring = RingSpec::residues(2);
  const auto all = enumerate_group(4, 2);
  for (const auto& s : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::filtration(2),
                        SubgroupSpec::one_param(1, 2), SubgroupSpec::one_param(2, 3)}) {
    bool closed = true;
    for (const auto& h : subgroup_members(4, ring, s))
      for (const auto& g : all)
        if (!subgroup_membership(ut_mul(ut_mul(g, h), ut_inv(g)), s)) closed = false;
    CHECK(closed == s.is_normal(4));
  }
}

TEST_CASE("saturation examples") {
  const auto z4 = RingSpec::residues(4);
  const auto line = saturate({UTMatrix::identity(3, z4)}, SubgroupSpec::one_param(1, 2));
  REQUIRE(line.size() == 4);
  for (const auto& m : line) CHECK(subgroup_membership(m, SubgroupSpec::one_param(1, 2)));

  const auto base = subgroup_members(3, z4, SubgroupSpec::graded_congruence({2, 2}));
  const auto sat = saturate(base, SubgroupSpec::center());
  std::vector<UTMatrix> expected;
  for (const auto& m : enumerate_group(3, 4))
    if (m.at(1, 2) % 2 == 0 && m.at(2, 3) % 2 == 0) expected.push_back(m);
  std::sort(expected.begin(), expected.end());
  CHECK(sat == expected);

  CHECK(saturate({}, SubgroupSpec::center()).empty());
}
