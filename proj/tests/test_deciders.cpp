#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "keysub/deciders.hpp"

using namespace keysub;

namespace {

GradedAdicTopology T(const char* text) { return GradedAdicTopology::parse(text); }

DeciderConfig config_for(PrimeSet primes, Exponent cap) {
  DeciderConfig c;
  c.box = SearchBox::make(std::move(primes), cap);
  return c;
}

// Brute-force restatement of the five properties over the candidate set,
// comparing restrictions and coset spaces only through the finite-quotient
// oracles (never through the closed forms).
struct OracleVerdicts {
  bool key, cokey, relmin, cominimal, injkey;
};

OracleVerdicts oracle_verdicts(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  const auto candidates = coarser_candidates(gamma, config);
  const auto& box = config.box;
  auto same_restriction = [&](const GradedAdicTopology& a, const GradedAdicTopology& b) {
    return oracle_restriction_equals(a, h, restrict(b, h), box) && oracle_restriction_equals(b, h, restrict(a, h), box);
  };
  auto same_cosets = [&](const GradedAdicTopology& a, const GradedAdicTopology& b) {
    return coset_topologies_equal(a, b, h, box).verdict == Verdict::Holds;
  };
  OracleVerdicts v{true, true, true, true, true};
  for (const auto& t : candidates) {
    const bool r = same_restriction(t, gamma), c = same_cosets(t, gamma);
    if (!r) v.relmin = false;
    if (!c) v.cominimal = false;
    if (t != gamma && r) v.key = false;
    if (t != gamma && c) v.cokey = false;
    for (const auto& u : candidates)
      if (t < u && same_restriction(t, u)) v.injkey = false;
  }
  return v;
}

Verdict verdict_of(bool holds) { return holds ? Verdict::Holds : Verdict::Fails; }

}  // namespace

TEST_CASE("decider examples") {
  const auto discrete = GradedAdicTopology::discrete(3);
  const auto key = decide_key(SubgroupSpec::center(), discrete, config_for(PrimeSet{2, 3}, 2));
  CHECK(key.verdict == Verdict::Holds);
  CHECK(key.witnesses.empty());
  REQUIRE(key.box);
  CHECK(key.box->to_string() == "P={2,3}, E=2, L=1296");

  const auto cominimal = decide_cominimal(SubgroupSpec::center(), discrete, config_for(PrimeSet{2}, 1));
  CHECK(cominimal.verdict == Verdict::Fails);
  REQUIRE_FALSE(cominimal.witnesses.empty());
  CHECK(cominimal.witnesses.front() == "gt(n=3; 2^inf, 2^inf)");

  // Two coarser topologies with the same center restriction.
  const auto inj = decide_injkey(SubgroupSpec::center(), discrete, config_for(PrimeSet{2, 3}, 1));
  CHECK(inj.verdict == Verdict::Fails);
  for (const auto& w : inj.witnesses) {
    const auto [a, b] = parse_pair(w);
    CHECK(a != b);
    CHECK(restrict(a, SubgroupSpec::center()) == restrict(b, SubgroupSpec::center()));
  }
  const auto table = restriction_map_table(SubgroupSpec::center(), discrete, config_for(PrimeSet{2, 3}, 1));
  CHECK_FALSE(table.injective);
  CHECK(table.morphism);

  CHECK_THROWS_AS(decide("minimal", SubgroupSpec::center(), discrete, config_for(PrimeSet{2}, 1)), std::invalid_argument);
  CHECK_THROWS_AS(decide_key(SubgroupSpec::center(), T("gt(5^inf, 5^inf)"), config_for(PrimeSet{2}, 1)),
                  std::invalid_argument);
}

TEST_CASE("merson examples") {
  const auto box = SearchBox::make(PrimeSet{2}, 2);
  CHECK(merson_check(T("gt(2^inf, 2^inf)"), T("gt(Omega, Omega)"), SubgroupSpec::center(), box).verdict == Verdict::Vacuous);
  CHECK(merson_check(T("gt(2^inf, 2^inf)"), T("gt(2^inf, 2^inf)"), SubgroupSpec::center(), box).verdict == Verdict::Holds);
  const auto hyp = merson_hypotheses(T("gt(2^inf, 2^inf)"), T("gt(Omega, 2^inf)"), SubgroupSpec::center(), box);
  CHECK(hyp.same_restriction);
  CHECK_FALSE(hyp.same_coset_topology);
}

TEST_CASE("triple examples") {
  const auto m = BiadditiveMap::multiplication(RingSpec::integers());
  CHECK(triple_compatible(ModulusTriple::parse("triple(2^inf; 2^inf; 2^inf)"), m).compatible);
  const auto bad = triple_compatible(ModulusTriple::parse("triple(2^inf; 2^inf; Omega)"), m);
  CHECK_FALSE(bad.compatible);
  CHECK(bad.certificate == "point(x=0; y=1)");
  CHECK(triple_compatible(ModulusTriple::parse("triple(Omega; Omega; Omega)"), m).compatible);

  const auto discrete = ModulusTriple::parse("triple(Omega; Omega; Omega)");
  const auto config = config_for(PrimeSet{2}, 2);
  CHECK(is_minimal_map(m, discrete, config).verdict == Verdict::Holds);
  const auto strong = is_strongly_minimal_map(m, discrete, config);
  CHECK(strong.verdict == Verdict::Fails);
  CHECK(strong.witnesses.front() == "triple(2^inf; 2^inf; 2^inf)");

  const auto w2 = BiadditiveMap::dot_product(RingSpec::integers(), 2);
  CHECK(is_minimal_map(w2, ModulusTriple::parse("triple(Omega, Omega; Omega, Omega; Omega)"), config).verdict ==
        Verdict::Holds);

  CHECK(triple_of(T("gt(2^inf, 3^inf)")).to_literal() == "triple(2^inf; 2^inf; 3^inf)");
  for (const char* text : {"triple(2^inf; 3; Omega)", "triple(Omega,2^inf; 2,3; 1)"})
    CHECK(ModulusTriple::parse(text).to_literal() == text);
  CHECK_THROWS_AS(ModulusTriple::parse("triple(2; 3)"), std::invalid_argument);
}

TEST_CASE("family members are admissible, hausdorff and inside the box") {
  for (int n : {3, 4}) {
    const auto config = config_for(PrimeSet{2, 3}, 1);
    const auto family = hausdorff_family(n, config);
    CHECK(std::set<GradedAdicTopology>(family.begin(), family.end()).size() == family.size());
    for (const auto& t : family) {
      CHECK(satisfies_axioms(t));
      CHECK(is_hausdorff(t).hausdorff);
      CHECK(t.supported_by(config.box.primes));
      CHECK(t.max_finite_exponent() <= config.box.exp_cap);
    }
    const auto discrete = GradedAdicTopology::discrete(n);
    CHECK(coarser_candidates(discrete, config).size() == family.size());
    for (const auto& gamma : family) {
      const auto below = coarser_candidates(gamma, config);
      CHECK(std::find(below.begin(), below.end(), gamma) != below.end());
      for (const auto& t : below) CHECK(is_coarser(t, gamma));
    }
  }
}

TEST_CASE("deciders agree with the brute-force oracle restatement") {
  const auto config = config_for(PrimeSet{2, 3}, 1);
  for (const auto& h : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2),
                        SubgroupSpec::one_param(2, 3)}) {
    for (const auto& gamma : hausdorff_family(3, config)) {
      const auto expected = oracle_verdicts(h, gamma, config);
      const std::pair<const char*, bool> rows[] = {{"key", expected.key},
                                                   {"cokey", expected.cokey},
                                                   {"relmin", expected.relmin},
                                                   {"cominimal", expected.cominimal},
                                                   {"injkey", expected.injkey}};
      for (const auto& [property, holds] : rows) {
        const auto report = decide(property, h, gamma, config);
        CHECK_MESSAGE(report.verdict == verdict_of(holds), property, " ", h.to_string(), " ", gamma.to_literal());
        CHECK((report.verdict == Verdict::Fails) != report.witnesses.empty());
        CHECK(report.witnesses.size() <= config.max_witnesses);
        for (const auto& w : report.witnesses) CHECK(verify_witness(property, h, gamma, w, config));
      }
    }
  }
}

TEST_CASE("witness verification rejects wrong witnesses") {
  const auto config = config_for(PrimeSet{2}, 1);
  const auto discrete = GradedAdicTopology::discrete(3);
  // The discrete topology itself is no cominimality counterexample.
  CHECK_FALSE(verify_witness("cominimal", SubgroupSpec::center(), discrete, "gt(n=3; Omega, Omega)", config));
  // Not Hausdorff.
  CHECK_FALSE(verify_witness("cominimal", SubgroupSpec::center(), discrete, "gt(n=3; 2, 2)", config));
  CHECK(verify_witness("cominimal", SubgroupSpec::center(), discrete, "gt(n=3; 2^inf, 2^inf)", config));
  CHECK_FALSE(verify_witness("injkey", SubgroupSpec::center(), discrete,
                             "pair(gt(n=3; 2^inf, 2^inf); gt(n=3; 2^inf, 2^inf))", config));
}

TEST_CASE("merson instance holds on the full family") {
  const auto config = config_for(PrimeSet{2, 3}, 1);
  for (const auto& h : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2)})
    CHECK(merson_exhaustive(3, h, config).verdict == Verdict::Holds);
}

TEST_CASE("restriction tables satisfy the sup law") {
  const auto config = config_for(PrimeSet{2, 3}, 1);
  for (const auto& h : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2)}) {
    const auto table = restriction_map_table(h, GradedAdicTopology::discrete(3), config);
    CHECK(table.morphism);
    CHECK(table.violations.empty());
    for (const auto& [a, ra] : table.rows) {
      CHECK(ra == restrict(a, h));
      for (const auto& [b, rb] : table.rows) CHECK(sup_topology(ra, rb) == restrict(sup_topology(a, b), h));
    }
  }
}

TEST_CASE("pair literals round-trip") {
  const auto a = T("gt(2^inf, 2^inf)"), b = T("gt(2^inf*3, 2^inf)");
  const auto text = pair_literal(a, b);
  CHECK(text == "pair(gt(n=3; 2^inf, 2^inf); gt(n=3; 2^inf*3, 2^inf))");
  CHECK(parse_pair(text) == std::pair{a, b});
  CHECK_THROWS_AS(parse_pair("pair(gt(2^inf, 2^inf))"), std::invalid_argument);
}

TEST_CASE("deciders are deterministic") {
  const auto config = config_for(PrimeSet{2, 3}, 1);
  const auto a = decide_injkey(SubgroupSpec::center(), GradedAdicTopology::discrete(3), config);
  const auto b = decide_injkey(SubgroupSpec::center(), GradedAdicTopology::discrete(3), config);
  CHECK(a.witnesses == b.witnesses);
  CHECK(a.notes == b.notes);
}
