#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "keysub/oracle.hpp"
#include "keysub/topology.hpp"

using namespace keysub;

namespace {

GradedAdicTopology T(const char* text) { return GradedAdicTopology::parse(text); }
ExtModulus M(const char* text) { return ExtModulus::parse(text); }

// Every tuple of box moduli on UT(n) satisfying the axioms.
std::vector<GradedAdicTopology> admissible(int n, const PrimeSet& primes, Exponent cap) {
  const auto moduli = enumerate_moduli(primes, cap, true);
  std::vector<GradedAdicTopology> out;
  std::vector<std::size_t> digits(n - 1, 0);
  while (true) {
    std::vector<ExtModulus> levels;
    for (auto d : digits) levels.push_back(moduli[d]);
    GradedAdicTopology t(n, levels);
    if (satisfies_axioms(t)) out.push_back(t);
    std::size_t pos = digits.size();
    while (pos > 0 && ++digits[pos - 1] == moduli.size()) digits[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

// Independent restatement of the axioms, straight from the divisibility conditions.
bool axioms_oracle(const GradedAdicTopology& t) {
  const int levels = static_cast<int>(t.size());
  for (int d = 1; d <= levels; ++d)
    for (int e = 1; e <= levels; ++e) {
      if (d + e <= levels && !ext_divides(t.level(d + e), ext_product(t.level(d), t.level(e)))) return false;
      if (e < d && !ext_divides(t.level(d), t.level(e))) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("validation examples") {
  CHECK(validate(T("gt(n=3; Omega, Omega)")).verdict == Verdict::Holds);
  CHECK(validate(T("gt(n=3; 2^inf, 2^inf)")).verdict == Verdict::Holds);
  const auto bad = validate(T("gt(n=3; 2^inf, Omega)"));
  REQUIRE(bad.verdict == Verdict::Fails);
  CHECK(bad.witnesses.front() == "ut(3; 1,2=2) * ut(3; 2,3=2) = ut(3; 1,2=2; 1,3=4; 2,3=2) notin U(2,0)");
  const auto cex = find_axiom_counterexample(T("gt(n=3; 2^inf, Omega)"));
  REQUIRE(cex);
  CHECK(cex->verify());
  CHECK(cex->result.at(1, 3) == 4);
}

TEST_CASE("coarser and sup examples") {
  CHECK(is_coarser(T("gt(2^inf, 2^inf)"), T("gt(Omega, Omega)")));
  CHECK(sup_topology(T("gt(2^inf, 2^inf)"), T("gt(3^inf, 3^inf)")) == T("gt(2^inf*3^inf, 2^inf*3^inf)"));
  CHECK(is_coarser(T("gt(2^3, 2^inf)"), T("gt(2^inf, 2^inf)")));
  CHECK_FALSE(is_coarser(T("gt(2^inf, 2^inf)"), T("gt(2^3, 2^inf)")));
}

TEST_CASE("hausdorff examples") {
  CHECK(is_hausdorff(T("gt(2^inf, 2^inf)")).hausdorff);
  CHECK(is_hausdorff(T("gt(Omega, Omega)")).hausdorff);
  const auto r = is_hausdorff(T("gt(2^3, 2^inf)"));
  CHECK_FALSE(r.hausdorff);
  CHECK(r.level == 1);
  CHECK(r.witness == "ut(3; 1,2=8)");
  // The witness survives every basic subgroup.
  const auto w = UTMatrix::parse(r.witness, RingSpec::integers());
  for (Exponent k = 0; k < 12; ++k) CHECK(in_graded(w, basic_moduli(T("gt(2^3, 2^inf)"), k)));
}

TEST_CASE("restriction examples") {
  CHECK(restrict(T("gt(2^inf, 3^inf)"), SubgroupSpec::center()) == T("ab(k=1; 3^inf)"));
  CHECK(restrict(T("gt(Omega, Omega)"), SubgroupSpec::one_param(1, 2)) == T("ab(k=1; Omega)"));
  const auto derived = restrict(T("gt(2^inf, 2^inf, 2^inf)"), SubgroupSpec::derived());
  CHECK(derived == T("gs(n=4; 2^inf, 2^inf)"));
  CHECK(oracle_restrict_check(T("gt(2^inf, 2^inf, 2^inf)"), SubgroupSpec::derived(), SearchBox::make(PrimeSet{2}, 1)).verdict ==
        Verdict::Holds);
  CHECK(oracle_restrict_check(T("gt(2^inf, 3^inf)"), SubgroupSpec::center(), SearchBox::make(PrimeSet{2, 3}, 1)).verdict ==
        Verdict::Holds);
  CHECK(restrict(T("gt(2^inf, 2^inf)"), SubgroupSpec::whole_group()) == T("gt(2^inf, 2^inf)"));
  CHECK(restrict(T("gt(2^inf, 2^inf, 2^inf)"), SubgroupSpec::filtration(3)) == GradedAdicTopology::abelian({}));
}

TEST_CASE("quotient examples") {
  CHECK(quotient(T("gt(2^inf, 3^inf)"), SubgroupSpec::center()) == T("ab(k=2; 2^inf, 2^inf)"));
  CHECK(quotient(T("gt(Omega, Omega)"), SubgroupSpec::derived()) == T("ab(k=2; Omega, Omega)"));
  CHECK(quotient(T("gt(2^inf, 2^inf)"), SubgroupSpec::derived()) == T("ab(k=2; 2^inf, 2^inf)"));
  CHECK(oracle_quotient_check(T("gt(2^inf, 2^inf)"), SubgroupSpec::derived(), SearchBox::make(PrimeSet{2}, 2)).verdict ==
        Verdict::Holds);
  CHECK(quotient(T("gt(2^inf, 2^inf, 2^inf)"), SubgroupSpec::center()) == T("gq(n=4; 2^inf, 2^inf)"));
  CHECK(quotient(T("gt(2^inf, 2^inf)"), SubgroupSpec::whole_group()) == GradedAdicTopology::abelian({}));
  CHECK_THROWS_AS(quotient(T("gt(2^inf, 2^inf)"), SubgroupSpec::one_param(1, 2)), std::invalid_argument);
}

TEST_CASE("extension examples") {
  // Extending the discrete topology by 2^inf on the center is admissible.
  const auto star = extension_topology(T("gt(Omega, Omega)"), M("2^inf"));
  CHECK(star == T("gt(Omega, 2^inf)"));
  CHECK(validate(star).verdict == Verdict::Holds);
  CHECK(extension_topology(T("gt(2^inf, 2^inf)"), M("2^inf")) == T("gt(2^inf, 2^inf)"));
  const auto six = extension_topology(T("gt(6^inf, 6^inf)"), M("2^inf"));
  CHECK(six == T("gt(2^inf*3^inf, 2^inf)"));
  const auto box = SearchBox::make(PrimeSet{2, 3}, 2, BigInt(1296));
  CHECK(oracle_restriction_equals(six, SubgroupSpec::center(), T("ab(k=1; 2^inf)"), box));
  CHECK(coset_topologies_equal(six, T("gt(6^inf, 6^inf)"), SubgroupSpec::center(), box).verdict == Verdict::Holds);
  CHECK_THROWS_AS(extension_topology(T("gt(2^inf, 2^inf)"), M("3^inf")), std::invalid_argument);
}

TEST_CASE("coset comparison examples") {
  const auto box = SearchBox::make(PrimeSet{2}, 2);
  CHECK(box.truncation == 16);
  CHECK(coset_topologies_equal(T("gt(2^inf, 2^inf)"), T("gt(Omega, Omega)"), SubgroupSpec::one_param(1, 2), box).verdict ==
        Verdict::Fails);
  CHECK(coset_topologies_equal(T("gt(2^inf, 2^inf)"), T("gt(2^inf, 2^inf)"), SubgroupSpec::center(), box).verdict ==
        Verdict::Holds);
  CHECK(coset_topologies_equal(T("gt(2^inf, Omega)"), T("gt(2^inf, Omega)"), SubgroupSpec::one_param(1, 2), box).verdict ==
        Verdict::Holds);
}

TEST_CASE("restriction/quotient commutation examples") {
  const auto t4 = T("gt(2^inf, 2^inf, 2^inf)");
  const auto box = SearchBox::make(PrimeSet{2}, 1);
  CHECK(box.truncation == 8);
  CHECK(rd_identity_check(SubgroupSpec::center(), SubgroupSpec::derived(), t4, box).verdict == Verdict::Holds);
  CHECK(rd_identity_check(SubgroupSpec::derived(), SubgroupSpec::derived(), t4, box).verdict == Verdict::Holds);
  CHECK(rd_identity_check(SubgroupSpec::center(), SubgroupSpec::derived(), GradedAdicTopology::discrete(4), box).verdict ==
        Verdict::Holds);
}

TEST_CASE("topology literals round-trip") {
  for (const char* text : {"gt(n=3; 2^inf, 2^inf)", "gt(n=4; Omega, 2^inf*3, 1)", "gs(n=4; 2^inf, 2^inf)",
                           "gq(n=4; 2^inf, 2^inf)", "ab(k=2; 2^inf, Omega)", "ab(k=0)"})
    CHECK(T(text).to_literal() == text);
  CHECK(T("gt(2^inf, 2^inf)") == T("gt(n=3; 2^inf, 2^inf)"));
  for (const auto& t : admissible(4, PrimeSet{2, 3}, 1)) CHECK(T(t.to_literal().c_str()) == t);
  for (const char* bad : {"gt(n=4; 2^inf, 2^inf)", "gt()", "xx(2)", "gt(n=3; 2^inf; 2)", "ab(k=2; 2)"})
    CHECK_THROWS_AS(T(bad), std::invalid_argument);
  const PrimeSet only2{2};
  CHECK_THROWS_AS(GradedAdicTopology::parse("gt(3^inf, 3^inf)", &only2), ParseError);
}

TEST_CASE("search boxes") {
  const auto box = SearchBox::make(PrimeSet{2, 3}, 2);
  CHECK(box.truncation == 1296);
  CHECK(box.chain_length() == 3);
  CHECK(box.to_string() == "P={2,3}, E=2, L=1296");
  CHECK(SearchBox::make(PrimeSet{}, 1).truncation == 2);
  // v_2(L) must be at least E + 2.
  CHECK_THROWS_AS(SearchBox::make(PrimeSet{2}, 2, BigInt(8)), std::invalid_argument);
}

TEST_CASE("axiom check agrees with the independent restatement") {
  const auto moduli = enumerate_moduli(PrimeSet{2, 3}, 1, true);
  for (const auto& a : moduli)
    for (const auto& b : moduli)
      for (const auto& c : moduli) {
        const GradedAdicTopology t(4, {a, b, c});
        CHECK(satisfies_axioms(t) == axioms_oracle(t));
      }
}

TEST_CASE("admissible topologies are closed under sup and validate") {
  const auto family = admissible(3, PrimeSet{2, 3}, 1);
  for (const auto& t : family) {
    ValidateOptions options;
    options.trials = 200;
    CHECK(validate(t, options).verdict == Verdict::Holds);
    CHECK(is_hausdorff(t).hausdorff == std::all_of(t.levels().begin(), t.levels().end(), [](const ExtModulus& m) {
            return !m.is_finite();
          }));
    for (const auto& u : family) {
      const auto s = sup_topology(t, u);
      CHECK(satisfies_axioms(s));
      CHECK(s == sup_topology(u, t));
      CHECK(is_coarser(t, s));
      CHECK(is_coarser(u, s));
      CHECK(is_coarser(t, u) == (sup_topology(t, u) == u));
    }
  }
}

TEST_CASE("basic subgroups are normal and decreasing") {
  const auto all = enumerate_group(3, 8);
  for (const auto& t : admissible(3, PrimeSet{2}, 1)) {
    for (Exponent k = 0; k < 2; ++k) {
      const auto a = basic_moduli(t, k), b = basic_moduli(t, k + 1);
      for (std::size_t d = 0; d < a.size(); ++d) CHECK(int_divides(a[d], b[d]));
    }
    // Reduced into Z/8 at chain index 1.
    const auto moduli = basic_moduli(t, 1);
    std::vector<UTMatrix> members;
    for (const auto& g : all)
      if (in_graded(g, moduli)) members.push_back(g);
    for (const auto& h : members) {
      CHECK(in_graded(ut_inv(h), moduli));
      for (const auto& g : all) CHECK(in_graded(ut_mul(ut_mul(g, h), ut_inv(g)), moduli));
    }
  }
}

TEST_CASE("closed forms agree with the finite-quotient oracles") {
  struct Sweep {
    int n;
    PrimeSet primes;
    Exponent cap;
  };
  for (const auto& sweep : {Sweep{3, PrimeSet{2, 3}, 1}, Sweep{4, PrimeSet{2}, 1}, Sweep{3, PrimeSet{2}, 1}}) {
    const auto box = SearchBox::make(sweep.primes, sweep.cap);
    std::vector<SubgroupSpec> subjects{SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2),
                                       SubgroupSpec::one_param(2, 3)};
    // The whole group is enumerated explicitly, so only in the small box.
    if (sweep.n == 4) subjects.push_back(SubgroupSpec::filtration(2));
    if (sweep.n == 3 && sweep.primes.size() == 1) subjects.push_back(SubgroupSpec::whole_group());
    for (const auto& t : admissible(sweep.n, sweep.primes, sweep.cap))
      for (const auto& s : subjects) {
        CHECK_MESSAGE(oracle_restrict_check(t, s, box).verdict == Verdict::Holds, t.to_literal(), " ", s.to_string());
        if (s.is_normal(sweep.n))
          CHECK_MESSAGE(oracle_quotient_check(t, s, box).verdict == Verdict::Holds, t.to_literal(), " ", s.to_string());
      }
  }
}

TEST_CASE("validation rejections carry verified counterexamples") {
  const auto moduli = enumerate_moduli(PrimeSet{2, 3}, 1, true);
  for (const auto& a : moduli)
    for (const auto& b : moduli) {
      const GradedAdicTopology t(3, {a, b});
      ValidateOptions options;
      options.trials = 100;
      const auto report = validate(t, options);
      CHECK((report.verdict == Verdict::Holds) == satisfies_axioms(t));
      if (report.verdict == Verdict::Fails) {
        const auto cex = find_axiom_counterexample(t);
        REQUIRE(cex);
        CHECK(cex->verify());
        CHECK(report.witnesses.front() == cex->to_string());
      }
      CHECK(validate(t, options).witnesses == report.witnesses);
    }
}
