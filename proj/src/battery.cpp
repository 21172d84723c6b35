#include "keysub/battery.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "keysub/deciders.hpp"
#include "keysub/heisenberg.hpp"
#include "keysub/oracle.hpp"
#include "keysub/topology.hpp"
#include "keysub/unitriangular.hpp"

namespace keysub {

namespace {

UTMatrix random_ut(int n, const RingSpec& ring, std::mt19937_64& rng) {
  UTMatrix m = UTMatrix::identity(n, ring);
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) m.set(i, j, random_value(ring, rng));
  return m;
}

struct Tally {
  long passed = 0;
  long total = 0;
  void add(bool ok) {
    ++total;
    if (ok) ++passed;
  }
  bool ok() const { return passed == total; }
  std::string str() const { return std::to_string(passed) + "/" + std::to_string(total); }
};

// The three commutator/projection identities on random (M, x, i<j<k).
std::array<Tally, 3> identity_tally(int n, const RingSpec& ring, int trials, std::mt19937_64& rng) {
  std::array<Tally, 3> out;
  std::uniform_int_distribution<int> index(1, n);
  for (int t = 0; t < trials; ++t) {
    const UTMatrix m = random_ut(n, ring, rng);
    const RingElem x(ring, random_value(ring, rng));
    std::set<int> picked;
    while (picked.size() < 3) picked.insert(index(rng));
    auto it = picked.begin();
    const int i = *it++, j = *it++, k = *it;
    out[0].add(commutator_identity(1, m, x, i, j, k).equal);
    out[1].add(commutator_identity(2, m, x, i, j, k).equal);
    out[2].add(commutator_identity(3, m, x, n - 2, n - 1, n).equal);
  }
  return out;
}

bool is_triple_of_prime_power(const std::string& literal, Prime p) {
  const std::string pinf = std::to_string(p) + "^inf";
  return literal == "triple(" + pinf + "; " + pinf + "; " + pinf + ")";
}

// ---- 1 --------------------------------------------------------------------
std::string criterion_identities(bool& ok, const BatteryOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  long total = 0;
  ok = true;
  std::string failures;
  for (int n : {3, 4, 5})
    for (const RingSpec& ring : {RingSpec::integers(), RingSpec::residues(4), RingSpec::residues(6), RingSpec::residues(9)}) {
      const auto tallies = identity_tally(n, ring, opt.trials, rng);
      for (int v = 0; v < 3; ++v) {
        total += tallies[v].total;
        if (!tallies[v].ok()) {
          ok = false;
          failures += " n=" + std::to_string(n) + " " + ring.to_string() + " v" + std::to_string(v + 1) + " " + tallies[v].str();
        }
      }
    }
  return ok ? std::to_string(total) + " instances, all exact" : "mismatches:" + failures;
}

// ---- 2 --------------------------------------------------------------------
std::string criterion_ut3(bool& ok, const BatteryOptions& opt) {
  const auto m4 = BiadditiveMap::multiplication(RingSpec::residues(4));
  const auto all = h_enumerate(m4);
  std::set<UTMatrix> images;
  Tally roundtrip, hom, comm;
  for (const auto& u : all) {
    images.insert(to_ut3(u, m4));
    roundtrip.add(from_ut3(to_ut3(u, m4), m4) == u);
  }
  for (const auto& u : all)
    for (const auto& v : all) {
      hom.add(to_ut3(h_mul(u, v, m4), m4) == ut_mul(to_ut3(u, m4), to_ut3(v, m4)));
      comm.add(h_comm(u, v, m4).agree);
    }
  const bool bijective = images.size() == all.size() && all.size() == 64 && images.size() == enumerate_group(3, 4).size();

  const auto mz = BiadditiveMap::multiplication(RingSpec::integers());
  std::mt19937_64 rng(opt.seed);
  Tally zhom, zcomm, zround;
  for (int t = 0; t < opt.trials; ++t) {
    const auto u = h_random(mz, rng), v = h_random(mz, rng);
    zhom.add(to_ut3(h_mul(u, v, mz), mz) == ut_mul(to_ut3(u, mz), to_ut3(v, mz)));
    zcomm.add(h_comm(u, v, mz).agree);
    zround.add(from_ut3(to_ut3(u, mz), mz) == u);
  }
  ok = bijective && roundtrip.ok() && hom.ok() && comm.ok() && zhom.ok() && zcomm.ok() && zround.ok();
  std::ostringstream out;
  out << "Z/4: bijective=" << (bijective ? "yes" : "no") << " hom " << hom.str() << " comm " << comm.str()
      << "; Z: hom " << zhom.str() << " comm " << zcomm.str() << " inverse " << zround.str();
  return out.str();
}

// ---- 3 --------------------------------------------------------------------
std::string criterion_center(bool& ok, const BatteryOptions&) {
  const auto w = BiadditiveMap::multiplication(RingSpec::residues(4));
  const auto all = h_enumerate(w);
  std::vector<HeisenbergElement> center;
  for (const auto& u : all) {
    bool central = true;
    for (const auto& v : all)
      if (!(h_mul(u, v, w) == h_mul(v, u, w))) {
        central = false;
        break;
      }
    if (central) center.push_back(u);
  }
  std::vector<HeisenbergElement> expected;
  for (int a = 0; a < 4; ++a) expected.push_back(h_make(w, {a}, {0}, {0}));
  std::sort(center.begin(), center.end());
  std::sort(expected.begin(), expected.end());
  ok = center == expected;
  return "brute-force center has " + std::to_string(center.size()) + " elements" + (ok ? ", equal to A x 0 x 0" : ", differs from A x 0 x 0");
}

// ---- 4 --------------------------------------------------------------------
std::string criterion_switch(bool& ok, const BatteryOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::string out;
  ok = true;
  for (const RingSpec& ring : {RingSpec::integers(), RingSpec::residues(5)}) {
    const auto w = BiadditiveMap::multiplication(ring);
    const auto ws = w.switched();
    Tally hom, involution;
    for (int t = 0; t < 100; ++t) {
      const auto u = h_random(w, rng), v = h_random(w, rng);
      hom.add(switch_iso(h_mul(u, v, w), w) == h_mul(switch_iso(u, w), switch_iso(v, w), ws));
      involution.add(switch_iso(switch_iso(u, w), ws) == u);
    }
    ok = ok && hom.ok() && involution.ok();
    out += (out.empty() ? "" : "; ") + ring.to_string() + ": hom " + hom.str() + " s∘s=id " + involution.str();
  }
  return out;
}

// ---- 5 --------------------------------------------------------------------
std::string criterion_merson(bool& ok, const BatteryOptions& opt) {
  DeciderConfig config;
  config.box = SearchBox::make(PrimeSet{2, 3}, 2);
  config.seed = opt.seed;
  ok = true;
  std::string out;
  for (const auto& h : {SubgroupSpec::center(), SubgroupSpec::derived()}) {
    const auto report = merson_exhaustive(3, h, config);
    ok = ok && report.verdict == Verdict::Holds;
    out += (out.empty() ? "" : "; ") + h.to_string() + ": " + to_string(report.verdict) + " (" + report.notes.front() + ")";
  }
  return out;
}

// ---- 6 --------------------------------------------------------------------
std::string criterion_center_key(bool& ok, const BatteryOptions& opt) {
  ok = true;
  std::string out;
  for (int n : {3, 4})
    for (Exponent e : {1u, 2u}) {
      DeciderConfig config;
      config.box = SearchBox::make(PrimeSet{2, 3}, e);
      config.seed = opt.seed;
      const auto report = decide_key(SubgroupSpec::center(), GradedAdicTopology::discrete(n), config);
      ok = ok && report.verdict == Verdict::Holds;
      out += (out.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " E=" + std::to_string(e) + ": " +
             to_string(report.verdict) + " over " + report.notes.front();
    }
  return out;
}

// ---- 7 --------------------------------------------------------------------
std::string criterion_not_cominimal(bool& ok, const BatteryOptions& opt) {
  ok = true;
  std::string out;
  const auto gamma = GradedAdicTopology::discrete(3);
  for (Prime p : {2u, 3u}) {
    DeciderConfig config;
    config.box = SearchBox::make(PrimeSet{p}, 1);
    config.seed = opt.seed;
    const auto report = decide_cominimal(SubgroupSpec::center(), gamma, config);
    const std::string pinf = std::to_string(p) + "^inf";
    const std::string expected = "gt(n=3; " + pinf + ", " + pinf + ")";
    bool good = report.verdict == Verdict::Fails && !report.witnesses.empty() && report.witnesses.front() == expected;
    if (good) {
      const auto w = GradedAdicTopology::parse(report.witnesses.front());
      const bool distinct_closed = !(quotient(w, SubgroupSpec::center()) == quotient(gamma, SubgroupSpec::center()));
      const bool distinct_oracle =
          coset_topologies_equal(w, gamma, SubgroupSpec::center(), config.box).verdict == Verdict::Fails;
      good = is_hausdorff(w).hausdorff && is_coarser(w, gamma) && distinct_closed && distinct_oracle;
    }
    ok = ok && good;
    out += (out.empty() ? "" : "; ") + std::string("P={") + std::to_string(p) + "}: " + to_string(report.verdict) +
           (report.witnesses.empty() ? "" : " witness " + report.witnesses.front()) + (good ? " re-verified" : " NOT verified");
  }
  return out;
}

// ---- 8 --------------------------------------------------------------------
std::string criterion_heisenberg_minimality(bool& ok, const BatteryOptions& opt) {
  ok = true;
  std::string out;
  const auto m = BiadditiveMap::multiplication(RingSpec::integers());
  const ModulusTriple discrete{{ExtModulus::omega()}, {ExtModulus::omega()}, ExtModulus::omega()};
  const auto gamma = GradedAdicTopology::discrete(3);
  for (Prime p : {2u, 3u}) {
    DeciderConfig config;
    config.box = SearchBox::make(PrimeSet{p}, 2);
    config.seed = opt.seed;
    const auto minimal = is_minimal_map(m, discrete, config);
    const auto strongly = is_strongly_minimal_map(m, discrete, config);
    bool good = minimal.verdict == Verdict::Holds && strongly.verdict == Verdict::Fails &&
                is_triple_of_prime_power(strongly.witnesses.front(), p);
    std::string parts = "minimal " + to_string(minimal.verdict) + ", strongly " + to_string(strongly.verdict) +
                        (strongly.witnesses.empty() ? "" : " " + strongly.witnesses.front());
    for (const auto& h : {SubgroupSpec::one_param(1, 2), SubgroupSpec::one_param(2, 3)}) {
      const auto cokey = decide_cokey(h, gamma, config);
      const auto relmin = decide_relatively_minimal(h, gamma, config);
      bool same = relmin.verdict == Verdict::Fails && !relmin.witnesses.empty() &&
                  triple_of(GradedAdicTopology::parse(relmin.witnesses.front())).to_literal() == strongly.witnesses.front();
      good = good && cokey.verdict == Verdict::Holds && same;
      parts += "; " + h.to_string() + " cokey " + to_string(cokey.verdict) + ", relmin " + to_string(relmin.verdict) +
               (same ? " (same witness)" : " (witness differs)");
    }
    ok = ok && good;
    out += (out.empty() ? "" : " | ") + std::string("P={") + std::to_string(p) + "}: " + parts;
  }
  return out;
}

// ---- 9 --------------------------------------------------------------------
std::string criterion_extension(bool& ok, const BatteryOptions&) {
  const SearchBox box = SearchBox::make(PrimeSet{2, 3}, 2, BigInt(1296));
  const auto center = SubgroupSpec::center();
  const auto moduli = enumerate_moduli(box.primes, box.exp_cap, true);
  SaturationOracle oracle(3, box.truncation, center);
  long pairs = 0, good = 0;
  std::string first_failure;
  for (const auto& n1 : moduli)
    for (const auto& n2 : moduli) {
      const GradedAdicTopology gamma(3, {n1, n2});
      if (!satisfies_axioms(gamma)) continue;
      for (const auto& sigma : moduli) {
        if (!ext_divides(sigma, n2)) continue;
        ++pairs;
        const auto star = extension_topology(gamma, sigma);
        const auto expected_restriction = GradedAdicTopology::abelian({sigma});
        const bool closed = restrict(star, center) == expected_restriction && quotient(star, center) == quotient(gamma, center);
        const bool restriction_oracle = oracle_restriction_equals(star, center, expected_restriction, box);
        const bool quotient_oracle = coset_filters_equal(oracle, star, gamma, box) &&
                                     oracle_quotient_check(star, center, box, &oracle).verdict == Verdict::Holds;
        if (closed && restriction_oracle && quotient_oracle) {
          ++good;
        } else if (first_failure.empty()) {
          first_failure = " first failure: gamma=" + gamma.to_literal() + " sigma=" + sigma.to_string();
        }
      }
    }
  ok = pairs > 0 && good == pairs;
  return std::to_string(good) + "/" + std::to_string(pairs) + " (gamma, sigma) pairs agree, closed form vs saturation at L=" +
         box.truncation.get_str() + first_failure;
}

// ---- 10 -------------------------------------------------------------------
std::string criterion_injkey(bool& ok, const BatteryOptions& opt) {
  DeciderConfig config;
  config.box = SearchBox::make(PrimeSet{2}, 2);
  config.seed = opt.seed;
  const auto center = SubgroupSpec::center();
  long agree = 0, implication = 0, total = 0, cominimal_holds = 0;
  for (const auto& gamma : hausdorff_family(3, config)) {
    ++total;
    const auto inj = decide_injkey(center, gamma, config);
    const auto com = decide_cominimal(center, gamma, config);
    const auto key = decide_key(center, gamma, config);
    if (inj.verdict == com.verdict) ++agree;
    if (com.verdict != Verdict::Holds || key.verdict == Verdict::Holds) ++implication;
    if (com.verdict == Verdict::Holds) ++cominimal_holds;
  }
  ok = total > 0 && agree == total && implication == total;
  return "injkey = cominimal on " + std::to_string(agree) + "/" + std::to_string(total) + " gammas; cominimal => key on " +
         std::to_string(implication) + "/" + std::to_string(total) + " (" + std::to_string(cominimal_holds) +
         " co-minimal instances)";
}

// ---- 11 -------------------------------------------------------------------
std::string criterion_semilattice(bool& ok, const BatteryOptions& opt) {
  DeciderConfig config;
  config.box = SearchBox::make(PrimeSet{2, 3}, 1);
  config.seed = opt.seed;
  ok = true;
  std::string out;
  for (const auto& h : {SubgroupSpec::center(), SubgroupSpec::derived(), SubgroupSpec::one_param(1, 2),
                        SubgroupSpec::one_param(2, 3)}) {
    const auto table = restriction_map_table(h, GradedAdicTopology::discrete(3), config);
    ok = ok && table.morphism;
    out += (out.empty() ? "" : "; ") + h.to_string() + ": " + std::to_string(table.rows.size()) + " rows, sup law " +
           (table.morphism ? "exact" : "VIOLATED");
  }
  // The worked pair: both sides are 2^inf*3^inf on the center.
  const auto a = GradedAdicTopology::parse("gt(2^inf, 2^inf)");
  const auto b = GradedAdicTopology::parse("gt(3^inf, 3^inf)");
  const auto lhs = sup_topology(restrict(a, SubgroupSpec::center()), restrict(b, SubgroupSpec::center()));
  const auto rhs = restrict(sup_topology(a, b), SubgroupSpec::center());
  ok = ok && lhs == rhs && lhs.to_literal() == "ab(k=1; 2^inf*3^inf)";
  return out;
}

// ---- 12 -------------------------------------------------------------------
std::string criterion_axioms(bool& ok, const BatteryOptions& opt) {
  long accepted = 0, rejected = 0, certified = 0;
  ValidateOptions options;
  options.trials = opt.trials;
  options.seed = opt.seed;
  auto sweep = [&](int n, const PrimeSet& primes, Exponent cap) {
    const auto moduli = enumerate_moduli(primes, cap, true);
    std::vector<std::size_t> digits(n - 1, 0);
    while (true) {
      std::vector<ExtModulus> levels;
      for (auto d : digits) levels.push_back(moduli[d]);
      const GradedAdicTopology t(n, levels);
      const auto report = validate(t, options);  // throws if the oracle refutes an acceptance
      if (report.verdict == Verdict::Holds) {
        ++accepted;
      } else {
        ++rejected;
        const auto cex = find_axiom_counterexample(t);
        if (!report.witnesses.empty() && cex && cex->verify()) ++certified;
      }
      std::size_t pos = digits.size();
      bool exhausted = true;
      while (pos-- > 0) {
        if (++digits[pos] < moduli.size()) {
          exhausted = false;
          break;
        }
        digits[pos] = 0;
      }
      if (exhausted) break;
    }
  };
  sweep(3, PrimeSet{2, 3}, 1);
  sweep(4, PrimeSet{2}, 1);
  const auto worked = validate(GradedAdicTopology::parse("gt(2^inf, Omega)"), options);
  const bool worked_ok = worked.verdict == Verdict::Fails && !worked.witnesses.empty() &&
                         worked.witnesses.front() == "ut(3; 1,2=2) * ut(3; 2,3=2) = ut(3; 1,2=2; 1,3=4; 2,3=2) notin U(2,0)";
  ok = certified == rejected && worked_ok;
  return std::to_string(accepted) + " accepted (" + std::to_string(opt.trials) + " closure trials each), " +
         std::to_string(rejected) + " rejected with " + std::to_string(certified) + " verified counterexamples; (2^inf, Omega): " +
         (worked.witnesses.empty() ? "no witness" : worked.witnesses.front());
}

struct CriterionSpec {
  const char* title;
  std::string (*run)(bool&, const BatteryOptions&);
};

const CriterionSpec kCriteria[kCriterionCount] = {
    {"commutator/projection identities, n in {3,4,5} x {Z, Z/4, Z/6, Z/9}", criterion_identities},
    {"H(m) = UT(3): bijective homomorphism, commutator closed form", criterion_ut3},
    {"center of H(m) over Z/4 is A x 0 x 0", criterion_center},
    {"switch isomorphism: homomorphism and involution", criterion_switch},
    {"Merson instance: no pair agreeing on H and G/H differs", criterion_merson},
    {"center of UT(n, Z) is key for the discrete topology", criterion_center_key},
    {"center of UT(3, Z) is not co-minimal", criterion_not_cominimal},
    {"H(m): minimal, not strongly minimal; E, F co-key, not relatively minimal", criterion_heisenberg_minimality},
    {"central extension: closed forms vs saturation oracle", criterion_extension},
    {"central inj-key = co-minimal; co-minimal => key", criterion_injkey},
    {"restriction map is a sup-semilattice morphism", criterion_semilattice},
    {"axiom/oracle consistency with finite counterexamples", criterion_axioms},
};

}  // namespace

std::string CriterionResult::line() const {
  std::ostringstream out;
  out << (passed ? "[PASS] " : "[FAIL] ") << id << " " << title << " -- " << detail;
  return out.str();
}

CriterionResult run_criterion(int id, const BatteryOptions& options) {
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion id must be in 1.." + std::to_string(kCriterionCount));
  const auto& spec = kCriteria[id - 1];
  CriterionResult result{id, spec.title, false, "", 0.0};
  const auto start = std::chrono::steady_clock::now();
  try {
    bool ok = false;
    result.detail = spec.run(ok, options);
    result.passed = ok;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<CriterionResult> run_battery(const BatteryOptions& options, const std::vector<int>& only) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id)
    if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) out.push_back(run_criterion(id, options));
  return out;
}

IdentitySuiteResult identity_suite(int n, const RingSpec& ring, int trials, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("identity suites need n >= 3");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  IdentitySuiteResult result;
  std::mt19937_64 rng(seed);
  auto record = [&](const std::string& name, const Tally& t) {
    result.passed = result.passed && t.ok();
    result.lines.push_back((t.ok() ? "[PASS] " : "[FAIL] ") + name + " " + t.str());
  };

  Tally assoc, inverse;
  for (int t = 0; t < trials; ++t) {
    const auto a = random_ut(n, ring, rng), b = random_ut(n, ring, rng), c = random_ut(n, ring, rng);
    assoc.add(ut_mul(ut_mul(a, b), c) == ut_mul(a, ut_mul(b, c)));
    inverse.add(ut_mul(a, ut_inv(a)).is_identity() && ut_mul(ut_inv(a), a).is_identity());
  }
  record("UT(" + std::to_string(n) + ", " + ring.to_string() + ") associativity", assoc);
  record("UT(" + std::to_string(n) + ", " + ring.to_string() + ") inverses", inverse);
  const auto tallies = identity_tally(n, ring, trials, rng);
  for (int v = 0; v < 3; ++v) record("commutator/projection identity variant " + std::to_string(v + 1), tallies[v]);

  const auto w = BiadditiveMap::multiplication(ring);
  const auto ws = w.switched();
  Tally h_assoc, h_inverse, h_commutator, ut3, sw;
  for (int t = 0; t < trials; ++t) {
    const auto u = h_random(w, rng), v = h_random(w, rng), x = h_random(w, rng);
    h_assoc.add(h_mul(h_mul(u, v, w), x, w) == h_mul(u, h_mul(v, x, w), w));
    h_inverse.add(h_mul(u, h_inv(u, w), w) == h_identity(w));
    h_commutator.add(h_comm(u, v, w).agree);
    ut3.add(to_ut3(h_mul(u, v, w), w) == ut_mul(to_ut3(u, w), to_ut3(v, w)));
    sw.add(switch_iso(h_mul(u, v, w), w) == h_mul(switch_iso(u, w), switch_iso(v, w), ws) &&
           switch_iso(switch_iso(u, w), ws) == u);
  }
  const std::string hm = "H(" + w.to_string() + ")";
  record(hm + " associativity", h_assoc);
  record(hm + " inverses", h_inverse);
  record(hm + " commutator closed form", h_commutator);
  record(hm + " -> UT(3) homomorphism", ut3);
  record(hm + " switch homomorphism and involution", sw);
  return result;
}

}  // namespace keysub
