#include "keysub/topology.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>

namespace keysub {

namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

int parse_count(const std::string& text) {
  if (text.empty() || text.size() > 4 || !std::all_of(text.begin(), text.end(), ::isdigit))
    throw ParseError("bad count '" + text + "'");
  return std::stoi(text);
}

std::string join_levels(const std::vector<ExtModulus>& levels) {
  std::string out;
  for (std::size_t k = 0; k < levels.size(); ++k) out += (k ? ", " : "") + levels[k].to_string();
  return out;
}

BigInt power(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

BigInt random_below(std::mt19937_64& rng, const BigInt& bound) {
  // bound fits comfortably in 64 bits for every oracle modulus used here.
  if (!bound.fits_ulong_p()) throw std::length_error("oracle modulus too large");
  std::uniform_int_distribution<unsigned long> dist(0, bound.get_ui() - 1);
  return BigInt(dist(rng));
}

// A uniformly random member of U(a) inside UT(n, Z/L).
UTMatrix random_member(int n, const RingSpec& ring, const std::vector<BigInt>& moduli, std::mt19937_64& rng) {
  UTMatrix m = UTMatrix::identity(n, ring);
  for (int d = 1; d < n; ++d) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), moduli[d - 1].get_mpz_t(), ring.modulus().get_mpz_t());
    const BigInt count = ring.modulus() / g;
    for (int i = 1; i + d <= n; ++i) m.set(i, i + d, g * random_below(rng, count));
  }
  return m;
}

std::string moduli_string(const std::vector<BigInt>& moduli) {
  std::string out = "U(";
  for (std::size_t k = 0; k < moduli.size(); ++k) out += (k ? "," : "") + moduli[k].get_str();
  return out + ")";
}

}  // namespace

GradedAdicTopology::GradedAdicTopology(int n, std::vector<ExtModulus> levels)
    : carrier_(Carrier::Unitriangular), n_(n), levels_(std::move(levels)) {
  if (n < 2) throw std::invalid_argument("unitriangular degree must be >= 2");
  if (static_cast<int>(levels_.size()) != n - 1)
    throw std::invalid_argument("UT(" + std::to_string(n) + ") needs " + std::to_string(n - 1) + " levels, got " +
                                std::to_string(levels_.size()));
}

GradedAdicTopology GradedAdicTopology::discrete(int n) {
  return GradedAdicTopology(n, std::vector<ExtModulus>(std::max(n - 1, 1), ExtModulus::omega()));
}

GradedAdicTopology GradedAdicTopology::subgroup(int n, std::vector<ExtModulus> levels) {
  if (n < 2 || levels.empty() || static_cast<int>(levels.size()) > n - 1)
    throw std::invalid_argument("a filtration subgroup of UT(n) has between 1 and n-1 levels");
  GradedAdicTopology t;
  t.carrier_ = Carrier::Subgroup;
  t.n_ = n;
  t.levels_ = std::move(levels);
  return t;
}

GradedAdicTopology GradedAdicTopology::quotient_model(int n, std::vector<ExtModulus> levels) {
  if (n < 2 || levels.empty() || static_cast<int>(levels.size()) > n - 1)
    throw std::invalid_argument("a filtration quotient of UT(n) has between 1 and n-1 levels");
  GradedAdicTopology t;
  t.carrier_ = Carrier::Quotient;
  t.n_ = n;
  t.levels_ = std::move(levels);
  return t;
}

GradedAdicTopology GradedAdicTopology::abelian(std::vector<ExtModulus> coordinates) {
  GradedAdicTopology t;
  t.carrier_ = Carrier::Abelian;
  t.n_ = 0;
  t.levels_ = std::move(coordinates);
  return t;
}

const ExtModulus& GradedAdicTopology::level(int d) const {
  int offset = 1;
  if (carrier_ == Carrier::Subgroup) offset = n_ - static_cast<int>(levels_.size());
  const int idx = d - offset;
  if (idx < 0 || idx >= static_cast<int>(levels_.size())) throw std::out_of_range("level index out of range");
  return levels_[idx];
}

bool GradedAdicTopology::supported_by(const PrimeSet& primes) const {
  return std::all_of(levels_.begin(), levels_.end(), [&](const ExtModulus& m) { return m.supported_by(primes); });
}

Exponent GradedAdicTopology::max_finite_exponent() const {
  Exponent out = 0;
  for (const auto& m : levels_)
    for (const auto& [p, e] : m.exponents())
      if (e != kInfiniteExponent) out = std::max(out, e);
  return out;
}

std::string GradedAdicTopology::to_literal() const {
  switch (carrier_) {
    case Carrier::Unitriangular:
      return "gt(n=" + std::to_string(n_) + "; " + join_levels(levels_) + ")";
    case Carrier::Subgroup:
      return "gs(n=" + std::to_string(n_) + "; " + join_levels(levels_) + ")";
    case Carrier::Quotient:
      return "gq(n=" + std::to_string(n_) + "; " + join_levels(levels_) + ")";
    case Carrier::Abelian:
      return "ab(k=" + std::to_string(levels_.size()) + (levels_.empty() ? "" : "; " + join_levels(levels_)) + ")";
  }
  return "?";
}

GradedAdicTopology GradedAdicTopology::parse(std::string_view text, const PrimeSet* allowed) {
  const std::string s = strip_spaces(text);
  if (s.size() < 4 || s[2] != '(' || s.back() != ')') throw ParseError("topology literal must look like gt(n=3; 2^inf, Omega)");
  const std::string head = s.substr(0, 2);
  std::string body = s.substr(3, s.size() - 4);
  std::optional<int> count;
  const std::string key = head == "ab" ? "k=" : "n=";
  if (body.rfind(key, 0) == 0) {
    auto semi = body.find(';');
    count = parse_count(body.substr(2, semi == std::string::npos ? std::string::npos : semi - 2));
    body = semi == std::string::npos ? "" : body.substr(semi + 1);
  }
  std::vector<ExtModulus> levels;
  for (const auto& item : split(body, ',')) levels.push_back(ExtModulus::parse(item, allowed));
  try {
    if (head == "gt") {
      const int n = count.value_or(static_cast<int>(levels.size()) + 1);
      return GradedAdicTopology(n, std::move(levels));
    }
    if (head == "ab") {
      if (count && *count != static_cast<int>(levels.size())) throw ParseError("ab(k=...) count does not match its coordinates");
      return abelian(std::move(levels));
    }
    if (!count) throw ParseError(head + "(...) literals need n=");
    if (head == "gs") return subgroup(*count, std::move(levels));
    if (head == "gq") return quotient_model(*count, std::move(levels));
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown topology literal '" + s + "'");
}

bool operator<(const GradedAdicTopology& a, const GradedAdicTopology& b) {
  if (a.carrier_ != b.carrier_) return a.carrier_ < b.carrier_;
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return a.levels_ < b.levels_;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Vacuous:
      return "vacuous";
  }
  return "?";
}

BigInt default_truncation(const PrimeSet& primes, Exponent exp_cap) {
  BigInt l = power(primes.power_product(1), exp_cap + 2);
  return l < 2 ? BigInt(2) : l;
}

SearchBox SearchBox::make(PrimeSet primes, Exponent exp_cap, std::optional<BigInt> truncation) {
  if (exp_cap > 16) throw std::invalid_argument("exponent cap above 16 is not supported");
  SearchBox box{std::move(primes), exp_cap, 0};
  box.truncation = truncation.value_or(default_truncation(box.primes, exp_cap));
  if (box.truncation < 2) throw std::invalid_argument("truncation must be >= 2");
  for (Prime p : box.primes.primes()) {
    BigInt pp = power(BigInt(static_cast<unsigned long>(p)), exp_cap + 2);
    if (!int_divides(pp, box.truncation))
      throw std::invalid_argument("truncation " + box.truncation.get_str() + " must be divisible by " + std::to_string(p) +
                                  "^" + std::to_string(exp_cap + 2) + " to resolve the exponent cap");
  }
  return box;
}

std::string SearchBox::to_string() const {
  return "P=" + primes.to_string() + ", E=" + std::to_string(exp_cap) + ", L=" + truncation.get_str();
}

std::vector<BigInt> basic_moduli(const GradedAdicTopology& t, Exponent k) {
  std::vector<BigInt> out;
  out.reserve(t.size());
  for (const auto& m : t.levels()) out.push_back(capped_part(m, k));
  return out;
}

bool in_graded(const UTMatrix& m, const std::vector<BigInt>& moduli) {
  const int n = m.degree();
  if (static_cast<int>(moduli.size()) != n - 1) throw std::invalid_argument("graded moduli do not match the degree");
  const RingSpec& ring = m.ring();
  for (int d = 1; d < n; ++d) {
    BigInt a = moduli[d - 1];
    if (ring.is_finite()) mpz_gcd(a.get_mpz_t(), a.get_mpz_t(), ring.modulus().get_mpz_t());
    for (int i = 1; i + d <= n; ++i)
      if (!int_divides(a, m.at(i, i + d))) return false;
  }
  return true;
}

bool satisfies_axioms(const GradedAdicTopology& t, std::string* reason) {
  using Carrier = GradedAdicTopology::Carrier;
  if (t.carrier() == Carrier::Abelian || t.carrier() == Carrier::Subgroup) return true;
  const int levels = static_cast<int>(t.size());
  for (int d = 1; d <= levels; ++d)
    for (int e = 1; d + e <= levels; ++e)
      if (!ext_divides(t.level(d + e), ext_product(t.level(d), t.level(e)))) {
        if (reason)
          *reason = "A1 fails: N_" + std::to_string(d + e) + " = " + t.level(d + e).to_string() + " does not divide N_" +
                    std::to_string(d) + "*N_" + std::to_string(e) + " = " + ext_product(t.level(d), t.level(e)).to_string();
        return false;
      }
  for (int d = 2; d <= levels; ++d)
    for (int e = 1; e < d; ++e)
      if (!ext_divides(t.level(d), t.level(e))) {
        if (reason)
          *reason = "A2 fails: N_" + std::to_string(d) + " = " + t.level(d).to_string() + " does not divide N_" +
                    std::to_string(e) + " = " + t.level(e).to_string();
        return false;
      }
  return true;
}

std::string ClosureCounterexample::to_string() const {
  if (kind == Kind::Product)
    return left.to_literal() + " * " + right.to_literal() + " = " + result.to_literal() + " notin " + moduli_string(moduli);
  return "conj(" + right.to_literal() + ", " + left.to_literal() + ") = " + result.to_literal() + " notin " +
         moduli_string(moduli);
}

bool ClosureCounterexample::verify() const {
  const UTMatrix recomputed =
      kind == Kind::Product ? ut_mul(left, right) : ut_mul(ut_mul(right, left), ut_inv(right));
  if (!(recomputed == result)) return false;
  if (!in_graded(left, moduli)) return false;
  if (kind == Kind::Product && !in_graded(right, moduli)) return false;
  return !in_graded(result, moduli);
}

std::optional<ClosureCounterexample> find_axiom_counterexample(const GradedAdicTopology& t) {
  if (t.carrier() != GradedAdicTopology::Carrier::Unitriangular) return std::nullopt;
  const int n = t.degree();
  const Exponent kmax = 2 * t.max_finite_exponent() + 2;
  const RingSpec z = RingSpec::integers();
  auto a = [&](int d, Exponent k) { return capped_part(t.level(d), k); };

  // A1: e_{1,1+d}(a_d) e_{1+d,1+d+e}(a_e) has a_d a_e at level d+e.
  for (int d = 1; d < n; ++d)
    for (int e = 1; d + e < n; ++e) {
      if (ext_divides(t.level(d + e), ext_product(t.level(d), t.level(e)))) continue;
      for (Exponent k = 1; k <= kmax; ++k) {
        bool persistent = true;
        for (Exponent k2 = 0; k2 <= kmax && persistent; ++k2)
          persistent = !int_divides(a(d + e, k), a(d, k2) * a(e, k2));
        if (!persistent) continue;
        UTMatrix x = transvection(n, 1, 1 + d, RingElem(z, a(d, k)));
        UTMatrix y = transvection(n, 1 + d, 1 + d + e, RingElem(z, a(e, k)));
        return ClosureCounterexample{ClosureCounterexample::Kind::Product, k, basic_moduli(t, k), x, y, ut_mul(x, y)};
      }
    }
  // A2: conjugating e_{j,1+d}(a_e), j = 1+d-e, by e_{1,j}(1) puts a_e at (1, 1+d).
  for (int d = 2; d < n; ++d)
    for (int e = 1; e < d; ++e) {
      if (ext_divides(t.level(d), t.level(e))) continue;
      for (Exponent k = 1; k <= kmax; ++k) {
        bool persistent = true;
        for (Exponent k2 = 0; k2 <= kmax && persistent; ++k2) persistent = !int_divides(a(d, k), a(e, k2));
        if (!persistent) continue;
        const int j = 1 + d - e;
        UTMatrix x = transvection(n, j, 1 + d, RingElem(z, a(e, k)));
        UTMatrix g = transvection(n, 1, j, RingElem(z, BigInt(1)));
        return ClosureCounterexample{ClosureCounterexample::Kind::Conjugation, k, basic_moduli(t, k), x, g,
                                     ut_mul(ut_mul(g, x), ut_inv(g))};
      }
    }
  return std::nullopt;
}

VerdictReport validate(const GradedAdicTopology& t, const ValidateOptions& options) {
  using Carrier = GradedAdicTopology::Carrier;
  VerdictReport report;
  report.property = "valid";
  report.gamma = t.to_literal();

  std::string reason;
  const bool symbolic = satisfies_axioms(t, &reason);
  if (t.carrier() == Carrier::Abelian) {
    report.notes.push_back("coordinates are independent; no cross-level axioms");
    return report;
  }
  if (t.carrier() == Carrier::Subgroup) {
    report.notes.push_back("induced on a filtration subgroup; inherits admissibility from the ambient topology");
    return report;
  }
  if (!symbolic) {
    report.verdict = Verdict::Fails;
    report.notes.push_back(reason);
    if (t.carrier() == Carrier::Unitriangular) {
      auto cex = find_axiom_counterexample(t);
      if (!cex || !cex->verify())
        throw std::logic_error("axiom violation without a finite counterexample for " + t.to_literal());
      report.witnesses.push_back(cex->to_string());
      report.notes.push_back("U_" + std::to_string(cex->k) + " is not refined by any U_k' under this operation");
    }
    return report;
  }
  report.notes.push_back("A1 and A2 hold");
  if (t.carrier() != Carrier::Unitriangular || options.trials <= 0) return report;

  // Randomized closure oracle in UT(n, Z/L).
  const int n = t.degree();
  const Exponent chain = t.max_finite_exponent() + 1;
  BigInt l;
  if (options.truncation) {
    l = *options.truncation;
  } else {
    std::vector<Prime> support;
    for (const auto& m : t.levels())
      for (const auto& [p, e] : m.exponents()) support.push_back(p);
    const PrimeSet primes = support.empty() ? PrimeSet{2} : PrimeSet(support);
    l = power(primes.power_product(1), 2 * chain + 1);
  }
  const RingSpec ring = RingSpec::residues(l);
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<BigInt>> moduli;
  for (Exponent k = 0; k <= chain; ++k) moduli.push_back(basic_moduli(t, k));
  for (int trial = 0; trial < options.trials; ++trial) {
    const auto& a = moduli[trial % moduli.size()];
    const UTMatrix x = random_member(n, ring, a, rng);
    const UTMatrix y = random_member(n, ring, a, rng);
    UTMatrix g = UTMatrix::identity(n, ring);
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j <= n; ++j) g.set(i, j, random_below(rng, l));
    const UTMatrix xy = ut_mul(x, y);
    const UTMatrix inv = ut_inv(x);
    const UTMatrix conj = ut_mul(ut_mul(g, x), ut_inv(g));
    const char* broken = !in_graded(xy, a) ? "product" : !in_graded(inv, a) ? "inverse" : !in_graded(conj, a) ? "conjugate" : nullptr;
    if (broken)
      throw std::logic_error(std::string("closure oracle refutes the axioms: ") + broken + " leaves " + moduli_string(a) +
                             " in UT(" + std::to_string(n) + ", Z/" + l.get_str() + ") for " + t.to_literal());
  }
  report.notes.push_back("closure oracle: " + std::to_string(options.trials) + " trials in UT(" + std::to_string(n) +
                         ", Z/" + l.get_str() + ")");
  return report;
}

namespace {

void require_same_shape(const GradedAdicTopology& a, const GradedAdicTopology& b) {
  if (a.carrier() != b.carrier() || a.degree() != b.degree() || a.size() != b.size())
    throw std::invalid_argument("topologies live on different groups: " + a.to_literal() + " vs " + b.to_literal());
}

void require_unitriangular(const GradedAdicTopology& t, const char* what) {
  if (t.carrier() != GradedAdicTopology::Carrier::Unitriangular)
    throw std::invalid_argument(std::string(what) + " needs a topology on UT(n, Z), got " + t.to_literal());
}

}  // namespace

bool is_coarser(const GradedAdicTopology& t1, const GradedAdicTopology& t2) {
  require_same_shape(t1, t2);
  for (std::size_t k = 0; k < t1.size(); ++k)
    if (!ext_divides(t1.levels()[k], t2.levels()[k])) return false;
  return true;
}

GradedAdicTopology sup_topology(const GradedAdicTopology& t1, const GradedAdicTopology& t2) {
  require_same_shape(t1, t2);
  std::vector<ExtModulus> levels;
  for (std::size_t k = 0; k < t1.size(); ++k) levels.push_back(ext_lcm(t1.levels()[k], t2.levels()[k]));
  GradedAdicTopology out = t1;
  switch (t1.carrier()) {
    case GradedAdicTopology::Carrier::Unitriangular:
      out = GradedAdicTopology(t1.degree(), std::move(levels));
      break;
    case GradedAdicTopology::Carrier::Subgroup:
      out = GradedAdicTopology::subgroup(t1.degree(), std::move(levels));
      break;
    case GradedAdicTopology::Carrier::Quotient:
      out = GradedAdicTopology::quotient_model(t1.degree(), std::move(levels));
      break;
    case GradedAdicTopology::Carrier::Abelian:
      out = GradedAdicTopology::abelian(std::move(levels));
      break;
  }
  if (satisfies_axioms(t1) && satisfies_axioms(t2) && !satisfies_axioms(out))
    throw std::logic_error("sup of admissible topologies is not admissible: " + out.to_literal());
  return out;
}

HausdorffResult is_hausdorff(const GradedAdicTopology& t) {
  for (std::size_t k = 0; k < t.size(); ++k) {
    const ExtModulus& m = t.levels()[k];
    if (m.is_omega() || m.is_infinite()) continue;
    const BigInt value = *m.to_integer();
    HausdorffResult out{false, 0, ""};
    switch (t.carrier()) {
      case GradedAdicTopology::Carrier::Unitriangular:
      case GradedAdicTopology::Carrier::Quotient: {
        const int d = static_cast<int>(k) + 1;
        out.level = d;
        out.witness = transvection(t.degree(), 1, 1 + d, RingElem(RingSpec::integers(), value)).to_literal();
        break;
      }
      case GradedAdicTopology::Carrier::Subgroup: {
        const int d = t.degree() - static_cast<int>(t.size()) + static_cast<int>(k);
        out.level = d;
        out.witness = transvection(t.degree(), 1, 1 + d, RingElem(RingSpec::integers(), value)).to_literal();
        break;
      }
      case GradedAdicTopology::Carrier::Abelian:
        out.level = static_cast<int>(k) + 1;
        out.witness = "coordinate " + std::to_string(k + 1) + " = " + value.get_str();
        break;
    }
    return out;
  }
  return {true, 0, ""};
}

GradedAdicTopology restrict(const GradedAdicTopology& t, const SubgroupSpec& s) {
  require_unitriangular(t, "restrict");
  const int n = t.degree();
  s.check_degree(n);
  const auto& levels = t.levels();
  auto filtration = [&](int m) {
    if (m == 0) return t;
    if (m >= n - 1) return GradedAdicTopology::abelian({});
    return GradedAdicTopology::subgroup(n, std::vector<ExtModulus>(levels.begin() + m, levels.end()));
  };
  switch (s.kind()) {
    case SubgroupSpec::Kind::Center:
      return GradedAdicTopology::abelian({levels.back()});
    case SubgroupSpec::Kind::OneParam:
      return GradedAdicTopology::abelian({t.level(s.col() - s.row())});
    case SubgroupSpec::Kind::Derived:
      return filtration(1);
    case SubgroupSpec::Kind::Filtration:
      return filtration(s.depth());
    case SubgroupSpec::Kind::WholeGroup:
      return t;
    case SubgroupSpec::Kind::GradedCongruence:
      break;
  }
  throw std::invalid_argument("restrict does not support " + s.to_string());
}

GradedAdicTopology quotient(const GradedAdicTopology& t, const SubgroupSpec& s) {
  require_unitriangular(t, "quotient");
  const int n = t.degree();
  if (!s.is_normal(n)) throw std::invalid_argument(s.to_string() + " is not normal; compare coset topologies instead");
  int m = 0;
  switch (s.kind()) {
    case SubgroupSpec::Kind::Center:
    case SubgroupSpec::Kind::OneParam:  // normal only when it is the corner
      m = n - 2;
      break;
    case SubgroupSpec::Kind::Derived:
      m = 1;
      break;
    case SubgroupSpec::Kind::Filtration:
      m = s.depth();
      break;
    case SubgroupSpec::Kind::WholeGroup:
      m = 0;
      break;
    case SubgroupSpec::Kind::GradedCongruence:
      throw std::invalid_argument("quotient does not support " + s.to_string());
  }
  const auto& levels = t.levels();
  if (m == 0) return GradedAdicTopology::abelian({});
  if (m >= n - 1) return t;
  if (m == 1) return GradedAdicTopology::abelian(std::vector<ExtModulus>(n - 1, levels.front()));
  return GradedAdicTopology::quotient_model(n, std::vector<ExtModulus>(levels.begin(), levels.begin() + m));
}

GradedAdicTopology extension_topology(const GradedAdicTopology& gamma, const ExtModulus& sigma) {
  require_unitriangular(gamma, "extension_topology");
  const ExtModulus& corner = gamma.levels().back();
  if (!ext_divides(sigma, corner))
    throw std::invalid_argument("extension needs sigma | N_{n-1}: " + sigma.to_string() + " does not divide " + corner.to_string());
  std::vector<ExtModulus> levels = gamma.levels();
  levels.back() = ext_gcd(corner, sigma);
  GradedAdicTopology star(gamma.degree(), std::move(levels));
  const SubgroupSpec center = SubgroupSpec::center();
  if (!(restrict(star, center) == GradedAdicTopology::abelian({sigma})))
    throw std::logic_error("extension does not restrict to sigma on the center");
  if (!(quotient(star, center) == quotient(gamma, center)))
    throw std::logic_error("extension changes the quotient by the center");
  std::string reason;
  if (satisfies_axioms(gamma) && !satisfies_axioms(star, &reason))
    throw std::logic_error("extension of an admissible topology is not admissible: " + reason);
  return star;
}

}  // namespace keysub
