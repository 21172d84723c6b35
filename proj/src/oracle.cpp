#include "keysub/oracle.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace keysub {

namespace {

BigInt gcd_with(const BigInt& a, const BigInt& l) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), l.get_mpz_t());
  return g;
}

std::vector<std::pair<int, int>> positions(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  return out;
}

std::size_t packed_index(int n, int i, int j) { return static_cast<std::size_t>((i - 1) * (2 * n - i) / 2 + (j - i - 1)); }

// filter(sets1) ⊆ filter(sets2): every member of family 1 contains a member of family 2.
bool filter_coarser(std::size_t count1, std::size_t count2, const std::function<bool(std::size_t, std::size_t)>& subset21) {
  for (std::size_t k1 = 0; k1 < count1; ++k1) {
    bool found = false;
    for (std::size_t k2 = count2; k2-- > 0 && !found;) found = subset21(k2, k1);
    if (!found) return false;
  }
  return true;
}

bool bits_subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] && !b[k]) return false;
  return true;
}

bool families_equal(const std::vector<std::vector<bool>>& f1, const std::vector<std::vector<bool>>& f2) {
  auto sub21 = [&](std::size_t k2, std::size_t k1) { return bits_subset(f2[k2], f1[k1]); };
  auto sub12 = [&](std::size_t k1, std::size_t k2) { return bits_subset(f1[k1], f2[k2]); };
  return filter_coarser(f1.size(), f2.size(), sub21) && filter_coarser(f2.size(), f1.size(), sub12);
}

void require_box(const GradedAdicTopology& t, const SearchBox& box) {
  if (t.carrier() != GradedAdicTopology::Carrier::Unitriangular)
    throw std::invalid_argument("oracles need a topology on UT(n, Z), got " + t.to_literal());
  if (!t.supported_by(box.primes) || t.max_finite_exponent() > box.exp_cap)
    throw std::invalid_argument(t.to_literal() + " lies outside the search box " + box.to_string());
}

int quotient_depth(const SubgroupSpec& s, int n) {
  switch (s.kind()) {
    case SubgroupSpec::Kind::Center:
    case SubgroupSpec::Kind::OneParam:
      return n - 2;
    case SubgroupSpec::Kind::Derived:
      return 1;
    case SubgroupSpec::Kind::Filtration:
      return s.depth();
    case SubgroupSpec::Kind::WholeGroup:
      return 0;
    default:
      throw std::invalid_argument("no quotient model for " + s.to_string());
  }
}

// Basic subset k of a closed-form subspace topology, as a box inside UT(n, Z/L).
PositionBox realize_restriction(const GradedAdicTopology& r, const SubgroupSpec& s, int n, Exponent k, const BigInt& l) {
  PositionBox box{n, std::vector<BigInt>(static_cast<std::size_t>(n) * (n - 1) / 2, BigInt(1))};
  auto put = [&](int i, int j, const ExtModulus& m) { box.moduli[packed_index(n, i, j)] = gcd_with(capped_part(m, k), l); };
  using Carrier = GradedAdicTopology::Carrier;
  if (r.carrier() == Carrier::Abelian) {
    if (r.size() == 0) return box;
    if (r.size() != 1) throw std::logic_error("unexpected subspace model " + r.to_literal());
    if (s.kind() == SubgroupSpec::Kind::OneParam)
      put(s.row(), s.col(), r.levels()[0]);
    else
      put(1, n, r.levels()[0]);
    return box;
  }
  const int first = r.carrier() == Carrier::Subgroup ? n - static_cast<int>(r.size()) : 1;
  for (int d = first; d < n; ++d)
    for (int i = 1; i + d <= n; ++i) put(i, i + d, r.level(d));
  return box;
}

// Basic subset k of a closed-form quotient topology, pulled back to UT(n, Z/L).
PositionBox realize_quotient(const GradedAdicTopology& q, int n, int depth, Exponent k, const BigInt& l) {
  PositionBox box{n, std::vector<BigInt>(static_cast<std::size_t>(n) * (n - 1) / 2, BigInt(1))};
  auto put = [&](int i, int j, const ExtModulus& m) { box.moduli[packed_index(n, i, j)] = gcd_with(capped_part(m, k), l); };
  using Carrier = GradedAdicTopology::Carrier;
  if (depth == 0) return box;
  if (q.carrier() == Carrier::Abelian) {
    if (static_cast<int>(q.size()) != n - 1) throw std::logic_error("unexpected quotient model " + q.to_literal());
    for (int i = 1; i < n; ++i) put(i, i + 1, q.levels()[i - 1]);
    return box;
  }
  for (int d = 1; d <= std::min(depth, static_cast<int>(q.size())); ++d)
    for (int i = 1; i + d <= n; ++i) put(i, i + d, q.level(d));
  return box;
}

}  // namespace

PositionBox PositionBox::graded(int n, const std::vector<BigInt>& level_moduli) {
  PositionBox box{n, {}};
  for (const auto& [i, j] : positions(n)) box.moduli.push_back(level_moduli[j - i - 1]);
  return box;
}

bool PositionBox::contains(const UTMatrix& m) const {
  for (std::size_t k = 0; k < moduli.size(); ++k)
    if (!int_divides(moduli[k], m.packed(k))) return false;
  return true;
}

std::vector<UTMatrix> PositionBox::generators(const RingSpec& ring) const {
  std::vector<UTMatrix> out;
  std::size_t k = 0;
  for (const auto& [i, j] : positions(n)) {
    const BigInt g = ring.reduce(moduli[k++]);
    if (g != 0) out.push_back(transvection(n, i, j, RingElem(ring, g)));
  }
  return out;
}

bool PositionBox::right_closed_under(int i, int j, const BigInt& g, const RingSpec& ring) const {
  // M e_ij(g) adds g to (i,j) and m_ri g to (r,j) for r < i.
  auto modulus = [&](int a, int b) { return ring.is_finite() ? gcd_with(moduli[packed_index(n, a, b)], ring.modulus()) : moduli[packed_index(n, a, b)]; };
  if (!int_divides(modulus(i, j), ring.reduce(g))) return false;
  for (int r = 1; r < i; ++r)
    if (!int_divides(modulus(r, j), ring.reduce(modulus(r, i) * g))) return false;
  return true;
}

SaturationOracle::SaturationOracle(int n, const BigInt& truncation, const SubgroupSpec& h, std::size_t budget)
    : n_(n), ring_(RingSpec::residues(truncation)) {
  for (const auto& m : subgroup_members(n, ring_, h, budget)) h_inverses_.push_back(ut_inv(m));
}

bool SaturationOracle::contains(const std::vector<BigInt>& moduli, const UTMatrix& m) {
  auto key = std::make_pair(moduli, m);
  if (auto it = membership_memo_.find(key); it != membership_memo_.end()) return it->second;
  ++queries_;
  bool found = false;
  for (const auto& hinv : h_inverses_)
    if (in_graded(ut_mul(m, hinv), moduli)) {
      found = true;
      break;
    }
  membership_memo_.emplace(std::move(key), found);
  return found;
}

bool SaturationOracle::saturation_subset(const std::vector<BigInt>& a1, const std::vector<BigInt>& a2) {
  // H ⊆ U(a2)·H always, so only the generators of U(a1) need checking.
  for (int d = 1; d < n_; ++d) {
    const BigInt g = ring_.reduce(gcd_with(a1[d - 1], ring_.modulus()));
    if (g == 0) continue;
    for (int i = 1; i + d <= n_; ++i) {
      auto key = std::make_tuple(i, i + d, g, a2);
      auto it = memo_.find(key);
      bool member;
      if (it != memo_.end()) {
        member = it->second;
      } else {
        member = contains(a2, transvection(n_, i, i + d, RingElem(ring_, g)));
        memo_.emplace(std::move(key), member);
      }
      if (!member) return false;
    }
  }
  return true;
}

std::vector<std::vector<BigInt>> truncated_chain(const GradedAdicTopology& t, const SearchBox& box) {
  require_box(t, box);
  std::vector<std::vector<BigInt>> out;
  for (Exponent k = 0; k <= box.chain_length(); ++k) {
    auto moduli = basic_moduli(t, k);
    for (auto& a : moduli) a = gcd_with(a, box.truncation);
    out.push_back(std::move(moduli));
  }
  return out;
}

bool coset_filters_equal(SaturationOracle& oracle, const GradedAdicTopology& t1, const GradedAdicTopology& t2,
                         const SearchBox& box) {
  if (t1.degree() != t2.degree() || t1.degree() != oracle.degree())
    throw std::invalid_argument("coset comparison across different groups");
  const auto c1 = truncated_chain(t1, box);
  const auto c2 = truncated_chain(t2, box);
  auto sub21 = [&](std::size_t k2, std::size_t k1) { return oracle.saturation_subset(c2[k2], c1[k1]); };
  auto sub12 = [&](std::size_t k1, std::size_t k2) { return oracle.saturation_subset(c1[k1], c2[k2]); };
  return filter_coarser(c1.size(), c2.size(), sub21) && filter_coarser(c2.size(), c1.size(), sub12);
}

VerdictReport coset_topologies_equal(const GradedAdicTopology& t1, const GradedAdicTopology& t2, const SubgroupSpec& h,
                                     const SearchBox& box) {
  VerdictReport report;
  report.property = "coset-equal";
  report.subject = h.to_string();
  report.gamma = t2.to_literal();
  report.box = box;
  SaturationOracle oracle(t1.degree(), box.truncation, h);
  const bool equal = coset_filters_equal(oracle, t1, t2, box);
  report.verdict = equal ? Verdict::Holds : Verdict::Fails;
  if (!equal) report.witnesses.push_back(t1.to_literal());
  report.notes.push_back("saturations compared in UT(" + std::to_string(t1.degree()) + ", Z/" + box.truncation.get_str() +
                         "); " + std::to_string(oracle.queries()) + " membership queries");
  return report;
}

bool oracle_restriction_equals(const GradedAdicTopology& t, const SubgroupSpec& s, const GradedAdicTopology& expected,
                               const SearchBox& box) {
  const int n = t.degree();
  const auto chain = truncated_chain(t, box);
  const RingSpec ring = RingSpec::residues(box.truncation);
  const auto members = subgroup_members(n, ring, s);
  std::vector<std::vector<bool>> oracle_sets, closed_sets;
  for (Exponent k = 0; k <= box.chain_length(); ++k) {
    const PositionBox realized = realize_restriction(expected, s, n, k, box.truncation);
    std::vector<bool> o(members.size()), c(members.size());
    for (std::size_t idx = 0; idx < members.size(); ++idx) {
      o[idx] = in_graded(members[idx], chain[k]);
      c[idx] = realized.contains(members[idx]);
    }
    oracle_sets.push_back(std::move(o));
    closed_sets.push_back(std::move(c));
  }
  return families_equal(oracle_sets, closed_sets);
}

VerdictReport oracle_restrict_check(const GradedAdicTopology& t, const SubgroupSpec& s, const SearchBox& box) {
  VerdictReport report;
  report.property = "restrict-oracle";
  report.subject = s.to_string();
  report.gamma = t.to_literal();
  report.box = box;
  const GradedAdicTopology closed = restrict(t, s);
  const bool agree = oracle_restriction_equals(t, s, closed, box);
  report.verdict = agree ? Verdict::Holds : Verdict::Fails;
  if (!agree) report.witnesses.push_back(closed.to_literal());
  report.notes.push_back("closed form " + closed.to_literal() + " vs U_k ∩ S in UT(" + std::to_string(t.degree()) + ", Z/" +
                         box.truncation.get_str() + ")");
  return report;
}

VerdictReport oracle_quotient_check(const GradedAdicTopology& t, const SubgroupSpec& s, const SearchBox& box,
                                    SaturationOracle* shared) {
  const int n = t.degree();
  VerdictReport report;
  report.property = "quotient-oracle";
  report.subject = s.to_string();
  report.gamma = t.to_literal();
  report.box = box;
  const GradedAdicTopology closed = quotient(t, s);
  const int depth = quotient_depth(s, n);
  const auto chain = truncated_chain(t, box);
  std::optional<SaturationOracle> own;
  if (!shared) own.emplace(n, box.truncation, s);
  SaturationOracle& oracle = shared ? *shared : *own;
  if (oracle.degree() != n || !(oracle.ring().modulus() == box.truncation))
    throw std::invalid_argument("shared oracle does not match the check");
  const RingSpec& ring = oracle.ring();
  const auto s_generators = subgroup_generators(n, ring, s);
  std::vector<PositionBox> realized;
  for (Exponent k = 0; k <= box.chain_length(); ++k) realized.push_back(realize_quotient(closed, n, depth, k, box.truncation));

  // closed_k2 ⊆ U_k1·S: generators of the closed-form box lie in the saturation.
  auto closed_in_sat = [&](std::size_t k2, std::size_t k1) {
    for (const auto& g : realized[k2].generators(ring))
      if (!oracle.contains(chain[k1], g)) return false;
    return true;
  };
  // U_k1·S ⊆ closed_k2: the box contains I and is right-stable under every generator.
  auto sat_in_closed = [&](std::size_t k1, std::size_t k2) {
    const PositionBox& target = realized[k2];
    for (int d = 1; d < n; ++d)
      for (int i = 1; i + d <= n; ++i)
        if (!target.right_closed_under(i, i + d, chain[k1][d - 1], ring)) return false;
    for (const auto& g : s_generators)
      for (const auto& [i, j] : positions(n))
        if (g.at(i, j) != 0 && !target.right_closed_under(i, j, g.at(i, j), ring)) return false;
    return true;
  };
  const std::size_t count = chain.size();
  const bool agree = filter_coarser(count, count, closed_in_sat) && filter_coarser(count, count, sat_in_closed);
  report.verdict = agree ? Verdict::Holds : Verdict::Fails;
  if (!agree) report.witnesses.push_back(closed.to_literal());
  report.notes.push_back("closed form " + closed.to_literal() + " vs U_k·S in UT(" + std::to_string(n) + ", Z/" +
                         box.truncation.get_str() + ")");
  return report;
}

VerdictReport rd_identity_check(const SubgroupSpec& inner, const SubgroupSpec& outer, const GradedAdicTopology& t,
                                const SearchBox& box) {
  const int n = t.degree();
  VerdictReport report;
  report.property = "subspace-quotient-identity";
  report.subject = inner.to_string() + " <= " + outer.to_string();
  report.gamma = t.to_literal();
  report.box = box;
  const RingSpec ring = RingSpec::residues(box.truncation);
  for (const auto& g : subgroup_generators(n, ring, inner))
    if (!subgroup_membership(g, outer))
      throw std::invalid_argument(inner.to_string() + " is not contained in " + outer.to_string());

  const auto chain = truncated_chain(t, box);
  const auto outer_members = subgroup_members(n, ring, outer);
  std::vector<UTMatrix> inner_inverses;
  for (const auto& m : subgroup_members(n, ring, inner)) inner_inverses.push_back(ut_inv(m));
  if (static_cast<double>(outer_members.size()) * inner_inverses.size() * chain.size() > 4.0e7)
    throw std::length_error("identity check exceeds the enumeration budget");

  // Left: the subspace topology on O, then saturated by I.  Right: the
  // saturation U_k·I, intersected with O.
  std::vector<std::vector<bool>> left, right;
  for (const auto& a : chain) {
    std::vector<bool> l(outer_members.size()), r(outer_members.size());
    for (std::size_t idx = 0; idx < outer_members.size(); ++idx) {
      for (const auto& iinv : inner_inverses) {
        const UTMatrix y = ut_mul(outer_members[idx], iinv);
        if (!in_graded(y, a)) continue;
        r[idx] = true;
        if (subgroup_membership(y, outer)) l[idx] = true;
        if (l[idx]) break;
      }
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  const bool agree = families_equal(left, right);
  report.verdict = agree ? Verdict::Holds : Verdict::Fails;
  report.notes.push_back("explicit subset families over " + std::to_string(outer_members.size()) + " elements of " +
                         outer.to_string() + " in UT(" + std::to_string(n) + ", Z/" + box.truncation.get_str() + ")");
  return report;
}

}  // namespace keysub
