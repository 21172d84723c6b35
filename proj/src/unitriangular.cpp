#include "keysub/unitriangular.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace keysub {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw ParseError("expected an integer");
  int sign = 1;
  if (s.front() == '-') {
    sign = -1;
    s.remove_prefix(1);
  }
  int value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("expected an integer, got '" + std::string(s) + "'");
    value = value * 10 + (c - '0');
    if (value > 1'000'000) throw ParseError("integer out of range");
  }
  return sign * value;
}

BigInt parse_bigint(std::string_view s) {
  s = trim(s);
  std::string text(s);
  if (!text.empty() && text.front() == '+') text.erase(0, 1);
  BigInt value;
  if (text.empty() || value.set_str(text, 10) != 0) throw ParseError("expected an integer, got '" + text + "'");
  return value;
}

void require_compatible(const UTMatrix& a, const UTMatrix& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch");
  if (!(a.ring() == b.ring())) throw std::invalid_argument("ring mismatch");
}

// Effective modulus of a level constraint inside the ring: gcd(a, m) over Z/m.
BigInt effective_modulus(const BigInt& a, const RingSpec& ring) {
  if (!ring.is_finite()) return a;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), ring.modulus().get_mpz_t());
  return g;
}

std::size_t checked_count(const BigInt& ring_size, std::size_t free_entries, std::size_t budget) {
  BigInt total = 1;
  for (std::size_t k = 0; k < free_entries; ++k) total *= ring_size;
  if (total > budget) throw std::length_error("enumeration of " + total.get_str() + " elements exceeds budget");
  return total.get_ui();
}

}  // namespace

UTMatrix::UTMatrix(int n, RingSpec ring) : n_(n), ring_(std::move(ring)) {
  if (n < 2) throw std::invalid_argument("unitriangular degree must be >= 2");
  entries_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, BigInt(0));
}

UTMatrix UTMatrix::identity(int n, RingSpec ring) { return UTMatrix(n, std::move(ring)); }

UTMatrix UTMatrix::from_entries(int n, RingSpec ring, const std::map<std::pair<int, int>, BigInt>& entries) {
  UTMatrix m(n, std::move(ring));
  for (const auto& [ij, v] : entries) m.set(ij.first, ij.second, v);
  return m;
}

std::size_t UTMatrix::index(int i, int j) const {
  if (i < 1 || j > n_ || i >= j)
    throw std::out_of_range("entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside the strict upper triangle");
  return static_cast<std::size_t>((i - 1) * (2 * n_ - i) / 2 + (j - i - 1));
}

const BigInt& UTMatrix::at(int i, int j) const { return entries_[index(i, j)]; }

void UTMatrix::set(int i, int j, BigInt value) {
  ring_.reduce_in_place(value);
  entries_[index(i, j)] = std::move(value);
}

bool UTMatrix::is_identity() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& v) { return v == 0; });
}

bool UTMatrix::in_filtration(int m) const {
  for (int d = 1; d <= std::min(m, n_ - 1); ++d)
    for (int i = 1; i + d <= n_; ++i)
      if (at(i, i + d) != 0) return false;
  return true;
}

std::string UTMatrix::to_literal() const {
  std::ostringstream out;
  out << "ut(" << n_;
  for (int i = 1; i < n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      if (at(i, j) != 0) out << "; " << i << ',' << j << '=' << at(i, j).get_str();
  out << ')';
  return out.str();
}

UTMatrix UTMatrix::parse(std::string_view text, const RingSpec& ring) {
  text = trim(text);
  if (text.substr(0, 3) != "ut(" || text.back() != ')') throw ParseError("matrix literal must look like ut(n; i,j=v; ...)");
  text = text.substr(3, text.size() - 4);
  std::vector<std::string_view> parts;
  while (true) {
    auto semi = text.find(';');
    parts.push_back(trim(text.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    text = text.substr(semi + 1);
  }
  int n = parse_int(parts[0]);
  if (n < 2) throw ParseError("unitriangular degree must be >= 2");
  UTMatrix m(n, ring);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    auto part = parts[k];
    auto comma = part.find(',');
    auto eq = part.find('=');
    if (comma == std::string_view::npos || eq == std::string_view::npos || eq < comma)
      throw ParseError("bad matrix entry '" + std::string(part) + "'");
    int i = parse_int(part.substr(0, comma));
    int j = parse_int(part.substr(comma + 1, eq - comma - 1));
    if (i < 1 || j > n || i >= j) throw ParseError("entry index out of range in '" + std::string(part) + "'");
    m.set(i, j, parse_bigint(part.substr(eq + 1)));
  }
  return m;
}

bool operator<(const UTMatrix& a, const UTMatrix& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    int c = cmp(a.entries_[k], b.entries_[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

UTMatrix ut_mul(const UTMatrix& a, const UTMatrix& b) {
  require_compatible(a, b);
  const int n = a.n_;
  UTMatrix c(n, a.ring_);
  BigInt acc;
  for (int i = 1; i < n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      acc = a.at(i, j) + b.at(i, j);
      for (int k = i + 1; k < j; ++k) acc += a.at(i, k) * b.at(k, j);
      c.ring_.reduce_in_place(acc);
      c.entries_[c.index(i, j)] = acc;
    }
  }
  return c;
}

UTMatrix ut_inv(const UTMatrix& m) {
  const int n = m.n_;
  UTMatrix inv(n, m.ring_);
  BigInt acc;
  for (int d = 1; d < n; ++d) {
    for (int i = 1; i + d <= n; ++i) {
      const int j = i + d;
      acc = -m.at(i, j);
      for (int k = i + 1; k < j; ++k) acc -= m.at(i, k) * inv.at(k, j);
      inv.ring_.reduce_in_place(acc);
      inv.entries_[inv.index(i, j)] = acc;
    }
  }
  return inv;
}

UTMatrix transvection(int n, int i, int j, const RingElem& x) {
  UTMatrix m = UTMatrix::identity(n, x.spec());
  m.set(i, j, x.value());
  return m;
}

UTMatrix commutator(const UTMatrix& a, const UTMatrix& b) {
  require_compatible(a, b);
  return ut_mul(ut_mul(a, b), ut_mul(ut_inv(a), ut_inv(b)));
}

RingElem projection(const UTMatrix& m, int i, int j) { return m.entry(i, j); }

CommutatorIdentityResult commutator_identity(int variant, const UTMatrix& m, const RingElem& x, int i, int j, int k) {
  const int n = m.degree();
  if (!(x.spec() == m.ring())) throw std::invalid_argument("ring mismatch");
  if (!(1 <= i && i < j && j < k && k <= n))
    throw std::invalid_argument("commutator_identity needs indices 1 <= i < j < k <= n");
  switch (variant) {
    case 1: {
      RingElem lhs = projection(commutator(m, transvection(n, j, k, x)), i, k);
      RingElem rhs = x * projection(m, i, j);
      return {lhs, rhs, lhs == rhs};
    }
    case 2: {
      RingElem lhs = projection(commutator(transvection(n, i, j, x), m), i, k);
      RingElem rhs = -(x * projection(ut_inv(m), j, k));
      return {lhs, rhs, lhs == rhs};
    }
    case 3: {
      if (i != n - 2 || j != n - 1 || k != n)
        throw std::invalid_argument("variant 3 is stated for (i,j,k) = (n-2, n-1, n)");
      RingElem lhs = projection(commutator(transvection(n, n - 2, n - 1, x), m), n - 2, n);
      RingElem rhs = x * projection(m, n - 1, n);
      return {lhs, rhs, lhs == rhs};
    }
    default:
      throw std::invalid_argument("commutator_identity variant must be 1, 2 or 3");
  }
}

SubgroupSpec SubgroupSpec::one_param(int i, int j) {
  if (i < 1 || i >= j) throw std::invalid_argument("one-parameter subgroup needs 1 <= i < j");
  SubgroupSpec s(Kind::OneParam);
  s.i_ = i;
  s.j_ = j;
  return s;
}

SubgroupSpec SubgroupSpec::filtration(int m) {
  if (m < 0) throw std::invalid_argument("filtration depth must be >= 0");
  SubgroupSpec s(Kind::Filtration);
  s.m_ = m;
  return s;
}

SubgroupSpec SubgroupSpec::graded_congruence(std::vector<BigInt> moduli) {
  if (moduli.empty()) throw std::invalid_argument("graded congruence needs at least one level");
  for (const BigInt& a : moduli)
    if (a < 0) throw std::invalid_argument("graded congruence moduli are nonnegative");
  const std::size_t levels = moduli.size();
  for (std::size_t d = 1; d <= levels; ++d)
    for (std::size_t e = 1; d + e <= levels; ++e) {
      const BigInt prod = moduli[d - 1] * moduli[e - 1];
      if (!int_divides(moduli[d + e - 1], prod))
        throw std::invalid_argument("graded congruence violates a_{d+e} | a_d a_e at d=" + std::to_string(d) +
                                    ", e=" + std::to_string(e));
    }
  SubgroupSpec s(Kind::GradedCongruence);
  s.moduli_ = std::move(moduli);
  return s;
}

void SubgroupSpec::check_degree(int n) const {
  switch (kind_) {
    case Kind::OneParam:
      if (j_ > n) throw std::invalid_argument("one-parameter subgroup " + to_string() + " does not fit UT(" + std::to_string(n) + ")");
      break;
    case Kind::Filtration:
      if (m_ > n - 1) throw std::invalid_argument("filtration depth exceeds n-1");
      break;
    case Kind::GradedCongruence:
      if (static_cast<int>(moduli_.size()) != n - 1)
        throw std::invalid_argument("graded congruence has " + std::to_string(moduli_.size()) + " levels, UT(" +
                                    std::to_string(n) + ") has " + std::to_string(n - 1));
      break;
    default:
      break;
  }
}

bool SubgroupSpec::is_center(int n) const {
  check_degree(n);
  switch (kind_) {
    case Kind::Center:
      return true;
    case Kind::OneParam:
      return i_ == 1 && j_ == n;
    case Kind::Filtration:
      return m_ == n - 2;
    case Kind::Derived:
      return n == 3;
    default:
      return false;
  }
}

bool SubgroupSpec::is_normal(int n) const {
  check_degree(n);
  switch (kind_) {
    case Kind::Center:
    case Kind::Filtration:
    case Kind::Derived:
    case Kind::WholeGroup:
      return true;
    case Kind::OneParam:
      return is_center(n) || n == 2;
    case Kind::GradedCongruence:
      return false;  // not certified in general
  }
  return false;
}

std::string SubgroupSpec::to_string() const {
  switch (kind_) {
    case Kind::Center:
      return "center";
    case Kind::OneParam:
      return "oneparam(" + std::to_string(i_) + "," + std::to_string(j_) + ")";
    case Kind::Filtration:
      return "filtration(" + std::to_string(m_) + ")";
    case Kind::Derived:
      return "derived";
    case Kind::WholeGroup:
      return "whole";
    case Kind::GradedCongruence: {
      std::string out = "graded(";
      for (std::size_t k = 0; k < moduli_.size(); ++k) out += (k ? "," : "") + moduli_[k].get_str();
      return out + ")";
    }
  }
  return "?";
}

SubgroupSpec SubgroupSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "center" || s == "centre" || s == "z") return center();
  if (s == "derived") return derived();
  if (s == "whole") return whole_group();
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw ParseError("unknown subgroup literal '" + s + "'");
  std::string head = s.substr(0, open);
  std::string args = s.substr(open + 1, s.size() - open - 2);
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    auto comma = args.find(',', start);
    items.push_back(args.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  try {
    if ((head == "oneparam" || head == "g") && items.size() == 2) return one_param(parse_int(items[0]), parse_int(items[1]));
    if (head == "filtration" && items.size() == 1) return filtration(parse_int(items[0]));
    if (head == "graded") {
      std::vector<BigInt> moduli;
      for (const auto& item : items) moduli.push_back(parse_bigint(item));
      return graded_congruence(std::move(moduli));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown subgroup literal '" + s + "'");
}

bool subgroup_membership(const UTMatrix& m, const SubgroupSpec& s) {
  const int n = m.degree();
  s.check_degree(n);
  auto only_entry = [&](int ii, int jj) {
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if ((i != ii || j != jj) && m.at(i, j) != 0) return false;
    return true;
  };
  switch (s.kind()) {
    case SubgroupSpec::Kind::Center:
      return only_entry(1, n);
    case SubgroupSpec::Kind::OneParam:
      return only_entry(s.row(), s.col());
    case SubgroupSpec::Kind::Filtration:
      return m.in_filtration(s.depth());
    case SubgroupSpec::Kind::Derived:
      return m.in_filtration(1);
    case SubgroupSpec::Kind::WholeGroup:
      return true;
    case SubgroupSpec::Kind::GradedCongruence:
      for (int d = 1; d < n; ++d) {
        const BigInt a = effective_modulus(s.moduli()[d - 1], m.ring());
        for (int i = 1; i + d <= n; ++i)
          if (!int_divides(a, m.at(i, i + d))) return false;
      }
      return true;
  }
  return false;
}

namespace {

// Per-position generator value (0 meaning the position is absent).
std::vector<std::pair<std::pair<int, int>, BigInt>> position_generators(int n, const RingSpec& ring, const SubgroupSpec& s) {
  s.check_degree(n);
  std::vector<std::pair<std::pair<int, int>, BigInt>> out;
  for (int d = 1; d < n; ++d)
    for (int i = 1; i + d <= n; ++i) {
      const int j = i + d;
      BigInt g = 0;
      switch (s.kind()) {
        case SubgroupSpec::Kind::Center:
          g = (i == 1 && j == n) ? 1 : 0;
          break;
        case SubgroupSpec::Kind::OneParam:
          g = (i == s.row() && j == s.col()) ? 1 : 0;
          break;
        case SubgroupSpec::Kind::Filtration:
          g = d > s.depth() ? 1 : 0;
          break;
        case SubgroupSpec::Kind::Derived:
          g = d > 1 ? 1 : 0;
          break;
        case SubgroupSpec::Kind::WholeGroup:
          g = 1;
          break;
        case SubgroupSpec::Kind::GradedCongruence:
          g = effective_modulus(s.moduli()[d - 1], ring);
          break;
      }
      ring.reduce_in_place(g);
      if (g == 0) continue;
      out.push_back({{i, j}, g});
    }
  return out;
}

}  // namespace

std::vector<UTMatrix> subgroup_generators(int n, const RingSpec& ring, const SubgroupSpec& s) {
  std::vector<UTMatrix> gens;
  for (const auto& [ij, g] : position_generators(n, ring, s)) gens.push_back(transvection(n, ij.first, ij.second, RingElem(ring, g)));
  return gens;
}

std::vector<UTMatrix> subgroup_members(int n, const RingSpec& ring, const SubgroupSpec& s, std::size_t budget) {
  if (!ring.is_finite()) throw std::invalid_argument("infinite ring: subgroup members cannot be enumerated");
  // Every supported subgroup is a box: each position ranges over the ideal
  // generated by its generator inside Z/m.
  struct Slot {
    int i, j;
    BigInt step;
    unsigned long count;
  };
  std::vector<Slot> slots;
  BigInt total = 1;
  for (const auto& [ij, g] : position_generators(n, ring, s)) {
    BigInt step;
    mpz_gcd(step.get_mpz_t(), g.get_mpz_t(), ring.modulus().get_mpz_t());
    BigInt count = ring.modulus() / step;
    total *= count;
    if (total > budget) throw std::length_error("subgroup enumeration exceeds budget");
    slots.push_back({ij.first, ij.second, step, count.get_ui()});
  }
  std::vector<UTMatrix> out;
  out.reserve(total.get_ui());
  std::vector<unsigned long> digits(slots.size(), 0);
  while (true) {
    UTMatrix m = UTMatrix::identity(n, ring);
    for (std::size_t k = 0; k < slots.size(); ++k) m.set(slots[k].i, slots[k].j, slots[k].step * digits[k]);
    out.push_back(std::move(m));
    bool exhausted = true;
    for (std::size_t pos = slots.size(); pos-- > 0;) {
      if (++digits[pos] < slots[pos].count) {
        exhausted = false;
        break;
      }
      digits[pos] = 0;
    }
    if (exhausted) break;
  }
  return out;
}

std::vector<UTMatrix> enumerate_group(int n, const BigInt& m, std::size_t budget) {
  const RingSpec ring = RingSpec::residues(m);
  checked_count(m, static_cast<std::size_t>(n) * (n - 1) / 2, budget);
  return subgroup_members(n, ring, SubgroupSpec::whole_group(), budget);
}

std::vector<UTMatrix> saturate(const std::vector<UTMatrix>& u, const SubgroupSpec& h, std::size_t budget) {
  if (u.empty()) return {};
  const int n = u.front().degree();
  const RingSpec& ring = u.front().ring();
  if (!ring.is_finite()) throw std::invalid_argument("infinite ring: saturation needs a finite quotient");
  const auto members = subgroup_members(n, ring, h, budget);
  if (static_cast<double>(members.size()) * static_cast<double>(u.size()) > static_cast<double>(budget) * 4)
    throw std::length_error("saturation exceeds budget");
  std::vector<UTMatrix> out;
  out.reserve(u.size() * members.size());
  for (const auto& x : u)
    for (const auto& y : members) out.push_back(ut_mul(x, y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace keysub
