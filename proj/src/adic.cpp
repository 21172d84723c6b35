#include "keysub/adic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace keysub {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Exponent add_exponents(Exponent a, Exponent b) {
  if (a == kInfiniteExponent || b == kInfiniteExponent) return kInfiniteExponent;
  std::uint64_t sum = std::uint64_t{a} + b;
  if (sum >= kInfiniteExponent) throw std::overflow_error("exponent overflow");
  return static_cast<Exponent>(sum);
}

Exponent mul_exponent(Exponent e, Exponent k) {
  if (e == 0 || k == 0) return 0;
  if (e == kInfiniteExponent || k == kInfiniteExponent) return kInfiniteExponent;
  std::uint64_t prod = std::uint64_t{e} * k;
  if (prod >= kInfiniteExponent) throw std::overflow_error("exponent overflow");
  return static_cast<Exponent>(prod);
}

BigInt parse_integer(std::string_view text) {
  text = trim(text);
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("expected a positive integer, got '" + std::string(text) + "'");
  return BigInt(std::string(text));
}

}  // namespace

bool is_prime(Prime p) {
  if (p < 2) return false;
  for (Prime d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PrimeSet::PrimeSet(std::initializer_list<Prime> primes) : PrimeSet(std::vector<Prime>(primes)) {}

PrimeSet::PrimeSet(std::vector<Prime> primes) : primes_(std::move(primes)) {
  for (Prime p : primes_)
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  std::sort(primes_.begin(), primes_.end());
  primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
}

bool PrimeSet::contains(Prime p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

BigInt PrimeSet::power_product(Exponent k) const {
  BigInt result = 1;
  for (Prime p : primes_) {
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
    result *= pk;
  }
  return result;
}

std::string PrimeSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(primes_[i]);
  }
  return out + "}";
}

PrimeSet PrimeSet::parse(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw ParseError("unbalanced braces in prime set");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<Prime> primes;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    BigInt value = parse_integer(token);
    if (!value.fits_ulong_p()) throw ParseError("prime too large");
    Prime p = value.get_ui();
    if (!is_prime(p)) throw ParseError(std::string(token) + " is not prime");
    primes.push_back(p);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return PrimeSet(std::move(primes));
}

ExtModulus ExtModulus::omega() {
  ExtModulus m;
  m.omega_ = true;
  return m;
}

ExtModulus ExtModulus::from_exponents(const ExponentMap& exponents) {
  ExtModulus m;
  for (auto [p, e] : exponents) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (e != 0) m.exponents_[p] = e;
  }
  return m;
}

ExtModulus ExtModulus::prime_power(Prime p, Exponent e) { return from_exponents({{p, e}}); }

ExtModulus ExtModulus::from_integer(const BigInt& value, const PrimeSet* allowed) {
  if (value <= 0)
    throw std::invalid_argument("moduli are positive; the zero subgroup is represented by Omega");
  BigInt rest = value;
  ExtModulus m;
  auto strip = [&](Prime p) {
    Exponent e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e) m.exponents_[p] = e;
  };
  if (allowed) {
    for (Prime p : allowed->primes()) strip(p);
    if (rest != 1)
      throw std::invalid_argument(value.get_str() + " has a prime factor outside " + allowed->to_string());
    return m;
  }
  for (Prime p = 2; BigInt(p) * p <= rest; ++p) strip(p);
  if (rest != 1) {
    if (!rest.fits_ulong_p()) throw std::invalid_argument("prime factor too large: " + rest.get_str());
    m.exponents_[rest.get_ui()] += 1;
  }
  return m;
}

bool ExtModulus::is_infinite() const {
  if (omega_) return false;
  return std::any_of(exponents_.begin(), exponents_.end(),
                     [](const auto& pe) { return pe.second == kInfiniteExponent; });
}

Exponent ExtModulus::exponent(Prime p) const {
  auto it = exponents_.find(p);
  return it == exponents_.end() ? 0 : it->second;
}

std::optional<BigInt> ExtModulus::to_integer() const {
  if (!is_finite()) return std::nullopt;
  BigInt value = 1;
  for (auto [p, e] : exponents_) {
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
    value *= pe;
  }
  return value;
}

bool ExtModulus::supported_by(const PrimeSet& primes) const {
  return std::all_of(exponents_.begin(), exponents_.end(),
                     [&](const auto& pe) { return primes.contains(pe.first); });
}

std::string ExtModulus::to_string() const {
  if (omega_) return "Omega";
  if (exponents_.empty()) return "1";
  std::string out;
  for (auto [p, e] : exponents_) {
    if (!out.empty()) out += '*';
    out += std::to_string(p);
    if (e == kInfiniteExponent)
      out += "^inf";
    else if (e != 1)
      out += '^' + std::to_string(e);
  }
  return out;
}

ExtModulus ExtModulus::parse(std::string_view text, const PrimeSet* allowed) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty modulus literal");
  if (text == "Omega" || text == "omega") return omega();
  ExtModulus result;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto star = text.find('*', start);
    auto factor = trim(text.substr(start, star == std::string_view::npos ? std::string_view::npos : star - start));
    auto caret = factor.find('^');
    BigInt base = parse_integer(factor.substr(0, caret));
    Exponent power = 1;
    if (caret != std::string_view::npos) {
      auto exp_text = trim(factor.substr(caret + 1));
      if (exp_text == "inf" || exp_text == "oo") {
        power = kInfiniteExponent;
      } else {
        BigInt e = parse_integer(exp_text);
        if (!e.fits_uint_p() || e.get_ui() >= kInfiniteExponent) throw ParseError("exponent too large");
        power = static_cast<Exponent>(e.get_ui());
      }
    }
    ExtModulus base_mod;
    try {
      base_mod = from_integer(base, allowed);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    for (auto [p, e] : base_mod.exponents_) {
      Exponent scaled = mul_exponent(e, power);
      if (scaled) result.exponents_[p] = add_exponents(result.exponent(p), scaled);
    }
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return result;
}

std::strong_ordering operator<=>(const ExtModulus& a, const ExtModulus& b) {
  if (a.omega_ != b.omega_) return a.omega_ ? std::strong_ordering::greater : std::strong_ordering::less;
  return std::lexicographical_compare_three_way(a.exponents_.begin(), a.exponents_.end(),
                                                b.exponents_.begin(), b.exponents_.end());
}

bool ext_divides(const ExtModulus& a, const ExtModulus& b) {
  if (b.is_omega()) return true;
  if (a.is_omega()) return false;
  for (auto [p, e] : a.exponents())
    if (e > b.exponent(p)) return false;
  return true;
}

ExtModulus ext_lcm(const ExtModulus& a, const ExtModulus& b) {
  if (a.is_omega() || b.is_omega()) return ExtModulus::omega();
  ExtModulus::ExponentMap out = a.exponents();
  for (auto [p, e] : b.exponents()) out[p] = std::max(out[p], e);
  return ExtModulus::from_exponents(out);
}

ExtModulus ext_gcd(const ExtModulus& a, const ExtModulus& b) {
  if (a.is_omega()) return b;
  if (b.is_omega()) return a;
  ExtModulus::ExponentMap out;
  for (auto [p, e] : a.exponents()) out[p] = std::min(e, b.exponent(p));
  return ExtModulus::from_exponents(out);
}

ExtModulus ext_product(const ExtModulus& a, const ExtModulus& b) {
  if (a.is_omega() || b.is_omega()) return ExtModulus::omega();
  ExtModulus::ExponentMap out = a.exponents();
  for (auto [p, e] : b.exponents()) out[p] = add_exponents(out[p], e);
  return ExtModulus::from_exponents(out);
}

std::vector<BigInt> finite_divisors(const ExtModulus& n, Exponent cap, const PrimeSet& primes) {
  std::vector<std::pair<Prime, Exponent>> bounds;
  if (n.is_omega()) {
    for (Prime p : primes.primes()) bounds.emplace_back(p, cap);
  } else {
    for (auto [p, e] : n.exponents()) bounds.emplace_back(p, std::min(e, cap));
  }
  std::vector<BigInt> out{1};
  for (auto [p, bound] : bounds) {
    std::vector<BigInt> next;
    for (const BigInt& d : out) {
      BigInt value = d;
      for (Exponent e = 0; e <= bound; ++e) {
        next.push_back(value);
        value *= p;
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ExtModulus> enumerate_moduli(const PrimeSet& primes, Exponent cap, bool include_omega) {
  std::vector<Exponent> choices;
  for (Exponent e = 0; e <= cap; ++e) choices.push_back(e);
  choices.push_back(kInfiniteExponent);

  const auto& ps = primes.primes();
  std::vector<std::size_t> digits(ps.size(), 0);
  std::vector<ExtModulus> out;
  while (true) {
    ExtModulus::ExponentMap exps;
    for (std::size_t i = 0; i < ps.size(); ++i) exps[ps[i]] = choices[digits[i]];
    out.push_back(ExtModulus::from_exponents(exps));
    bool exhausted = true;
    for (std::size_t pos = ps.size(); pos-- > 0;) {
      if (++digits[pos] < choices.size()) {
        exhausted = false;
        break;
      }
      digits[pos] = 0;
    }
    if (exhausted) break;
  }
  if (include_omega) out.push_back(ExtModulus::omega());
  return out;
}

BigInt capped_part(const ExtModulus& n, Exponent cap) {
  if (n.is_omega()) return 0;
  BigInt value = 1;
  for (auto [p, e] : n.exponents()) {
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, std::min(e, cap));
    value *= pe;
  }
  return value;
}

bool int_divides(const BigInt& a, const BigInt& b) {
  return mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0;
}

}  // namespace keysub
