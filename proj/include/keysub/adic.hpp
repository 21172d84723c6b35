// Extended supernatural numbers: the divisibility lattice indexing every
// linear (adic) topology handled by the engine.
//
// An ExtModulus is either the distinguished top element Omega (the discrete
// topology, {e} open) or a supernatural number prod p^{e_p} with finitely many
// primes and e_p in N u {inf}.  A supernatural with some infinite exponent
// names a Hausdorff adic topology; a purely finite one names a non-Hausdorff
// congruence topology.

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace keysub {

using BigInt = mpz_class;
using Prime = std::uint64_t;
using Exponent = std::uint32_t;

inline constexpr Exponent kInfiniteExponent = std::numeric_limits<Exponent>::max();

/// Thrown for malformed literals in any of the textual grammars.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(Prime p);

/// A finite, sorted, duplicate-free set of primes.
class PrimeSet {
 public:
  PrimeSet() = default;
  PrimeSet(std::initializer_list<Prime> primes);
  explicit PrimeSet(std::vector<Prime> primes);

  const std::vector<Prime>& primes() const noexcept { return primes_; }
  bool contains(Prime p) const;
  bool empty() const noexcept { return primes_.empty(); }
  std::size_t size() const noexcept { return primes_.size(); }

  /// prod_{p in P} p^k.
  BigInt power_product(Exponent k) const;

  std::string to_string() const;  // "{2,3}"
  static PrimeSet parse(std::string_view text);  // "2,3" or "{2,3}"

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<Prime> primes_;
};

class ExtModulus {
 public:
  using ExponentMap = std::map<Prime, Exponent>;

  /// The supernatural number 1.
  ExtModulus() = default;

  static ExtModulus omega();
  static ExtModulus one() { return ExtModulus(); }
  static ExtModulus from_exponents(const ExponentMap& exponents);
  static ExtModulus prime_power(Prime p, Exponent e);

  /// Factorizes a positive integer.  With `allowed` set, a prime factor
  /// outside the set is rejected.
  static ExtModulus from_integer(const BigInt& value, const PrimeSet* allowed = nullptr);

  bool is_omega() const noexcept { return omega_; }
  /// Some exponent is infinite (false for Omega).
  bool is_infinite() const;
  /// A supernatural with only finite exponents.
  bool is_finite() const { return !omega_ && !is_infinite(); }

  Exponent exponent(Prime p) const;
  const ExponentMap& exponents() const noexcept { return exponents_; }

  /// The integer value of a finite modulus.
  std::optional<BigInt> to_integer() const;

  /// True when every prime in the support belongs to `primes`.
  bool supported_by(const PrimeSet& primes) const;

  std::string to_string() const;
  static ExtModulus parse(std::string_view text, const PrimeSet* allowed = nullptr);

  friend bool operator==(const ExtModulus&, const ExtModulus&) = default;
  friend std::strong_ordering operator<=>(const ExtModulus& a, const ExtModulus& b);

 private:
  bool omega_ = false;
  ExponentMap exponents_;  // canonical: no zero entries
};

/// a | b in the extended order; every modulus divides Omega, Omega divides only Omega.
bool ext_divides(const ExtModulus& a, const ExtModulus& b);
ExtModulus ext_lcm(const ExtModulus& a, const ExtModulus& b);
ExtModulus ext_gcd(const ExtModulus& a, const ExtModulus& b);
/// Exponents add; Omega absorbs everything, including 1.
ExtModulus ext_product(const ExtModulus& a, const ExtModulus& b);

/// All prod p^{e_p} with e_p <= min(exponent_N(p), cap), ascending.  Omega
/// uses the full prime set with the same cap.
std::vector<BigInt> finite_divisors(const ExtModulus& n, Exponent cap, const PrimeSet& primes);

/// Every modulus with support in P and exponents in {0..cap, inf}, plus
/// Omega last when requested.  The last prime varies fastest.
std::vector<ExtModulus> enumerate_moduli(const PrimeSet& primes, Exponent cap, bool include_omega);

/// The largest finite divisor of `n` whose exponents are capped at `cap`:
/// prod p^{min(e_p, cap)}.  Returns 0 for Omega (the zero ideal).
BigInt capped_part(const ExtModulus& n, Exponent cap);

/// Divisibility on integers with 0 | x iff x == 0.
bool int_divides(const BigInt& a, const BigInt& b);

}  // namespace keysub
