// The commutative unital rings supported by the engine: Z and Z/mZ.

#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "keysub/adic.hpp"

namespace keysub {

class RingSpec {
 public:
  enum class Kind { Integers, Residues };

  /// Z.
  RingSpec() = default;
  static RingSpec integers() { return RingSpec(); }
  /// Z/mZ, m >= 2.
  static RingSpec residues(const BigInt& modulus);

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Residues; }
  /// 0 for Z.
  const BigInt& modulus() const noexcept { return modulus_; }

  /// Canonical representative: identity on Z, [0, m) on Z/m.
  BigInt reduce(BigInt value) const;
  void reduce_in_place(BigInt& value) const;

  std::string to_string() const;  // "Z", "Z/12"
  static RingSpec parse(std::string_view text);

  friend bool operator==(const RingSpec&, const RingSpec&) = default;

 private:
  Kind kind_ = Kind::Integers;
  BigInt modulus_ = 0;
};

class RingElem {
 public:
  RingElem(RingSpec spec, BigInt value);

  const RingSpec& spec() const noexcept { return spec_; }
  const BigInt& value() const noexcept { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend RingElem operator+(const RingElem& x, const RingElem& y);
  friend RingElem operator-(const RingElem& x, const RingElem& y);
  friend RingElem operator*(const RingElem& x, const RingElem& y);
  friend RingElem operator-(const RingElem& x);
  friend bool operator==(const RingElem&, const RingElem&) = default;

  std::string to_string() const { return value_.get_str(); }

 private:
  RingSpec spec_;
  BigInt value_;
};

enum class RingOp { Add, Mul, Neg };

/// Dispatching form of the ring operations; `y` is ignored for Neg.
RingElem ring_arith(RingOp op, const RingElem& x, const RingElem* y = nullptr);

/// Z -> Z/mZ.
RingElem reduce_hom(const RingElem& x, const BigInt& m);

/// [0, ..., m-1] for Z/m; throws for Z.
std::vector<RingElem> enumerate_elements(const RingSpec& spec);

/// Uniform on Z/m, or uniform on [-bound, bound] for Z.
BigInt random_value(const RingSpec& spec, std::mt19937_64& rng, long bound = 50);

}  // namespace keysub
