#include "keysub/ring.hpp"

#include <cctype>
#include <stdexcept>

namespace keysub {

RingSpec RingSpec::residues(const BigInt& modulus) {
  if (modulus < 2) throw std::invalid_argument("residue ring modulus must be >= 2");
  RingSpec spec;
  spec.kind_ = Kind::Residues;
  spec.modulus_ = modulus;
  return spec;
}

BigInt RingSpec::reduce(BigInt value) const {
  reduce_in_place(value);
  return value;
}

void RingSpec::reduce_in_place(BigInt& value) const {
  if (kind_ == Kind::Residues) mpz_fdiv_r(value.get_mpz_t(), value.get_mpz_t(), modulus_.get_mpz_t());
}

std::string RingSpec::to_string() const {
  return kind_ == Kind::Integers ? "Z" : "Z/" + modulus_.get_str();
}

RingSpec RingSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "Z") return integers();
  if (s.size() > 2 && s[0] == 'Z' && s[1] == '/') {
    std::string digits = s.substr(2);
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad ring literal '" + s + "'");
    BigInt m(digits);
    if (m < 2) throw ParseError("residue ring modulus must be >= 2");
    return residues(m);
  }
  throw ParseError("bad ring literal '" + s + "'");
}

RingElem::RingElem(RingSpec spec, BigInt value) : spec_(std::move(spec)), value_(std::move(value)) {
  spec_.reduce_in_place(value_);
}

namespace {
void require_same(const RingElem& x, const RingElem& y) {
  if (!(x.spec() == y.spec()))
    throw std::invalid_argument("ring mismatch: " + x.spec().to_string() + " vs " + y.spec().to_string());
}
}  // namespace

RingElem operator+(const RingElem& x, const RingElem& y) {
  require_same(x, y);
  return RingElem(x.spec_, x.value_ + y.value_);
}

RingElem operator-(const RingElem& x, const RingElem& y) {
  require_same(x, y);
  return RingElem(x.spec_, x.value_ - y.value_);
}

RingElem operator*(const RingElem& x, const RingElem& y) {
  require_same(x, y);
  return RingElem(x.spec_, x.value_ * y.value_);
}

RingElem operator-(const RingElem& x) { return RingElem(x.spec_, -x.value_); }

RingElem ring_arith(RingOp op, const RingElem& x, const RingElem* y) {
  switch (op) {
    case RingOp::Neg:
      return -x;
    case RingOp::Add:
    case RingOp::Mul:
      if (!y) throw std::invalid_argument("binary ring operation needs two operands");
      return op == RingOp::Add ? x + *y : x * *y;
  }
  throw std::logic_error("unreachable");
}

RingElem reduce_hom(const RingElem& x, const BigInt& m) {
  if (x.spec().kind() != RingSpec::Kind::Integers) throw std::invalid_argument("reduce_hom expects an integer");
  return RingElem(RingSpec::residues(m), x.value());
}

std::vector<RingElem> enumerate_elements(const RingSpec& spec) {
  if (!spec.is_finite()) throw std::invalid_argument("infinite ring");
  if (!spec.modulus().fits_ulong_p() || spec.modulus() > (1u << 24))
    throw std::length_error("ring too large to enumerate");
  std::vector<RingElem> out;
  for (unsigned long v = 0; v < spec.modulus().get_ui(); ++v) out.emplace_back(spec, BigInt(v));
  return out;
}

BigInt random_value(const RingSpec& spec, std::mt19937_64& rng, long bound) {
  if (spec.is_finite()) {
    if (spec.modulus().fits_ulong_p()) {
      std::uniform_int_distribution<unsigned long> dist(0, spec.modulus().get_ui() - 1);
      return BigInt(dist(rng));
    }
    gmp_randclass gen(gmp_randinit_default);
    gen.seed(static_cast<unsigned long>(rng()));
    return gen.get_z_range(spec.modulus());
  }
  std::uniform_int_distribution<long> dist(-bound, bound);
  return BigInt(dist(rng));
}

}  // namespace keysub
