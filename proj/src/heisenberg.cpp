#include "keysub/heisenberg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
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
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

BigInt parse_bigint(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.front() == '+') t.erase(0, 1);
  BigInt v;
  if (t.empty() || v.set_str(t, 10) != 0) throw ParseError("expected an integer, got '" + text + "'");
  return v;
}

int parse_small(const std::string& text) {
  BigInt v = parse_bigint(text);
  if (v < 1 || v > 64) throw ParseError("dimension out of range: " + text);
  return static_cast<int>(v.get_si());
}

Vec reduce_vec(const RingSpec& ring, Vec v) {
  for (auto& c : v) ring.reduce_in_place(c);
  return v;
}

Vec add(const RingSpec& ring, const Vec& u, const Vec& v) {
  Vec out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = ring.reduce(u[k] + v[k]);
  return out;
}

Vec neg(const RingSpec& ring, const Vec& u) {
  Vec out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = ring.reduce(-u[k]);
  return out;
}

void check_shape(const HeisenbergElement& u, const BiadditiveMap& w) {
  if (static_cast<int>(u.a.size()) != w.dim_a() || static_cast<int>(u.x.size()) != w.dim_e() ||
      static_cast<int>(u.f.size()) != w.dim_f())
    throw std::invalid_argument("dimension mismatch: element " + u.to_literal() + " is not typed by " + w.to_string());
}

std::string join(const Vec& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k].get_str();
  return out;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const BigInt& c) { return c == 0; });
}

// Odometer over a box of `dims` coordinates, each in [lo, hi].
template <class Fn>
void for_each_point(int dims, long lo, long hi, Fn&& fn) {
  Vec point(dims, BigInt(lo));
  while (true) {
    fn(point);
    int pos = dims - 1;
    while (pos >= 0) {
      if (point[pos] < hi) {
        point[pos] += 1;
        break;
      }
      point[pos] = lo;
      --pos;
    }
    if (pos < 0) return;
  }
}

}  // namespace

BiadditiveMap::BiadditiveMap(RingSpec ring, int e, int f, int a) : ring_(std::move(ring)), e_(e), f_(f), a_(a) {
  if (e < 1 || f < 1 || a < 1) throw std::invalid_argument("module ranks must be positive");
  c_.assign(static_cast<std::size_t>(e) * f * a, BigInt(0));
}

BiadditiveMap BiadditiveMap::multiplication(RingSpec ring) {
  BiadditiveMap w(std::move(ring), 1, 1, 1);
  w.c_[0] = 1;
  w.ring_.reduce_in_place(w.c_[0]);
  return w;
}

BiadditiveMap BiadditiveMap::dot_product(RingSpec ring, int n) {
  BiadditiveMap w(std::move(ring), n, n, 1);
  for (int p = 0; p < n; ++p) w.c_[static_cast<std::size_t>(p) * n + p] = 1;
  return w;
}

BiadditiveMap BiadditiveMap::zero(RingSpec ring, int e, int f, int a) { return BiadditiveMap(std::move(ring), e, f, a); }

BiadditiveMap BiadditiveMap::from_tensor(RingSpec ring, int e, int f, int a, Vec coefficients) {
  BiadditiveMap w(std::move(ring), e, f, a);
  if (coefficients.size() != w.c_.size()) throw std::invalid_argument("tensor has the wrong number of coefficients");
  w.c_ = reduce_vec(w.ring_, std::move(coefficients));
  return w;
}

const BigInt& BiadditiveMap::coefficient(int p, int q, int r) const {
  return c_[(static_cast<std::size_t>(p) * f_ + q) * a_ + r];
}

bool BiadditiveMap::is_multiplication() const { return e_ == 1 && f_ == 1 && a_ == 1 && c_[0] == 1; }

int BiadditiveMap::dot_product_dim() const {
  if (e_ != f_ || a_ != 1) return 0;
  for (int p = 0; p < e_; ++p)
    for (int q = 0; q < f_; ++q)
      if (coefficient(p, q, 0) != (p == q ? 1 : 0)) return 0;
  return e_;
}

Vec BiadditiveMap::evaluate(const Vec& x, const Vec& y) const {
  if (static_cast<int>(x.size()) != e_ || static_cast<int>(y.size()) != f_)
    throw std::invalid_argument("dimension mismatch in biadditive evaluation");
  Vec out(a_, BigInt(0));
  for (int p = 0; p < e_; ++p) {
    if (x[p] == 0) continue;
    for (int q = 0; q < f_; ++q)
      for (int r = 0; r < a_; ++r) {
        const BigInt& c = coefficient(p, q, r);
        if (c != 0) out[r] += c * x[p] * y[q];
      }
  }
  return reduce_vec(ring_, std::move(out));
}

BiadditiveMap BiadditiveMap::switched() const {
  BiadditiveMap w(ring_, f_, e_, a_);
  for (int p = 0; p < e_; ++p)
    for (int q = 0; q < f_; ++q)
      for (int r = 0; r < a_; ++r) w.c_[(static_cast<std::size_t>(q) * e_ + p) * a_ + r] = coefficient(p, q, r);
  return w;
}

std::string BiadditiveMap::to_string() const {
  if (is_multiplication()) return "m(" + ring_.to_string() + ")";
  if (int n = dot_product_dim()) return "w_n(" + ring_.to_string() + ", n=" + std::to_string(n) + ")";
  std::ostringstream out;
  out << "tensor(" << ring_.to_string() << ", e=" << e_ << ", f=" << f_ << ", a=" << a_ << ", c=" << join(c_) << ")";
  return out.str();
}

BiadditiveMap BiadditiveMap::parse(std::string_view text) {
  const std::string s = strip_spaces(text);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw ParseError("map literal must look like m(Z) or w_n(Z/4, n=2)");
  const std::string head = s.substr(0, open);
  const std::string body = s.substr(open + 1, s.size() - open - 2);
  // The ring is the first comma-separated item; the rest are key=value.
  auto items = split(body, ',');
  const RingSpec ring = RingSpec::parse(items[0]);
  std::map<std::string, std::string> kv;
  std::string current;
  for (std::size_t k = 1; k < items.size(); ++k) {
    auto eq = items[k].find('=');
    if (eq == std::string::npos) {
      if (current.empty()) throw ParseError("bad map parameter '" + items[k] + "'");
      kv[current] += "," + items[k];  // continuation of a list value
      continue;
    }
    current = items[k].substr(0, eq);
    kv[current] = items[k].substr(eq + 1);
  }
  if (head == "m") {
    if (!kv.empty()) throw ParseError("m(...) takes only a ring");
    return multiplication(ring);
  }
  if (head == "w_n") {
    if (!kv.count("n") || kv.size() != 1) throw ParseError("w_n(...) needs n=<dimension>");
    return dot_product(ring, parse_small(kv["n"]));
  }
  if (head.size() > 2 && head.substr(0, 2) == "w_") return dot_product(ring, parse_small(head.substr(2)));
  if (head == "zero" || head == "tensor") {
    const int e = kv.count("e") ? parse_small(kv["e"]) : 1;
    const int f = kv.count("f") ? parse_small(kv["f"]) : 1;
    const int a = kv.count("a") ? parse_small(kv["a"]) : 1;
    if (head == "zero") return zero(ring, e, f, a);
    if (!kv.count("c")) throw ParseError("tensor(...) needs c=<coefficients>");
    Vec c;
    for (const auto& item : split(kv["c"], ',')) c.push_back(parse_bigint(item));
    try {
      return from_tensor(ring, e, f, a, std::move(c));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what());
    }
  }
  throw ParseError("unknown map literal '" + s + "'");
}

std::string HeisenbergElement::to_literal() const {
  return "h(a=" + join(a) + "; x=" + join(x) + "; f=" + join(f) + ")";
}

HeisenbergElement HeisenbergElement::parse(std::string_view text, const BiadditiveMap& w) {
  const std::string s = strip_spaces(text);
  if (s.size() < 3 || s.substr(0, 2) != "h(" || s.back() != ')') throw ParseError("element literal must look like h(a=1; x=2; f=3)");
  std::map<std::string, Vec> parts;
  for (const auto& item : split(s.substr(2, s.size() - 3), ';')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("bad element component '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (key != "a" && key != "x" && key != "f") throw ParseError("unknown element component '" + key + "'");
    Vec v;
    for (const auto& c : split(item.substr(eq + 1), ',')) v.push_back(parse_bigint(c));
    parts[key] = std::move(v);
  }
  auto get = [&](const char* key, int dim) {
    auto it = parts.find(key);
    return it == parts.end() ? Vec(dim, BigInt(0)) : it->second;
  };
  try {
    return h_make(w, get("a", w.dim_a()), get("x", w.dim_e()), get("f", w.dim_f()));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

bool operator<(const HeisenbergElement& u, const HeisenbergElement& v) {
  auto less = [](const Vec& p, const Vec& q) {
    return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end(),
                                        [](const BigInt& s, const BigInt& t) { return cmp(s, t) < 0; });
  };
  if (u.a != v.a) return less(u.a, v.a);
  if (u.x != v.x) return less(u.x, v.x);
  return less(u.f, v.f);
}

HeisenbergElement h_identity(const BiadditiveMap& w) {
  return {Vec(w.dim_a(), BigInt(0)), Vec(w.dim_e(), BigInt(0)), Vec(w.dim_f(), BigInt(0))};
}

HeisenbergElement h_make(const BiadditiveMap& w, Vec a, Vec x, Vec f) {
  HeisenbergElement u{reduce_vec(w.ring(), std::move(a)), reduce_vec(w.ring(), std::move(x)),
                      reduce_vec(w.ring(), std::move(f))};
  check_shape(u, w);
  return u;
}

HeisenbergElement h_mul(const HeisenbergElement& u1, const HeisenbergElement& u2, const BiadditiveMap& w) {
  check_shape(u1, w);
  check_shape(u2, w);
  const RingSpec& ring = w.ring();
  return {add(ring, add(ring, u1.a, u2.a), w.evaluate(u2.x, u1.f)), add(ring, u1.x, u2.x), add(ring, u1.f, u2.f)};
}

HeisenbergElement h_inv(const HeisenbergElement& u, const BiadditiveMap& w) {
  check_shape(u, w);
  const RingSpec& ring = w.ring();
  return {add(ring, neg(ring, u.a), w.evaluate(u.x, u.f)), neg(ring, u.x), neg(ring, u.f)};
}

CommutatorResult h_comm(const HeisenbergElement& u1, const HeisenbergElement& u2, const BiadditiveMap& w) {
  const HeisenbergElement product = h_mul(h_mul(u1, u2, w), h_mul(h_inv(u1, w), h_inv(u2, w), w), w);
  const RingSpec& ring = w.ring();
  HeisenbergElement closed = h_identity(w);
  closed.a = add(ring, w.evaluate(u2.x, u1.f), neg(ring, w.evaluate(u1.x, u2.f)));
  return {product, closed, product == closed};
}

SeparationVerdict is_separated(const BiadditiveMap& w, long search_bound) {
  const RingSpec& ring = w.ring();
  const bool finite = ring.is_finite();
  // Over Z the raw coordinate t in [0, 2b] zig-zags 0, 1, -1, 2, -2, ... so the
  // smallest witness is found first.
  long lo = 0;
  long hi = 2 * search_bound;
  if (finite) {
    if (!ring.modulus().fits_slong_p()) throw std::length_error("ring too large for exhaustive separation check");
    lo = 0;
    hi = ring.modulus().get_si() - 1;
  }
  BigInt box = 1;
  for (int k = 0; k < std::max(w.dim_e(), w.dim_f()); ++k) box *= (hi - lo + 1);
  if (box > (1 << 22)) throw std::length_error("separation search space exceeds budget");

  auto unit = [](int dim, int k) {
    Vec v(dim, BigInt(0));
    v[k] = 1;
    return v;
  };
  SeparationVerdict verdict{true, finite, "", {}};
  auto scan = [&](int dim, int other, bool left, const char* side) {
    for_each_point(dim, lo, hi, [&](const Vec& raw) {
      if (!verdict.separated) return;
      Vec p = raw;
      if (!finite)
        for (auto& c : p) c = c % 2 == 1 ? BigInt((c + 1) / 2) : BigInt(-c / 2);
      p = reduce_vec(ring, p);
      if (is_zero_vec(p)) return;
      for (int k = 0; k < other; ++k) {
        Vec value = left ? w.evaluate(p, unit(other, k)) : w.evaluate(unit(other, k), p);
        if (!is_zero_vec(value)) return;
      }
      verdict = {false, true, side, p};
    });
  };
  scan(w.dim_e(), w.dim_f(), true, "E");
  if (verdict.separated) scan(w.dim_f(), w.dim_e(), false, "F");
  return verdict;
}

UTMatrix to_ut3(const HeisenbergElement& u, const BiadditiveMap& w) {
  if (!w.is_multiplication()) throw std::invalid_argument("to_ut3 requires the multiplication map");
  check_shape(u, w);
  UTMatrix m = UTMatrix::identity(3, w.ring());
  m.set(1, 2, u.f[0]);
  m.set(2, 3, u.x[0]);
  m.set(1, 3, u.a[0]);
  return m;
}

HeisenbergElement from_ut3(const UTMatrix& m, const BiadditiveMap& w) {
  if (!w.is_multiplication()) throw std::invalid_argument("from_ut3 requires the multiplication map");
  if (m.degree() != 3 || !(m.ring() == w.ring())) throw std::invalid_argument("from_ut3 needs a UT(3) matrix over the map's ring");
  return {{m.at(1, 3)}, {m.at(2, 3)}, {m.at(1, 2)}};
}

HeisenbergElement switch_iso(const HeisenbergElement& u, const BiadditiveMap& w) {
  check_shape(u, w);
  const RingSpec& ring = w.ring();
  return {add(ring, w.evaluate(u.x, u.f), neg(ring, u.a)), neg(ring, u.f), neg(ring, u.x)};
}

std::pair<Vec, Vec> nabla_action(const Vec& f, const Vec& a, const Vec& x, const BiadditiveMap& w) {
  if (static_cast<int>(a.size()) != w.dim_a() || static_cast<int>(x.size()) != w.dim_e() ||
      static_cast<int>(f.size()) != w.dim_f())
    throw std::invalid_argument("dimension mismatch in action");
  const RingSpec& ring = w.ring();
  return {add(ring, reduce_vec(ring, a), w.evaluate(x, f)), reduce_vec(ring, x)};
}

HeisenbergElement h_random(const BiadditiveMap& w, std::mt19937_64& rng, long bound) {
  auto draw = [&](int dim) {
    Vec v(dim);
    for (auto& c : v) c = random_value(w.ring(), rng, bound);
    return v;
  };
  Vec a = draw(w.dim_a());
  Vec x = draw(w.dim_e());
  Vec f = draw(w.dim_f());
  return {std::move(a), std::move(x), std::move(f)};
}

std::vector<HeisenbergElement> h_enumerate(const BiadditiveMap& w, std::size_t budget) {
  const RingSpec& ring = w.ring();
  if (!ring.is_finite()) throw std::invalid_argument("infinite ring: H(w) cannot be enumerated");
  const int dims = w.dim_a() + w.dim_e() + w.dim_f();
  BigInt total = 1;
  for (int k = 0; k < dims; ++k) total *= ring.modulus();
  if (total > budget) throw std::length_error("enumeration of H(w) exceeds budget");
  std::vector<HeisenbergElement> out;
  out.reserve(total.get_ui());
  for_each_point(dims, 0, ring.modulus().get_si() - 1, [&](const Vec& p) {
    HeisenbergElement u;
    u.a.assign(p.begin(), p.begin() + w.dim_a());
    u.x.assign(p.begin() + w.dim_a(), p.begin() + w.dim_a() + w.dim_e());
    u.f.assign(p.begin() + w.dim_a() + w.dim_e(), p.end());
    out.push_back(std::move(u));
  });
  return out;
}

}  // namespace keysub
