#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "lcs/smallint.hpp"

namespace lcs {

struct NoHalfError : std::runtime_error {
  NoHalfError() : std::runtime_error("coefficient ring does not contain 1/2") {}
};

/// Dyadic rational num / 2^exp2 in lowest terms (num odd unless exp2 == 0).
struct Dyadic {
  Zi num;
  int exp2 = 0;

  Dyadic() = default;
  Dyadic(Zi n, int e = 0) : num(std::move(n)), exp2(e) { normalize(); }

  void normalize() {
    if (num.is_zero()) {
      exp2 = 0;
      return;
    }
    int v = num.val2();
    if (v > 0 && exp2 > 0) {
      int s = v < exp2 ? v : exp2;
      num = Zi::divexact(num, pow2(s));
      exp2 -= s;
    }
  }
  static Zi pow2(int e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return Zi(p);
  }
  bool is_zero() const { return num.is_zero(); }
  bool is_integer() const { return exp2 == 0; }
  std::string str() const {
    if (exp2 == 0) return num.str();
    return num.str() + "/2^" + std::to_string(exp2);
  }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    int e = a.exp2 > b.exp2 ? a.exp2 : b.exp2;
    Zi n = a.num * pow2(e - a.exp2) + b.num * pow2(e - b.exp2);
    return Dyadic(std::move(n), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    int e = a.exp2 > b.exp2 ? a.exp2 : b.exp2;
    Zi n = a.num * pow2(e - a.exp2) - b.num * pow2(e - b.exp2);
    return Dyadic(std::move(n), e);
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num * b.num, a.exp2 + b.exp2);
  }
  friend Dyadic operator-(Dyadic a) {
    a.num.negate();
    return a;
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp2 == b.exp2 && a.num == b.num;
  }
};

/// Ring tags used to instantiate Element / DifferentialForm. Each provides the
/// coefficient value type plus the handful of ops the sparse containers need.
struct RingZ {
  using Value = Zi;
  static constexpr bool has_half = false;
  Value zero() const { return Zi(0); }
  Value one() const { return Zi(1); }
  Value from_int(long long v) const { return Zi(v); }
  bool is_zero(const Value& v) const { return v.is_zero(); }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value half(const Value&) const { throw NoHalfError(); }
  std::string str(const Value& v) const { return v.str(); }
};

struct RingQ {
  using Value = mpq_class;
  static constexpr bool has_half = true;
  Value zero() const { return mpq_class(0); }
  Value one() const { return mpq_class(1); }
  Value from_int(long long v) const { return mpq_class(static_cast<long>(v)); }
  bool is_zero(const Value& v) const { return sgn(v) == 0; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value half(const Value& a) const { return a / 2; }
  std::string str(const Value& v) const { return v.get_str(); }
};

struct RingDyadic {
  using Value = Dyadic;
  static constexpr bool has_half = true;
  Value zero() const { return Dyadic(); }
  Value one() const { return Dyadic(Zi(1)); }
  Value from_int(long long v) const { return Dyadic(Zi(v)); }
  bool is_zero(const Value& v) const { return v.is_zero(); }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value half(const Value& a) const { return Dyadic(a.num, a.exp2 + 1); }
  std::string str(const Value& v) const { return v.str(); }
};

/// Residues mod a (word-size) prime p, values reduced to [0, p).
struct RingFp {
  uint64_t p = 2;
  using Value = uint64_t;
  static constexpr bool has_half = false;  // depends on p; see half()
  RingFp() = default;
  explicit RingFp(uint64_t prime) : p(prime) {}
  Value zero() const { return 0; }
  Value one() const { return 1 % p; }
  Value from_int(long long v) const {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    return static_cast<uint64_t>(r);
  }
  Value from_zi(const Zi& z) const {
    if (z.small()) return from_int(z.as_ll());
    mpz_class m = z.to_mpz();
    return mpz_fdiv_ui(m.get_mpz_t(), p);
  }
  bool is_zero(const Value& v) const { return v == 0; }
  Value add(Value a, Value b) const {
    Value r = a + b;
    return r >= p ? r - p : r;
  }
  Value sub(Value a, Value b) const { return a >= b ? a - b : a + p - b; }
  Value mul(Value a, Value b) const {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  Value neg(Value a) const { return a == 0 ? 0 : p - a; }
  Value inv(Value a) const {
    // extended Euclid; p prime, a != 0
    int64_t t = 0, nt = 1, r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a);
    while (nr != 0) {
      int64_t q = r / nr;
      int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += static_cast<int64_t>(p);
    return static_cast<uint64_t>(t);
  }
  Value half(Value a) const {
    if (p == 2) throw NoHalfError();
    return mul(a, inv(2 % p));
  }
  std::string str(Value v) const { return std::to_string(v); }
};

}  // namespace lcs
