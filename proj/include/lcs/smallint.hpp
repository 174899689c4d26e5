#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace lcs {

/// Exact integer kept inline in 64 bits while it fits; promoted to a GMP
/// value on overflow and demoted back when it shrinks. The elimination
/// kernels spend nearly all their time on word-size values, so every
/// arithmetic path below has a branch-free-ish small case first.
class Zi {
 public:
  Zi() = default;
  Zi(long long v) : s_(v) {}  // NOLINT: implicit by design
  explicit Zi(const mpz_class& z) { assign_mpz(z); }

  Zi(const Zi& o) : s_(o.s_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Zi(Zi&& o) noexcept = default;
  Zi& operator=(const Zi& o) {
    if (this != &o) {
      s_ = o.s_;
      big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Zi& operator=(Zi&& o) noexcept = default;

  bool small() const { return !big_; }
  bool is_zero() const { return big_ ? sgn(*big_) == 0 : s_ == 0; }
  bool is_one() const { return big_ ? *big_ == 1 : s_ == 1; }
  bool is_unit() const { return big_ ? (*big_ == 1 || *big_ == -1) : (s_ == 1 || s_ == -1); }
  int sign() const { return big_ ? sgn(*big_) : (s_ > 0) - (s_ < 0); }

  long long as_ll() const;  // requires fits
  bool fits_ll() const { return !big_ || big_->fits_slong_p(); }
  mpz_class to_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(s_)); }

  Zi& operator+=(const Zi& o);
  Zi& operator-=(const Zi& o);
  Zi& operator*=(const Zi& o);
  void negate();
  /// *this -= q * x   (the hot row-combination op)
  void submul(const Zi& q, const Zi& x);
  void addmul(const Zi& q, const Zi& x);

  friend Zi operator+(Zi a, const Zi& b) { a += b; return a; }
  friend Zi operator-(Zi a, const Zi& b) { a -= b; return a; }
  friend Zi operator*(Zi a, const Zi& b) { a *= b; return a; }
  friend Zi operator-(Zi a) { a.negate(); return a; }

  friend bool operator==(const Zi& a, const Zi& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Zi& a, const Zi& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Zi& a, const Zi& b) { return cmp(a, b) < 0; }

  static int cmp(const Zi& a, const Zi& b);
  static int cmp_abs(const Zi& a, const Zi& b);

  /// Exact quotient; b must divide a.
  static Zi divexact(const Zi& a, const Zi& b);
  /// Floored division: a = q*b + r with 0 <= r < |b|.
  static void fdiv_qr(const Zi& a, const Zi& b, Zi& q, Zi& r);
  static Zi gcd(const Zi& a, const Zi& b);
  /// g = gcd(a,b) >= 0 with g = u*a + v*b.
  static void xgcd(const Zi& a, const Zi& b, Zi& g, Zi& u, Zi& v);
  static Zi abs(const Zi& a);

  /// 2-adic valuation (0 for odd, undefined-as-0 for zero).
  int val2() const;
  Zi odd_part() const;

  std::string str() const { return big_ ? big_->get_str() : std::to_string(s_); }

 private:
  long long s_ = 0;
  std::unique_ptr<mpz_class> big_;

  void assign_mpz(const mpz_class& z) {
    if (z.fits_slong_p()) {
      s_ = z.get_si();
      big_.reset();
    } else {
      big_ = std::make_unique<mpz_class>(z);
    }
  }
  void promote() {
    if (!big_) big_ = std::make_unique<mpz_class>(static_cast<long>(s_));
  }
  void shrink() {
    if (big_ && big_->fits_slong_p()) {
      s_ = big_->get_si();
      big_.reset();
    }
  }

  friend struct ZiOps;
};

static_assert(sizeof(long) == sizeof(long long), "LP64 assumed for mpz interop");

inline long long Zi::as_ll() const { return big_ ? big_->get_si() : s_; }

inline Zi& Zi::operator+=(const Zi& o) {
  if (!big_ && !o.big_) {
    long long r;
    if (!__builtin_add_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  promote();
  *big_ += o.big_ ? *o.big_ : mpz_class(static_cast<long>(o.s_));
  shrink();
  return *this;
}

inline Zi& Zi::operator-=(const Zi& o) {
  if (!big_ && !o.big_) {
    long long r;
    if (!__builtin_sub_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  promote();
  *big_ -= o.big_ ? *o.big_ : mpz_class(static_cast<long>(o.s_));
  shrink();
  return *this;
}

inline Zi& Zi::operator*=(const Zi& o) {
  if (!big_ && !o.big_) {
    long long r;
    if (!__builtin_mul_overflow(s_, o.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  promote();
  *big_ *= o.big_ ? *o.big_ : mpz_class(static_cast<long>(o.s_));
  shrink();
  return *this;
}

inline void Zi::negate() {
  if (!big_) {
    if (s_ != LLONG_MIN) {
      s_ = -s_;
      return;
    }
    promote();
  }
  mpz_neg(big_->get_mpz_t(), big_->get_mpz_t());
  shrink();
}

inline void Zi::submul(const Zi& q, const Zi& x) {
  if (!big_ && !q.big_ && !x.big_) {
    long long p, r;
    if (!__builtin_mul_overflow(q.s_, x.s_, &p) && !__builtin_sub_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
  }
  promote();
  if (!q.big_ && !x.big_) {
    mpz_class p(static_cast<long>(q.s_));
    p *= static_cast<long>(x.s_);
    *big_ -= p;
  } else {
    *big_ -= q.to_mpz() * x.to_mpz();
  }
  shrink();
}

inline void Zi::addmul(const Zi& q, const Zi& x) {
  if (!big_ && !q.big_ && !x.big_) {
    long long p, r;
    if (!__builtin_mul_overflow(q.s_, x.s_, &p) && !__builtin_add_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
  }
  promote();
  *big_ += q.to_mpz() * x.to_mpz();
  shrink();
}

inline int Zi::cmp(const Zi& a, const Zi& b) {
  if (!a.big_ && !b.big_) return (a.s_ > b.s_) - (a.s_ < b.s_);
  return ::cmp(a.to_mpz(), b.to_mpz());
}

inline int Zi::cmp_abs(const Zi& a, const Zi& b) {
  if (!a.big_ && !b.big_ && a.s_ != LLONG_MIN && b.s_ != LLONG_MIN) {
    long long x = a.s_ < 0 ? -a.s_ : a.s_, y = b.s_ < 0 ? -b.s_ : b.s_;
    return (x > y) - (x < y);
  }
  mpz_class x = a.to_mpz(), y = b.to_mpz();
  return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t());
}

inline Zi Zi::divexact(const Zi& a, const Zi& b) {
  if (!a.big_ && !b.big_ && b.s_ != 0 && !(a.s_ == LLONG_MIN && b.s_ == -1)) {
    return Zi(a.s_ / b.s_);
  }
  mpz_class r;
  mpz_class am = a.to_mpz(), bm = b.to_mpz();
  mpz_divexact(r.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  Zi z;
  z.assign_mpz(r);
  return z;
}

inline void Zi::fdiv_qr(const Zi& a, const Zi& b, Zi& q, Zi& r) {
  if (!a.big_ && !b.big_ && b.s_ != 0 && !(a.s_ == LLONG_MIN && b.s_ == -1)) {
    long long qq = a.s_ / b.s_, rr = a.s_ % b.s_;
    if (rr != 0 && ((rr < 0) != (b.s_ < 0))) {
      qq -= 1;
      rr += b.s_;
    }
    // floored: 0 <= rr < |b| requires b > 0; for b < 0, rr in (b, 0]
    q = Zi(qq);
    r = Zi(rr);
    return;
  }
  mpz_class qm, rm, am = a.to_mpz(), bm = b.to_mpz();
  mpz_fdiv_qr(qm.get_mpz_t(), rm.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  q.assign_mpz(qm);
  r.assign_mpz(rm);
}

inline Zi Zi::gcd(const Zi& a, const Zi& b) {
  if (!a.big_ && !b.big_ && a.s_ != LLONG_MIN && b.s_ != LLONG_MIN) {
    long long x = a.s_ < 0 ? -a.s_ : a.s_, y = b.s_ < 0 ? -b.s_ : b.s_;
    while (y) {
      long long t = x % y;
      x = y;
      y = t;
    }
    return Zi(x);
  }
  mpz_class r, am = a.to_mpz(), bm = b.to_mpz();
  mpz_gcd(r.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  Zi z;
  z.assign_mpz(r);
  return z;
}

inline void Zi::xgcd(const Zi& a, const Zi& b, Zi& g, Zi& u, Zi& v) {
  if (!a.big_ && !b.big_ && a.s_ > LLONG_MIN / 2 && a.s_ < LLONG_MAX / 2 &&
      b.s_ > LLONG_MIN / 2 && b.s_ < LLONG_MAX / 2) {
    // Bezout coefficients stay below max(|a|,|b|), products fit __int128.
    __int128 r0 = a.s_, r1 = b.s_, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      __int128 q = r0 / r1;
      __int128 r2 = r0 - q * r1;
      r0 = r1; r1 = r2;
      __int128 s2 = s0 - q * s1;
      s0 = s1; s1 = s2;
      __int128 t2 = t0 - q * t1;
      t0 = t1; t1 = t2;
    }
    if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
    g = Zi(static_cast<long long>(r0));
    u = Zi(static_cast<long long>(s0));
    v = Zi(static_cast<long long>(t0));
    return;
  }
  mpz_class gm, um, vm, am = a.to_mpz(), bm = b.to_mpz();
  mpz_gcdext(gm.get_mpz_t(), um.get_mpz_t(), vm.get_mpz_t(), am.get_mpz_t(), bm.get_mpz_t());
  g.assign_mpz(gm);
  u.assign_mpz(um);
  v.assign_mpz(vm);
}

inline Zi Zi::abs(const Zi& a) {
  Zi r = a;
  if (r.sign() < 0) r.negate();
  return r;
}

inline int Zi::val2() const {
  if (is_zero()) return 0;
  if (!big_) {
    return __builtin_ctzll(static_cast<unsigned long long>(s_ < 0 ? -s_ : s_));
  }
  return static_cast<int>(mpz_scan1(big_->get_mpz_t(), 0));
}

inline Zi Zi::odd_part() const {
  if (is_zero()) return Zi(0);
  int v = val2();
  if (v == 0) return *this;
  mpz_class r = to_mpz();
  mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), v);
  Zi z;
  z.assign_mpz(r);
  return z;
}

}  // namespace lcs
