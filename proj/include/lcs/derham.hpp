#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lcs/algebra.hpp"
#include "lcs/linalg.hpp"

namespace lcs {

struct EvenIndexCountError : std::runtime_error {
  EvenIndexCountError() : std::runtime_error("shuffle index set must have odd size") {}
};

/// Monomial x^a y^eps dx_I (dy)^b on n even and k odd variables.
/// Parities: x, dy even; y, dx odd. dx and y factors are square-free.
/// Canonical odd-factor order: y's ascending, then dx's ascending; signs from
/// reordering are folded into coefficients.
struct FormMono {
  Deg a;          // x exponents, length n
  uint32_t eps;   // y occupancy bits
  uint32_t dxm;   // dx occupancy bits
  Deg b;          // dy exponents, length k

  FormMono() = default;
  FormMono(int n, int k) : a(n, 0), b(k, 0), eps(0), dxm(0) {}

  int rank() const;
  int parity() const;  // super-parity
  Deg multidegree() const;
  friend bool operator<(const FormMono& u, const FormMono& v) {
    if (u.a != v.a) return u.a < v.a;
    if (u.eps != v.eps) return u.eps < v.eps;
    if (u.dxm != v.dxm) return u.dxm < v.dxm;
    return u.b < v.b;
  }
  friend bool operator==(const FormMono& u, const FormMono& v) {
    return u.a == v.a && u.eps == v.eps && u.dxm == v.dxm && u.b == v.b;
  }
  std::string str() const;
};

/// product of monomials with the super sign; nullopt when a square of an odd
/// factor appears
std::optional<std::pair<FormMono, int>> mono_mul(const FormMono& u, const FormMono& v);

/// terms of d(mono): (monomial, integer coefficient)
std::vector<std::pair<FormMono, long long>> d_mono(const FormMono& u);

template <class Ring>
struct DForm {
  using V = typename Ring::Value;
  Ring ring;
  std::map<FormMono, V> t;

  DForm() = default;
  explicit DForm(Ring r) : ring(r) {}
  static DForm one(int n, int k, Ring r = Ring()) {
    DForm f(r);
    f.t.emplace(FormMono(n, k), r.one());
    return f;
  }
  static DForm mono(const FormMono& m, Ring r = Ring()) {
    DForm f(r);
    f.t.emplace(m, r.one());
    return f;
  }
  bool is_zero() const { return t.empty(); }
  void add_term(const FormMono& m, const V& c) {
    auto it = t.find(m);
    if (it == t.end()) {
      if (!ring.is_zero(c)) t.emplace(m, c);
    } else {
      it->second = ring.add(it->second, c);
      if (ring.is_zero(it->second)) t.erase(it);
    }
  }
  DForm& operator+=(const DForm& o) {
    for (auto& [m, c] : o.t) add_term(m, c);
    return *this;
  }
  DForm& operator-=(const DForm& o) {
    for (auto& [m, c] : o.t) add_term(m, ring.neg(c));
    return *this;
  }
  friend DForm operator+(DForm x, const DForm& y) { x += y; return x; }
  friend DForm operator-(DForm x, const DForm& y) { x -= y; return x; }
  friend bool operator==(const DForm& x, const DForm& y) { return x.t == y.t; }
  DForm scaled(const V& c) const {
    DForm r(ring);
    if (ring.is_zero(c)) return r;
    for (auto& [m, v] : t) r.t.emplace(m, ring.mul(v, c));
    return r;
  }
};

template <class Ring>
DForm<Ring> form_mul(const DForm<Ring>& x, const DForm<Ring>& y) {
  DForm<Ring> r(x.ring);
  for (auto& [mu, cu] : x.t)
    for (auto& [mv, cv] : y.t) {
      auto p = mono_mul(mu, mv);
      if (!p) continue;
      auto c = x.ring.mul(cu, cv);
      r.add_term(p->first, p->second < 0 ? x.ring.neg(c) : c);
    }
  return r;
}

template <class Ring>
DForm<Ring> d(const DForm<Ring>& x) {
  DForm<Ring> r(x.ring);
  for (auto& [m, c] : x.t)
    for (auto& [dm, coef] : d_mono(m))
      r.add_term(dm, x.ring.mul(c, x.ring.from_int(coef)));
  return r;
}

/// Fedosov star product a*b = ab + (1/2)(-1)^{|a|} da db. On even-parity
/// forms (the whole image of the even case) the sign is +1, matching the
/// plain a*b = ab + da db / 2. Throws NoHalfError when the ring lacks 1/2.
template <class Ring>
DForm<Ring> fedosov_mul(const DForm<Ring>& x, const DForm<Ring>& y) {
  DForm<Ring> even(x.ring), odd(x.ring);
  for (auto& [m, c] : x.t) (m.parity() ? odd : even).t.emplace(m, c);
  DForm<Ring> corr = form_mul(d(even) - d(odd), d(y));
  DForm<Ring> r = form_mul(x, y);
  for (auto& [m, c] : corr.t) r.add_term(m, x.ring.half(c));
  return r;
}

/// Fedosov image of a word (letters act by star multiplication).
DForm<RingDyadic> zeta_word(const Signature& sig, const Word& w);
DForm<RingDyadic> zeta_elem(const Signature& sig, const Element<RingDyadic>& e);

// ---------------------------------------------------------------- slices

/// All form monomials of one multidegree on (n|k) variables. Slices are tiny
/// (at most 2^{n+k} monomials).
class FormSlice {
 public:
  FormSlice(int n, int k, Deg m);
  const int n, k;
  const Deg m;
  const std::vector<FormMono>& monos() const { return monos_; }
  int32_t count() const { return static_cast<int32_t>(monos_.size()); }
  int32_t index_of(const FormMono& mo) const;
  std::vector<int32_t> of_rank(int r) const;
  int max_rank() const;

 private:
  std::vector<FormMono> monos_;
  std::map<FormMono, int32_t> index_;
};

/// ker(d)/im(d) in rank r and multidegree m over Z.
GroupInvariants cohomology(int n, int k, int r, const Deg& m);

/// eta with d(eta) = omega over Z, if omega is exact (omega homogeneous).
std::optional<DForm<RingZ>> exactness_witness(int n, int k, const DForm<RingZ>& omega);

/// Lattice of exact forms d(Omega^{odd-rank})[m] inside the full slice
/// coordinates (all ranks); used with even-rank projections below.
SpanMatrix exact_even_lattice(int n, int k, const Deg& m);
/// identity span over the even-rank monomials of the slice
SpanMatrix even_slice_span(int n, int k, const Deg& m);
/// indices of even-rank monomials in the full slice
std::vector<int32_t> even_indices(const FormSlice& fs);

// ------------------------------------------- quantized normal form / phi

/// Normal form of an element of A_{n,k} modulo M_3, written in the monomial
/// basis (a, eps, I, b) with the scaled dy-convention w_j(b) =
/// dy_j^{b mod 2} (y_j^2-atom)^{floor(b/2)}. Reinterpreting the monomials as
/// differential forms realizes the linear isomorphism A/M_3 -> Omega^{ev}
/// (u_I maps to dx_I, y^2 maps to (dy)^2).
using QForm = std::map<FormMono, Zi>;

QForm quant_normal_form(const Signature& sig, const ElemZ& e);
QForm quant_mul_word(const Signature& sig, const QForm& f, const Word& w);

/// varphi: normal form read as an integer differential form
DForm<RingZ> varphi(const Signature& sig, const ElemZ& e);

/// coordinates of varphi(rows of span_in_words) in the even-rank monomials of
/// the slice; span rows are over the word basis of A[m]
SpanMatrix varphi_lattice(const Signature& sig, const Deg& m, const SpanMatrix& span);

/// Fedosov image of a span of A[m], with dyadic denominators cleared by one
/// global power of two per slice; rows are over the even-rank monomials. The
/// scaling exponent used is written to *scale_exp when given.
SpanMatrix zeta_lattice(const Signature& sig, const Deg& m, const SpanMatrix& span,
                        int* scale_exp = nullptr);

/// scaled coordinate vector of a QForm over the even-rank monomials
Row qform_row(const FormSlice& fs, const std::vector<int32_t>& even_idx,
              const QForm& f);

}  // namespace lcs
