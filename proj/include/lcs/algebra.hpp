#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/rings.hpp"
#include "lcs/smallint.hpp"

namespace lcs {

struct MixedParityError : std::runtime_error {
  MixedParityError() : std::runtime_error("super-commutator argument mixes parities") {}
};

/// n even generators x_1..x_n followed by k odd generators y_1..y_k.
struct Signature {
  int n_even = 0;
  int n_odd = 0;
  Signature() = default;
  Signature(int n, int k) : n_even(n), n_odd(k) {
    if (n < 0 || k < 0 || n + k < 1) throw std::invalid_argument("bad signature");
  }
  int total() const { return n_even + n_odd; }
  bool is_odd_gen(int g) const { return g >= n_even; }
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.n_even == b.n_even && a.n_odd == b.n_odd;
  }
  friend bool operator<(const Signature& a, const Signature& b) {
    return a.n_even != b.n_even ? a.n_even < b.n_even : a.n_odd < b.n_odd;
  }
  std::string str() const {
    return "(" + std::to_string(n_even) + "," + std::to_string(n_odd) + ")";
  }
};

using Deg = std::vector<int>;  // multidegree, one entry per generator

inline int total(const Deg& m) { return std::accumulate(m.begin(), m.end(), 0); }
inline bool leq(const Deg& a, const Deg& b) {  // componentwise
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Deg sub(const Deg& a, const Deg& b) {
  Deg r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline int deg_gcd(const Deg& m) {
  int g = 0;
  for (int v : m) g = std::gcd(g, v);
  return g;
}
/// Parity of any word of this multidegree (sum of odd-generator degrees mod 2).
inline int slice_parity(const Signature& sig, const Deg& m) {
  int s = 0;
  for (int j = sig.n_even; j < sig.total(); ++j) s += m[j];
  return s & 1;
}
std::string deg_str(const Deg& m);

/// A word is a sequence of generator indices; concatenation is the product.
struct Word {
  std::vector<uint8_t> l;
  Word() = default;
  explicit Word(std::vector<uint8_t> letters) : l(std::move(letters)) {}
  size_t size() const { return l.size(); }
  Deg multidegree(const Signature& sig) const {
    Deg m(sig.total(), 0);
    for (uint8_t g : l) m[g]++;
    return m;
  }
  int parity(const Signature& sig) const {
    int s = 0;
    for (uint8_t g : l)
      if (sig.is_odd_gen(g)) s ^= 1;
    return s;
  }
  friend Word operator*(const Word& a, const Word& b) {
    Word r = a;
    r.l.insert(r.l.end(), b.l.begin(), b.l.end());
    return r;
  }
  // graded-lex: shorter first, then lexicographic on letters
  friend bool operator<(const Word& a, const Word& b) {
    if (a.l.size() != b.l.size()) return a.l.size() < b.l.size();
    return a.l < b.l;
  }
  friend bool operator==(const Word& a, const Word& b) { return a.l == b.l; }
  std::string str(const Signature& sig) const;
};

inline Word gen_word(int g) { return Word({static_cast<uint8_t>(g)}); }
Word word_pow(int g, int e);

/// Monomial basis of one graded slice A[m], words in lex order, with O(len)
/// arithmetic ranking (no hash lookups in the bracket kernels).
class SliceBasis {
 public:
  SliceBasis(Signature sig, Deg m);
  const Signature sig;
  const Deg m;
  const std::vector<Word>& words() const { return words_; }
  int64_t count() const { return static_cast<int64_t>(words_.size()); }
  int parity() const { return parity_; }
  int32_t rank_of(const Word& w) const;  // position in lex order
  const Word& word_at(int32_t i) const { return words_[i]; }

  /// multinomial |m|! / prod m_i!  (number of words of multidegree m)
  static int64_t word_count(const Deg& m);

 private:
  std::vector<Word> words_;
  int parity_;
  // suffix-count table: cnt_[pos][g] = #words of the remaining multiset after
  // fixing w[0..pos-1] and choosing letter < g at pos; built per slice
  std::vector<int64_t> multinom_;  // indexed by mixed-radix code of sub-multidegree
  std::vector<int> radix_;
  int64_t code_of(const Deg& d) const;
};

using SliceBasisPtr = std::shared_ptr<const SliceBasis>;
/// Process-wide slice registry (thread-safe, values immutable).
SliceBasisPtr slice(const Signature& sig, const Deg& m);

std::vector<Word> enumerate_monomials(const Signature& sig, const Deg& m);

/// Sparse linear combination of words.
template <class Ring>
struct Element {
  using V = typename Ring::Value;
  Ring ring;
  std::map<Word, V> t;

  Element() = default;
  explicit Element(Ring r) : ring(r) {}

  static Element zero(Ring r = Ring()) { return Element(r); }
  static Element one(Ring r = Ring()) {
    Element e(r);
    e.t.emplace(Word(), r.one());
    return e;
  }
  static Element word(const Word& w, Ring r = Ring()) {
    Element e(r);
    e.t.emplace(w, r.one());
    return e;
  }
  bool is_zero() const { return t.empty(); }
  void add_term(const Word& w, const V& c) {
    auto it = t.find(w);
    if (it == t.end()) {
      if (!ring.is_zero(c)) t.emplace(w, c);
    } else {
      it->second = ring.add(it->second, c);
      if (ring.is_zero(it->second)) t.erase(it);
    }
  }
  Element& operator+=(const Element& o) {
    for (auto& [w, c] : o.t) add_term(w, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    for (auto& [w, c] : o.t) add_term(w, ring.neg(c));
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { a += b; return a; }
  friend Element operator-(Element a, const Element& b) { a -= b; return a; }
  friend Element operator*(const Element& a, const Element& b) {
    Element r(a.ring);
    for (auto& [wa, ca] : a.t)
      for (auto& [wb, cb] : b.t) r.add_term(wa * wb, a.ring.mul(ca, cb));
    return r;
  }
  Element scaled(const V& c) const {
    Element r(ring);
    if (ring.is_zero(c)) return r;
    for (auto& [w, v] : t) r.t.emplace(w, ring.mul(v, c));
    return r;
  }
  friend bool operator==(const Element& a, const Element& b) { return a.t == b.t; }

  /// Generator substitution (free-algebra endomorphism).
  Element substitute(const std::vector<Element>& images) const {
    Element r(ring);
    for (auto& [w, c] : t) {
      Element prod = Element::one(ring).scaled(c);
      for (uint8_t g : w.l) prod = prod * images[g];
      r += prod;
    }
    return r;
  }
  std::string str(const Signature& sig) const;
};

using ElemZ = Element<RingZ>;

/// Parity of a parity-homogeneous element; throws MixedParityError.
template <class Ring>
int parity_of(const Signature& sig, const Element<Ring>& a) {
  int p = -1;
  for (auto& [w, c] : a.t) {
    int q = w.parity(sig);
    if (p == -1)
      p = q;
    else if (p != q)
      throw MixedParityError();
  }
  return p == -1 ? 0 : p;
}

/// Super-commutator [a,b] = ab - (-1)^{|a||b|} ba.
template <class Ring>
Element<Ring> super_commutator(const Signature& sig, const Element<Ring>& a,
                               const Element<Ring>& b) {
  int pa = parity_of(sig, a), pb = parity_of(sig, b);
  Element<Ring> r = a * b;
  Element<Ring> ba = b * a;
  if ((pa & pb) != 0) {
    r += ba;
  } else {
    r -= ba;
  }
  return r;
}

template <class Ring>
std::string Element<Ring>::str(const Signature& sig) const {
  if (t.empty()) return "0";
  std::string s;
  for (auto& [w, c] : t) {
    if (!s.empty()) s += " + ";
    s += ring.str(c) + "*" + w.str(sig);
  }
  return s;
}

}  // namespace lcs
