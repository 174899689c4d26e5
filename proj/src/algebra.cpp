#include "lcs/algebra.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace lcs {

std::string deg_str(const Deg& m) {
  std::string s = "(";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m[i]);
  }
  return s + ")";
}

std::string Word::str(const Signature& sig) const {
  if (l.empty()) return "1";
  std::string s;
  for (uint8_t g : l) {
    if (sig.is_odd_gen(g))
      s += "y" + std::to_string(g - sig.n_even + 1);
    else
      s += "x" + std::to_string(g + 1);
  }
  return s;
}

Word word_pow(int g, int e) {
  Word w;
  w.l.assign(static_cast<size_t>(e), static_cast<uint8_t>(g));
  return w;
}

SliceBasis::SliceBasis(Signature s, Deg mm) : sig(s), m(std::move(mm)) {
  if (static_cast<int>(m.size()) != sig.total())
    throw std::invalid_argument("multidegree length does not match signature");
  for (int v : m)
    if (v < 0) throw std::invalid_argument("negative multidegree");
  parity_ = slice_parity(sig, m);

  // mixed-radix codes for all componentwise-sub-multidegrees of m
  radix_.resize(m.size());
  int64_t span = 1;
  for (size_t i = 0; i < m.size(); ++i) {
    radix_[i] = static_cast<int>(span);
    span *= m[i] + 1;
  }
  multinom_.assign(static_cast<size_t>(span), 0);
  // fill multinomial table by dynamic programming over total degree
  multinom_[0] = 1;
  // iterate codes in increasing total degree via simple enumeration
  Deg d(m.size(), 0);
  // enumerate all sub-multidegrees in mixed-radix order; DP uses smaller totals
  for (int64_t code = 1; code < span; ++code) {
    int64_t c = code;
    for (size_t i = 0; i < m.size(); ++i) {
      d[i] = static_cast<int>((code / radix_[i]) % (m[i] + 1));
    }
    (void)c;
    int64_t cnt = 0;
    for (size_t i = 0; i < m.size(); ++i)
      if (d[i] > 0) cnt += multinom_[code - radix_[i]];
    multinom_[code] = cnt;
  }

  // enumerate words in lex order
  int n = total(m);
  std::vector<uint8_t> cur;
  cur.reserve(n);
  Deg rem = m;
  // iterative DFS smallest-letter-first yields lex order
  struct Frame { int g; };
  std::vector<int> stack;
  // simple recursive lambda
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == n) {
      words_.emplace_back(cur);
      return;
    }
    for (int g = 0; g < sig.total(); ++g) {
      if (rem[g] > 0) {
        rem[g]--;
        cur.push_back(static_cast<uint8_t>(g));
        self(self);
        cur.pop_back();
        rem[g]++;
      }
    }
  };
  rec(rec);
}

int64_t SliceBasis::code_of(const Deg& d) const {
  int64_t code = 0;
  for (size_t i = 0; i < d.size(); ++i) code += static_cast<int64_t>(d[i]) * radix_[i];
  return code;
}

int32_t SliceBasis::rank_of(const Word& w) const {
  Deg rem = m;
  int64_t code = code_of(rem);
  int64_t r = 0;
  for (uint8_t g : w.l) {
    for (int c = 0; c < g; ++c)
      if (rem[c] > 0) r += multinom_[code - radix_[c]];
    rem[g]--;
    code -= radix_[g];
  }
  return static_cast<int32_t>(r);
}

int64_t SliceBasis::word_count(const Deg& m) {
  int64_t n = total(m), r = 1;
  int64_t acc = 0;
  for (int v : m) {
    for (int j = 1; j <= v; ++j) {
      ++acc;
      r = r * acc / j;  // running binomial product stays integral
    }
  }
  (void)n;
  return r;
}

namespace {
std::mutex g_slice_mu;
std::map<std::pair<Signature, Deg>, SliceBasisPtr> g_slices;
}  // namespace

SliceBasisPtr slice(const Signature& sig, const Deg& m) {
  std::lock_guard<std::mutex> lk(g_slice_mu);
  auto key = std::make_pair(sig, m);
  auto it = g_slices.find(key);
  if (it != g_slices.end()) return it->second;
  auto p = std::make_shared<const SliceBasis>(sig, m);
  g_slices.emplace(key, p);
  return p;
}

std::vector<Word> enumerate_monomials(const Signature& sig, const Deg& m) {
  return slice(sig, m)->words();
}

}  // namespace lcs
