#include "lcs/derham.hpp"

#include <algorithm>

namespace lcs {

namespace {

int popcount(uint32_t x) { return __builtin_popcount(x); }

/// canonical odd word of a monomial: y's ascending then dx's ascending,
/// encoded as (type, index) with y = type 0
std::vector<std::pair<int, int>> odd_word(const FormMono& u) {
  std::vector<std::pair<int, int>> w;
  for (int j = 0; j < 32; ++j)
    if (u.eps >> j & 1) w.emplace_back(0, j);
  for (int i = 0; i < 32; ++i)
    if (u.dxm >> i & 1) w.emplace_back(1, i);
  return w;
}

}  // namespace

int FormMono::rank() const {
  int r = popcount(dxm);
  for (int v : b) r += v;
  return r;
}

int FormMono::parity() const { return (popcount(eps) + popcount(dxm)) & 1; }

Deg FormMono::multidegree() const {
  Deg m(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) m[i] = a[i] + (dxm >> i & 1);
  for (size_t j = 0; j < b.size(); ++j)
    m[a.size() + j] = b[j] + (eps >> j & 1);
  return m;
}

std::string FormMono::str() const {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) s += "x" + std::to_string(i + 1) + (a[i] > 1 ? "^" + std::to_string(a[i]) : "");
  for (size_t j = 0; j < b.size(); ++j)
    if (eps >> j & 1) s += "y" + std::to_string(j + 1);
  for (size_t i = 0; i < a.size(); ++i)
    if (dxm >> i & 1) s += "dx" + std::to_string(i + 1);
  for (size_t j = 0; j < b.size(); ++j)
    if (b[j]) s += "dy" + std::to_string(j + 1) + (b[j] > 1 ? "^" + std::to_string(b[j]) : "");
  return s.empty() ? "1" : s;
}

std::optional<std::pair<FormMono, int>> mono_mul(const FormMono& u, const FormMono& v) {
  if ((u.eps & v.eps) || (u.dxm & v.dxm)) return std::nullopt;
  auto wu = odd_word(u), wv = odd_word(v);
  long long inv = 0;
  for (auto& x : wu)
    for (auto& y : wv)
      if (y < x) ++inv;
  FormMono r = u;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += v.a[i];
  for (size_t j = 0; j < r.b.size(); ++j) r.b[j] += v.b[j];
  r.eps |= v.eps;
  r.dxm |= v.dxm;
  return std::make_pair(std::move(r), inv % 2 ? -1 : 1);
}

std::vector<std::pair<FormMono, long long>> d_mono(const FormMono& u) {
  std::vector<std::pair<FormMono, long long>> out;
  int ny = popcount(u.eps);
  // x-sites: dx_i is born left of the y block and slides into the dx block
  for (size_t i = 0; i < u.a.size(); ++i) {
    if (u.a[i] == 0 || (u.dxm >> i & 1)) continue;
    FormMono m = u;
    m.a[i] -= 1;
    m.dxm |= 1u << i;
    int below = popcount(u.dxm & ((1u << i) - 1));
    long long c = u.a[i];
    if ((ny + below) & 1) c = -c;
    out.emplace_back(std::move(m), c);
  }
  // y-sites: y_j -> dy_j with the Leibniz sign over earlier y's
  for (size_t j = 0; j < u.b.size(); ++j) {
    if (!(u.eps >> j & 1)) continue;
    FormMono m = u;
    m.eps &= ~(1u << j);
    m.b[j] += 1;
    int before = popcount(u.eps & ((1u << j) - 1));
    out.emplace_back(std::move(m), before & 1 ? -1 : 1);
  }
  return out;
}

DForm<RingDyadic> zeta_word(const Signature& sig, const Word& w) {
  int n = sig.n_even, k = sig.n_odd;
  DForm<RingDyadic> f = DForm<RingDyadic>::one(n, k);
  for (uint8_t g : w.l) {
    FormMono letter(n, k);
    if (sig.is_odd_gen(g))
      letter.eps |= 1u << (g - n);
    else
      letter.a[g] += 1;
    f = fedosov_mul(f, DForm<RingDyadic>::mono(letter));
  }
  return f;
}

DForm<RingDyadic> zeta_elem(const Signature& sig, const Element<RingDyadic>& e) {
  DForm<RingDyadic> f;
  for (auto& [w, c] : e.t) f += zeta_word(sig, w).scaled(c);
  return f;
}

// ---------------------------------------------------------------- FormSlice

FormSlice::FormSlice(int nn, int kk, Deg mm) : n(nn), k(kk), m(std::move(mm)) {
  if (static_cast<int>(m.size()) != n + k)
    throw std::invalid_argument("multidegree length mismatch");
  FormMono cur(n, k);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n + k) {
      monos_.push_back(cur);
      return;
    }
    if (pos < n) {
      cur.a[pos] = m[pos];
      self(self, pos + 1);
      if (m[pos] >= 1) {
        cur.a[pos] = m[pos] - 1;
        cur.dxm |= 1u << pos;
        self(self, pos + 1);
        cur.dxm &= ~(1u << pos);
      }
      cur.a[pos] = 0;
    } else {
      int j = pos - n;
      cur.b[j] = m[pos];
      self(self, pos + 1);
      if (m[pos] >= 1) {
        cur.b[j] = m[pos] - 1;
        cur.eps |= 1u << j;
        self(self, pos + 1);
        cur.eps &= ~(1u << j);
      }
      cur.b[j] = 0;
    }
  };
  rec(rec, 0);
  std::sort(monos_.begin(), monos_.end());
  for (int32_t i = 0; i < static_cast<int32_t>(monos_.size()); ++i)
    index_.emplace(monos_[i], i);
}

int32_t FormSlice::index_of(const FormMono& mo) const {
  auto it = index_.find(mo);
  if (it == index_.end()) throw std::logic_error("monomial outside slice");
  return it->second;
}

std::vector<int32_t> FormSlice::of_rank(int r) const {
  std::vector<int32_t> out;
  for (int32_t i = 0; i < count(); ++i)
    if (monos_[i].rank() == r) out.push_back(i);
  return out;
}

int FormSlice::max_rank() const {
  int r = 0;
  for (auto& mo : monos_) r = std::max(r, mo.rank());
  return r;
}

// ------------------------------------------------------------- cohomology

namespace {

SpanMatrix d_matrix(const FormSlice& fs, const std::vector<int32_t>& dom,
                    const std::vector<int32_t>& cod) {
  std::map<int32_t, int32_t> codidx;
  for (int32_t i = 0; i < static_cast<int32_t>(cod.size()); ++i)
    codidx.emplace(cod[i], i);
  SpanMatrix m(static_cast<int32_t>(cod.size()));
  for (int32_t t : dom) {
    std::vector<std::pair<int32_t, Zi>> e;
    for (auto& [mo, c] : d_mono(fs.monos()[t]))
      e.emplace_back(codidx.at(fs.index_of(mo)), Zi(c));
    std::sort(e.begin(), e.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    m.rows.push_back(Row::from_entries(m.cols, std::move(e)));  // zero rows kept
  }
  return m;
}

}  // namespace

GroupInvariants cohomology(int n, int k, int r, const Deg& m) {
  if (r < 0) throw std::invalid_argument("negative rank");
  FormSlice fs(n, k, m);
  auto dom = fs.of_rank(r);
  auto cod = fs.of_rank(r + 1);
  SpanMatrix dr = d_matrix(fs, dom, cod);
  SpanMatrix ker = kernel(dr);  // lattice in Z^{|dom|}
  SpanMatrix im(static_cast<int32_t>(dom.size()));
  if (r >= 1) {
    auto src = fs.of_rank(r - 1);
    SpanMatrix dprev = d_matrix(fs, src, dom);
    for (Row& rr : dprev.rows) im.add_row(std::move(rr));
  }
  return lattice_quotient(ker, im);
}

std::optional<DForm<RingZ>> exactness_witness(int n, int k, const DForm<RingZ>& omega) {
  if (omega.is_zero()) return DForm<RingZ>();
  const FormMono& first = omega.t.begin()->first;
  Deg m = first.multidegree();
  int r = first.rank();
  for (auto& [mo, c] : omega.t)
    if (mo.rank() != r || !(mo.multidegree() == m))
      throw std::invalid_argument("witness needs a homogeneous form");
  if (r == 0) return std::nullopt;  // positive-degree functions are never exact
  FormSlice fs(n, k, m);
  auto src = fs.of_rank(r - 1);
  auto dom = fs.of_rank(r);
  std::map<int32_t, int32_t> domidx;
  for (int32_t i = 0; i < static_cast<int32_t>(dom.size()); ++i)
    domidx.emplace(dom[i], i);
  SpanMatrix gens = d_matrix(fs, src, dom);
  std::vector<std::pair<int32_t, Zi>> e;
  for (auto& [mo, c] : omega.t) e.emplace_back(domidx.at(fs.index_of(mo)), c);
  std::sort(e.begin(), e.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  auto sol = solve_in_lattice(Row::from_entries(gens.cols, std::move(e)), gens);
  if (!sol) return std::nullopt;
  DForm<RingZ> eta;
  for (size_t i = 0; i < sol->size(); ++i)
    if (!(*sol)[i].is_zero()) eta.add_term(fs.monos()[src[i]], (*sol)[i]);
  return eta;
}

std::vector<int32_t> even_indices(const FormSlice& fs) {
  std::vector<int32_t> out;
  for (int32_t i = 0; i < fs.count(); ++i)
    if (fs.monos()[i].rank() % 2 == 0) out.push_back(i);
  return out;
}

SpanMatrix exact_even_lattice(int n, int k, const Deg& m) {
  FormSlice fs(n, k, m);
  auto evens = even_indices(fs);
  std::vector<int32_t> odds;
  for (int32_t i = 0; i < fs.count(); ++i)
    if (fs.monos()[i].rank() % 2 == 1) odds.push_back(i);
  SpanMatrix dmat = d_matrix(fs, odds, evens);
  SpanMatrix out(dmat.cols);
  for (Row& r : dmat.rows) out.add_row(std::move(r));
  return hnf(out);
}

SpanMatrix even_slice_span(int n, int k, const Deg& m) {
  FormSlice fs(n, k, m);
  return identity_span(static_cast<int32_t>(even_indices(fs).size()));
}

// --------------------------------------------- quantized normal form / phi

namespace {

void qadd(QForm& f, const FormMono& m, const Zi& c) {
  if (c.is_zero()) return;
  auto it = f.find(m);
  if (it == f.end())
    f.emplace(m, c);
  else {
    it->second += c;
    if (it->second.is_zero()) f.erase(it);
  }
}

/// multiply the scaled-basis monomial by the even generator x_i
void qmul_x(const Signature& sig, const FormMono& M, const Zi& coeff, int i, QForm& out) {
  {
    FormMono m = M;
    m.a[i] += 1;
    qadd(out, m, coeff);
  }
  if (!(M.dxm >> i & 1)) {
    // correction at each y_j: consume x_i and y_j, emit dx_i dy_j
    for (int j = 0; j < sig.n_odd; ++j) {
      if (!(M.eps >> j & 1)) continue;
      FormMono m = M;
      m.eps &= ~(1u << j);
      m.dxm |= 1u << i;
      long long sgn = -1;
      if (popcount(M.eps & ~((1u << (j + 1)) - 1)) & 1) sgn = -sgn;  // y's right of j
      if (popcount(M.dxm & ((1u << i) - 1)) & 1) sgn = -sgn;         // dx's below i
      Zi c = coeff * Zi(sgn);
      if (m.b[j] & 1) c *= Zi(-2);  // dy_j onto an odd power: (dy)^2 = -2*(y^2 atom)
      m.b[j] += 1;
      qadd(out, m, c);
    }
    // x_j^c x_i = x_i x_j^c + c x_j^{c-1} dx_j dx_i for j > i
    for (int j = i + 1; j < sig.n_even; ++j) {
      if (M.a[j] == 0 || (M.dxm >> j & 1)) continue;
      FormMono m = M;
      m.a[j] -= 1;
      m.dxm |= (1u << i) | (1u << j);
      long long inv = 1;  // the pair dx_j dx_i itself
      inv += popcount(M.dxm & ((1u << j) - 1));
      inv += popcount(M.dxm & ((1u << i) - 1));
      Zi c = coeff * Zi(M.a[j]);
      if (inv & 1) c.negate();
      qadd(out, m, c);
    }
  }
}

/// multiply the scaled-basis monomial by the odd generator y_j
void qmul_y(const Signature& sig, const FormMono& M, const Zi& coeff, int j, QForm& out) {
  (void)sig;
  long long swapsign = (popcount(M.dxm) & 1) ? -1 : 1;  // pass the dx block
  for (int jj = 31; jj >= 0; --jj) {
    if (!(M.eps >> jj & 1)) continue;
    if (jj > j) {
      // y_jj y_j = -y_j y_jj - dy_jj dy_j
      FormMono m = M;
      m.eps &= ~(1u << jj);
      Zi c = coeff * Zi(-swapsign);
      if (m.b[jj] & 1) c *= Zi(-2);
      m.b[jj] += 1;
      if (m.b[j] & 1) c *= Zi(-2);
      m.b[j] += 1;
      qadd(out, m, c);
      swapsign = -swapsign;
    } else if (jj == j) {
      // adjacent y_j y_j = (y_j^2 atom): b_j += 2 in the scaled basis
      FormMono m = M;
      m.eps &= ~(1u << j);
      m.b[j] += 2;
      qadd(out, m, coeff * Zi(swapsign));
      return;
    } else {
      break;
    }
  }
  FormMono m = M;
  m.eps |= 1u << j;
  qadd(out, m, coeff * Zi(swapsign));
}

}  // namespace

QForm quant_mul_word(const Signature& sig, const QForm& f, const Word& w) {
  QForm cur = f;
  for (uint8_t g : w.l) {
    QForm next;
    for (auto& [m, c] : cur) {
      if (sig.is_odd_gen(g))
        qmul_y(sig, m, c, g - sig.n_even, next);
      else
        qmul_x(sig, m, c, g, next);
    }
    cur = std::move(next);
  }
  return cur;
}

QForm quant_normal_form(const Signature& sig, const ElemZ& e) {
  QForm out;
  QForm unit;
  unit.emplace(FormMono(sig.n_even, sig.n_odd), Zi(1));
  for (auto& [w, c] : e.t) {
    QForm nf = quant_mul_word(sig, unit, w);
    for (auto& [m, v] : nf) qadd(out, m, v * c);
  }
  return out;
}

DForm<RingZ> varphi(const Signature& sig, const ElemZ& e) {
  DForm<RingZ> f;
  for (auto& [m, c] : quant_normal_form(sig, e)) f.add_term(m, c);
  return f;
}

Row qform_row(const FormSlice& fs, const std::vector<int32_t>& even_idx,
              const QForm& f) {
  std::map<int32_t, int32_t> pos;
  for (int32_t i = 0; i < static_cast<int32_t>(even_idx.size()); ++i)
    pos.emplace(even_idx[i], i);
  std::vector<std::pair<int32_t, Zi>> e;
  for (auto& [m, c] : f) e.emplace_back(pos.at(fs.index_of(m)), c);
  std::sort(e.begin(), e.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return Row::from_entries(static_cast<int32_t>(even_idx.size()), std::move(e));
}

SpanMatrix zeta_lattice(const Signature& sig, const Deg& m, const SpanMatrix& span,
                        int* scale_exp) {
  auto words = slice(sig, m);
  FormSlice fs(sig.n_even, sig.n_odd, m);
  auto evens = even_indices(fs);
  std::map<int32_t, int32_t> pos;
  for (int32_t i = 0; i < static_cast<int32_t>(evens.size()); ++i)
    pos.emplace(evens[i], i);
  std::vector<uint8_t> have(words->count(), 0);
  std::vector<DForm<RingDyadic>> cache(words->count());
  int maxexp = 0;
  std::vector<std::map<int32_t, Dyadic>> rows;
  for (const Row& r : span.rows) {
    std::map<int32_t, Dyadic> acc;
    r.for_each([&](int32_t c, const Zi& v) {
      if (!have[c]) {
        cache[c] = zeta_word(sig, words->word_at(c));
        have[c] = 1;
      }
      for (auto& [mo, coef] : cache[c].t) {
        Dyadic add = coef * Dyadic(v);
        auto it = acc.find(pos.at(fs.index_of(mo)));
        if (it == acc.end())
          acc.emplace(pos.at(fs.index_of(mo)), add);
        else
          it->second = it->second + add;
      }
    });
    for (auto& [col, val] : acc)
      if (!val.is_zero()) maxexp = std::max(maxexp, val.exp2);
    rows.push_back(std::move(acc));
  }
  if (scale_exp) *scale_exp = maxexp;
  SpanMatrix out(static_cast<int32_t>(evens.size()));
  for (auto& acc : rows) {
    std::vector<std::pair<int32_t, Zi>> e;
    for (auto& [col, val] : acc) {
      if (val.is_zero()) continue;
      e.emplace_back(col, val.num * Dyadic::pow2(maxexp - val.exp2));
    }
    // zero rows kept so row indices track the input span
    out.rows.push_back(Row::from_entries(out.cols, std::move(e)));
  }
  return out;
}

SpanMatrix varphi_lattice(const Signature& sig, const Deg& m, const SpanMatrix& span) {
  auto words = slice(sig, m);
  FormSlice fs(sig.n_even, sig.n_odd, m);
  auto evens = even_indices(fs);
  std::map<int32_t, int32_t> pos;
  for (int32_t i = 0; i < static_cast<int32_t>(evens.size()); ++i)
    pos.emplace(evens[i], i);
  std::vector<QForm> nf_cache(words->count());
  std::vector<uint8_t> have(words->count(), 0);
  QForm unit;
  unit.emplace(FormMono(sig.n_even, sig.n_odd), Zi(1));
  SpanMatrix out(static_cast<int32_t>(evens.size()));
  for (const Row& r : span.rows) {
    QForm acc;
    r.for_each([&](int32_t c, const Zi& v) {
      if (!have[c]) {
        nf_cache[c] = quant_mul_word(sig, unit, words->word_at(c));
        have[c] = 1;
      }
      for (auto& [mo, coef] : nf_cache[c]) qadd(acc, mo, coef * v);
    });
    std::vector<std::pair<int32_t, Zi>> e;
    for (auto& [mo, coef] : acc) e.emplace_back(pos.at(fs.index_of(mo)), coef);
    std::sort(e.begin(), e.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    out.add_row(Row::from_entries(out.cols, std::move(e)));
  }
  return out;
}

}  // namespace lcs
