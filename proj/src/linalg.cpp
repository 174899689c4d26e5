#include "lcs/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lcs {

// ---------------------------------------------------------------- Row

Row Row::from_entries(int32_t cols, std::vector<std::pair<int32_t, Zi>>&& e) {
  Row r;
  r.cols_ = cols;
  r.nnz_ = static_cast<int32_t>(e.size());
  if (r.nnz_ == 0) return r;
  r.lead_ = e.front().first;
  if (r.nnz_ * 2 > cols) {
    r.dense_ = true;
    r.val_.resize(cols);
    for (auto& [c, v] : e) r.val_[c] = std::move(v);
  } else {
    r.idx_.reserve(e.size());
    r.val_.reserve(e.size());
    for (auto& [c, v] : e) {
      r.idx_.push_back(c);
      r.val_.push_back(std::move(v));
    }
  }
  return r;
}

const Zi& Row::lead_val() const {
  static const Zi zero(0);
  if (lead_ < 0) return zero;
  return dense_ ? val_[lead_] : val_.front();
}

void Row::negate() {
  for (auto& v : val_) v.negate();
}

std::vector<std::pair<int32_t, Zi>> Row::entries() const {
  std::vector<std::pair<int32_t, Zi>> e;
  e.reserve(nnz_);
  for_each([&](int32_t c, const Zi& v) { e.emplace_back(c, v); });
  return e;
}

bool Row::operator==(const Row& o) const {
  if (cols_ != o.cols_ || nnz_ != o.nnz_ || lead_ != o.lead_) return false;
  return entries() == o.entries();
}

SpanMatrix identity_span(int32_t n) {
  SpanMatrix m(n);
  for (int32_t i = 0; i < n; ++i)
    m.add_row(Row::from_entries(n, {{i, Zi(1)}}));
  return m;
}

SpanMatrix transpose(const SpanMatrix& m) {
  std::vector<std::vector<std::pair<int32_t, Zi>>> cols(m.cols);
  for (size_t i = 0; i < m.rows.size(); ++i)
    m.rows[i].for_each([&](int32_t c, const Zi& v) {
      cols[c].emplace_back(static_cast<int32_t>(i), v);
    });
  SpanMatrix t(static_cast<int32_t>(m.rows.size()));
  t.rows.reserve(m.cols);
  // zero rows are kept: row indices carry meaning for kernel computations
  for (int32_t c = 0; c < m.cols; ++c)
    t.rows.push_back(Row::from_entries(t.cols, std::move(cols[c])));
  return t;
}

SpanMatrix concat_rows(const SpanMatrix& a, const SpanMatrix& b) {
  SpanMatrix m(a.cols);
  m.rows = a.rows;
  m.rows.insert(m.rows.end(), b.rows.begin(), b.rows.end());
  return m;
}

SpanMatrix make_matrix(int32_t cols, const std::vector<std::vector<long long>>& rows) {
  SpanMatrix m(cols);
  for (auto& r : rows) {
    std::vector<std::pair<int32_t, Zi>> e;
    for (int32_t c = 0; c < cols; ++c)
      if (r[c] != 0) e.emplace_back(c, Zi(r[c]));
    // zero rows kept: row indices matter to kernel()
    m.rows.push_back(Row::from_entries(cols, std::move(e)));
  }
  return m;
}

// ---------------------------------------------------------------- Spa

void Spa::reset(int32_t cols) {
  cols_ = cols;
  v_.assign(cols, Zi(0));
  inheap_.assign(cols, 0);
  alive_.assign(cols, 0);
  heap_.clear();
  live_.clear();
}

void Spa::touch(int32_t c) {
  if (!alive_[c]) {
    alive_[c] = 1;
    live_.push_back(c);
  }
  if (!inheap_[c]) {
    inheap_[c] = 1;
    heap_.push_back(c);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<int32_t>());
  }
}

int32_t Spa::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), std::greater<int32_t>());
  int32_t c = heap_.back();
  heap_.pop_back();
  inheap_[c] = 0;
  return c;
}

void Spa::load(const Row& r) {
  r.for_each([&](int32_t c, const Zi& v) {
    v_[c] = v;
    touch(c);
  });
}

void Spa::axpy_neg(const Zi& q, const Row& r) {
  r.for_each([&](int32_t c, const Zi& v) {
    v_[c].submul(q, v);
    touch(c);
  });
}

void Spa::add_row(const Row& r) {
  r.for_each([&](int32_t c, const Zi& v) {
    v_[c] += v;
    touch(c);
  });
}

int32_t Spa::pop_min_nonzero() {
  while (!heap_.empty()) {
    int32_t c = pop();
    if (!v_[c].is_zero()) return c;
  }
  return -1;
}

Row Spa::snapshot() const {
  std::vector<int32_t> cols;
  cols.reserve(live_.size());
  for (int32_t c : live_)
    if (!v_[c].is_zero()) cols.push_back(c);
  std::sort(cols.begin(), cols.end());
  std::vector<std::pair<int32_t, Zi>> e;
  e.reserve(cols.size());
  for (int32_t c : cols) e.emplace_back(c, v_[c]);
  return Row::from_entries(cols_, std::move(e));
}

void Spa::scale_nonzeros(const Zi& a) {
  for (int32_t c : live_)
    if (!v_[c].is_zero()) v_[c] *= a;
}

Row Spa::extract(int32_t include_col) {
  Row r = snapshot();
  (void)include_col;
  clear();
  return r;
}

void Spa::clear() {
  for (int32_t c : live_) {
    v_[c] = Zi(0);
    alive_[c] = 0;
    inheap_[c] = 0;
  }
  live_.clear();
  heap_.clear();
}

// ---------------------------------------------------------------- HnfBasis

HnfBasis::HnfBasis(int32_t cols, int32_t tracked_gens)
    : cols_(cols), gens_(tracked_gens), slot_of_col_(cols, -1) {
  spa_.reset(cols);
  if (tracked()) tspa_.reset(gens_);
}

void HnfBasis::install(int32_t col, Row r, Row tr) {
  int32_t slot = static_cast<int32_t>(rows_.size());
  rows_.push_back(std::move(r));
  if (tracked()) tr_rows_.push_back(std::move(tr));
  slot_of_col_[col] = slot;
  auto it = std::lower_bound(order_.begin(), order_.end(), col,
                             [&](int32_t s, int32_t c) { return rows_[s].lead() < c; });
  order_.insert(it, slot);
}

void HnfBasis::reduce_tail(Row& r, Row& tr, int32_t skip_slot) {
  // Reduce r's entries at pivot columns beyond its lead into [0, pivot).
  // Keeping every stored pivot row in this shape bounds the quotients seen by
  // later insertions, which is what prevents intermediate entry explosion.
  if (r.nnz() <= 1) return;
  spa_.load(r);
  if (tracked()) tspa_.load(tr);
  int32_t lead = spa_.pop_min_nonzero();
  (void)lead;
  int32_t c;
  bool changed = false;
  while ((c = spa_.pop_min_nonzero()) != -1) {
    int32_t s2 = slot_of_col_[c];
    if (s2 < 0 || s2 == skip_slot) continue;
    Zi q, rem;
    Zi::fdiv_qr(spa_.at(c), rows_[s2].lead_val(), q, rem);
    if (q.is_zero()) continue;
    spa_.axpy_neg(q, rows_[s2]);  // c re-enters the heap holding rem
    if (tracked()) tspa_.axpy_neg(q, tr_rows_[s2]);
    changed = true;
  }
  if (changed) {
    r = spa_.extract(-1);
    if (tracked()) tr = tspa_.extract(-1);
  } else {
    spa_.clear();
    if (tracked()) tspa_.clear();
  }
}

bool HnfBasis::insert(const Row& r) {
  if (tracked()) {
    if (next_gen_ >= gens_) throw std::logic_error("tracked generator overflow");
    std::vector<std::pair<int32_t, Zi>> e;
    e.emplace_back(static_cast<int32_t>(next_gen_++), Zi(1));
    if (r.empty()) {
      deps_.push_back(Row::from_entries(gens_, std::move(e)));
      return false;
    }
    tspa_.load(Row::from_entries(gens_, std::move(e)));
  } else if (r.empty()) {
    return false;
  }
  spa_.load(r);
  int32_t c;
  while ((c = spa_.pop_min_nonzero()) != -1) {
    int32_t slot = slot_of_col_[c];
    if (slot < 0) {
      Row nr = spa_.extract(c);
      Row tr;
      if (tracked()) tr = tspa_.extract(-1);
      if (nr.lead_val().sign() < 0) {
        nr.negate();
        tr.negate();
      }
      reduce_tail(nr, tr, -1);
      install(c, std::move(nr), std::move(tr));
      return true;
    }
    // Euclid on the leading entries: divide, and when a remainder is left,
    // swap the working row into the pivot slot. No row scaling happens, which
    // keeps entries from compounding through long cascades.
    Zi q, rem;
    Zi::fdiv_qr(spa_.at(c), rows_[slot].lead_val(), q, rem);
    if (!q.is_zero()) {
      spa_.axpy_neg(q, rows_[slot]);
      if (tracked()) tspa_.axpy_neg(q, tr_rows_[slot]);
    }
    if (!rem.is_zero()) {
      Row np = spa_.extract(c);  // lead value rem at column c, 0 < rem < pivot
      Row ntp;
      if (tracked()) ntp = tspa_.extract(-1);
      reduce_tail(np, ntp, slot);
      std::swap(rows_[slot], np);
      spa_.load(np);  // keep inserting the displaced pivot row
      if (tracked()) {
        std::swap(tr_rows_[slot], ntp);
        tspa_.load(ntp);
      }
    }
  }
  spa_.clear();
  if (tracked()) {
    Row dep = tspa_.extract(-1);
    if (!dep.empty()) deps_.push_back(std::move(dep));
  }
  return false;
}

void HnfBasis::insert_all(const SpanMatrix& m) {
  for (const Row& r : m.rows) insert(r);
}

void HnfBasis::reduce_above() {
  // Normalize entries at other pivot columns into [0, pivot). Rows are
  // processed by descending pivot column so every pivot row used is already
  // in final form, making one pass per row sufficient.
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    int32_t slot = *it;
    if (rows_[slot].nnz() <= 1) continue;
    spa_.load(rows_[slot]);
    if (tracked()) tspa_.load(tr_rows_[slot]);
    bool changed = false;
    int32_t c;
    while ((c = spa_.pop_min_nonzero()) != -1) {
      int32_t s2 = slot_of_col_[c];
      if (s2 < 0 || s2 == slot) continue;
      Zi q, rem;
      Zi::fdiv_qr(spa_.at(c), rows_[s2].lead_val(), q, rem);
      if (q.is_zero()) continue;
      spa_.axpy_neg(q, rows_[s2]);  // leaves rem at c; c re-enters the heap
      if (tracked()) tspa_.axpy_neg(q, tr_rows_[s2]);
      changed = true;
    }
    if (changed) {
      rows_[slot] = spa_.extract(-1);
      if (tracked()) tr_rows_[slot] = tspa_.extract(-1);
    } else {
      spa_.clear();
      if (tracked()) tspa_.clear();
    }
  }
}

SpanMatrix HnfBasis::to_matrix() const {
  SpanMatrix m(cols_);
  m.rows.reserve(order_.size());
  for (int32_t slot : order_) m.rows.push_back(rows_[slot]);
  return m;
}

SpanMatrix HnfBasis::tracker_matrix() const {
  SpanMatrix m(gens_);
  m.rows.reserve(order_.size());
  for (int32_t slot : order_) m.rows.push_back(tr_rows_[slot]);
  return m;
}

bool HnfBasis::contains(const Row& r, std::vector<Zi>* out) const {
  if (r.empty()) {
    if (out) out->assign(order_.size(), Zi(0));
    return true;
  }
  spa_.load(r);
  std::vector<Zi> coords(out ? order_.size() : 0, Zi(0));
  int32_t c;
  bool ok = true;
  while ((c = spa_.pop_min_nonzero()) != -1) {
    int32_t slot = slot_of_col_[c];
    if (slot < 0) {
      ok = false;
      break;
    }
    const Row& p = rows_[slot];
    Zi q, rem;
    Zi::fdiv_qr(spa_.at(c), p.lead_val(), q, rem);
    if (!rem.is_zero()) {
      ok = false;
      break;
    }
    spa_.axpy_neg(q, p);
    if (out) {
      auto it = std::lower_bound(order_.begin(), order_.end(), p.lead(),
                                 [&](int32_t s, int32_t cc) { return rows_[s].lead() < cc; });
      coords[static_cast<size_t>(it - order_.begin())] = q;
    }
  }
  spa_.clear();
  if (ok && out) *out = std::move(coords);
  return ok;
}

Zi HnfBasis::order_mod_lattice(const Row& r) const {
  // rational reduction against the basis; order = lcm of denominators
  std::map<int32_t, mpq_class> acc;
  r.for_each([&](int32_t c, const Zi& v) { acc[c] = mpq_class(v.to_mpz()); });
  mpz_class l(1);
  while (!acc.empty()) {
    auto it = acc.begin();
    if (sgn(it->second) == 0) {
      acc.erase(it);
      continue;
    }
    int32_t c = it->first;
    int32_t slot = slot_of_col_[c];
    if (slot < 0) return Zi(0);  // not in the Q-span
    const Row& p = rows_[slot];
    mpq_class q = it->second / mpq_class(p.lead_val().to_mpz());
    q.canonicalize();
    p.for_each([&](int32_t cc, const Zi& v) {
      acc[cc] -= q * mpq_class(v.to_mpz());
    });
    mpz_class den = q.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    acc.erase(c);
  }
  return Zi(l);
}

SpanMatrix hnf(const SpanMatrix& m) {
  HnfBasis b(m.cols);
  b.insert_all(m);
  b.reduce_above();
  return b.to_matrix();
}

// ---------------------------------------------------------------- SNF

namespace {

/// Dense SNF of a small matrix; returns |diagonal| entries with chain.
std::vector<Zi> snf_dense(std::vector<std::vector<Zi>> a) {
  size_t nr = a.size();
  size_t nc = nr ? a[0].size() : 0;
  std::vector<Zi> diag;
  size_t top = 0;
  while (top < nr && top < nc) {
    // find min-abs nonzero pivot in submatrix
    size_t pi = nr, pj = nc;
    for (size_t i = top; i < nr; ++i)
      for (size_t j = top; j < nc; ++j)
        if (!a[i][j].is_zero() &&
            (pi == nr || Zi::cmp_abs(a[i][j], a[pi][pj]) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi == nr) break;  // all zero
    std::swap(a[top], a[pi]);
    for (size_t i = 0; i < nr; ++i) std::swap(a[i][top], a[i][pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      // clear column
      for (size_t i = top + 1; i < nr; ++i) {
        if (a[i][top].is_zero()) continue;
        Zi q, rem;
        Zi::fdiv_qr(a[i][top], a[top][top], q, rem);
        if (!q.is_zero())
          for (size_t j = top; j < nc; ++j) a[i][j].submul(q, a[top][j]);
        if (!a[i][top].is_zero()) {  // remainder smaller than pivot
          std::swap(a[top], a[i]);
          clean = false;
        }
      }
      if (!clean) continue;
      // clear row
      for (size_t j = top + 1; j < nc; ++j) {
        if (a[top][j].is_zero()) continue;
        Zi q, rem;
        Zi::fdiv_qr(a[top][j], a[top][top], q, rem);
        if (!q.is_zero())
          for (size_t i = top; i < nr; ++i) a[i][j].submul(q, a[i][top]);
        if (!a[top][j].is_zero()) {
          for (size_t i = top; i < nr; ++i) std::swap(a[i][top], a[i][j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // pivot must divide every remaining entry
      for (size_t i = top + 1; i < nr && clean; ++i)
        for (size_t j = top + 1; j < nc && clean; ++j) {
          if (a[i][j].is_zero()) continue;
          Zi q, rem;
          Zi::fdiv_qr(a[i][j], a[top][top], q, rem);
          if (!rem.is_zero()) {
            for (size_t jj = top; jj < nc; ++jj) a[top][jj] += a[i][jj];
            clean = false;
          }
        }
    }
    diag.push_back(Zi::abs(a[top][top]));
    ++top;
  }
  return diag;
}

}  // namespace

std::vector<Zi> snf_diagonal(const SpanMatrix& m) {
  HnfBasis b(m.cols);
  b.insert_all(m);
  b.reduce_above();
  SpanMatrix h = b.to_matrix();
  // strip unit pivots: their row and column split off as an invariant factor 1
  size_t units = 0;
  std::vector<Row> rest;
  std::vector<uint8_t> drop_col(m.cols, 0);
  for (const Row& r : h.rows) {
    if (r.lead_val().is_one() && r.nnz() >= 1) {
      // entries above reduced mod 1 are zero, so the pivot column is e_i
      ++units;
      drop_col[r.lead()] = 1;
    } else {
      rest.push_back(r);
    }
  }
  // remap the remaining columns and build a small dense matrix
  std::vector<int32_t> newcol(m.cols, -1);
  int32_t nc = 0;
  for (int32_t c = 0; c < m.cols; ++c)
    if (!drop_col[c]) newcol[c] = nc++;
  std::vector<std::vector<Zi>> dense(rest.size(), std::vector<Zi>(nc, Zi(0)));
  for (size_t i = 0; i < rest.size(); ++i)
    rest[i].for_each([&](int32_t c, const Zi& v) {
      if (newcol[c] >= 0) dense[i][newcol[c]] = v;
    });
  std::vector<Zi> diag(units, Zi(1));
  auto d2 = snf_dense(std::move(dense));
  diag.insert(diag.end(), d2.begin(), d2.end());
  // chain holds: unit entries divide everything; snf_dense enforces the rest
  return diag;
}

// ------------------------------------------------------- GroupInvariants

GroupInvariants GroupInvariants::from_cyclic_orders(const std::vector<Zi>& orders) {
  // assemble invariant factors from arbitrary cyclic orders via primary parts
  std::map<long long, std::vector<int>> parts;  // prime -> exponents
  for (const Zi& o : orders) {
    long long v = o.as_ll();
    for (long long p = 2; p * p <= v; ++p) {
      int e = 0;
      while (v % p == 0) {
        v /= p;
        ++e;
      }
      if (e) parts[p].push_back(e);
    }
    if (v > 1) parts[v].push_back(1);
  }
  size_t len = 0;
  for (auto& [p, es] : parts) {
    std::sort(es.rbegin(), es.rend());
    len = std::max(len, es.size());
  }
  std::vector<Zi> factors(len, Zi(1));
  for (auto& [p, es] : parts)
    for (size_t i = 0; i < es.size(); ++i) {
      Zi pw(1);
      for (int t = 0; t < es[i]; ++t) pw *= Zi(p);
      factors[i] = factors[i] * pw;
    }
  std::reverse(factors.begin(), factors.end());  // ascending divisibility
  GroupInvariants g;
  for (auto& f : factors)
    if (!f.is_one()) g.factors.push_back(f);
  return g;
}

std::map<std::pair<long long, int>, int> GroupInvariants::primary() const {
  std::map<std::pair<long long, int>, int> out;
  for (const Zi& d : factors) {
    long long v = d.as_ll();
    for (long long p = 2; p * p <= v; ++p) {
      int e = 0;
      while (v % p == 0) {
        v /= p;
        ++e;
      }
      if (e) out[{p, e}]++;
    }
    if (v > 1) out[{v, 1}]++;
  }
  return out;
}

int GroupInvariants::count_divisible(long long p) const {
  int c = 0;
  for (const Zi& d : factors) {
    Zi q, r;
    Zi::fdiv_qr(d, Zi(p), q, r);
    if (r.is_zero()) ++c;
  }
  return c;
}

GroupInvariants GroupInvariants::without_two_part() const {
  std::vector<Zi> odd;
  for (const Zi& d : factors) {
    Zi o = d.odd_part();
    if (!o.is_one()) odd.push_back(o);
  }
  GroupInvariants g;
  g.free_rank = free_rank;
  g.factors = std::move(odd);
  return g;
}

std::string GroupInvariants::str() const {
  if (trivial()) return "0";
  std::string s;
  if (free_rank > 0) s = "Z" + std::string(free_rank > 1 ? "^" + std::to_string(free_rank) : "");
  for (const Zi& d : factors) s += (s.empty() ? "" : " + ") + std::string("Z/") + d.str();
  return s;
}

std::string GroupInvariants::primary_str() const {
  if (factors.empty()) return free_rank ? str() : "0";
  std::string s;
  if (free_rank > 0) s = "Z" + std::string(free_rank > 1 ? "^" + std::to_string(free_rank) : "");
  for (auto& [pe, cnt] : primary()) {
    long long pw = 1;
    for (int t = 0; t < pe.second; ++t) pw *= pe.first;
    std::string base = "(Z/" + std::to_string(pw) + ")";
    if (cnt > 1) base += "^" + std::to_string(cnt);
    s += (s.empty() ? "" : " + ") + base;
  }
  return s;
}

GroupInvariants lattice_quotient(const SpanMatrix& a, const SpanMatrix& b) {
  HnfBasis ha(a.cols);
  ha.insert_all(a);
  ha.reduce_above();
  int64_t ra = ha.rank();
  SpanMatrix coords(static_cast<int32_t>(ra));
  for (const Row& r : b.rows) {
    std::vector<Zi> c;
    if (!ha.contains(r, &c)) throw NotASublatticeError();
    std::vector<std::pair<int32_t, Zi>> e;
    for (size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) e.emplace_back(static_cast<int32_t>(i), std::move(c[i]));
    coords.add_row(Row::from_entries(coords.cols, std::move(e)));
  }
  auto diag = snf_diagonal(coords);
  GroupInvariants g;
  g.free_rank = ra - static_cast<int64_t>(diag.size());
  for (Zi& d : diag)
    if (!d.is_one()) g.factors.push_back(std::move(d));
  return g;
}

// ------------------------------------------------------- field ranks

namespace {

struct FpRow {
  std::vector<std::pair<int32_t, uint64_t>> e;  // sorted, vals in (0,p)
};

}  // namespace

int64_t rank_mod_p(const SpanMatrix& m, uint64_t p) {
  std::vector<int32_t> slot_of_col(m.cols, -1);
  std::vector<FpRow> rows;
  std::vector<uint64_t> acc(m.cols, 0);
  auto mulmod = [p](uint64_t a, uint64_t b) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  auto invmod = [p](uint64_t a) {
    int64_t t = 0, nt = 1, r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a);
    while (nr) {
      int64_t q = r / nr, tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(p) : t);
  };
  int64_t rank = 0;
  std::vector<int32_t> touched;
  for (const Row& r : m.rows) {
    touched.clear();
    r.for_each([&](int32_t c, const Zi& v) {
      uint64_t x;
      if (v.small()) {
        long long s = v.as_ll() % static_cast<long long>(p);
        if (s < 0) s += static_cast<long long>(p);
        x = static_cast<uint64_t>(s);
      } else {
        mpz_class z = v.to_mpz();
        x = mpz_fdiv_ui(z.get_mpz_t(), p);
      }
      if (x) {
        acc[c] = x;
        touched.push_back(c);
      }
    });
    std::sort(touched.begin(), touched.end());
    size_t ti = 0;
    while (ti < touched.size()) {
      int32_t c = touched[ti];
      if (acc[c] == 0) {
        ++ti;
        continue;
      }
      int32_t s = slot_of_col[c];
      if (s < 0) {
        // normalize and install
        uint64_t inv = invmod(acc[c]);
        FpRow nr;
        for (size_t k = ti; k < touched.size(); ++k)
          if (acc[touched[k]])
            nr.e.emplace_back(touched[k], mulmod(acc[touched[k]], inv));
        slot_of_col[c] = static_cast<int32_t>(rows.size());
        rows.push_back(std::move(nr));
        ++rank;
        break;
      }
      uint64_t f = acc[c];
      for (auto& [cc, vv] : rows[s].e) {
        uint64_t sub = mulmod(f, vv);
        uint64_t& slot = acc[cc];
        bool was = slot != 0;
        slot = (slot + p - sub) % p;
        if (!was && slot) {
          touched.insert(std::upper_bound(touched.begin() + ti, touched.end(), cc), cc);
        }
      }
      ++ti;
    }
    for (int32_t c : touched) acc[c] = 0;
  }
  return rank;
}

int64_t rank_q(const SpanMatrix& m) {
  HnfBasis b(m.cols);
  b.insert_all(m);
  return b.rank();
}

SpanMatrix kernel(const SpanMatrix& m) {
  HnfBasis b(m.cols, static_cast<int32_t>(m.rows.size()));
  for (const Row& r : m.rows) b.insert(r);
  SpanMatrix deps(static_cast<int32_t>(m.rows.size()));
  for (const Row& d : b.dependencies()) deps.add_row(d);
  return hnf(deps);
}

SpanMatrix saturate(const SpanMatrix& m) {
  // orthogonal complement taken twice: sat(L) = (L^perp)^perp
  SpanMatrix k1 = kernel(transpose(m));  // {u : M u = 0}
  return kernel(transpose(k1));
}

bool lattices_equal(const SpanMatrix& a, const SpanMatrix& b) {
  SpanMatrix ha = hnf(a), hb = hnf(b);
  if (ha.rows.size() != hb.rows.size()) return false;
  for (size_t i = 0; i < ha.rows.size(); ++i)
    if (!(ha.rows[i] == hb.rows[i])) return false;
  return true;
}

SpanMatrix intersect_with_rational_span(const SpanMatrix& a, const SpanMatrix& b) {
  // W = basis of the orthogonal complement of span_Q(b); then
  // v in span_Q(b) iff v W^T = 0, solved over the coefficients of a's rows
  SpanMatrix w = kernel(transpose(b));  // rows of length a.cols
  // constraint matrix: entry (i, j) = <a_i, w_j>
  SpanMatrix constraints(static_cast<int32_t>(w.rows.size()));
  std::vector<Zi> dense(a.cols, Zi(0));
  for (const Row& ra : a.rows) {
    std::vector<std::pair<int32_t, Zi>> e;
    for (size_t j = 0; j < w.rows.size(); ++j) {
      Zi dot(0);
      w.rows[j].for_each([&](int32_t c, const Zi& v) { dense[c] = v; });
      ra.for_each([&](int32_t c, const Zi& v) { dot.addmul(v, dense[c]); });
      w.rows[j].for_each([&](int32_t c, const Zi&) { dense[c] = Zi(0); });
      if (!dot.is_zero()) e.emplace_back(static_cast<int32_t>(j), std::move(dot));
    }
    constraints.rows.push_back(Row::from_entries(constraints.cols, std::move(e)));
  }
  SpanMatrix coeffs = kernel(constraints);  // rows over a's row indices
  SpanMatrix out(a.cols);
  for (const Row& k : coeffs.rows) {
    std::map<int32_t, Zi> acc;
    k.for_each([&](int32_t i, const Zi& c) {
      a.rows[i].for_each([&](int32_t col, const Zi& v) {
        auto it = acc.find(col);
        if (it == acc.end())
          acc.emplace(col, c * v);
        else
          it->second.addmul(c, v);
      });
    });
    std::vector<std::pair<int32_t, Zi>> e;
    for (auto& [col, v] : acc)
      if (!v.is_zero()) e.emplace_back(col, std::move(v));
    out.add_row(Row::from_entries(a.cols, std::move(e)));
  }
  return hnf(out);
}

bool lattice_contains_all(const SpanMatrix& outer, const SpanMatrix& inner) {
  HnfBasis b(outer.cols);
  b.insert_all(outer);
  b.reduce_above();
  for (const Row& r : inner.rows)
    if (!b.contains(r)) return false;
  return true;
}

std::optional<std::vector<Zi>> solve_in_lattice(const Row& v, const SpanMatrix& m) {
  HnfBasis b(m.cols, static_cast<int32_t>(m.rows.size()));
  for (const Row& r : m.rows) b.insert(r);
  b.reduce_above();
  std::vector<Zi> coords;
  if (!b.contains(v, &coords)) return std::nullopt;
  // convert coordinates over basis rows into coefficients over generators
  std::vector<Zi> out(m.rows.size(), Zi(0));
  SpanMatrix tr = b.tracker_matrix();
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    tr.rows[i].for_each([&](int32_t g, const Zi& u) { out[g].addmul(coords[i], u); });
  }
  return out;
}

// ------------------------------------------------------- MatrixMarket

void mm_dump(std::ostream& os, const SpanMatrix& m) {
  os << "%%MatrixMarket matrix coordinate integer general\n";
  int64_t nnz = 0;
  for (const Row& r : m.rows) nnz += r.nnz();
  os << m.rows.size() << " " << m.cols << " " << nnz << "\n";
  for (size_t i = 0; i < m.rows.size(); ++i)
    m.rows[i].for_each([&](int32_t c, const Zi& v) {
      os << (i + 1) << " " << (c + 1) << " " << v.str() << "\n";
    });
}

SpanMatrix mm_load(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("bad MatrixMarket header");
  do {
    if (!std::getline(is, line)) throw std::runtime_error("truncated MatrixMarket file");
  } while (!line.empty() && line[0] == '%');
  std::istringstream hd(line);
  int64_t nr, nc, nnz;
  hd >> nr >> nc >> nnz;
  std::vector<std::vector<std::pair<int32_t, Zi>>> rows(nr);
  for (int64_t t = 0; t < nnz; ++t) {
    int64_t i, j;
    std::string v;
    is >> i >> j >> v;
    rows[i - 1].emplace_back(static_cast<int32_t>(j - 1), Zi(mpz_class(v)));
  }
  SpanMatrix m(static_cast<int32_t>(nc));
  for (auto& e : rows) {
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    m.add_row(Row::from_entries(m.cols, std::move(e)));
  }
  return m;
}

}  // namespace lcs
