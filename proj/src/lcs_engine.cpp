#include "lcs/lcs_engine.hpp"

#include <algorithm>

namespace lcs {

namespace {

/// all m' with 0 <= m' <= m componentwise and total degree in range, ordered
/// by total degree ascending
std::vector<Deg> submultidegrees(const Deg& m, int min_total, int max_total) {
  std::vector<Deg> out;
  Deg cur(m.size(), 0);
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == m.size()) {
      int t = total(cur);
      if (t >= min_total && t <= max_total) out.push_back(cur);
      return;
    }
    for (int v = 0; v <= m[pos]; ++v) {
      cur[pos] = v;
      self(self, pos + 1);
    }
    cur[pos] = 0;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const Deg& a, const Deg& b) {
    int ta = total(a), tb = total(b);
    if (ta != tb) return ta < tb;
    return a < b;
  });
  return out;
}

Row bracket_row(const SliceBasis& target, const Word& w, int pw,
                const SliceBasis& src, const Row& v) {
  bool anticomm = (pw & src.parity()) != 0;  // [w,v] = wv + vw when both odd
  std::vector<std::pair<int32_t, Zi>> e;
  e.reserve(2 * static_cast<size_t>(v.nnz()));
  v.for_each([&](int32_t c, const Zi& val) {
    const Word& u = src.word_at(c);
    e.emplace_back(target.rank_of(w * u), val);
    e.emplace_back(target.rank_of(u * w), anticomm ? val : -val);
  });
  std::sort(e.begin(), e.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int32_t, Zi>> out;
  out.reserve(e.size());
  for (auto& [c, val] : e) {
    if (!out.empty() && out.back().first == c)
      out.back().second += val;
    else
      out.emplace_back(c, std::move(val));
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& p) { return p.second.is_zero(); }),
            out.end());
  return Row::from_entries(static_cast<int32_t>(target.count()), std::move(out));
}

Row product_row(const SliceBasis& target, const Word& w, const SliceBasis& src,
                const Row& v) {
  std::vector<std::pair<int32_t, Zi>> e;
  e.reserve(static_cast<size_t>(v.nnz()));
  v.for_each([&](int32_t c, const Zi& val) {
    e.emplace_back(target.rank_of(w * src.word_at(c)), val);
  });
  std::sort(e.begin(), e.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return Row::from_entries(static_cast<int32_t>(target.count()), std::move(e));
}

}  // namespace

LcsEngine::LcsEngine(Signature s, bool use_doubling_bound)
    : sig(s), doubling_(use_doubling_bound) {}

const SpanMatrix& LcsEngine::get(char kind, int i, const Deg& m) {
  std::shared_ptr<Entry> e;
  bool creator = false;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::make_tuple(kind, i, m);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
      e = std::make_shared<Entry>();
      memo_.emplace(key, e);
      creator = true;
    } else {
      e = it->second;
    }
  }
  if (creator) {
    SpanMatrix v;
    if (kind == 'l')
      v = compute_l(i, m);
    else if (kind == 'm')
      v = compute_m(i, m);
    else
      v = compute_l2m3(m);
    std::lock_guard<std::mutex> lk(e->mu);
    e->val = std::move(v);
    e->ready = true;
    e->cv.notify_all();
  } else {
    std::unique_lock<std::mutex> lk(e->mu);
    e->cv.wait(lk, [&] { return e->ready; });
  }
  return e->val;
}

const SpanMatrix& LcsEngine::l_span(int i, const Deg& m) {
  if (i < 1) throw std::invalid_argument("series index must be >= 1");
  return get('l', i, m);
}

const SpanMatrix& LcsEngine::m_span(int k, const Deg& m) {
  if (k < 2) throw std::invalid_argument("ideal index must be >= 2");
  return get('m', k, m);
}

const SpanMatrix& LcsEngine::l2m3_span(const Deg& m) { return get('s', 0, m); }

SpanMatrix LcsEngine::compute_l(int i, const Deg& m) {
  int32_t cols = static_cast<int32_t>(SliceBasis::word_count(m));
  int n = total(m);
  if (i > n) return SpanMatrix(cols);  // an i-fold bracket needs degree >= i
  if (i == 1) return identity_span(cols);
  auto target = slice(sig, m);
  HnfBasis hb(cols);
  if (i == 2) {
    // L_2 = sum_j [A, g_j]
    for (int j = 0; j < sig.total(); ++j) {
      if (m[j] < 1) continue;
      Deg rest = m;
      rest[j] -= 1;
      auto src = slice(sig, rest);
      int pj = sig.is_odd_gen(j) ? 1 : 0;
      Word gj = gen_word(j);
      for (const Word& w : src->words()) {
        bool anticomm = (w.parity(sig) & pj) != 0;
        std::vector<std::pair<int32_t, Zi>> e;
        int32_t c1 = target->rank_of(w * gj), c2 = target->rank_of(gj * w);
        if (c1 == c2) {
          if (anticomm) e.emplace_back(c1, Zi(2));
        } else if (c1 < c2) {
          e.emplace_back(c1, Zi(1));
          e.emplace_back(c2, anticomm ? Zi(1) : Zi(-1));
        } else {
          e.emplace_back(c2, anticomm ? Zi(1) : Zi(-1));
          e.emplace_back(c1, Zi(1));
        }
        hb.insert(Row::from_entries(cols, std::move(e)));
      }
    }
  } else {
    int prev = i - 1;
    int max_left = n - prev;
    if (doubling_) {
      // L_i = [A_{<= 2^{i-1}-1}, L_{i-1}]
      long long bound = (1LL << prev) - 1;
      if (bound < max_left) max_left = static_cast<int>(bound);
    }
    for (const Deg& mp : submultidegrees(m, 1, max_left)) {
      Deg rest = sub(m, mp);
      if (total(rest) < prev) continue;
      const SpanMatrix& src_span = l_span(prev, rest);
      if (src_span.rows.empty()) continue;
      auto left = slice(sig, mp);
      auto src = slice(sig, rest);
      int pw = left->parity();
      for (const Word& w : left->words())
        for (const Row& v : src_span.rows)
          hb.insert(bracket_row(*target, w, pw, *src, v));
    }
  }
  hb.reduce_above();
  return hb.to_matrix();
}

SpanMatrix LcsEngine::compute_m(int k, const Deg& m) {
  int32_t cols = static_cast<int32_t>(SliceBasis::word_count(m));
  int n = total(m);
  if (k > n) return SpanMatrix(cols);
  auto target = slice(sig, m);
  HnfBasis hb(cols);
  for (const Deg& mp : submultidegrees(m, 0, n - k)) {
    Deg rest = sub(m, mp);
    const SpanMatrix& src_span = l_span(k, rest);
    if (src_span.rows.empty()) continue;
    auto left = slice(sig, mp);
    auto src = slice(sig, rest);
    for (const Word& w : left->words())
      for (const Row& v : src_span.rows)
        hb.insert(product_row(*target, w, *src, v));
  }
  hb.reduce_above();
  return hb.to_matrix();
}

SpanMatrix LcsEngine::compute_l2m3(const Deg& m) {
  SpanMatrix u = concat_rows(l_span(2, m), m_span(3, m));
  return hnf(u);
}

void LcsEngine::clear() {
  std::lock_guard<std::mutex> lk(mu_);
  memo_.clear();
}

size_t LcsEngine::memo_entries() {
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.size();
}

namespace {
std::mutex g_engines_mu;
std::map<std::pair<Signature, bool>, std::unique_ptr<LcsEngine>> g_engines;
}  // namespace

LcsEngine& engine_for(const Signature& sig, bool doubling) {
  std::lock_guard<std::mutex> lk(g_engines_mu);
  auto key = std::make_pair(sig, doubling);
  auto it = g_engines.find(key);
  if (it == g_engines.end())
    it = g_engines.emplace(key, std::make_unique<LcsEngine>(sig, doubling)).first;
  return *it->second;
}

std::pair<Signature, Deg> project_degenerate(const Signature& sig, const Deg& m) {
  bool has_zero = std::find(m.begin(), m.end(), 0) != m.end();
  if (!has_zero) return {sig, m};
  int n = 0, k = 0;
  Deg out;
  for (int g = 0; g < sig.total(); ++g) {
    if (m[g] == 0) continue;
    out.push_back(m[g]);
    if (sig.is_odd_gen(g))
      ++k;
    else
      ++n;
  }
  if (out.empty()) throw std::invalid_argument("zero multidegree");
  return {Signature(n, k), out};
}

GroupInvariants bi_group(const Signature& sig0, int i, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return lattice_quotient(e.l_span(i, m), e.l_span(i + 1, m));
}

int64_t bi_dim_q(const Signature& sig0, int i, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return static_cast<int64_t>(e.l_span(i, m).rows.size()) -
         static_cast<int64_t>(e.l_span(i + 1, m).rows.size());
}

int64_t bi_dim_fp(const Signature& sig0, uint64_t p, int i, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return rank_mod_p(e.l_span(i, m), p) - rank_mod_p(e.l_span(i + 1, m), p);
}

GroupInvariants bar_b1_group(const Signature& sig0, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  int32_t cols = static_cast<int32_t>(e.dim_a(m));
  return lattice_quotient(identity_span(cols), e.l2m3_span(m));
}

int64_t bar_b1_dim_fp(const Signature& sig0, uint64_t p, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return e.dim_a(m) - rank_mod_p(e.l2m3_span(m), p);
}

GroupInvariants n_quotient(const Signature& sig0, int i, const Deg& m0) {
  if (i < 2) throw std::invalid_argument("N_i needs i >= 2");
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return lattice_quotient(e.m_span(i, m), e.m_span(i + 1, m));
}

GroupInvariants bi_group_zhalf(const Signature& sig, int i, const Deg& m) {
  return bi_group(sig, i, m).without_two_part();
}

GroupInvariants lattice_quotient_zhalf(const SpanMatrix& a, const SpanMatrix& b) {
  HnfBasis ha(a.cols);
  ha.insert_all(a);
  ha.reduce_above();
  int64_t ra = ha.rank();
  SpanMatrix coords(static_cast<int32_t>(ra));
  for (const Row& r : b.rows) {
    // scale by a power of 2 (a unit in Z[1/2]) until the row fits in lattice(a)
    std::vector<Zi> c;
    Row scaled = r;
    bool ok = false;
    for (int t = 0; t <= 64 && !ok; ++t) {
      if (ha.contains(scaled, &c)) {
        ok = true;
        break;
      }
      auto e = scaled.entries();
      for (auto& [col, v] : e) v *= Zi(2);
      scaled = Row::from_entries(a.cols, std::move(e));
    }
    if (!ok) throw NotASublatticeError();
    std::vector<std::pair<int32_t, Zi>> e;
    for (size_t t = 0; t < c.size(); ++t)
      if (!c[t].is_zero()) e.emplace_back(static_cast<int32_t>(t), std::move(c[t]));
    coords.add_row(Row::from_entries(coords.cols, std::move(e)));
  }
  auto diag = snf_diagonal(coords);
  GroupInvariants g;
  g.free_rank = ra - static_cast<int64_t>(diag.size());
  for (Zi& d : diag) {
    Zi o = d.odd_part();
    if (!o.is_one()) g.factors.push_back(std::move(o));
  }
  return g;
}

GroupInvariants bi_group_zhalf_direct(const Signature& sig0, int i, const Deg& m0) {
  auto [sig, m] = project_degenerate(sig0, m0);
  LcsEngine& e = engine_for(sig);
  return lattice_quotient_zhalf(e.l_span(i, m), e.l_span(i + 1, m));
}

bool universal_coefficient_check(const Signature& sig, uint64_t p, int series,
                                 const Deg& m) {
  int64_t dim_fp;
  GroupInvariants g;
  if (series == 0) {
    dim_fp = bar_b1_dim_fp(sig, p, m);
    g = bar_b1_group(sig, m);
  } else {
    dim_fp = bi_dim_fp(sig, p, series, m);
    g = bi_group(sig, series, m);
  }
  return dim_fp == g.free_rank + g.count_divisible(static_cast<long long>(p));
}

}  // namespace lcs
