#pragma once

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>

#include "lcs/algebra.hpp"
#include "lcs/linalg.hpp"

namespace lcs {

/// Builds and memoizes HNF-reduced spanning lattices of L_i[m] and M_k[m]
/// inside the monomial basis of A[m], over Z. Field and Z[1/2] answers are
/// derived from the Z spans (the mod-p image of a lattice is the F_p-span of
/// any generating set, and all spanning brackets have integer coefficients).
///
/// Thread-safe; concurrent requests for the same key block on a single
/// computation.
class LcsEngine {
 public:
  explicit LcsEngine(Signature sig, bool use_doubling_bound = true);

  const Signature sig;

  /// L_i[m] span, HNF rows. i >= 1.
  const SpanMatrix& l_span(int i, const Deg& m);
  /// M_k[m] = (A * L_k)[m] span, HNF rows. k >= 2.
  const SpanMatrix& m_span(int k, const Deg& m);
  /// (L_2 + M_3)[m] span.
  const SpanMatrix& l2m3_span(const Deg& m);

  int64_t dim_a(const Deg& m) const { return SliceBasis::word_count(m); }

  void set_doubling(bool v) { doubling_ = v; }
  bool doubling() const { return doubling_; }
  void clear();
  size_t memo_entries();

 private:
  bool doubling_;
  struct Entry {
    std::mutex mu;
    std::condition_variable cv;
    bool ready = false;
    SpanMatrix val;
  };
  std::mutex mu_;
  std::map<std::tuple<char, int, Deg>, std::shared_ptr<Entry>> memo_;

  const SpanMatrix& get(char kind, int i, const Deg& m);
  SpanMatrix compute_l(int i, const Deg& m);
  SpanMatrix compute_m(int k, const Deg& m);
  SpanMatrix compute_l2m3(const Deg& m);
};

/// Engine registry keyed by signature (and doubling flag), shared process-wide.
LcsEngine& engine_for(const Signature& sig, bool doubling = true);

/// Strips zero multidegree entries, returning the reduced signature and
/// multidegree (identity when no zeros). Group answers are invariant.
std::pair<Signature, Deg> project_degenerate(const Signature& sig, const Deg& m);

// ------------------------- public operations (degenerate-safe wrappers)

GroupInvariants bi_group(const Signature& sig, int i, const Deg& m);
int64_t bi_dim_q(const Signature& sig, int i, const Deg& m);
int64_t bi_dim_fp(const Signature& sig, uint64_t p, int i, const Deg& m);
GroupInvariants bar_b1_group(const Signature& sig, const Deg& m);
int64_t bar_b1_dim_fp(const Signature& sig, uint64_t p, const Deg& m);
GroupInvariants n_quotient(const Signature& sig, int i, const Deg& m);

/// Z[1/2] structure of B_i[m]: odd invariant factors only.
GroupInvariants bi_group_zhalf(const Signature& sig, int i, const Deg& m);
/// Independent dyadic route (unit-scaled coordinates, then odd parts).
GroupInvariants bi_group_zhalf_direct(const Signature& sig, int i, const Deg& m);

/// dim over F_p equals free_rank + #factors divisible by p of the Z answer?
/// series == 0 designates bar-B1, otherwise B_series.
bool universal_coefficient_check(const Signature& sig, uint64_t p, int series,
                                 const Deg& m);

/// Z[1/2]-flavoured lattice quotient: rows of b may be scaled by powers of 2
/// to land in lattice(a); invariant factors reported as odd parts.
GroupInvariants lattice_quotient_zhalf(const SpanMatrix& a, const SpanMatrix& b);

}  // namespace lcs
