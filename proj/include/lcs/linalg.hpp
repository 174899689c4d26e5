#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcs/smallint.hpp"

namespace lcs {

struct NotASublatticeError : std::runtime_error {
  NotASublatticeError() : std::runtime_error("rows are not contained in the target lattice") {}
};

/// Sparse integer row (sorted index/value pairs) with a dense fallback once
/// fill-in passes 50% of the width.
class Row {
 public:
  Row() = default;
  /// entries must be sorted by column, nonzero values only
  static Row from_entries(int32_t cols, std::vector<std::pair<int32_t, Zi>>&& e);

  int32_t cols() const { return cols_; }
  int32_t nnz() const { return nnz_; }
  bool empty() const { return nnz_ == 0; }
  int32_t lead() const { return lead_; }
  const Zi& lead_val() const;
  void negate();

  template <class F>
  void for_each(F&& f) const {
    if (dense_) {
      for (int32_t c = lead_ < 0 ? 0 : lead_; c < cols_; ++c)
        if (!val_[c].is_zero()) f(c, val_[c]);
    } else {
      for (size_t i = 0; i < idx_.size(); ++i) f(idx_[i], val_[i]);
    }
  }
  std::vector<std::pair<int32_t, Zi>> entries() const;
  bool operator==(const Row& o) const;

 private:
  std::vector<int32_t> idx_;
  std::vector<Zi> val_;
  int32_t cols_ = 0;
  int32_t nnz_ = 0;
  int32_t lead_ = -1;
  bool dense_ = false;
  friend class Spa;
};

struct SpanMatrix {
  int32_t cols = 0;
  std::vector<Row> rows;
  SpanMatrix() = default;
  explicit SpanMatrix(int32_t c) : cols(c) {}
  void add_row(Row r) {
    if (!r.empty()) rows.push_back(std::move(r));
  }
  size_t row_count() const { return rows.size(); }
};

SpanMatrix identity_span(int32_t n);
SpanMatrix transpose(const SpanMatrix& m);
SpanMatrix concat_rows(const SpanMatrix& a, const SpanMatrix& b);
SpanMatrix make_matrix(int32_t cols, const std::vector<std::vector<long long>>& rows);

/// Sparse accumulator used by the elimination kernels: dense value array plus
/// a min-heap of touched columns.
class Spa {
 public:
  void reset(int32_t cols);
  void load(const Row& r);
  void axpy_neg(const Zi& q, const Row& r);  // v -= q*r
  void add_row(const Row& r);                // v += r
  /// pops columns in ascending order until a nonzero one; -1 when exhausted
  int32_t pop_min_nonzero();
  const Zi& at(int32_t c) const { return v_[c]; }
  /// all nonzero columns currently held, ascending; non-destructive
  Row snapshot() const;
  void scale_nonzeros(const Zi& a);
  /// drain all remaining nonzeros (ascending) plus the given column; leaves
  /// the accumulator fully cleared
  Row extract(int32_t include_col);
  /// zero every value touched since the last clear
  void clear();

 private:
  std::vector<Zi> v_;
  std::vector<int32_t> heap_;
  std::vector<uint8_t> inheap_;
  std::vector<int32_t> live_;  // all columns touched since last clear
  std::vector<uint8_t> alive_;
  int32_t cols_ = 0;
  void touch(int32_t c);
  int32_t pop();
};

/// Incremental row Hermite normal form over Z. The row lattice of everything
/// inserted is preserved exactly. Optional tracker keeps each basis row's
/// expression in terms of the inserted generators and collects the
/// dependencies of rows that reduce to zero (= left-kernel generators).
class HnfBasis {
 public:
  explicit HnfBasis(int32_t cols, int32_t tracked_gens = 0);
  int32_t cols() const { return cols_; }
  bool insert(const Row& r);  // true if the basis acquired a new pivot
  void insert_all(const SpanMatrix& m);
  void reduce_above();
  int64_t rank() const { return static_cast<int64_t>(order_.size()); }
  SpanMatrix to_matrix() const;  // rows sorted by pivot column
  const std::vector<Row>& dependencies() const { return deps_; }
  SpanMatrix tracker_matrix() const;  // expressions of basis rows in generators

  /// true iff r is in the lattice; coords (over basis rows sorted by pivot
  /// col) appended when out != nullptr.
  bool contains(const Row& r, std::vector<Zi>* out = nullptr) const;

  /// least k >= 1 with k*r in the lattice, or 0 if r is not in the Q-span
  Zi order_mod_lattice(const Row& r) const;

  const Row& row_at_slot(int32_t s) const { return rows_[s]; }
  const std::vector<int32_t>& slots_in_order() const { return order_; }
  int32_t pivot_col_of_slot(int32_t s) const { return rows_[s].lead(); }

 private:
  int32_t cols_ = 0;
  int32_t gens_ = 0;
  int64_t next_gen_ = 0;
  std::vector<int32_t> slot_of_col_;
  std::vector<Row> rows_;
  std::vector<Row> tr_rows_;
  std::vector<Row> deps_;
  mutable std::vector<int32_t> order_;  // slots sorted by pivot col (kept sorted)
  mutable Spa spa_, tspa_;
  bool tracked() const { return gens_ > 0; }
  void install(int32_t col, Row r, Row tr);
  void reduce_tail(Row& r, Row& tr, int32_t skip_slot);
};

SpanMatrix hnf(const SpanMatrix& m);

/// Full SNF diagonal (including unit entries, excluding zeros), with the
/// divisibility chain d1 | d2 | ...
std::vector<Zi> snf_diagonal(const SpanMatrix& m);

struct GroupInvariants {
  int64_t free_rank = 0;
  std::vector<Zi> factors;  // invariant factors >= 2, d1 | d2 | ...

  bool trivial() const { return free_rank == 0 && factors.empty(); }
  bool torsion_free() const { return factors.empty(); }
  /// multiset {prime p, exponent e -> count} of primary cyclic components
  std::map<std::pair<long long, int>, int> primary() const;
  std::string str() const;          // e.g. "Z^2 + Z/2 + Z/6"
  std::string primary_str() const;  // e.g. "(Z/2)^2 + (Z/4)"
  friend bool operator==(const GroupInvariants& a, const GroupInvariants& b) {
    return a.free_rank == b.free_rank && a.factors == b.factors;
  }
  /// number of invariant factors divisible by p
  int count_divisible(long long p) const;
  GroupInvariants without_two_part() const;  // Z[1/2] answer: odd parts only
  static GroupInvariants from_cyclic_orders(const std::vector<Zi>& orders);
};

/// Structure of (row lattice of A) / (row lattice of B); B must be a
/// sublattice of A.
GroupInvariants lattice_quotient(const SpanMatrix& a, const SpanMatrix& b);

int64_t rank_mod_p(const SpanMatrix& m, uint64_t p);
int64_t rank_q(const SpanMatrix& m);

/// Dependencies among the rows: basis of {x : x M = 0}.
SpanMatrix kernel(const SpanMatrix& m);
/// Saturation {v : k v in lattice(m) for some k >= 1}.
SpanMatrix saturate(const SpanMatrix& m);
bool lattices_equal(const SpanMatrix& a, const SpanMatrix& b);
/// {v in lattice(a) : v in the Q-span of the rows of b}.
SpanMatrix intersect_with_rational_span(const SpanMatrix& a, const SpanMatrix& b);
bool lattice_contains_all(const SpanMatrix& outer, const SpanMatrix& inner);

/// Coefficients c with v = sum c_i * rows(m)_i, if any.
std::optional<std::vector<Zi>> solve_in_lattice(const Row& v, const SpanMatrix& m);

// MatrixMarket coordinate-format debugging dump/load
void mm_dump(std::ostream& os, const SpanMatrix& m);
SpanMatrix mm_load(std::istream& is);

}  // namespace lcs
