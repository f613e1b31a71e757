#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "contring/bigint.hpp"
#include "contring/continuant.hpp"
#include "contring/ring.hpp"

namespace contring {

struct EnumBudget {
  long long brute_leaves = 100000000;  // max |A|^n for brute enumeration
  int sl2_size_limit = 64;             // max |A| for the SL2 scan
};

// All determinant-one 2x2 matrices over the ring, indexed in the scan order
// (lexicographic by a11, a12, a21, a22), with one precomputed step map per
// ring element: step[a][i] = index_of(E(a) * matrices[i]). Each step map is a
// permutation of the index set.
class SL2Table {
 public:
  const RingPtr& ring() const { return ring_; }
  int size() const { return int(matrices_.size()); }
  const std::vector<Mat2>& matrices() const { return matrices_; }
  const Mat2& matrix(int i) const { return matrices_[i]; }
  int identity() const { return identity_; }
  const std::vector<int32_t>& step(int a) const { return step_[a]; }
  int index_of(const Mat2& m) const;  // -1 when det != 1

 private:
  friend SL2Table build_sl2(const RingPtr&, const EnumBudget&);
  RingPtr ring_;
  std::vector<Mat2> matrices_;
  int identity_ = -1;
  std::vector<std::vector<int32_t>> step_;
  std::vector<int32_t> dense_index_;  // used when |A|^4 is small
  std::unordered_map<std::uint64_t, int32_t> sparse_index_;
  std::uint64_t key(const Mat2& m) const;
};

SL2Table build_sl2(const RingPtr& ring, const EnumBudget& budget = {});

// counts[i] = number of tuples (a_1..a_n) with M_n = matrices[i].
using CountVector = std::vector<BigInt>;

CountVector dp_initial(const SL2Table& table);  // n = 0: identity seeded with 1
// One transfer round: counts'[step[a][i]] += counts[i] over all a, i.
// workers > 1 splits the source range; merge order is fixed, so results do
// not depend on the worker count.
void dp_advance(const SL2Table& table, CountVector& counts, int workers = 1);
CountVector dp_counts(const SL2Table& table, int n, int workers = 1);

// Exhaustive |A|^n enumeration carrying M_k along a depth-first tuple tree
// (the running first column is the rolling continuant pair). Independent of
// SL2Table; used as the oracle for the transfer-matrix path.
struct BruteCounts {
  std::vector<BigInt> roots;                       // by K_n target element
  std::unordered_map<std::uint64_t, BigInt> omega; // packed matrix -> count
};
std::uint64_t pack_mat(const Ring& ring, const Mat2& m);
Mat2 unpack_mat(const Ring& ring, std::uint64_t key);
BruteCounts brute_counts(const Ring& ring, int n, const EnumBudget& budget = {});

enum class Method { Brute, Dp, Formula, All };

// |R_n^a| = #{ tuples with K_n = a }. Method must be Brute or Dp here;
// Formula and All live in the dispatch layer.
BigInt count_roots(const RingPtr& ring, int n, int target, Method method,
                   const EnumBudget& budget = {});
// w_n^u = #{ tuples with M_n = diag(u, u^-1) }; u must be a unit.
BigInt count_quiddity(const RingPtr& ring, int n, int unit, Method method,
                      const EnumBudget& budget = {});
BigInt sum_w_over_units(const RingPtr& ring, int n, Method method,
                        const EnumBudget& budget = {});
// #{ tuples with M_n = B } for an arbitrary target; throws DomainError when
// det(B) != 1 (no tuple can reach it).
BigInt count_omega(const RingPtr& ring, int n, const Mat2& target,
                   Method method, const EnumBudget& budget = {});

}  // namespace contring
