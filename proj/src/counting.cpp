#include "contring/counting.hpp"

#include <algorithm>
#include <thread>

#include "contring/errors.hpp"

namespace contring {

std::uint64_t SL2Table::key(const Mat2& m) const {
  std::uint64_t s = std::uint64_t(ring_->size());
  return ((std::uint64_t(m.a11) * s + m.a12) * s + m.a21) * s + m.a22;
}

int SL2Table::index_of(const Mat2& m) const {
  if (!dense_index_.empty()) return dense_index_[key(m)];
  auto it = sparse_index_.find(key(m));
  return it == sparse_index_.end() ? -1 : int(it->second);
}

SL2Table build_sl2(const RingPtr& ring, const EnumBudget& budget) {
  int s = ring->size();
  if (s > budget.sl2_size_limit) {
    throw BudgetError(ring->spec_string() + ": |A| = " + std::to_string(s) +
                      " exceeds the SL2 scan limit of " +
                      std::to_string(budget.sl2_size_limit));
  }
  SL2Table table;
  table.ring_ = ring;

  // Scan lexicographically; for fixed (a11, a12, a21) solve a11*a22 = 1 +
  // a12*a21 instead of trying every a22.
  bool dense = double(s) * s * s * s <= 64.0 * 1024 * 1024;
  if (dense) table.dense_index_.assign(std::size_t(s) * s * s * s, -1);
  for (int a11 = 0; a11 < s; ++a11) {
    for (int a12 = 0; a12 < s; ++a12) {
      for (int a21 = 0; a21 < s; ++a21) {
        int rhs = ring->add(ring->one(), ring->mul(a12, a21));
        for (int a22 = 0; a22 < s; ++a22) {
          if (ring->mul(a11, a22) != rhs) continue;
          Mat2 m{a11, a12, a21, a22};
          int idx = int(table.matrices_.size());
          table.matrices_.push_back(m);
          if (dense) table.dense_index_[table.key(m)] = idx;
          else table.sparse_index_.emplace(table.key(m), idx);
        }
      }
    }
  }
  table.identity_ = table.index_of(mat_identity(*ring));
  if (table.identity_ < 0) {
    throw BuildError(ring->spec_string() + ": identity missing from SL2 scan");
  }

  table.step_.resize(s);
  int n = table.size();
  for (int a = 0; a < s; ++a) {
    std::vector<int32_t>& map = table.step_[a];
    map.resize(n);
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      Mat2 next = push_entry(*ring, table.matrices_[i], a);
      int j = table.index_of(next);
      if (j < 0 || seen[j]) {
        throw BuildError(ring->spec_string() +
                         ": SL2 step map is not a permutation");
      }
      seen[j] = 1;
      map[i] = j;
    }
  }
  return table;
}

CountVector dp_initial(const SL2Table& table) {
  CountVector counts(table.size());
  counts[table.identity()] = 1;
  return counts;
}

void dp_advance(const SL2Table& table, CountVector& counts, int workers) {
  int n = table.size();
  int s = table.ring()->size();
  if (workers <= 1 || n < 1024) {
    CountVector next(n);
    for (int a = 0; a < s; ++a) {
      const std::vector<int32_t>& map = table.step(a);
      for (int i = 0; i < n; ++i) {
        if (counts[i] != 0) next[map[i]] += counts[i];
      }
    }
    counts = std::move(next);
    return;
  }
  // Each worker owns a source slice; partial vectors merge in slice order.
  int w = std::min(workers, 8);
  std::vector<CountVector> partial(w, CountVector(n));
  std::vector<std::thread> threads;
  for (int t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      int lo = int(std::int64_t(n) * t / w);
      int hi = int(std::int64_t(n) * (t + 1) / w);
      CountVector& mine = partial[t];
      for (int a = 0; a < s; ++a) {
        const std::vector<int32_t>& map = table.step(a);
        for (int i = lo; i < hi; ++i) {
          if (counts[i] != 0) mine[map[i]] += counts[i];
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  CountVector next(n);
  for (int t = 0; t < w; ++t) {
    for (int i = 0; i < n; ++i) {
      if (partial[t][i] != 0) next[i] += partial[t][i];
    }
  }
  counts = std::move(next);
}

CountVector dp_counts(const SL2Table& table, int n, int workers) {
  CountVector counts = dp_initial(table);
  for (int round = 0; round < n; ++round) dp_advance(table, counts, workers);
  return counts;
}

std::uint64_t pack_mat(const Ring& ring, const Mat2& m) {
  std::uint64_t s = std::uint64_t(ring.size());
  return ((std::uint64_t(m.a11) * s + m.a12) * s + m.a21) * s + m.a22;
}

Mat2 unpack_mat(const Ring& ring, std::uint64_t key) {
  std::uint64_t s = std::uint64_t(ring.size());
  Mat2 m{};
  m.a22 = int(key % s);
  key /= s;
  m.a21 = int(key % s);
  key /= s;
  m.a12 = int(key % s);
  m.a11 = int(key / s);
  return m;
}

BruteCounts brute_counts(const Ring& ring, int n, const EnumBudget& budget) {
  int s = ring.size();
  long double leaves = 1;
  for (int i = 0; i < n; ++i) leaves *= s;
  if (leaves > static_cast<long double>(budget.brute_leaves)) {
    throw BudgetError(ring.spec_string() + ": |A|^" + std::to_string(n) +
                      " exceeds the brute-force budget of " +
                      std::to_string(budget.brute_leaves));
  }

  BruteCounts out;
  out.roots.assign(s, BigInt(0));
  if (n == 0) {
    out.omega[pack_mat(ring, mat_identity(ring))] = 1;
    out.roots[ring.one()] = 1;  // K_0 = 1
    return out;
  }

  // Depth-first odometer over tuples, carrying the partial product matrix at
  // each depth. stack[k] = M_k of the current prefix.
  std::vector<Mat2> stack(std::size_t(n) + 1);
  stack[0] = mat_identity(ring);
  std::vector<int> tuple(n, 0);
  int depth = 0;
  for (;;) {
    while (depth < n) {
      stack[depth + 1] = push_entry(ring, stack[depth], tuple[depth]);
      ++depth;
    }
    const Mat2& m = stack[n];
    out.roots[m.a11] += 1;
    out.omega[pack_mat(ring, m)] += 1;
    // Advance the odometer from the last position; dropping depth to the
    // changed coordinate makes the rebuild loop refresh its matrix.
    while (depth > 0 && tuple[depth - 1] == s - 1) {
      tuple[depth - 1] = 0;
      --depth;
    }
    if (depth == 0) break;
    ++tuple[depth - 1];
    --depth;
  }
  return out;
}

namespace {

BigInt dp_entry_sum(const RingPtr& ring, int n, const EnumBudget& budget,
                    int target) {
  SL2Table table = build_sl2(ring, budget);
  CountVector counts = dp_counts(table, n);
  BigInt total = 0;
  for (int i = 0; i < table.size(); ++i) {
    if (table.matrix(i).a11 == target) total += counts[i];
  }
  return total;
}

[[noreturn]] void bad_method(const char* where) {
  throw DomainError(std::string(where) +
                    ": method must be brute or dp at this layer");
}

}  // namespace

BigInt count_roots(const RingPtr& ring, int n, int target, Method method,
                   const EnumBudget& budget) {
  switch (method) {
    case Method::Brute:
      return brute_counts(*ring, n, budget).roots[target];
    case Method::Dp: {
      if (n == 0) {
        // M_0 = I; K_0 = 1.
        return target == ring->one() ? 1 : 0;
      }
      return dp_entry_sum(ring, n, budget, target);
    }
    default:
      bad_method("count_roots");
  }
}

BigInt count_quiddity(const RingPtr& ring, int n, int unit, Method method,
                      const EnumBudget& budget) {
  if (!ring->is_unit(unit)) {
    throw DomainError(ring->spec_string() + ": quiddity target " +
                      ring->display(unit) + " is not a unit");
  }
  Mat2 target{unit, ring->zero(), ring->zero(), ring->inverse(unit)};
  return count_omega(ring, n, target, method, budget);
}

BigInt sum_w_over_units(const RingPtr& ring, int n, Method method,
                        const EnumBudget& budget) {
  switch (method) {
    case Method::Brute: {
      BruteCounts counts = brute_counts(*ring, n, budget);
      BigInt total = 0;
      for (int u : ring->units()) {
        Mat2 m{u, ring->zero(), ring->zero(), ring->inverse(u)};
        auto it = counts.omega.find(pack_mat(*ring, m));
        if (it != counts.omega.end()) total += it->second;
      }
      return total;
    }
    case Method::Dp: {
      SL2Table table = build_sl2(ring, budget);
      CountVector counts = dp_counts(table, n);
      BigInt total = 0;
      for (int u : ring->units()) {
        Mat2 m{u, ring->zero(), ring->zero(), ring->inverse(u)};
        int idx = table.index_of(m);
        if (idx >= 0) total += counts[idx];
      }
      return total;
    }
    default:
      bad_method("sum_w_over_units");
  }
}

BigInt count_omega(const RingPtr& ring, int n, const Mat2& target,
                   Method method, const EnumBudget& budget) {
  if (mat_det(*ring, target) != ring->one()) {
    throw DomainError(ring->spec_string() + ": target matrix " +
                      mat_to_string(*ring, target) +
                      " has determinant != 1, so no tuple reaches it");
  }
  switch (method) {
    case Method::Brute: {
      BruteCounts counts = brute_counts(*ring, n, budget);
      auto it = counts.omega.find(pack_mat(*ring, target));
      return it == counts.omega.end() ? BigInt(0) : it->second;
    }
    case Method::Dp: {
      SL2Table table = build_sl2(ring, budget);
      CountVector counts = dp_counts(table, n);
      int idx = table.index_of(target);
      return idx < 0 ? BigInt(0) : counts[idx];
    }
    default:
      bad_method("count_omega");
  }
}

}  // namespace contring
