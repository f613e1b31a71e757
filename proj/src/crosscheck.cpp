#include "contring/crosscheck.hpp"

#include <random>

#include "contring/errors.hpp"
#include "contring/formulas.hpp"

namespace contring {

namespace {

std::vector<int> random_tuple(std::mt19937& rng, const Ring& ring, int len) {
  std::uniform_int_distribution<int> pick(0, ring.size() - 1);
  std::vector<int> tuple(len);
  for (int& a : tuple) a = pick(rng);
  return tuple;
}

std::string fail_at(const Ring& ring, std::span<const int> tuple) {
  return "counterexample " + tuple_to_string(ring, tuple);
}

}  // namespace

std::vector<PropertyResult> run_crosscheck(Session& session,
                                           const std::string& spec_text,
                                           int max_n) {
  RingPtr ring = session.ring(spec_text);
  const Ring& A = *ring;
  std::vector<PropertyResult> results;

  auto prop = [&](const std::string& name, auto&& body) {
    PropertyResult res{name, "PASS", ""};
    try {
      body(res);
    } catch (const BudgetError& e) {
      res.status = "SKIP";
      res.detail = e.what();
    } catch (const std::exception& e) {
      res.status = "FAIL";
      res.detail = e.what();
    }
    results.push_back(std::move(res));
  };

  prop("matrix-entry-identity", [&](PropertyResult& res) {
    std::mt19937 rng(0xC0DE01u);
    for (int trial = 0; trial < 200; ++trial) {
      int len = trial % 8;
      std::vector<int> t = random_tuple(rng, A, len);
      if (!check_entry_identity(A, t)) {
        res.status = "FAIL";
        res.detail = fail_at(A, t);
        return;
      }
    }
  });

  prop("determinant-one", [&](PropertyResult& res) {
    std::mt19937 rng(0xC0DE02u);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> t = random_tuple(rng, A, trial % 8);
      if (mat_det(A, m_matrix(A, t)) != A.one()) {
        res.status = "FAIL";
        res.detail = fail_at(A, t);
        return;
      }
    }
  });

  prop("continuant-reversal", [&](PropertyResult& res) {
    std::mt19937 rng(0xC0DE03u);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> t = random_tuple(rng, A, trial % 8);
      std::vector<int> rev(t.rbegin(), t.rend());
      if (continuant(A, t) != continuant(A, rev)) {
        res.status = "FAIL";
        res.detail = fail_at(A, t);
        return;
      }
    }
  });

  prop("left-recurrence", [&](PropertyResult& res) {
    std::mt19937 rng(0xC0DE04u);
    for (int trial = 0; trial < 200; ++trial) {
      int len = 2 + trial % 6;
      std::vector<int> t = random_tuple(rng, A, len);
      std::span<const int> s(t);
      int lhs = continuant(A, s);
      int rhs = A.sub(A.mul(t[0], continuant(A, s.subspan(1))),
                      continuant(A, s.subspan(2)));
      if (lhs != rhs) {
        res.status = "FAIL";
        res.detail = fail_at(A, t);
        return;
      }
    }
  });

  prop("reduce-plus-one", [&](PropertyResult& res) {
    // M_3(a, 1, b) == M_2(a - 1, b - 1)
    auto check = [&](int a, int b) {
      std::vector<int> lhs_t = {a, A.one(), b};
      std::vector<int> rhs_t = {A.sub(a, A.one()), A.sub(b, A.one())};
      return m_matrix(A, lhs_t) == m_matrix(A, rhs_t);
    };
    if (A.size() <= 32) {
      for (int a = 0; a < A.size(); ++a) {
        for (int b = 0; b < A.size(); ++b) {
          if (!check(a, b)) {
            res.status = "FAIL";
            res.detail = "counterexample (" + A.display(a) + ", " +
                         A.display(b) + ")";
            return;
          }
        }
      }
    } else {
      std::mt19937 rng(0xC0DE05u);
      std::uniform_int_distribution<int> pick(0, A.size() - 1);
      for (int trial = 0; trial < 400; ++trial) {
        int a = pick(rng), b = pick(rng);
        if (!check(a, b)) {
          res.status = "FAIL";
          res.detail = "counterexample (" + A.display(a) + ", " +
                       A.display(b) + ")";
          return;
        }
      }
    }
  });

  prop("reduce-minus-one", [&](PropertyResult& res) {
    // M_3(a, -1, b) == -M_2(a + 1, b + 1)
    int minus_one = A.neg(A.one());
    auto check = [&](int a, int b) {
      std::vector<int> lhs_t = {a, minus_one, b};
      std::vector<int> rhs_t = {A.add(a, A.one()), A.add(b, A.one())};
      return m_matrix(A, lhs_t) == mat_neg(A, m_matrix(A, rhs_t));
    };
    std::mt19937 rng(0xC0DE06u);
    std::uniform_int_distribution<int> pick(0, A.size() - 1);
    int trials = A.size() <= 32 ? 0 : 400;
    if (trials == 0) {
      for (int a = 0; a < A.size(); ++a) {
        for (int b = 0; b < A.size(); ++b) {
          if (!check(a, b)) {
            res.status = "FAIL";
            res.detail = "counterexample (" + A.display(a) + ", " +
                         A.display(b) + ")";
            return;
          }
        }
      }
    } else {
      for (int trial = 0; trial < trials; ++trial) {
        int a = pick(rng), b = pick(rng);
        if (!check(a, b)) {
          res.status = "FAIL";
          res.detail = "counterexample (" + A.display(a) + ", " +
                       A.display(b) + ")";
          return;
        }
      }
    }
  });

  prop("reduce-zero", [&](PropertyResult& res) {
    // M_3(a, 0, b) == -M_1(a + b)
    auto check = [&](int a, int b) {
      std::vector<int> lhs_t = {a, A.zero(), b};
      std::vector<int> rhs_t = {A.add(a, b)};
      return m_matrix(A, lhs_t) == mat_neg(A, m_matrix(A, rhs_t));
    };
    std::mt19937 rng(0xC0DE08u);
    std::uniform_int_distribution<int> pick(0, A.size() - 1);
    if (A.size() <= 32) {
      for (int a = 0; a < A.size(); ++a) {
        for (int b = 0; b < A.size(); ++b) {
          if (!check(a, b)) {
            res.status = "FAIL";
            res.detail = "counterexample (" + A.display(a) + ", " +
                         A.display(b) + ")";
            return;
          }
        }
      }
    } else {
      for (int trial = 0; trial < 400; ++trial) {
        int a = pick(rng), b = pick(rng);
        if (!check(a, b)) {
          res.status = "FAIL";
          res.detail = "counterexample (" + A.display(a) + ", " +
                       A.display(b) + ")";
          return;
        }
      }
    }
  });

  prop("reduce-four", [&](PropertyResult& res) {
    // uv - 1 a unit: M_4(a, u, v, b) == M_3(a + (1-v)w, uv-1, b + (1-u)w)
    // with w = (uv-1)^-1.
    auto check = [&](int a, int u, int v, int b) {
      int pivot = A.sub(A.mul(u, v), A.one());
      if (!A.is_unit(pivot)) return true;  // precondition not met
      int w = A.inverse(pivot);
      std::vector<int> lhs_t = {a, u, v, b};
      std::vector<int> rhs_t = {A.add(a, A.mul(A.sub(A.one(), v), w)), pivot,
                                A.add(b, A.mul(A.sub(A.one(), u), w))};
      return m_matrix(A, lhs_t) == m_matrix(A, rhs_t);
    };
    if (A.size() <= 8) {
      for (int a = 0; a < A.size(); ++a)
        for (int u = 0; u < A.size(); ++u)
          for (int v = 0; v < A.size(); ++v)
            for (int b = 0; b < A.size(); ++b) {
              if (!check(a, u, v, b)) {
                res.status = "FAIL";
                res.detail = "counterexample (" + A.display(a) + ", " +
                             A.display(u) + ", " + A.display(v) + ", " +
                             A.display(b) + ")";
                return;
              }
            }
    } else {
      std::mt19937 rng(0xC0DE09u);
      std::uniform_int_distribution<int> pick(0, A.size() - 1);
      for (int trial = 0; trial < 800; ++trial) {
        int a = pick(rng), u = pick(rng), v = pick(rng), b = pick(rng);
        if (!check(a, u, v, b)) {
          res.status = "FAIL";
          res.detail = "counterexample (" + A.display(a) + ", " +
                       A.display(u) + ", " + A.display(v) + ", " +
                       A.display(b) + ")";
          return;
        }
      }
    }
  });

  prop("reduce-five", [&](PropertyResult& res) {
    // v and x = ((vb-1)(uv-1) - 1) v^-1 units:
    // M_5(a, u, v, b, c) == M_3(a - (vb-2)x^-1, x, c - (uv-2)x^-1).
    int two = A.add(A.one(), A.one());
    auto check = [&](int a, int u, int v, int b, int c) {
      if (!A.is_unit(v)) return true;
      int x = A.mul(A.sub(A.mul(A.sub(A.mul(v, b), A.one()),
                                A.sub(A.mul(u, v), A.one())),
                          A.one()),
                    A.inverse(v));
      if (!A.is_unit(x)) return true;
      int xi = A.inverse(x);
      std::vector<int> lhs_t = {a, u, v, b, c};
      std::vector<int> rhs_t = {A.sub(a, A.mul(A.sub(A.mul(v, b), two), xi)),
                                x,
                                A.sub(c, A.mul(A.sub(A.mul(u, v), two), xi))};
      return m_matrix(A, lhs_t) == m_matrix(A, rhs_t);
    };
    if (A.size() <= 6) {
      for (int a = 0; a < A.size(); ++a)
        for (int u = 0; u < A.size(); ++u)
          for (int v = 0; v < A.size(); ++v)
            for (int b = 0; b < A.size(); ++b)
              for (int c = 0; c < A.size(); ++c) {
                if (!check(a, u, v, b, c)) {
                  res.status = "FAIL";
                  res.detail = "counterexample (" + A.display(a) + ", " +
                               A.display(u) + ", " + A.display(v) + ", " +
                               A.display(b) + ", " + A.display(c) + ")";
                  return;
                }
              }
    } else {
      std::mt19937 rng(0xC0DE0Au);
      std::uniform_int_distribution<int> pick(0, A.size() - 1);
      for (int trial = 0; trial < 1200; ++trial) {
        int a = pick(rng), u = pick(rng), v = pick(rng), b = pick(rng),
            c = pick(rng);
        if (!check(a, u, v, b, c)) {
          res.status = "FAIL";
          res.detail = "counterexample (" + A.display(a) + ", " +
                       A.display(u) + ", " + A.display(v) + ", " +
                       A.display(b) + ", " + A.display(c) + ")";
          return;
        }
      }
    }
  });

  prop("unit-scaling", [&](PropertyResult& res) {
    // b_i = lambda^{(-1)^{i+1}} a_i: K(b) = lambda * K(a) at odd length,
    // K(b) = K(a) at even length.
    if (A.units().empty()) {
      res.status = "SKIP";
      res.detail = "no units";
      return;
    }
    std::mt19937 rng(0xC0DE07u);
    std::uniform_int_distribution<int> pick_unit(0, A.unit_count() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      int len = 1 + trial % 6;
      std::vector<int> t = random_tuple(rng, A, len);
      int lambda = A.units()[pick_unit(rng)];
      int lambda_inv = A.inverse(lambda);
      std::vector<int> scaled(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        scaled[i] = A.mul(i % 2 == 0 ? lambda : lambda_inv, t[i]);
      }
      int expect = len % 2 == 1 ? A.mul(lambda, continuant(A, t))
                                : continuant(A, t);
      if (continuant(A, scaled) != expect) {
        res.status = "FAIL";
        res.detail = fail_at(A, t) + " with unit " + A.display(lambda);
        return;
      }
    }
  });

  prop("alternating-scaling-matrix", [&](PropertyResult& res) {
    // With b_i = lambda^{(-1)^{i+1}} a_i and M = [[m11,m12],[m21,m22]]:
    //   even n: M(b) = [[m11, l^-1 m12], [l m21, m22]]
    //   odd n:  M(b) = [[l m11, m12], [m21, l^-1 m22]]
    // so a diagonal diag(u, u^-1) target stays fixed at even length and
    // moves to diag(lu, l^-1 u^-1) at odd length.
    if (A.units().empty()) {
      res.status = "SKIP";
      res.detail = "no units";
      return;
    }
    std::mt19937 rng(0xC0DE0Bu);
    std::uniform_int_distribution<int> pick_unit(0, A.unit_count() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      int len = 1 + trial % 6;
      std::vector<int> t = random_tuple(rng, A, len);
      int lambda = A.units()[pick_unit(rng)];
      int lambda_inv = A.inverse(lambda);
      std::vector<int> scaled(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        scaled[i] = A.mul(i % 2 == 0 ? lambda : lambda_inv, t[i]);
      }
      Mat2 m = m_matrix(A, t);
      Mat2 expect =
          len % 2 == 0
              ? Mat2{m.a11, A.mul(lambda_inv, m.a12), A.mul(lambda, m.a21),
                     m.a22}
              : Mat2{A.mul(lambda, m.a11), m.a12, m.a21,
                     A.mul(lambda_inv, m.a22)};
      if (m_matrix(A, scaled) != expect) {
        res.status = "FAIL";
        res.detail = fail_at(A, t) + " with unit " + A.display(lambda);
        return;
      }
    }
    // The diagonal instance: (-1,-1,-1) lands on the identity, so the scaled
    // triple must land on diag(lambda, lambda^-1).
    int minus_one = A.neg(A.one());
    for (int lambda : A.units()) {
      int lambda_inv = A.inverse(lambda);
      std::vector<int> scaled = {A.mul(lambda, minus_one),
                                 A.mul(lambda_inv, minus_one),
                                 A.mul(lambda, minus_one)};
      Mat2 want{lambda, A.zero(), A.zero(), lambda_inv};
      if (m_matrix(A, scaled) != want) {
        res.status = "FAIL";
        res.detail = "scaled (-1,-1,-1) misses diag(u, u^-1) at unit " +
                     A.display(lambda);
        return;
      }
    }
  });

  // Largest length the brute budget allows.
  auto brute_feasible_n = [&](long long budget) {
    int n = 0;
    long double leaves = 1;
    while (n < max_n) {
      leaves *= A.size();
      if (leaves > static_cast<long double>(budget)) break;
      ++n;
    }
    return n;
  };

  prop("brute-dp-agreement", [&](PropertyResult& res) {
    int n = brute_feasible_n(session.config().budget.brute_leaves);
    if (n < 1) {
      res.status = "SKIP";
      res.detail = "brute budget rules out every length";
      return;
    }
    const SL2Table& table = session.sl2(ring);  // may throw BudgetError
    BruteCounts brute = brute_counts(A, n, session.config().budget);
    const CountVector& counts = session.dp(ring, n);
    std::vector<BigInt> dp_roots(A.size());
    for (int i = 0; i < table.size(); ++i) {
      dp_roots[table.matrix(i).a11] += counts[i];
    }
    for (int e = 0; e < A.size(); ++e) {
      if (dp_roots[e] != brute.roots[e]) {
        res.status = "FAIL";
        res.detail = "root counts differ at target " + A.display(e) +
                     ", n = " + std::to_string(n);
        return;
      }
    }
    for (int i = 0; i < table.size(); ++i) {
      auto it = brute.omega.find(pack_mat(A, table.matrix(i)));
      BigInt expect = it == brute.omega.end() ? BigInt(0) : it->second;
      if (counts[i] != expect) {
        res.status = "FAIL";
        res.detail = "matrix counts differ at " +
                     mat_to_string(A, table.matrix(i)) +
                     ", n = " + std::to_string(n);
        return;
      }
    }
    for (const auto& [key, count] : brute.omega) {
      if (table.index_of(unpack_mat(A, key)) < 0) {
        res.status = "FAIL";
        res.detail = "reachable matrix missing from the SL2 scan: " +
                     mat_to_string(A, unpack_mat(A, key));
        return;
      }
    }
    // Root counts partition the tuple space: sum over all targets = |A|^n.
    BigInt total = 0;
    for (const BigInt& c : brute.roots) total += c;
    if (total != big_pow(A.size(), static_cast<unsigned long>(n))) {
      res.status = "FAIL";
      res.detail = "brute root counts do not sum to |A|^n at n = " +
                   std::to_string(n);
      return;
    }
    res.detail = "n = " + std::to_string(n);
  });

  prop("conservation", [&](PropertyResult& res) {
    int n = std::min(max_n, 6);
    const CountVector& counts = session.dp(ring, n);
    BigInt total = 0;
    for (const BigInt& c : counts) total += c;
    BigInt expect = big_pow(A.size(), static_cast<unsigned long>(n));
    if (total != expect) {
      res.status = "FAIL";
      res.detail = "sum over SL2 at n = " + std::to_string(n) + " is " +
                   total.get_str() + ", want |A|^n = " + expect.get_str();
      return;
    }
    res.detail = "n = " + std::to_string(n);
  });

  prop("length-three-is-one", [&](PropertyResult& res) {
    const SL2Table& table = session.sl2(ring);
    const CountVector& counts = session.dp(ring, 3);
    for (int u : A.units()) {
      Mat2 m{u, A.zero(), A.zero(), A.inverse(u)};
      int idx = table.index_of(m);
      BigInt got = idx < 0 ? BigInt(0) : counts[idx];
      if (got != 1) {
        res.status = "FAIL";
        res.detail = "w_3 at unit " + A.display(u) + " is " + got.get_str();
        return;
      }
    }
  });

  // DP root count for one target element.
  auto dp_roots_at = [&](int n, int target) {
    const SL2Table& table = session.sl2(ring);
    const CountVector& counts = session.dp(ring, n);
    BigInt total = 0;
    for (int i = 0; i < table.size(); ++i) {
      if (table.matrix(i).a11 == target) total += counts[i];
    }
    return total;
  };

  prop("roots-nonempty", [&](PropertyResult& res) {
    // Every element is a K_n value for every n >= 1.
    for (int n = 1; n <= max_n; ++n) {
      for (int x = 0; x < A.size(); ++x) {
        if (dp_roots_at(n, x) == 0) {
          res.status = "FAIL";
          res.detail = "no tuple of length " + std::to_string(n) +
                       " reaches " + A.display(x);
          return;
        }
      }
    }
  });

  prop("nonunit-roots-equal", [&](PropertyResult& res) {
    // Local rings: every non-unit target has the same root count as 0.
    if (!A.is_local()) {
      res.status = "SKIP";
      res.detail = "ring is not local";
      return;
    }
    for (int n = 2; n <= std::min(max_n, 6); ++n) {
      BigInt at_zero = dp_roots_at(n, A.zero());
      for (int a : A.nonunits()) {
        if (dp_roots_at(n, a) != at_zero) {
          res.status = "FAIL";
          res.detail = "non-unit " + A.display(a) + " differs from 0 at n = " +
                       std::to_string(n);
          return;
        }
      }
    }
  });

  prop("unit-roots-mirror", [&](PropertyResult& res) {
    // |R_n^u| equals the count of tuples of length n+2 landing on
    // -diag(u, u^-1)^-1 = diag(-u^-1, -u).
    const SL2Table& table = session.sl2(ring);
    for (int n = 1; n <= std::min(max_n, 5); ++n) {
      const CountVector& counts = session.dp(ring, n + 2);
      for (int u : A.units()) {
        Mat2 target{A.neg(A.inverse(u)), A.zero(), A.zero(), A.neg(u)};
        int idx = table.index_of(target);
        BigInt mirrored = idx < 0 ? BigInt(0) : counts[idx];
        if (dp_roots_at(n, u) != mirrored) {
          res.status = "FAIL";
          res.detail = "unit " + A.display(u) + " at n = " + std::to_string(n);
          return;
        }
      }
    }
  });

  prop("odd-unit-roots-identity", [&](PropertyResult& res) {
    // Odd n: |R_n^u| = |Omega_{n+2}^Id| for every unit u.
    const SL2Table& table = session.sl2(ring);
    for (int n = 1; n <= std::min(max_n, 5); n += 2) {
      const CountVector& counts = session.dp(ring, n + 2);
      BigInt at_id = counts[table.identity()];
      for (int u : A.units()) {
        if (dp_roots_at(n, u) != at_id) {
          res.status = "FAIL";
          res.detail = "unit " + A.display(u) + " at n = " + std::to_string(n);
          return;
        }
      }
    }
  });

  prop("local-structure", [&](PropertyResult& res) {
    if (!A.is_local()) {
      res.status = "SKIP";
      res.detail = "ring is not local";
      return;
    }
    LocalParams params = LocalParams::of(A);
    long q = A.residue_size();
    if (A.size() % A.nonunit_count() != 0 ||
        A.size() / A.nonunit_count() != q) {
      res.status = "FAIL";
      res.detail = "|A| / |A - U| != q";
      return;
    }
    bool ok = params.eta + params.tau == params.units &&
              params.eta * params.tau == -(params.nonunits * params.size) &&
              params.omega * params.omega ==
                  params.units * params.units +
                      4 * params.nonunits * params.size;
    if (!ok) {
      res.status = "FAIL";
      res.detail = "eta/tau/omega do not satisfy their defining relations";
      return;
    }
    res.detail = "q = " + std::to_string(q);
  });

  prop("formula-dp-roots", [&](PropertyResult& res) {
    bool any = false;
    for (int n = 1; n <= max_n; ++n) {
      std::optional<BigInt> f = session.formula_count(ring, n, Kind::Roots,
                                                      A.zero());
      if (!f) continue;
      any = true;
      const SL2Table& table = session.sl2(ring);
      const CountVector& counts = session.dp(ring, n);
      BigInt dp_value = 0;
      for (int i = 0; i < table.size(); ++i) {
        if (table.matrix(i).a11 == A.zero()) dp_value += counts[i];
      }
      if (*f != dp_value) {
        res.status = "FAIL";
        res.detail = "n = " + std::to_string(n) + ": formula " +
                     f->get_str() + ", dp " + dp_value.get_str();
        return;
      }
    }
    if (!any) {
      res.status = "SKIP";
      res.detail = "no closed form covers this ring";
    }
  });

  prop("formula-dp-quiddity", [&](PropertyResult& res) {
    std::vector<int> targets = {A.one(), A.neg(A.one())};
    for (int u : A.units()) {
      if (targets.size() >= 4) break;
      if (u != A.one() && u != A.neg(A.one())) targets.push_back(u);
    }
    bool any = false;
    for (int s = 3; s <= max_n; ++s) {
      for (int u : targets) {
        std::optional<BigInt> f =
            session.formula_count(ring, s, Kind::Quiddity, u);
        if (!f) continue;
        any = true;
        const SL2Table& table = session.sl2(ring);
        const CountVector& counts = session.dp(ring, s);
        Mat2 m{u, A.zero(), A.zero(), A.inverse(u)};
        int idx = table.index_of(m);
        BigInt dp_value = idx < 0 ? BigInt(0) : counts[idx];
        if (*f != dp_value) {
          res.status = "FAIL";
          res.detail = "s = " + std::to_string(s) + ", target " +
                       A.display(u) + ": formula " + f->get_str() + ", dp " +
                       dp_value.get_str();
          return;
        }
      }
    }
    if (!any) {
      res.status = "SKIP";
      res.detail = "no closed form covers these cells";
    }
  });

  prop("formula-dp-sum-w", [&](PropertyResult& res) {
    if (!A.is_local()) {
      res.status = "SKIP";
      res.detail = "ring is not local";
      return;
    }
    for (int s = 3; s <= max_n; ++s) {
      std::optional<BigInt> f = session.formula_count(ring, s, Kind::SumW, 0);
      if (!f) continue;
      const SL2Table& table = session.sl2(ring);
      const CountVector& counts = session.dp(ring, s);
      BigInt dp_value = 0;
      for (int u : A.units()) {
        Mat2 m{u, A.zero(), A.zero(), A.inverse(u)};
        int idx = table.index_of(m);
        if (idx >= 0) dp_value += counts[idx];
      }
      if (*f != dp_value) {
        res.status = "FAIL";
        res.detail = "s = " + std::to_string(s) + ": formula " +
                     f->get_str() + ", dp " + dp_value.get_str();
        return;
      }
    }
  });

  prop("crt-factors", [&](PropertyResult& res) {
    const RingSpec& spec = A.spec();
    if (spec.kind != RingSpec::Kind::Zmod || is_prime_power(spec.modulus)) {
      res.status = "SKIP";
      res.detail = "needs a composite Zmod modulus";
      return;
    }
    // Factor N and compare the composite counts with the per-factor product.
    std::vector<long> factors;
    long rest = spec.modulus;
    for (long p = 2; p * p <= rest; ++p) {
      if (rest % p != 0) continue;
      long pk = 1;
      while (rest % p == 0) {
        rest /= p;
        pk *= p;
      }
      factors.push_back(pk);
    }
    if (rest > 1) factors.push_back(rest);
    std::vector<RingPtr> parts;
    for (long pk : factors) {
      parts.push_back(session.ring("Zmod:" + std::to_string(pk)));
    }
    for (int n = 2; n <= std::min(max_n, 5); ++n) {
      // roots at 0
      BigInt whole = 0;
      {
        const SL2Table& table = session.sl2(ring);
        const CountVector& counts = session.dp(ring, n);
        for (int i = 0; i < table.size(); ++i) {
          if (table.matrix(i).a11 == A.zero()) whole += counts[i];
        }
      }
      BigInt product = 1;
      for (const RingPtr& part : parts) {
        const SL2Table& table = session.sl2(part);
        const CountVector& counts = session.dp(part, n);
        BigInt value = 0;
        for (int i = 0; i < table.size(); ++i) {
          if (table.matrix(i).a11 == part->zero()) value += counts[i];
        }
        product *= value;
      }
      if (whole != product) {
        res.status = "FAIL";
        res.detail = "roots at n = " + std::to_string(n) +
                     ": composite " + whole.get_str() + ", factor product " +
                     product.get_str();
        return;
      }
      // quiddity at +-1
      for (int sign = 0; sign < 2; ++sign) {
        int u = sign == 0 ? A.one() : A.neg(A.one());
        const SL2Table& table = session.sl2(ring);
        const CountVector& counts = session.dp(ring, n);
        Mat2 m{u, A.zero(), A.zero(), A.inverse(u)};
        int idx = table.index_of(m);
        BigInt lhs = idx < 0 ? BigInt(0) : counts[idx];
        BigInt rhs = 1;
        for (const RingPtr& part : parts) {
          int v = sign == 0 ? part->one() : part->neg(part->one());
          const SL2Table& ptable = session.sl2(part);
          const CountVector& pcounts = session.dp(part, n);
          Mat2 pm{v, part->zero(), part->zero(), part->inverse(v)};
          int pidx = ptable.index_of(pm);
          rhs *= pidx < 0 ? BigInt(0) : pcounts[pidx];
        }
        if (lhs != rhs) {
          res.status = "FAIL";
          res.detail = "quiddity at n = " + std::to_string(n) + ", sign " +
                       (sign == 0 ? "+1" : "-1") + ": composite " +
                       lhs.get_str() + ", factor product " + rhs.get_str();
          return;
        }
      }
    }
  });

  return results;
}

}  // namespace contring
