#include "contring/dispatch.hpp"

#include <atomic>
#include <cctype>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "contring/errors.hpp"
#include "contring/formulas.hpp"

namespace contring {

Kind parse_kind(const std::string& text) {
  if (text == "roots") return Kind::Roots;
  if (text == "quiddity") return Kind::Quiddity;
  if (text == "sum-w") return Kind::SumW;
  if (text == "omega") return Kind::Omega;
  throw DomainError("unknown kind: " + text +
                    " (expected roots, quiddity, sum-w, or omega)");
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::Roots: return "roots";
    case Kind::Quiddity: return "quiddity";
    case Kind::SumW: return "sum-w";
    case Kind::Omega: return "omega";
  }
  return "?";
}

namespace {

struct TruncShape {
  long q;  // base field size
  int m;   // x^m
};

// PolyQuot:<prime Zmod or GF>/x^m with no extra generators.
std::optional<TruncShape> truncated_shape(const RingSpec& spec) {
  if (spec.kind != RingSpec::Kind::PolyQuot || spec.polys.size() != 1) {
    return std::nullopt;
  }
  int m = 0;
  if (!spec.polys[0].is_pure_power_of('x', &m)) return std::nullopt;
  const RingSpec& base = spec.inner[0];
  if (base.kind == RingSpec::Kind::Zmod && is_prime(base.modulus)) {
    return TruncShape{base.modulus, m};
  }
  if (base.kind == RingSpec::Kind::GF) {
    long q = 1;
    for (int i = 0; i < base.k; ++i) q *= base.p;
    return TruncShape{q, m};
  }
  return std::nullopt;
}

Mat2 parse_matrix_literal(const Ring& ring, const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) {
      throw SpecError("matrix literal '" + text + "': expected '" +
                          std::string(1, c) + "'",
                      pos);
    }
    ++pos;
  };
  auto entry = [&] {
    skip();
    std::size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == ',' || c == ']')) break;
      ++pos;
    }
    return ring.parse_element(text.substr(start, pos - start));
  };
  expect('[');
  expect('[');
  int a11 = entry();
  expect(',');
  int a12 = entry();
  expect(']');
  expect(',');
  expect('[');
  int a21 = entry();
  expect(',');
  int a22 = entry();
  expect(']');
  expect(']');
  skip();
  if (pos != text.size()) {
    throw SpecError("matrix literal '" + text + "': trailing characters", pos);
  }
  return Mat2{a11, a12, a21, a22};
}

}  // namespace

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

struct Session::Bundle {
  std::mutex m;
  RingPtr ring;
  std::optional<SL2Table> sl2;
  std::map<int, CountVector> dp;  // tuple length -> counts
};

Session::Session(RunConfig config) : config_(std::move(config)) {
  if (config_.cache_path.empty()) return;
  std::ifstream in(config_.cache_path);
  if (!in) return;  // cold cache
  nlohmann::json doc;
  try {
    in >> doc;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      cache_[it.key()] = {it.value().at("value").get<std::string>(),
                          it.value().at("method").get<std::string>()};
    }
  } catch (const std::exception& e) {
    throw BuildError("cache file " + config_.cache_path + ": " + e.what());
  }
}

Session::~Session() {
  try {
    flush_cache();
  } catch (...) {
    // Destructor writes are best effort; an explicit flush reports errors.
  }
}

Session::Bundle& Session::bundle(const std::string& canonical) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::unique_ptr<Bundle>& slot = bundles_[canonical];
  if (!slot) slot = std::make_unique<Bundle>();
  return *slot;
}

RingPtr Session::ring(const std::string& spec_text) {
  RingSpec spec = parse_spec(spec_text);
  Bundle& b = bundle(to_string(spec));
  std::lock_guard<std::mutex> lock(b.m);
  if (!b.ring) b.ring = build_ring(spec, config_.build);
  return b.ring;
}

const SL2Table& Session::sl2(const RingPtr& ring) {
  Bundle& b = bundle(ring->spec_string());
  std::lock_guard<std::mutex> lock(b.m);
  if (!b.ring) b.ring = ring;
  if (!b.sl2) b.sl2.emplace(build_sl2(ring, config_.budget));
  return *b.sl2;
}

const CountVector& Session::dp(const RingPtr& ring, int n) {
  const SL2Table& table = sl2(ring);
  Bundle& b = bundle(ring->spec_string());
  std::lock_guard<std::mutex> lock(b.m);
  auto exact = b.dp.find(n);
  if (exact != b.dp.end()) return exact->second;
  // Resume from the longest cached prefix.
  int from = 0;
  CountVector counts = dp_initial(table);
  for (auto it = b.dp.begin(); it != b.dp.end(); ++it) {
    if (it->first <= n && it->first > from) {
      from = it->first;
      counts = it->second;
    }
  }
  for (int round = from; round < n; ++round) {
    dp_advance(table, counts, config_.workers);
    b.dp[round + 1] = counts;
  }
  if (n == 0) b.dp[0] = std::move(counts);
  return b.dp[n];
}

std::optional<BigInt> Session::formula_count(const RingPtr& ring, long n,
                                             Kind kind, int target) {
  const RingSpec& spec = ring->spec();
  switch (kind) {
    case Kind::Roots: {
      if (n < 1) return std::nullopt;
      if (target == ring->zero()) {
        if (spec.kind == RingSpec::Kind::Zmod) {
          return roots_zmod(spec.modulus, n);
        }
        if (!ring->is_local()) return std::nullopt;
        if (ring->nonunit_count() == 1) {
          return roots_finite_field(ring->size(), n);
        }
        if (auto shape = truncated_shape(spec)) {
          return roots_truncated_poly(shape->q, shape->m, n);
        }
        LocalParams params = LocalParams::of(*ring);
        return roots_via_quiddity_sum(
            params, n, sum_quiddity_over_units(params, n + 2));
      }
      if (ring->nonunit_count() == 1 && ring->is_unit(target) &&
          target != ring->one() && target != ring->neg(ring->one()) &&
          n % 2 == 0 && n >= 4) {
        return roots_even_field_other_unit(ring->size(), int(n / 2));
      }
      return std::nullopt;
    }
    case Kind::Quiddity: {
      if (!ring->is_unit(target)) return std::nullopt;
      long s = n;
      if (s == 3) return BigInt(1);  // unique tuple for every unit
      if (s < 3) return std::nullopt;
      if (!ring->is_local()) return std::nullopt;
      long q = ring->residue_size();
      bool is_field = ring->nonunit_count() == 1;
      int eps = target == ring->one()
                    ? 1
                    : (target == ring->neg(ring->one()) ? -1 : 0);
      if (is_field) {
        if (s % 2 == 1) return quiddity_field(ring->size(), s, 1);
        if (eps == 0) return std::nullopt;
        return quiddity_field(ring->size(), s, eps);
      }
      LocalParams params = LocalParams::of(*ring);
      if (s % 2 == 1) {
        // Unit targets all coincide at odd length.
        if (spec.kind == RingSpec::Kind::Zmod) {
          long p = 0;
          int m = 0;
          is_prime_power(spec.modulus, &p, &m);
          return quiddity_lifted_odd(p, m, s);
        }
        if (auto shape = truncated_shape(spec)) {
          return quiddity_lifted_odd(shape->q, shape->m, s);
        }
        return quiddity_residue_reduction(params, quiddity_field(q, s, 1), s,
                                          1);
      }
      if (eps == 0) return std::nullopt;
      if (spec.kind == RingSpec::Kind::Zmod) {
        long p = 0;
        int m = 0;
        is_prime_power(spec.modulus, &p, &m);
        if (p == 2 && m == 2) return quiddity_mod4_even(s, eps);
        if (s == 4) return quiddity_size4_prime_power(p, m, eps);
        return quiddity_prime_power_even(p, m, s, eps);
      }
      if (residue_reduction_applies(q, s, eps)) {
        return quiddity_residue_reduction(params, quiddity_field(q, s, eps),
                                          s, eps);
      }
      return std::nullopt;
    }
    case Kind::SumW: {
      if (n < 3 || !ring->is_local()) return std::nullopt;
      return sum_quiddity_over_units(LocalParams::of(*ring), n);
    }
    case Kind::Omega:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

int checked_length(long n) {
  if (n < 0 || n > 1000000) {
    throw DomainError("tuple length " + std::to_string(n) +
                      " is out of range");
  }
  return int(n);
}

}  // namespace

std::vector<CountRecord> Session::compute(const std::string& spec_text,
                                          long n, Kind kind,
                                          const std::string& target_text,
                                          const std::string& method) {
  RingPtr r = ring(spec_text);
  int len = checked_length(n);

  int target_idx = -1;
  Mat2 omega_target{};
  std::string target_label = "-";
  switch (kind) {
    case Kind::Roots:
      target_idx =
          r->parse_element(target_text.empty() ? std::string("0") : target_text);
      target_label = r->display(target_idx);
      break;
    case Kind::Quiddity: {
      target_idx =
          r->parse_element(target_text.empty() ? std::string("1") : target_text);
      target_label = r->display(target_idx);
      if (!r->is_unit(target_idx)) {
        throw DomainError(r->spec_string() + ": quiddity target " +
                          target_label + " is not a unit");
      }
      break;
    }
    case Kind::SumW:
      break;
    case Kind::Omega: {
      if (target_text.empty()) {
        omega_target = mat_identity(*r);
      } else {
        omega_target = parse_matrix_literal(*r, target_text);
      }
      if (mat_det(*r, omega_target) != r->one()) {
        throw DomainError(r->spec_string() + ": target matrix " +
                          mat_to_string(*r, omega_target) +
                          " has determinant != 1, so no tuple reaches it");
      }
      target_label = mat_to_string(*r, omega_target);
      break;
    }
  }

  const std::string key = r->spec_string() + "|" + std::to_string(n) + "|" +
                          kind_name(kind) + "|" + target_label;

  auto make_record = [&](const std::string& m, const std::string& value) {
    CountRecord rec;
    rec.ring = r->spec_string();
    rec.n = n;
    rec.kind = kind_name(kind);
    rec.target = target_label;
    rec.method = m;
    rec.value = value;
    rec.status = "ok";
    return rec;
  };

  auto value_by = [&](const std::string& m) -> BigInt {
    if (m == "formula") {
      std::optional<BigInt> v = formula_count(r, n, kind, target_idx);
      if (!v) {
        throw DomainError("no published closed form covers " + key);
      }
      return *v;
    }
    if (m == "dp") {
      const SL2Table& table = sl2(r);
      const CountVector& counts = dp(r, len);
      switch (kind) {
        case Kind::Roots: {
          BigInt total = 0;
          for (int i = 0; i < table.size(); ++i) {
            if (table.matrix(i).a11 == target_idx) total += counts[i];
          }
          return total;
        }
        case Kind::Quiddity: {
          Mat2 m2{target_idx, r->zero(), r->zero(), r->inverse(target_idx)};
          int idx = table.index_of(m2);
          return idx < 0 ? BigInt(0) : counts[idx];
        }
        case Kind::SumW: {
          BigInt total = 0;
          for (int u : r->units()) {
            Mat2 m2{u, r->zero(), r->zero(), r->inverse(u)};
            int idx = table.index_of(m2);
            if (idx >= 0) total += counts[idx];
          }
          return total;
        }
        case Kind::Omega: {
          int idx = table.index_of(omega_target);
          return idx < 0 ? BigInt(0) : counts[idx];
        }
      }
      throw DomainError("unhandled kind");
    }
    if (m == "brute") {
      BruteCounts counts = brute_counts(*r, len, config_.budget);
      switch (kind) {
        case Kind::Roots:
          return counts.roots[target_idx];
        case Kind::Quiddity: {
          Mat2 m2{target_idx, r->zero(), r->zero(), r->inverse(target_idx)};
          auto it = counts.omega.find(pack_mat(*r, m2));
          return it == counts.omega.end() ? BigInt(0) : it->second;
        }
        case Kind::SumW: {
          BigInt total = 0;
          for (int u : r->units()) {
            Mat2 m2{u, r->zero(), r->zero(), r->inverse(u)};
            auto it = counts.omega.find(pack_mat(*r, m2));
            if (it != counts.omega.end()) total += it->second;
          }
          return total;
        }
        case Kind::Omega: {
          auto it = counts.omega.find(pack_mat(*r, omega_target));
          return it == counts.omega.end() ? BigInt(0) : it->second;
        }
      }
      throw DomainError("unhandled kind");
    }
    throw DomainError("unknown method: " + m +
                      " (expected formula, dp, brute, auto, or all)");
  };

  auto dp_within_budget = [&] {
    return r->size() <= config_.budget.sl2_size_limit;
  };
  auto brute_within_budget = [&] {
    long double leaves = 1;
    for (int i = 0; i < len; ++i) leaves *= r->size();
    return leaves <= static_cast<long double>(config_.budget.brute_leaves);
  };

  std::vector<CountRecord> records;
  if (method == "auto") {
    if (auto hit = cache_lookup(key)) {
      records.push_back(
          make_record("cache(" + hit->second + ")", hit->first));
      return records;
    }
    std::string chosen;
    if (formula_count(r, n, kind, target_idx)) chosen = "formula";
    else if (dp_within_budget()) chosen = "dp";
    else if (brute_within_budget()) chosen = "brute";
    else {
      throw BudgetError("no method fits the budget for " + key +
                        "; raise --budget-sl2 or --budget-brute");
    }
    BigInt value = value_by(chosen);
    cache_store(key, value.get_str(), chosen);
    records.push_back(make_record(chosen, value.get_str()));
    return records;
  }
  if (method == "all") {
    std::vector<std::string> chosen;
    if (formula_count(r, n, kind, target_idx)) chosen.push_back("formula");
    if (dp_within_budget()) chosen.push_back("dp");
    if (brute_within_budget()) chosen.push_back("brute");
    if (chosen.empty()) {
      throw BudgetError("no method fits the budget for " + key +
                        "; raise --budget-sl2 or --budget-brute");
    }
    std::vector<BigInt> values;
    for (const std::string& m : chosen) values.push_back(value_by(m));
    bool agree = true;
    for (const BigInt& v : values) agree = agree && v == values.front();
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      CountRecord rec = make_record(chosen[i], values[i].get_str());
      rec.status = agree ? "agree" : "disagree";
      records.push_back(rec);
    }
    if (agree) cache_store(key, values.front().get_str(), chosen.front());
    return records;
  }
  BigInt value = value_by(method);
  cache_store(key, value.get_str(), method);
  records.push_back(make_record(method, value.get_str()));
  return records;
}

std::optional<std::pair<std::string, std::string>> Session::cache_lookup(
    const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

void Session::cache_store(const std::string& key, const std::string& value,
                          const std::string& method) {
  if (config_.cache_path.empty()) return;
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end() && it->second.first == value) return;
  cache_[key] = {value, method};
  cache_dirty_ = true;
}

void Session::flush_cache() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!cache_dirty_ || config_.cache_path.empty()) return;
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, entry] : cache_) {
    doc[key] = {{"value", entry.first}, {"method", entry.second}};
  }
  std::ofstream out(config_.cache_path);
  if (!out) {
    throw BuildError("cannot write cache file: " + config_.cache_path);
  }
  out << doc.dump(2) << "\n";
  cache_dirty_ = false;
}

// ---------------------------------------------------------------------------
// Golden table runs
// ---------------------------------------------------------------------------

TableRunResult run_table(Session& session, const GoldenTable& table,
                         const std::string& method) {
  TableRunResult out;
  out.records.resize(table.rows.size());

  std::vector<std::string> ring_order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string& ring = table.rows[i].ring;
    auto [it, inserted] = groups.try_emplace(ring);
    if (inserted) ring_order.push_back(ring);
    it->second.push_back(i);
  }

  auto run_group = [&](const std::string& ring_name) {
    for (std::size_t i : groups[ring_name]) {
      const GoldenRow& row = table.rows[i];
      const std::string expected = row.expected.get_str();
      CountRecord rec;
      try {
        std::vector<CountRecord> recs = session.compute(
            row.ring, row.n, parse_kind(row.kind), row.target, method);
        bool pass = !recs.empty();
        for (const CountRecord& r : recs) pass = pass && r.value == expected;
        rec = recs.front();
        if (recs.size() > 1) rec.method = "all";
        rec.expected = expected;
        rec.status = pass ? "pass" : "fail";
      } catch (const BudgetError&) {
        rec.ring = row.ring;
        rec.n = row.n;
        rec.kind = row.kind;
        rec.target = row.target;
        rec.method = method;
        rec.value = "";
        rec.expected = expected;
        rec.status = "skipped-budget";
      }
      out.records[i] = std::move(rec);
    }
  };

  int workers = session.config().workers;
  if (workers <= 1 || ring_order.size() <= 1) {
    for (const std::string& ring : ring_order) run_group(ring);
  } else {
    std::atomic<std::size_t> next{0};
    int count = std::min<int>(workers, int(ring_order.size()));
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors{std::size_t(count)};
    for (int t = 0; t < count; ++t) {
      threads.emplace_back([&, t] {
        try {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ring_order.size()) break;
            run_group(ring_order[i]);
          }
        } catch (...) {
          errors[std::size_t(t)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const CountRecord& rec : out.records) {
    if (rec.status == "fail") out.all_pass = false;
    if (rec.status == "skipped-budget") out.any_skip = true;
  }
  return out;
}

}  // namespace contring
