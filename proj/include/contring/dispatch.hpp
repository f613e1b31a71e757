#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "contring/counting.hpp"
#include "contring/golden.hpp"
#include "contring/records.hpp"
#include "contring/ring.hpp"

namespace contring {

struct RunConfig {
  EnumBudget budget;
  BuildOptions build;
  int workers = 1;
  std::string cache_path;  // optional on-disk result cache (JSON)
  std::string data_dir;    // golden table location
};

enum class Kind { Roots, Quiddity, SumW, Omega };
Kind parse_kind(const std::string& text);
std::string kind_name(Kind kind);

// Shared per-run state: built rings, SL2 tables, DP snapshots per (ring, n),
// and the optional disk cache. Thread safe; table cells for different rings
// may be computed concurrently.
class Session {
 public:
  explicit Session(RunConfig config);
  ~Session();

  const RunConfig& config() const { return config_; }

  RingPtr ring(const std::string& spec_text);
  const SL2Table& sl2(const RingPtr& ring);
  const CountVector& dp(const RingPtr& ring, int n);

  // Closed-form value for a cell, when one of the published forms covers it.
  // `target` is an element index for Roots/Quiddity and ignored for SumW.
  std::optional<BigInt> formula_count(const RingPtr& ring, long n, Kind kind,
                                      int target);

  // Computes one cell with the requested method ("formula", "dp", "brute",
  // or "auto" = cheapest applicable; "all" = every applicable method with
  // agreement status). One record per method run.
  std::vector<CountRecord> compute(const std::string& spec_text, long n,
                                   Kind kind, const std::string& target,
                                   const std::string& method);

  void flush_cache();  // writes the disk cache if one is configured

 private:
  struct Bundle;
  Bundle& bundle(const std::string& canonical);
  std::optional<std::pair<std::string, std::string>> cache_lookup(
      const std::string& key) const;
  void cache_store(const std::string& key, const std::string& value,
                   const std::string& method);

  RunConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Bundle>> bundles_;
  std::map<std::string, std::pair<std::string, std::string>> cache_;
  bool cache_dirty_ = false;
};

struct TableRunResult {
  std::vector<CountRecord> records;
  bool all_pass = true;
  bool any_skip = false;
};

// Recomputes every golden cell ("auto" picks formula, then dp, then brute;
// an explicit method forces that engine). Rows keep the golden file order
// regardless of worker count.
TableRunResult run_table(Session& session, const GoldenTable& table,
                         const std::string& method = "auto");

}  // namespace contring
