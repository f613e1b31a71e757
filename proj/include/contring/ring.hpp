#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "contring/ring_spec.hpp"

namespace contring {

namespace detail {
class RingOps;
}

struct BuildOptions {
  int size_cap = 4096;    // refuse rings larger than this
  int table_limit = 256;  // dense add/mul tables at or below this size
};

// A finite commutative unitary ring. Elements are dense indices 0..size-1 in
// a per-variant canonical order; arithmetic goes through precomputed tables
// for small rings and through the variant backend above the table limit.
// Immutable once built; share via RingPtr.
class Ring {
 public:
  int size() const { return size_; }
  int zero() const { return zero_; }
  int one() const { return one_; }

  int add(int a, int b) const {
    return add_table_.empty() ? ops_add(a, b)
                              : add_table_[std::size_t(a) * size_ + b];
  }
  int mul(int a, int b) const {
    return mul_table_.empty() ? ops_mul(a, b)
                              : mul_table_[std::size_t(a) * size_ + b];
  }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg_[b]); }

  bool is_unit(int a) const { return inv_[a] >= 0; }
  int inverse(int a) const;  // throws DomainError on non-units
  int unit_count() const { return unit_count_; }
  int nonunit_count() const { return size_ - unit_count_; }
  const std::vector<int>& units() const { return units_; }
  const std::vector<int>& nonunits() const { return nonunits_; }

  bool is_local() const { return local_; }
  // Size q of the residue field A / (A - U(A)); throws on non-local rings.
  int residue_size() const;

  // v * 1_A, computed by binary doubling; negative v via the additive inverse.
  int from_int(long v) const;

  std::string display(int a) const;
  int parse_element(std::string_view text) const;

  const RingSpec& spec() const { return spec_; }
  const std::string& spec_string() const { return spec_string_; }

  ~Ring();

 private:
  friend std::shared_ptr<const Ring> build_ring(const RingSpec&,
                                                const BuildOptions&);
  Ring() = default;
  int ops_add(int a, int b) const;
  int ops_mul(int a, int b) const;

  int size_ = 0;
  int zero_ = 0;
  int one_ = 0;
  std::vector<int32_t> add_table_;
  std::vector<int32_t> mul_table_;
  std::vector<int32_t> neg_;
  std::vector<int32_t> inv_;  // -1 on non-units
  std::vector<int> units_;
  std::vector<int> nonunits_;
  int unit_count_ = 0;
  bool local_ = false;
  int residue_size_ = 0;
  RingSpec spec_;
  std::string spec_string_;
  std::shared_ptr<const detail::RingOps> ops_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr build_ring(const RingSpec& spec, const BuildOptions& options = {});
RingPtr build_ring(std::string_view spec_text, const BuildOptions& options = {});

// Commutative unitary ring axiom check: exhaustive for |A| <= exhaustive_limit,
// seeded random sampling above. Throws BuildError on the first violation.
// build_ring runs this on every ring it returns.
void validate_ring_axioms(const Ring& ring, int exhaustive_limit = 64,
                          int samples = 20000);

}  // namespace contring
