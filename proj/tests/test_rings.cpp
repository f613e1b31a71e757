#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "contring/errors.hpp"
#include "contring/ring.hpp"

using namespace contring;

namespace {

// Every element must display/parse back to itself, and the unit/inverse data
// must satisfy a * a^-1 = 1 exactly.
void check_ring_basics(const Ring& A) {
  CHECK(A.add(A.zero(), A.one()) == A.one());
  CHECK(A.mul(A.one(), A.one()) == A.one());
  int units = 0;
  for (int a = 0; a < A.size(); ++a) {
    CHECK(A.parse_element(A.display(a)) == a);
    CHECK(A.add(a, A.neg(a)) == A.zero());
    if (A.is_unit(a)) {
      ++units;
      CHECK(A.mul(a, A.inverse(a)) == A.one());
    }
  }
  CHECK(units == A.unit_count());
  CHECK(int(A.units().size()) + int(A.nonunits().size()) == A.size());
}

}  // namespace

TEST_CASE("zmod rings") {
  RingPtr ring = build_ring("Zmod:8");
  const Ring& A = *ring;
  CHECK(A.size() == 8);
  CHECK(A.unit_count() == 4);
  CHECK(A.is_local());
  CHECK(A.residue_size() == 2);
  CHECK(A.from_int(-1) == A.parse_element("7"));
  CHECK(A.from_int(-7) == A.one());
  CHECK(A.from_int(19) == A.parse_element("3"));
  check_ring_basics(A);

  RingPtr z12 = build_ring("Zmod:12");
  CHECK_FALSE(z12->is_local());
  CHECK(z12->unit_count() == 4);
  CHECK_THROWS_AS(z12->residue_size(), DomainError);
  CHECK_THROWS_AS(z12->inverse(z12->parse_element("2")), DomainError);
}

TEST_CASE("prime fields leave only zero outside the units") {
  for (long p : {2L, 3L, 5L, 7L, 11L}) {
    RingPtr ring = build_ring("Zmod:" + std::to_string(p));
    CHECK(ring->unit_count() == int(p) - 1);
    CHECK(ring->is_local());
    CHECK(ring->residue_size() == int(p));
  }
}

TEST_CASE("gf(4) arithmetic over the bundled modulus") {
  RingPtr ring = build_ring("GF:2^2");
  const Ring& A = *ring;
  CHECK(A.size() == 4);
  CHECK(A.unit_count() == 3);
  CHECK(A.residue_size() == 4);
  int x = A.parse_element("x");
  // x^2 + x + 1 = 0, so x^2 = x + 1.
  CHECK(A.mul(x, x) == A.parse_element("x+1"));
  CHECK(A.mul(x, A.parse_element("x+1")) == A.one());
  check_ring_basics(A);
}

TEST_CASE("gf(16) picks the smallest modulus by coefficient order") {
  RingPtr ring = build_ring("GF:2^4");
  const Ring& A = *ring;
  // The first monic irreducible in (c0, c1, c2, c3) order is x^4 + x^3 + 1,
  // which precedes x^4 + x + 1.
  CHECK(A.parse_element("x^4") == A.parse_element("x^3+1"));

  RingPtr classic = build_ring("GF:2^4/x^4+x+1");
  CHECK(classic->parse_element("x^4") == classic->parse_element("x+1"));
  CHECK(classic->unit_count() == 15);
}

TEST_CASE("gf(9) squares the generator to -1") {
  RingPtr ring = build_ring("GF:3^2");
  const Ring& A = *ring;
  CHECK(A.size() == 9);
  CHECK(A.unit_count() == 8);
  // Default modulus x^2 + 1.
  CHECK(A.parse_element("x^2") == A.from_int(-1));
  check_ring_basics(A);
}

TEST_CASE("gf rejects bad parameters") {
  CHECK_THROWS_AS(build_ring("GF:6^1"), BuildError);
  CHECK_THROWS_AS(build_ring("GF:2^2/x^2"), BuildError);      // reducible
  CHECK_THROWS_AS(build_ring("GF:2^2/x^2+x"), BuildError);    // reducible
  CHECK_THROWS_AS(build_ring("GF:2^3/x^2+x+1"), BuildError);  // degree != k
}

TEST_CASE("truncated polynomial ring") {
  RingPtr ring = build_ring("PolyQuot:Zmod:2/x^3");
  const Ring& A = *ring;
  CHECK(A.size() == 8);
  CHECK(A.unit_count() == 4);
  CHECK(A.is_local());
  CHECK(A.residue_size() == 2);
  int x = A.parse_element("x");
  CHECK(A.mul(A.mul(x, x), x) == A.zero());
  CHECK(A.mul(x, x) == A.parse_element("x^2"));
  CHECK(A.is_unit(A.parse_element("1+x")));
  check_ring_basics(A);
}

TEST_CASE("quotient with an extra generator") {
  RingPtr ring = build_ring("PolyQuot:Zmod:4/x^2,2x");
  const Ring& A = *ring;
  CHECK(A.size() == 8);
  CHECK(A.unit_count() == 4);
  CHECK(A.is_local());
  CHECK(A.residue_size() == 2);
  int x = A.parse_element("x");
  CHECK(A.mul(x, x) == A.zero());
  CHECK(A.mul(A.from_int(2), x) == A.zero());  // 2x lies in the ideal
  CHECK(A.parse_element("2x") == A.zero());
  check_ring_basics(A);
}

TEST_CASE("galois ring of size 16") {
  RingPtr ring = build_ring("PolyQuot:Zmod:4/x^2+x+1");
  const Ring& A = *ring;
  CHECK(A.size() == 16);
  CHECK(A.unit_count() == 12);
  CHECK(A.is_local());
  CHECK(A.residue_size() == 4);
  CHECK(A.parse_element("x^2") == A.parse_element("3x+3"));
  check_ring_basics(A);
}

TEST_CASE("bivariate quotient") {
  RingPtr ring = build_ring("Bivar:Zmod:2/x^2,y^2");
  const Ring& A = *ring;
  CHECK(A.size() == 16);
  CHECK(A.unit_count() == 8);
  CHECK(A.is_local());
  CHECK(A.residue_size() == 2);
  int x = A.parse_element("x");
  int y = A.parse_element("y");
  int xy = A.parse_element("xy");
  CHECK(A.mul(x, y) == xy);
  CHECK(A.mul(x, x) == A.zero());
  CHECK(A.mul(y, y) == A.zero());
  CHECK(A.mul(xy, xy) == A.zero());
  CHECK(A.is_unit(A.parse_element("1+x+y")));
  check_ring_basics(A);
}

TEST_CASE("products multiply sizes and unit counts") {
  RingPtr prod = build_ring("Prod:Zmod:2;Zmod:3");
  const Ring& A = *prod;
  CHECK(A.size() == 6);
  CHECK(A.unit_count() == 2);
  CHECK_FALSE(A.is_local());
  int e = A.parse_element("(1,2)");
  CHECK(A.display(e) == "(1,2)");
  CHECK(A.mul(e, e) == A.parse_element("(1,1)"));
  check_ring_basics(A);

  RingPtr z6 = build_ring("Zmod:6");
  CHECK(z6->size() == A.size());
  CHECK(z6->unit_count() == A.unit_count());
}

TEST_CASE("table-backed ring mirrors Zmod:3") {
  RingPtr z3 = build_ring("Zmod:3");
  nlohmann::json doc;
  doc["size"] = 3;
  doc["zero"] = 0;
  doc["one"] = 1;
  for (int a = 0; a < 3; ++a) {
    nlohmann::json add_row = nlohmann::json::array();
    nlohmann::json mul_row = nlohmann::json::array();
    for (int b = 0; b < 3; ++b) {
      add_row.push_back(z3->add(a, b));
      mul_row.push_back(z3->mul(a, b));
    }
    doc["add"].push_back(add_row);
    doc["mul"].push_back(mul_row);
  }
  std::string path = "table_ring_ok.json";
  std::ofstream(path) << doc.dump();

  RingPtr ring = build_ring("Table:" + path);
  const Ring& A = *ring;
  CHECK(A.size() == 3);
  CHECK(A.unit_count() == 2);
  CHECK(A.is_local());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(A.add(a, b) == z3->add(a, b));
      CHECK(A.mul(a, b) == z3->mul(a, b));
    }
  }
  check_ring_basics(A);
  std::remove(path.c_str());
}

TEST_CASE("table rings that break the axioms are rejected") {
  nlohmann::json doc;
  doc["size"] = 2;
  doc["zero"] = 0;
  doc["one"] = 1;
  doc["add"] = {{0, 1}, {1, 0}};
  doc["mul"] = {{0, 0}, {0, 0}};  // kills 1 * 1 = 1
  std::string path = "table_ring_bad.json";
  std::ofstream(path) << doc.dump();
  CHECK_THROWS_AS(build_ring("Table:" + path), BuildError);
  std::remove(path.c_str());

  CHECK_THROWS_AS(build_ring("Table:does_not_exist.json"), BuildError);
}

TEST_CASE("size cap and quotient degeneracies") {
  BuildOptions tight;
  tight.size_cap = 100;
  CHECK_THROWS_AS(build_ring("Zmod:101", tight), BuildError);
  CHECK(build_ring("Zmod:100", tight)->size() == 100);

  // Leading coefficient of the head generator must be a unit.
  CHECK_THROWS_AS(build_ring("PolyQuot:Zmod:4/2x^2+1"), BuildError);
  // Bivar generators must be pure powers.
  CHECK_THROWS_AS(build_ring("Bivar:Zmod:2/x^2+1,y^2"), BuildError);
}

TEST_CASE("rings above the dense-table limit still compute correctly") {
  BuildOptions opts;
  opts.table_limit = 16;  // force the backend path for Zmod:30
  RingPtr ring = build_ring("Zmod:30", opts);
  const Ring& A = *ring;
  CHECK(A.add(17, 25) == 12);
  CHECK(A.mul(17, 25) == (17 * 25) % 30);
  CHECK(A.unit_count() == 8);
  CHECK(A.is_unit(7));
  CHECK(A.mul(7, A.inverse(7)) == 1);
  check_ring_basics(A);
}

TEST_CASE("axiom validator accepts every built ring") {
  for (const char* text : {"Zmod:9", "GF:2^3", "PolyQuot:Zmod:4/x^2+x+1",
                           "Bivar:Zmod:2/x^2,y^2", "Prod:Zmod:4;Zmod:9"}) {
    CAPTURE(text);
    RingPtr ring = build_ring(text);
    CHECK_NOTHROW(validate_ring_axioms(*ring));
  }
}

TEST_CASE("element parsing rejects junk") {
  RingPtr ring = build_ring("Zmod:8");
  CHECK_THROWS_AS(ring->parse_element("blah"), SpecError);
  CHECK_THROWS_AS(ring->parse_element(""), SpecError);
  RingPtr gf = build_ring("GF:2^2");
  CHECK_THROWS_AS(gf->parse_element("y"), SpecError);
  CHECK(gf->parse_element(" x+1 ") == gf->parse_element("x+1"));
}
