#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "contring/counting.hpp"
#include "contring/errors.hpp"
#include "contring/formulas.hpp"

using namespace contring;

namespace {

BigInt dp_roots(const char* spec, int n) {
  return count_roots(build_ring(spec), n, 0, Method::Dp);
}

}  // namespace

TEST_CASE("local parameters read off the ring") {
  RingPtr f4 = build_ring("GF:2^2");
  LocalParams p = LocalParams::of(*f4);
  CHECK(p.size == 4);
  CHECK(p.units == 3);
  CHECK(p.nonunits == 1);
  CHECK(p.q == 4);
  CHECK(p.omega == 5);
  CHECK(p.eta == 4);
  CHECK(p.tau == -1);

  RingPtr z8 = build_ring("Zmod:8");
  LocalParams z = LocalParams::of(*z8);
  CHECK(z.size == 8);
  CHECK(z.units == 4);
  CHECK(z.nonunits == 4);
  CHECK(z.q == 2);
  CHECK(z.omega == 12);

  RingPtr galois = build_ring("PolyQuot:Zmod:4/x^2+x+1");
  LocalParams g = LocalParams::of(*galois);
  CHECK(g.size == 16);
  CHECK(g.units == 12);
  CHECK(g.q == 4);

  RingPtr z12 = build_ring("Zmod:12");
  CHECK_THROWS_AS(LocalParams::of(*z12), DomainError);
}

TEST_CASE("local parameters satisfy the defining relations") {
  LocalParams p = LocalParams::make(8, 4, 2);
  CHECK(p.omega == 12);
  CHECK(p.eta == 8);
  CHECK(p.tau == -4);
  CHECK(p.eta + p.tau == p.units);
  CHECK(p.eta * p.tau == -p.nonunits * p.size);
  CHECK(p.omega * p.omega == p.units * p.units + 4 * p.nonunits * p.size);
}

TEST_CASE("unit sum over a field collapses to the two-term quotient") {
  for (long q : {2L, 3L, 5L}) {
    LocalParams p = LocalParams::make(q, 1, q);
    for (long s = 3; s <= 8; ++s) {
      CAPTURE(q);
      CAPTURE(s);
      BigInt num = big_pow(q, static_cast<unsigned long>(s - 1));
      num += s % 2 == 0 ? 1 : -1;
      CHECK(sum_quiddity_over_units(p, s) ==
            exact_div(num, BigInt(q) + 1, "test"));
    }
  }
}

TEST_CASE("unit sum seed values") {
  LocalParams f2 = LocalParams::make(2, 1, 2);
  CHECK(sum_quiddity_over_units(f2, 3) == 1);
  CHECK(sum_quiddity_over_units(f2, 4) == 3);
  LocalParams f3 = LocalParams::make(3, 1, 3);
  CHECK(sum_quiddity_over_units(f3, 3) == 2);
  LocalParams z4 = LocalParams::make(4, 2, 2);
  CHECK(sum_quiddity_over_units(z4, 4) == 12);  // 8 at +1, 4 at -1
  CHECK_THROWS_AS(sum_quiddity_over_units(z4, 2), DomainError);
}

TEST_CASE("exact division failure names its caller") {
  CHECK_THROWS_AS(exact_div(BigInt(7), BigInt(2), "seven halves"),
                  DomainError);
  try {
    exact_div(BigInt(7), BigInt(2), "seven halves");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("seven halves") != std::string::npos);
  }
}

TEST_CASE("field root counts") {
  std::vector<long> f2 = {3, 5, 11, 21, 43, 85};  // n = 3..8
  for (int n = 3; n <= 8; ++n) {
    CHECK(roots_finite_field(2, n) == f2[std::size_t(n) - 3]);
  }
  CHECK(roots_finite_field(7, 5) == 2101);
  CHECK(roots_finite_field(9, 6) == 53144);
}

TEST_CASE("prime power and truncated polynomial root counts") {
  std::vector<long> z8 = {48, 320, 2816, 21504, 176128, 1392640};  // n = 3..8
  for (int n = 3; n <= 8; ++n) {
    CHECK(roots_zmod_prime_power(2, 3, n) == z8[std::size_t(n) - 3]);
  }
  CHECK(roots_truncated_poly(4, 2, 7) == 13422592);
  // Both families lift the field count by the same power, so they agree for
  // equal q and m.
  for (int n = 2; n <= 6; ++n) {
    CHECK(roots_truncated_poly(3, 2, n) == roots_zmod_prime_power(3, 2, n));
  }
}

TEST_CASE("composite moduli multiply over the prime power factors") {
  CHECK(roots_zmod(6, 3) == 21);
  CHECK(roots_zmod(12, 6) == 122304);
  CHECK(roots_zmod(10, 8) == 5533840);
  CHECK(roots_zmod(9, 3) == 63);
  CHECK_THROWS_AS(roots_zmod(1, 3), DomainError);
}

TEST_CASE("field quiddity counts") {
  CHECK(quiddity_field(2, 5, 1) == 5);
  CHECK(quiddity_field(2, 5, -1) == 5);  // signs coincide in char 2
  CHECK(quiddity_field(2, 6, 1) == 11);
  CHECK(quiddity_field(3, 6, 1) == 26);
  CHECK(quiddity_field(3, 4, -1) == 2);
  CHECK(quiddity_field(5, 4, 1) == 9);
  CHECK_THROWS_AS(quiddity_field(3, 1, 1), DomainError);
}

TEST_CASE("lifted odd-length quiddity counts") {
  CHECK(quiddity_lifted_odd(3, 2, 5) == 90);
  CHECK(quiddity_lifted_odd(2, 2, 5) == 20);
  CHECK(quiddity_lifted_odd(2, 3, 5) == 80);
  CHECK(quiddity_lifted_odd(2, 3, 7) == 5376);
  CHECK(quiddity_lifted_odd(2, 4, 7) == 86016);
  CHECK(quiddity_lifted_odd(4, 2, 5) == 272);
  // m = 1 degenerates to the field count.
  for (long q : {2L, 3L, 4L, 5L}) {
    for (long s : {3L, 5L, 7L}) {
      CHECK(quiddity_lifted_odd(q, 1, s) == quiddity_field(q, s, 1));
    }
  }
  CHECK_THROWS_AS(quiddity_lifted_odd(3, 2, 4), DomainError);
}

TEST_CASE("power-of-two odd form matches the lifted form") {
  for (int m = 1; m <= 4; ++m) {
    for (long s : {5L, 7L, 9L}) {
      CAPTURE(m);
      CAPTURE(s);
      CHECK(quiddity_pow2_odd(m, s) == quiddity_lifted_odd(2, m, s));
    }
  }
  CHECK_THROWS_AS(quiddity_pow2_odd(2, 6), DomainError);
  CHECK_THROWS_AS(quiddity_pow2_odd(2, 3), DomainError);
}

TEST_CASE("mod-4 even-length counts") {
  CHECK(quiddity_mod4_even(4, 1) == 8);
  CHECK(quiddity_mod4_even(4, -1) == 4);
  CHECK(quiddity_mod4_even(6, 1) == 80);
  CHECK(quiddity_mod4_even(6, -1) == 96);
  // The two targets exhaust the unit sum.
  LocalParams z4 = LocalParams::make(4, 2, 2);
  for (long s = 4; s <= 10; s += 2) {
    CHECK(quiddity_mod4_even(s, 1) + quiddity_mod4_even(s, -1) ==
          sum_quiddity_over_units(z4, s));
  }
  CHECK_THROWS_AS(quiddity_mod4_even(5, 1), DomainError);
}

TEST_CASE("length-four prime power counts") {
  CHECK(quiddity_size4_prime_power(3, 2, 1) == 21);
  CHECK(quiddity_size4_prime_power(3, 2, -1) == 6);
  CHECK(quiddity_size4_prime_power(2, 3, 1) == 20);
  CHECK(quiddity_size4_prime_power(2, 3, -1) == 8);
  CHECK(quiddity_size4_prime_power(5, 2, 1) == 65);
  CHECK(quiddity_size4_prime_power(5, 2, -1) == 20);
  CHECK(quiddity_size4_prime_power(2, 2, 1) == 8);
  CHECK_THROWS_AS(quiddity_size4_prime_power(2, 2, -1), DomainError);
  CHECK_THROWS_AS(quiddity_size4_prime_power(3, 1, 1), DomainError);
}

TEST_CASE("even-length prime power counts") {
  CHECK(quiddity_prime_power_even(3, 2, 6, 1) == 702);
  CHECK(quiddity_prime_power_even(3, 2, 6, -1) == 999);
  CHECK(quiddity_prime_power_even(2, 3, 6, 1) == 640);
  CHECK(quiddity_prime_power_even(2, 4, 8, 1) == 1452032);
  CHECK(quiddity_prime_power_even(2, 4, 8, -1) == 1376256);
  CHECK_THROWS_AS(quiddity_prime_power_even(2, 2, 6, 1), DomainError);
  CHECK_THROWS_AS(quiddity_prime_power_even(3, 1, 6, 1), DomainError);
  CHECK_THROWS_AS(quiddity_prime_power_even(3, 2, 5, 1), DomainError);
}

TEST_CASE("residue reduction domain and value") {
  CHECK(residue_reduction_applies(2, 5, 1));
  CHECK(residue_reduction_applies(3, 6, 1));
  CHECK_FALSE(residue_reduction_applies(3, 6, -1));
  CHECK_FALSE(residue_reduction_applies(2, 6, 1));
  CHECK_FALSE(residue_reduction_applies(2, 1, 1));

  LocalParams z9 = LocalParams::make(9, 3, 3);
  // w_5(F_3) = 10, lifted by |A-U|^{s-3} = 9.
  CHECK(quiddity_residue_reduction(z9, 10, 5, 1) == 90);
  CHECK(quiddity_residue_reduction(z9, 10, 5, 1) ==
        quiddity_lifted_odd(3, 2, 5));
  CHECK_THROWS_AS(quiddity_residue_reduction(z9, 1, 2, 1), DomainError);
  CHECK_THROWS_AS(quiddity_residue_reduction(z9, 10, 6, -1), DomainError);

  // Composing the field count with the reduction reproduces the lifted form
  // over F_4[X]/<X^2>.
  LocalParams lifted = LocalParams::make(16, 4, 4);
  CHECK(quiddity_field(4, 5, 1) == 17);
  CHECK(quiddity_residue_reduction(lifted, 17, 5, 1) == 272);
  CHECK(quiddity_residue_reduction(lifted, 17, 5, 1) ==
        quiddity_lifted_odd(4, 2, 5));
}

TEST_CASE("even-length roots at units other than +-1") {
  CHECK(roots_even_field_other_unit(5, 2) == 124);
  CHECK(roots_even_field_other_unit(4, 2) == 63);
  CHECK(roots_even_field_other_unit(2, 2) == 7);  // vacuous over F_2
  CHECK(roots_even_field_other_unit(3, 2) == 26);
  CHECK_THROWS_AS(roots_even_field_other_unit(5, 1), DomainError);

  // Brute confirmation at the smallest fields with such a unit.
  RingPtr f5 = build_ring("GF:5^1");
  CHECK(count_roots(f5, 4, f5->from_int(2), Method::Brute) == 124);
  RingPtr f4 = build_ring("GF:2^2");
  CHECK(count_roots(f4, 4, f4->parse_element("x"), Method::Brute) == 63);
}

TEST_CASE("roots from the quiddity sum invert the partition") {
  LocalParams f3 = LocalParams::make(3, 1, 3);
  for (int n = 1; n <= 6; ++n) {
    BigInt sum = sum_quiddity_over_units(f3, n + 2);
    CHECK(roots_via_quiddity_sum(f3, n, sum) == roots_finite_field(3, n));
  }
}

TEST_CASE("odd-length roots from a single quiddity count") {
  LocalParams z8 = LocalParams::make(8, 4, 2);
  CHECK(roots_via_quiddity_one(z8, 5, 5376) == 2816);
  CHECK(roots_via_quiddity_one(z8, 5, 5376) ==
        roots_zmod_prime_power(2, 3, 5));
  CHECK_THROWS_AS(roots_via_quiddity_one(z8, 4, 1), DomainError);
}

TEST_CASE("closed forms track the transfer-matrix counts") {
  // Lifting by one nilpotency step multiplies each root count by q^{n-1}.
  for (int n = 2; n <= 5; ++n) {
    CAPTURE(n);
    BigInt lift = big_pow(3, static_cast<unsigned long>(n - 1));
    CHECK(dp_roots("Zmod:9", n) == lift * dp_roots("GF:3^1", n));
    BigInt lift2 = big_pow(2, static_cast<unsigned long>(n - 1));
    CHECK(dp_roots("PolyQuot:Zmod:2/x^3", n) ==
          lift2 * dp_roots("PolyQuot:Zmod:2/x^2", n));
  }
  // Family values against the enumerator.
  for (int n = 1; n <= 5; ++n) {
    CHECK(dp_roots("GF:3^2", n) == roots_finite_field(9, n));
    CHECK(dp_roots("Zmod:27", n) == roots_zmod_prime_power(3, 3, n));
    CHECK(dp_roots("Zmod:10", n) == roots_zmod(10, n));
  }
}
