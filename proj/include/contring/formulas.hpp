#pragma once

#include "contring/bigint.hpp"
#include "contring/ring.hpp"

namespace contring {

// Numeric profile of a finite local ring. omega, eta, tau are the integer
// solutions of the characteristic data used by the closed forms:
//   eta + tau = |U(A)|, eta * tau = -|A - U(A)| * |A|,
//   omega = eta - tau = sqrt(|U|^2 + 4 |A - U| |A|).
// They come out as omega = |A| + |A-U|, eta = |A|, tau = -|A-U|.
struct LocalParams {
  BigInt size;
  BigInt units;
  BigInt nonunits;
  long q = 0;  // residue field size
  BigInt omega;
  BigInt eta;
  BigInt tau;

  static LocalParams of(const Ring& ring);          // throws on non-local rings
  static LocalParams make(long size, long nonunits, long q);
};

// sum over units v of w_n^v(A), local A, n >= 3:
//   [ |U| w (tau^{n-3} + eta^{n-3}) + (2|A-U||A| + |U|^2)(eta^{n-3} - tau^{n-3}) ] / (2 w).
BigInt sum_quiddity_over_units(const LocalParams& params, long n);

// r_n(A) = (|A|^n - S) / |A - U|, where S = sum over units of w_{n+2}.
BigInt roots_via_quiddity_sum(const LocalParams& params, long n,
                              const BigInt& w_sum_n_plus_2);
// Odd n only: all w_{n+2}^u coincide, so S = |U| * w_{n+2}^1.
BigInt roots_via_quiddity_one(const LocalParams& params, long n,
                              const BigInt& w_one_n_plus_2);

// r_n over the three closed-form families.
BigInt roots_finite_field(long q, long n);               // (q^n + (-1)^{n+1}) / (q+1)
BigInt roots_zmod_prime_power(long p, int m, long n);    // p^{(m-1)(n-1)} * field value
BigInt roots_truncated_poly(long q, int m, long n);      // q^{(m-1)(n-1)} * field value
// r_n(Z/N) as the product over the prime-power factors of N.
BigInt roots_zmod(long N, long n);

// w_s^eps(F_q), s >= 2. For even q the two signs coincide.
BigInt quiddity_field(long q, long s, int eps);

// w_s^{+-1}(Z/2^m) for odd s >= 5, m >= 1 (both signs equal).
BigInt quiddity_pow2_odd(int m, long s);

// w_s^eps(Z/4) for even s >= 4.
BigInt quiddity_mod4_even(long s, int eps);

// w_s^1(Z/p^m) = w_s^1(F_q[X]/<X^m>) for odd s >= 3, m >= 1, q = p^j:
//   (q^{(s-2)m+1} - q^{(s-2)(m-1)}) / (q^{m-1} (q^2 - 1)).
// Odd s makes all unit targets coincide, so this serves every unit.
BigInt quiddity_lifted_odd(long q, int m, long s);

// w_s^eps(Z/p^m) for even s >= 6; p odd needs m >= 2, p = 2 needs m >= 3
// (m = 1 is the field case, Z/4 has its own form above).
BigInt quiddity_prime_power_even(long p, int m, long s, int eps);

// w_4^eps(Z/p^m), m >= 2: eps = +1 -> p^{m-1} (p(m+1) - m) (any p);
// eps = -1 -> p^{m-1}(p-1) for odd p, 2^m for p = 2, m >= 3.
BigInt quiddity_size4_prime_power(long p, int m, int eps);

// w_s^{eps 1_A}(A) = w_s^{eps}(A/I) * |A - U|^{s-3} for local A, where I is
// the maximal ideal. In-domain: s > 1 and (s odd, or q odd and
// (-1)^{s/2} != eps); the parity condition lives in the residue field, so
// even s is never in-domain when q is even.
bool residue_reduction_applies(long q, long s, int eps);
BigInt quiddity_residue_reduction(const LocalParams& params,
                                  const BigInt& residue_count, long s, int eps);

// |R_{2m}^u(F_q)| for any unit u outside {1, -1}, m >= 2:
//   (q^{m+1} - 1)(q^m - 1) / (q^2 - 1).
// Vacuous for q <= 3 (no such unit exists); the value is still returned.
BigInt roots_even_field_other_unit(long q, int m);

}  // namespace contring
