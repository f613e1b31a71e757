#include "contring/formulas.hpp"

#include "contring/errors.hpp"

namespace contring {

LocalParams LocalParams::of(const Ring& ring) {
  if (!ring.is_local()) {
    throw DomainError(ring.spec_string() +
                      ": closed forms require a local ring");
  }
  return make(ring.size(), ring.nonunit_count(), ring.residue_size());
}

LocalParams LocalParams::make(long size, long nonunits, long q) {
  LocalParams params;
  params.size = size;
  params.nonunits = nonunits;
  params.units = size - nonunits;
  params.q = q;
  params.eta = size;
  params.tau = -nonunits;
  params.omega = params.eta - params.tau;  // |A| + |A - U|
  return params;
}

BigInt sum_quiddity_over_units(const LocalParams& params, long n) {
  if (n < 3) {
    throw DomainError("sum over units of w_n: needs n >= 3, got n = " +
                      std::to_string(n));
  }
  unsigned long e = static_cast<unsigned long>(n - 3);
  BigInt tau_pow = big_pow(params.tau, e);
  BigInt eta_pow = big_pow(params.eta, e);
  BigInt term1 = params.units * params.omega * (tau_pow + eta_pow);
  BigInt disc = 2 * params.nonunits * params.size + params.units * params.units;
  BigInt term2 = disc * (eta_pow - tau_pow);
  return exact_div(term1 + term2, 2 * params.omega, "sum over units of w_n");
}

BigInt roots_via_quiddity_sum(const LocalParams& params, long n,
                              const BigInt& w_sum_n_plus_2) {
  BigInt total = big_pow(params.size, static_cast<unsigned long>(n));
  return exact_div(total - w_sum_n_plus_2, params.nonunits,
                   "roots from the quiddity sum");
}

BigInt roots_via_quiddity_one(const LocalParams& params, long n,
                              const BigInt& w_one_n_plus_2) {
  if (n % 2 == 0) {
    throw DomainError(
        "roots from w^1 alone: unit targets only coincide for odd n, got n "
        "= " + std::to_string(n));
  }
  BigInt total = big_pow(params.size, static_cast<unsigned long>(n));
  return exact_div(total - params.units * w_one_n_plus_2, params.nonunits,
                   "roots from w^1");
}

BigInt roots_finite_field(long q, long n) {
  BigInt num = big_pow(q, static_cast<unsigned long>(n));
  num += n % 2 == 0 ? -1 : 1;
  return exact_div(num, BigInt(q) + 1, "field root count");
}

BigInt roots_zmod_prime_power(long p, int m, long n) {
  BigInt lift = big_pow(p, static_cast<unsigned long>((m - 1) * (n - 1)));
  return lift * roots_finite_field(p, n);
}

BigInt roots_truncated_poly(long q, int m, long n) {
  BigInt lift = big_pow(q, static_cast<unsigned long>((m - 1) * (n - 1)));
  return lift * roots_finite_field(q, n);
}

BigInt roots_zmod(long N, long n) {
  if (N < 2) throw DomainError("roots_zmod: modulus must be >= 2");
  BigInt result = 1;
  long rest = N;
  for (long p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    int m = 0;
    while (rest % p == 0) {
      rest /= p;
      ++m;
    }
    result *= roots_zmod_prime_power(p, m, n);
  }
  if (rest > 1) result *= roots_zmod_prime_power(rest, 1, n);
  return result;
}

BigInt quiddity_field(long q, long s, int eps) {
  if (s < 2) {
    throw DomainError("field quiddity count: needs s >= 2, got s = " +
                      std::to_string(s));
  }
  if (s % 2 == 1) {
    BigInt num = big_pow(q, static_cast<unsigned long>(s - 1)) - 1;
    return exact_div(num, BigInt(q) * q - 1, "field quiddity count, odd s");
  }
  long m = s / 2;
  BigInt qm = big_pow(q, static_cast<unsigned long>(m));
  BigInt qm1 = big_pow(q, static_cast<unsigned long>(m - 1));
  BigInt base = exact_div((qm - 1) * (qm1 - 1), BigInt(q) * q - 1,
                          "field quiddity count, even s");
  BigInt bump = qm1;
  bool add_bump;
  if (q % 2 == 0) {
    add_bump = true;  // both signs coincide in characteristic 2
  } else if (eps == -1) {
    add_bump = m % 2 == 1;
  } else {
    add_bump = m % 2 == 0;
  }
  return add_bump ? base + bump : base;
}

BigInt quiddity_pow2_odd(int m, long s) {
  if (s < 5 || s % 2 == 0) {
    throw DomainError("w_s(Z/2^m), odd form: needs odd s >= 5, got s = " +
                      std::to_string(s));
  }
  if (m < 1) throw DomainError("w_s(Z/2^m): needs m >= 1");
  long n = (s - 1) / 2;
  // 2^e (2^{2n+3} - 8) / 3 with e = 2mn - 2n - 2m - 1, possibly negative.
  long e = 2L * m * n - 2 * n - 2 * m - 1;
  BigInt num = big_pow(2, static_cast<unsigned long>(2 * n + 3)) - 8;
  if (e >= 0) {
    num *= big_pow(2, static_cast<unsigned long>(e));
    return exact_div(num, 3, "w_s(Z/2^m), odd form");
  }
  BigInt den = 3 * big_pow(2, static_cast<unsigned long>(-e));
  return exact_div(num, den, "w_s(Z/2^m), odd form");
}

BigInt quiddity_mod4_even(long s, int eps) {
  if (s < 4 || s % 2 == 1) {
    throw DomainError("w_s(Z/4), even form: needs even s >= 4, got s = " +
                      std::to_string(s));
  }
  long half = s / 2;
  BigInt plus = exact_div(
      big_pow(4, static_cast<unsigned long>(s - 2)) +
          big_pow(2, static_cast<unsigned long>(s - 1)),
      3, "w_s(Z/4)");
  BigInt minus = exact_div(
      big_pow(4, static_cast<unsigned long>(s - 2)) -
          big_pow(2, static_cast<unsigned long>(s - 2)),
      3, "w_s(Z/4)");
  // Which target gets which branch flips with the parity of s/2.
  if (half % 2 == 0) return eps == 1 ? plus : minus;
  return eps == 1 ? minus : plus;
}

BigInt quiddity_lifted_odd(long q, int m, long s) {
  if (s < 3 || s % 2 == 0) {
    throw DomainError("lifted odd quiddity count: needs odd s >= 3, got s = " +
                      std::to_string(s));
  }
  if (m < 1) throw DomainError("lifted odd quiddity count: needs m >= 1");
  BigInt num = big_pow(q, static_cast<unsigned long>((s - 2) * m + 1)) -
               big_pow(q, static_cast<unsigned long>((s - 2) * (m - 1)));
  BigInt den = big_pow(q, static_cast<unsigned long>(m - 1)) *
               (BigInt(q) * q - 1);
  return exact_div(num, den, "lifted odd quiddity count");
}

BigInt quiddity_prime_power_even(long p, int m, long s, int eps) {
  if (s < 6 || s % 2 == 1) {
    throw DomainError(
        "prime power quiddity count, even form: needs even s >= 6, got s = " +
        std::to_string(s));
  }
  long n = s - 2;
  long l = n / 2;
  if (p != 2) {
    if (m < 2) {
      throw DomainError("prime power quiddity count: odd p needs m >= 2");
    }
    BigInt lift = big_pow(p, static_cast<unsigned long>((m - 1) * (n - 1)));
    BigInt base = lift * exact_div(
        (big_pow(p, static_cast<unsigned long>(l + 1)) - 1) *
            (big_pow(p, static_cast<unsigned long>(l)) - 1),
        BigInt(p) * p - 1, "prime power quiddity count");
    BigInt geo = exact_div(
        big_pow(p, static_cast<unsigned long>((m - 1) * (n - 1 - l))) - 1,
        big_pow(p, static_cast<unsigned long>(n - 1 - l)) - 1,
        "prime power quiddity count, geometric part");
    BigInt extra = lift * big_pow(p, static_cast<unsigned long>(l)) +
                   geo * big_pow(p, static_cast<unsigned long>(m * l - 1)) *
                       (p - 1);
    if (l % 2 == 0) return eps == 1 ? base : base + extra;
    return eps == 1 ? base + extra : base;
  }
  if (m < 3) {
    throw DomainError(
        "prime power quiddity count: p = 2 needs m >= 3 (m = 2 has its own "
        "form)");
  }
  BigInt lift = big_pow(2, static_cast<unsigned long>((m - 2) * (n - 1)));
  BigInt clean = lift * exact_div(
      big_pow(4, static_cast<unsigned long>(n)) -
          big_pow(2, static_cast<unsigned long>(n)),
      3, "prime power quiddity count, p = 2");
  BigInt geo2 = exact_div(
      big_pow(2, static_cast<unsigned long>((m - 2) * (n - 1 - l))) - 1,
      big_pow(2, static_cast<unsigned long>(n - 1 - l)) - 1,
      "prime power quiddity count, p = 2 geometric part");
  BigInt aug = lift * exact_div(
      big_pow(4, static_cast<unsigned long>(n)) +
          big_pow(2, static_cast<unsigned long>(n + 1)),
      3, "prime power quiddity count, p = 2") +
      geo2 * big_pow(2, static_cast<unsigned long>(m * l - 1));
  if (l % 2 == 0) return eps == 1 ? clean : aug;
  return eps == 1 ? aug : clean;
}

BigInt quiddity_size4_prime_power(long p, int m, int eps) {
  if (m < 2) {
    throw DomainError("w_4(Z/p^m): needs m >= 2 (m = 1 is the field case)");
  }
  BigInt lead = big_pow(p, static_cast<unsigned long>(m - 1));
  if (eps == 1) return lead * (BigInt(p) * (m + 1) - m);
  if (p != 2) return lead * (p - 1);
  if (m == 2) {
    throw DomainError("w_4^{-1}(Z/4) is not covered by this form");
  }
  return big_pow(2, static_cast<unsigned long>(m));
}

bool residue_reduction_applies(long q, long s, int eps) {
  if (s <= 1) return false;
  if (s % 2 == 1) return true;
  if (q % 2 == 0) return false;
  int sign_of_s_half = (s / 2) % 2 == 0 ? 1 : -1;
  return sign_of_s_half != eps;
}

BigInt quiddity_residue_reduction(const LocalParams& params,
                                  const BigInt& residue_count, long s,
                                  int eps) {
  if (s < 3 || !residue_reduction_applies(params.q, s, eps)) {
    throw DomainError("residue reduction out of domain at s = " +
                      std::to_string(s));
  }
  return residue_count * big_pow(params.nonunits,
                                 static_cast<unsigned long>(s - 3));
}

BigInt roots_even_field_other_unit(long q, int m) {
  if (m < 2) {
    throw DomainError("even-length field roots at other units: needs m >= 2");
  }
  BigInt num = (big_pow(q, static_cast<unsigned long>(m + 1)) - 1) *
               (big_pow(q, static_cast<unsigned long>(m)) - 1);
  return exact_div(num, BigInt(q) * q - 1,
                   "even-length field roots at other units");
}

}  // namespace contring
