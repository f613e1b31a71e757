#include "contring/bigint.hpp"

#include "contring/errors.hpp"

namespace contring {

BigInt big_pow(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
  if (den == 0) throw DomainError(std::string(what) + ": division by zero");
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
    throw DomainError(std::string(what) + ": non-exact division " +
                      num.get_str() + " / " + den.get_str());
  }
  BigInt out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

bool is_prime(long v) {
  if (v < 2) return false;
  for (long d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

bool is_prime_power(long v, long* p, int* k) {
  if (v < 2) return false;
  long base = v;
  for (long d = 2; d * d <= base; ++d) {
    if (base % d == 0) {
      base = d;
      break;
    }
  }
  // base is the smallest prime factor of v.
  int exp = 0;
  long rest = v;
  while (rest % base == 0) {
    rest /= base;
    ++exp;
  }
  if (rest != 1) return false;
  if (p) *p = base;
  if (k) *k = exp;
  return true;
}

}  // namespace contring
