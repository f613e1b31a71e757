#pragma once

#include <gmpxx.h>

#include <string>

namespace contring {

// All counts are exact, unbounded integers.
using BigInt = mpz_class;

BigInt big_pow(const BigInt& base, unsigned long exp);

// Division that must leave no remainder. Throws DomainError naming `what`
// otherwise.
BigInt exact_div(const BigInt& num, const BigInt& den, const char* what);

bool is_prime(long v);

// True when v = p^k with p prime, k >= 1; fills p and k when requested.
bool is_prime_power(long v, long* p = nullptr, int* k = nullptr);

}  // namespace contring
