#pragma once

#include <cstddef>
#include <vector>

#include "crashmod/bigint.hpp"
#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"

namespace crashmod {

// p^e with p prime and e >= 1. The square-root routines additionally
// require p odd; factorizations containing 2 are representable but produce
// an empty root set at the top level.
struct PrimePower {
  Bigint prime;
  unsigned exponent = 1;

  Bigint value() const;
};

// Factorization of a positive integer: strictly increasing primes with
// positive exponents. An empty factor list represents 1.
struct Factorization {
  std::vector<PrimePower> factors;

  // Validates ordering, distinctness and positive exponents (primality is
  // the producer's responsibility). Throws Precondition on violation.
  static Factorization from_factors(std::vector<PrimePower> factors);

  Bigint value() const;
  std::size_t omega() const { return factors.size(); }
  bool has_even_prime() const;
};

// All solutions of x^2 == c (mod modulus), sorted ascending, deduplicated.
// An empty `roots` means c has no square root.
struct RootSet {
  Bigint modulus;
  std::vector<Bigint> roots;
};

// Enumeration guard for the degenerate branches, where root counts grow
// like p^(e/2). Anything above this throws RootOverflow instead of
// allocating.
inline constexpr std::size_t kDefaultRootLimit = std::size_t{1} << 20;

// Square roots of c modulo a prime p == 3 (mod 4), via c^((p+1)/4).
// Requires gcd(c, p) == 1. Empty set when c is a non-residue.
RootSet sqrt_prime_3mod4(const Bigint& c, const Bigint& p);

// Square roots of c modulo an odd prime p (any residue class of p), via
// Tonelli-Shanks. Requires gcd(c, p) == 1. Empty when c is a non-residue.
// Throws InvalidModulus if p behaves compositely along the way.
RootSet tonelli_shanks(const Bigint& c, const Bigint& p);

// Lifts a simple root of x^2 == c from modulus p^k (taken from
// `root.modulus`, which must be a power of p) up to p^target_exp.
// Throws NonSimpleRoot when the root is divisible by p, Precondition when
// root^2 != c mod p^k or target_exp < k.
Residue hensel_lift(const Residue& root, const Bigint& c, const Bigint& p,
                    unsigned target_exp);

// Square roots of a unit c modulo p^e, p odd. For p == 3 (mod 4) uses the
// closed form +-c^((phi(p^e)+2)/4); otherwise Tonelli-Shanks mod p followed
// by Hensel lifting. Exactly 0 or 2 roots.
RootSet sqrt_prime_power_unit(const Bigint& c, const PrimePower& pp);

// Square roots of 0 modulo p^e: the multiples of p^ceil(e/2). Exactly
// p^floor(e/2) roots.
RootSet roots_zero(const PrimePower& pp, std::size_t limit = kDefaultRootLimit);

// Square roots of c == a*p^l (gcd(a, p) == 1, 0 < l < e) modulo p^e.
// Empty when l is odd or a is a non-residue; otherwise exactly 2*p^(l/2)
// roots of the form (y + k*p^(e - l/2)) * p^(l/2).
RootSet roots_ramified(const Bigint& c, const PrimePower& pp,
                       std::size_t limit = kDefaultRootLimit);

// Dispatches on the valuation of c mod p^e: unit, ramified or zero.
RootSet roots_prime_power(const Bigint& c, const PrimePower& pp,
                          std::size_t limit = kDefaultRootLimit);

// Number of square roots of c modulo value(fact), assuming c is a square
// with the stated factorization shape; returns 0 when some local branch is
// unsolvable for valuation reasons (odd l). For unit classes this counts 2
// without a residuosity check, so it is an upper bound that is exact
// whenever c actually has roots. Exact arithmetic, never enumerates.
Bigint count_roots(const Bigint& c, const Factorization& fact);

// All square roots of c modulo value(fact) by local solutions plus CRT.
// Factorizations containing the prime 2 yield an empty set (the attack
// never needs even moduli; candidate moduli preserve parity). Throws
// RootOverflow when the combined count exceeds `limit`.
RootSet all_roots_mod(const Bigint& c, const Factorization& fact,
                      std::size_t limit = kDefaultRootLimit);

}  // namespace crashmod
