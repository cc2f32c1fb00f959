#pragma once

#include <cstddef>

#include "crashmod/bigint.hpp"
#include "crashmod/rng.hpp"
#include "crashmod/sqroots.hpp"

namespace crashmod {

// Rabin key: n = p*q with p < q, both primes congruent 3 mod 4.
struct RabinKeyPair {
  Bigint n;
  Bigint p;
  Bigint q;
  std::size_t n_bits = 0;

  // Validates primality, the 3 mod 4 condition and distinctness; orders the
  // factors. Throws Precondition on violation.
  static RabinKeyPair from_primes(Bigint p, Bigint q);
};

// Fresh key with n exactly `bits` bits (even, >= 16), both primes bits/2.
RabinKeyPair keygen(std::size_t bits, SeededRng& rng);

// m^2 mod n. Requires 0 <= m < n and n >= 2.
Bigint encrypt(const Bigint& m, const Bigint& n);

// The square roots of c modulo n: four for gcd(c, n) == 1, fewer in the
// degenerate classes, empty for non-residues.
RootSet decrypt(const Bigint& c, const RabinKeyPair& key);

}  // namespace crashmod
