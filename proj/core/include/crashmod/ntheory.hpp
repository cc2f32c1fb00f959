#pragma once

#include "crashmod/bigint.hpp"
#include "crashmod/errors.hpp"
#include "crashmod/rng.hpp"

namespace crashmod {

// A value together with the modulus it lives under. Construction reduces
// into [0, modulus). modulus must be >= 2.
struct Residue {
  Residue(Bigint v, Bigint m);

  Bigint value;
  Bigint modulus;
};

struct EgcdResult {
  Bigint g;  // gcd(a, b), nonnegative
  Bigint x;  // a*x + b*y == g
  Bigint y;
};

// base^exp mod m. Negative exponents invert the base first (throws
// NotInvertible when gcd(base, m) > 1). m must be >= 2.
Bigint mod_pow(const Bigint& base, const Bigint& exp, const Bigint& m);

// Extended Euclid. g is always >= 0 and the Bezout identity holds exactly.
EgcdResult ext_gcd(const Bigint& a, const Bigint& b);

// a^-1 mod m, in [0, m). Throws NotInvertible (carrying the gcd) when a and
// m share a factor; InvalidModulus when m < 2.
Bigint mod_inverse(const Bigint& a, const Bigint& m);

// Miller-Rabin. Deterministic witness set below 3317044064679887385961981;
// above that, the 13 fixed witnesses plus `rounds` bases derived from n
// itself, so the answer is reproducible. rounds >= 1.
bool is_probable_prime(const Bigint& n, unsigned rounds = 40);

// Random prime p with exactly `bits` bits and p % 4 == 3. bits >= 4.
Bigint gen_blum_prime(std::size_t bits, SeededRng& rng);

// Montgomery product: a*b*R^-1 mod n with R = 2^bit_length(n).
// Requires n odd >= 3 and 0 <= a, b < n.
Bigint mont_reduce(const Bigint& a, const Bigint& b, const Bigint& n);

}  // namespace crashmod
