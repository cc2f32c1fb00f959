#include "crashmod/rabin.hpp"

#include <utility>

#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"

namespace crashmod {

RabinKeyPair RabinKeyPair::from_primes(Bigint p, Bigint q) {
  if (p == q) throw Precondition("RabinKeyPair: primes must be distinct");
  if (p % 4 != 3 || q % 4 != 3) {
    throw Precondition("RabinKeyPair: primes must be == 3 (mod 4)");
  }
  if (!is_probable_prime(p) || !is_probable_prime(q)) {
    throw Precondition("RabinKeyPair: both factors must be prime");
  }
  if (p > q) std::swap(p, q);
  RabinKeyPair key;
  key.n = p * q;
  key.n_bits = bit_length(key.n);
  key.p = std::move(p);
  key.q = std::move(q);
  return key;
}

RabinKeyPair keygen(std::size_t bits, SeededRng& rng) {
  if (bits < 16 || bits % 2 != 0) {
    throw ValueRange("keygen: bits must be even and >= 16");
  }
  while (true) {
    Bigint p = gen_blum_prime(bits / 2, rng);
    Bigint q = gen_blum_prime(bits / 2, rng);
    if (p == q) continue;
    if (bit_length(p * q) != bits) continue;
    return RabinKeyPair::from_primes(std::move(p), std::move(q));
  }
}

Bigint encrypt(const Bigint& m, const Bigint& n) {
  if (n < 2) throw InvalidModulus("encrypt: modulus must be >= 2");
  if (m < 0 || m >= n) throw ValueRange("encrypt: message must lie in [0, N)");
  return (m * m) % n;
}

RootSet decrypt(const Bigint& c, const RabinKeyPair& key) {
  auto fact = Factorization::from_factors(
      {PrimePower{key.p, 1}, PrimePower{key.q, 1}});
  return all_roots_mod(c, fact);
}

}  // namespace crashmod
