#include "crashmod/ntheory.hpp"

#include <array>

namespace crashmod {

Residue::Residue(Bigint v, Bigint m) : value(std::move(v)), modulus(std::move(m)) {
  if (modulus < 2) throw InvalidModulus("Residue: modulus must be >= 2");
  mpz_fdiv_r(value.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
}

Bigint mod_pow(const Bigint& base, const Bigint& exp, const Bigint& m) {
  if (m < 2) throw InvalidModulus("mod_pow: modulus must be >= 2");
  Bigint b = base;
  Bigint e = exp;
  if (e < 0) {
    b = mod_inverse(b, m);
    e = -e;
  }
  Bigint r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

EgcdResult ext_gcd(const Bigint& a, const Bigint& b) {
  if (a == 0 && b == 0) throw Precondition("ext_gcd: gcd(0, 0) is undefined");
  EgcdResult r;
  mpz_gcdext(r.g.get_mpz_t(), r.x.get_mpz_t(), r.y.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

Bigint mod_inverse(const Bigint& a, const Bigint& m) {
  if (m < 2) throw InvalidModulus("mod_inverse: modulus must be >= 2");
  Bigint r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    Bigint g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    throw NotInvertible("mod_inverse: argument shares factor " + g.get_str() +
                            " with modulus",
                        g);
  }
  return r;
}

namespace {

// Deterministic witnesses below this bound decide primality exactly.
const Bigint& deterministic_bound() {
  static const Bigint bound("3317044064679887385961981");
  return bound;
}

constexpr std::array<unsigned, 13> kFixedWitnesses = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// true if `a` proves n composite; n odd, n - 1 = d * 2^s.
bool witness_says_composite(const Bigint& n, const Bigint& a, const Bigint& d,
                            unsigned long s) {
  Bigint base = a % n;
  if (base == 0) return false;
  Bigint x = mod_pow(base, d, n);
  Bigint nm1 = n - 1;
  if (x == 1 || x == nm1) return false;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == nm1) return false;
  }
  return true;
}

// Stable per-n seed so the "random" rounds above the deterministic bound
// give the same verdict every run.
std::uint64_t fold_seed(const Bigint& n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::size_t limbs = mpz_size(n.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i) {
    h ^= static_cast<std::uint64_t>(mpz_getlimbn(n.get_mpz_t(), i));
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

bool is_probable_prime(const Bigint& n, unsigned rounds) {
  if (rounds < 1) throw ValueRange("is_probable_prime: rounds must be >= 1");
  if (n < 2) return false;
  for (unsigned p : {2u,  3u,  5u,  7u,  11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u,
                     41u, 43u, 47u, 53u, 59u, 61u, 67u, 71u, 73u, 79u, 83u, 89u,
                     97u}) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Bigint d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  for (unsigned w : kFixedWitnesses) {
    if (witness_says_composite(n, Bigint(w), d, s)) return false;
  }
  if (n < deterministic_bound()) return true;
  SeededRng rng(fold_seed(n));
  for (unsigned i = 0; i < rounds; ++i) {
    Bigint a = rng.below(n - 3) + 2;  // uniform on [2, n-2]
    if (witness_says_composite(n, a, d, s)) return false;
  }
  return true;
}

Bigint gen_blum_prime(std::size_t bits, SeededRng& rng) {
  if (bits < 4) throw ValueRange("gen_blum_prime: bits must be >= 4");
  while (true) {
    Bigint c = rng.nbits(bits);
    mpz_setbit(c.get_mpz_t(), 0);
    mpz_setbit(c.get_mpz_t(), 1);  // low bits 11 force c == 3 (mod 4)
    if (is_probable_prime(c)) return c;
  }
}

Bigint mont_reduce(const Bigint& a, const Bigint& b, const Bigint& n) {
  if (n < 3 || mpz_even_p(n.get_mpz_t())) {
    throw InvalidModulus("mont_reduce: modulus must be odd and >= 3");
  }
  if (a < 0 || b < 0 || a >= n || b >= n) {
    throw ValueRange("mont_reduce: operands must lie in [0, N)");
  }
  std::size_t nbits = bit_length(n);
  Bigint r = pow2(nbits);
  Bigint nprime = r - mod_inverse(n, r);  // -n^-1 mod R
  Bigint t = a * b;
  Bigint m;
  mpz_fdiv_r_2exp(m.get_mpz_t(), t.get_mpz_t(), nbits);
  m *= nprime;
  mpz_fdiv_r_2exp(m.get_mpz_t(), m.get_mpz_t(), nbits);
  Bigint s = t + m * n;
  mpz_fdiv_q_2exp(s.get_mpz_t(), s.get_mpz_t(), nbits);
  if (s >= n) s -= n;
  return s;
}

}  // namespace crashmod
