#include "crashmod/sqroots.hpp"

#include <algorithm>
#include <utility>

namespace crashmod {

namespace {

Bigint reduce(const Bigint& v, const Bigint& m) {
  Bigint r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

Bigint int_pow(const Bigint& base, unsigned long e) {
  Bigint r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

RootSet pair_set(Bigint r, Bigint m) {
  Bigint other = m - r;
  RootSet out{std::move(m), {}};
  if (other < r) std::swap(r, other);
  out.roots.push_back(std::move(r));
  out.roots.push_back(std::move(other));
  return out;
}

void require_odd_prime_base(const PrimePower& pp, const char* who) {
  if (pp.prime < 3 || mpz_even_p(pp.prime.get_mpz_t())) {
    throw Precondition(std::string(who) + ": prime must be odd and >= 3");
  }
  if (pp.exponent < 1) {
    throw Precondition(std::string(who) + ": exponent must be >= 1");
  }
}

}  // namespace

Bigint PrimePower::value() const { return int_pow(prime, exponent); }

Factorization Factorization::from_factors(std::vector<PrimePower> factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].prime < 2) {
      throw Precondition("Factorization: prime must be >= 2");
    }
    if (factors[i].exponent < 1) {
      throw Precondition("Factorization: exponent must be >= 1");
    }
    if (i > 0 && factors[i - 1].prime >= factors[i].prime) {
      throw Precondition("Factorization: primes must be strictly increasing");
    }
  }
  Factorization f;
  f.factors = std::move(factors);
  return f;
}

Bigint Factorization::value() const {
  Bigint v = 1;
  for (const auto& pp : factors) v *= pp.value();
  return v;
}

bool Factorization::has_even_prime() const {
  return !factors.empty() && factors.front().prime == 2;
}

RootSet sqrt_prime_3mod4(const Bigint& c, const Bigint& p) {
  if (p < 3 || p % 4 != 3) {
    throw Precondition("sqrt_prime_3mod4: p must be a prime == 3 (mod 4)");
  }
  Bigint cc = reduce(c, p);
  if (cc == 0) throw Precondition("sqrt_prime_3mod4: c must be a unit mod p");
  Bigint r = mod_pow(cc, (p + 1) / 4, p);
  if ((r * r) % p != cc) return RootSet{p, {}};  // non-residue
  return pair_set(std::move(r), p);
}

RootSet tonelli_shanks(const Bigint& c, const Bigint& p) {
  if (p < 3 || mpz_even_p(p.get_mpz_t())) {
    throw InvalidModulus("tonelli_shanks: modulus must be an odd prime");
  }
  Bigint cc = reduce(c, p);
  if (cc == 0) throw Precondition("tonelli_shanks: c must be a unit mod p");

  Bigint pm1 = p - 1;
  unsigned long s = mpz_scan1(pm1.get_mpz_t(), 0);
  Bigint t = pm1 >> s;

  // Euler's criterion via s-1 squarings of c^t, which we need anyway.
  Bigint ct = mod_pow(cc, t, p);
  Bigint euler = ct;
  for (unsigned long i = 1; i < s; ++i) euler = (euler * euler) % p;
  if (euler == pm1) return RootSet{p, {}};
  if (euler != 1) {
    throw InvalidModulus("tonelli_shanks: Euler criterion inconclusive, modulus is composite");
  }

  Bigint r = mod_pow(cc, (t + 1) / 2, p);
  Bigint tt = ct;
  if (tt != 1) {
    // Non-residue search, deferred to the path that needs it: for
    // p == 3 (mod 4) the loop above never runs.
    Bigint v = 2;
    while (true) {
      if (v >= p) {
        throw InvalidModulus("tonelli_shanks: no non-residue found, modulus is composite");
      }
      Bigint e = mod_pow(v, pm1 / 2, p);
      if (e == pm1) break;
      if (e != 1) {
        throw InvalidModulus("tonelli_shanks: Euler criterion inconclusive, modulus is composite");
      }
      ++v;
    }
    Bigint g = mod_pow(v, t, p);  // generates the 2-Sylow subgroup
    unsigned long m = s;
    while (tt != 1) {
      // least i with tt^(2^i) == 1
      unsigned long i = 0;
      Bigint probe = tt;
      while (probe != 1) {
        probe = (probe * probe) % p;
        if (++i >= m) {
          throw InvalidModulus("tonelli_shanks: order structure broken, modulus is composite");
        }
      }
      Bigint b = g;
      for (unsigned long j = 0; j + i + 1 < m; ++j) b = (b * b) % p;
      g = (b * b) % p;
      tt = (tt * g) % p;
      r = (r * b) % p;
      m = i;
    }
  }
  return pair_set(std::move(r), p);
}

Residue hensel_lift(const Residue& root, const Bigint& c, const Bigint& p,
                    unsigned target_exp) {
  if (p < 3 || mpz_even_p(p.get_mpz_t())) {
    throw Precondition("hensel_lift: p must be an odd prime");
  }
  // recover the current level k from root.modulus = p^k
  unsigned level = 0;
  {
    Bigint m = root.modulus;
    while (m % p == 0) {
      m /= p;
      ++level;
    }
    if (m != 1 || level == 0) {
      throw Precondition("hensel_lift: root modulus is not a power of p");
    }
  }
  if (target_exp < level) {
    throw Precondition("hensel_lift: target exponent below the root's level");
  }
  if (reduce(root.value * root.value - c, root.modulus) != 0) {
    throw Precondition("hensel_lift: root does not solve x^2 = c at its level");
  }
  if (root.value % p == 0) {
    throw NonSimpleRoot("hensel_lift: derivative 2x vanishes mod p");
  }

  Bigint x = root.value;
  unsigned have = level;
  while (have < target_exp) {
    // each Newton step doubles the precision, capped at the target
    unsigned step = std::min(have, target_exp - have);
    unsigned next = have + step;
    Bigint mod_next = int_pow(p, next);
    Bigint fx = reduce(x * x - c, mod_next);
    Bigint inv = mod_inverse(reduce(2 * x, mod_next), mod_next);
    x = reduce(x - fx * inv, mod_next);
    have = next;
  }
  return Residue(std::move(x), int_pow(p, target_exp));
}

RootSet sqrt_prime_power_unit(const Bigint& c, const PrimePower& pp) {
  require_odd_prime_base(pp, "sqrt_prime_power_unit");
  Bigint m = pp.value();
  Bigint cc = reduce(c, m);
  if (cc % pp.prime == 0) {
    throw Precondition("sqrt_prime_power_unit: c must be a unit mod p");
  }
  Bigint r;
  if (pp.prime % 4 == 3) {
    // closed form: phi(p^e) + 2 is divisible by 4 exactly when p == 3 (mod 4)
    Bigint phi = int_pow(pp.prime, pp.exponent - 1) * (pp.prime - 1);
    r = mod_pow(cc, (phi + 2) / 4, m);
    if ((r * r) % m != cc) return RootSet{std::move(m), {}};
  } else {
    RootSet base = tonelli_shanks(cc, pp.prime);
    if (base.roots.empty()) return RootSet{std::move(m), {}};
    if (pp.exponent == 1) {
      r = base.roots.front();
    } else {
      r = hensel_lift(Residue(base.roots.front(), pp.prime), cc, pp.prime,
                      pp.exponent)
              .value;
    }
  }
  return pair_set(std::move(r), std::move(m));
}

RootSet roots_zero(const PrimePower& pp, std::size_t limit) {
  require_odd_prime_base(pp, "roots_zero");
  Bigint count = int_pow(pp.prime, pp.exponent / 2);
  if (count > limit) {
    throw RootOverflow("roots_zero: root count exceeds enumeration limit",
                       count);
  }
  Bigint step = int_pow(pp.prime, (pp.exponent + 1) / 2);
  RootSet out{pp.value(), {}};
  unsigned long n = count.get_ui();
  out.roots.reserve(n);
  Bigint x = 0;
  for (unsigned long k = 0; k < n; ++k) {
    out.roots.push_back(x);
    x += step;
  }
  return out;
}

RootSet roots_ramified(const Bigint& c, const PrimePower& pp,
                       std::size_t limit) {
  require_odd_prime_base(pp, "roots_ramified");
  Bigint m = pp.value();
  Bigint cc = reduce(c, m);
  if (cc == 0) {
    throw Precondition("roots_ramified: c is 0 mod p^e, use roots_zero");
  }
  Bigint a = cc;
  unsigned long l =
      mpz_remove(a.get_mpz_t(), a.get_mpz_t(), pp.prime.get_mpz_t());
  if (l == 0 || l >= pp.exponent) {
    throw Precondition("roots_ramified: valuation must satisfy 0 < l < e");
  }
  RootSet out{std::move(m), {}};
  if (l % 2 != 0) return out;  // odd valuation: no square preimage

  PrimePower unit_part{pp.prime, pp.exponent - static_cast<unsigned>(l)};
  RootSet ys = sqrt_prime_power_unit(a, unit_part);
  if (ys.roots.empty()) return out;

  Bigint half_count = int_pow(pp.prime, l / 2);
  Bigint count = 2 * half_count;
  if (count > limit) {
    throw RootOverflow("roots_ramified: root count exceeds enumeration limit",
                       count);
  }
  Bigint scale = half_count;                            // p^(l/2)
  Bigint stride = int_pow(pp.prime, pp.exponent - l / 2);  // p^(e - l/2)
  unsigned long per_branch = half_count.get_ui();
  out.roots.reserve(2 * per_branch);
  for (const Bigint& y : ys.roots) {
    Bigint x = y * scale;
    for (unsigned long k = 0; k < per_branch; ++k) {
      out.roots.push_back(x);
      x += stride;
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

RootSet roots_prime_power(const Bigint& c, const PrimePower& pp,
                          std::size_t limit) {
  require_odd_prime_base(pp, "roots_prime_power");
  Bigint m = pp.value();
  Bigint cc = reduce(c, m);
  if (cc == 0) return roots_zero(pp, limit);
  if (cc % pp.prime == 0) return roots_ramified(cc, pp, limit);
  return sqrt_prime_power_unit(cc, pp);
}

Bigint count_roots(const Bigint& c, const Factorization& fact) {
  if (fact.has_even_prime()) return 0;
  Bigint total = 1;
  for (const auto& pp : fact.factors) {
    Bigint m = pp.value();
    Bigint cc = reduce(c, m);
    if (cc == 0) {
      total *= int_pow(pp.prime, pp.exponent / 2);
      continue;
    }
    Bigint a = cc;
    unsigned long l =
        mpz_remove(a.get_mpz_t(), a.get_mpz_t(), pp.prime.get_mpz_t());
    if (l == 0) {
      total *= 2;
    } else if (l % 2 != 0) {
      return 0;  // no local solution, hence none globally
    } else {
      total *= 2 * int_pow(pp.prime, l / 2);
    }
  }
  return total;
}

namespace {

// False only when the unit part of c mod p^e is a non-residue; the counting
// formula cannot see that case, so the enumeration guard checks it before
// declaring an overflow.
bool locally_solvable(const Bigint& c, const PrimePower& pp) {
  Bigint cc = reduce(c, pp.value());
  if (cc == 0) return true;
  Bigint a = cc;
  mpz_remove(a.get_mpz_t(), a.get_mpz_t(), pp.prime.get_mpz_t());
  Bigint e = mod_pow(a, (pp.prime - 1) / 2, pp.prime);
  return e == 1;
}

}  // namespace

RootSet all_roots_mod(const Bigint& c, const Factorization& fact,
                      std::size_t limit) {
  RootSet out{fact.value(), {}};
  if (fact.has_even_prime()) return out;  // candidate rejection, by design
  if (fact.factors.empty()) {
    out.roots.push_back(Bigint(0));  // modulus 1
    return out;
  }

  Bigint total = count_roots(c, fact);
  if (total == 0) return out;  // odd valuation at some prime
  if (total > limit) {
    for (const auto& pp : fact.factors) {
      if (!locally_solvable(c, pp)) return out;
    }
    throw RootOverflow("all_roots_mod: root count exceeds enumeration limit",
                       total);
  }

  std::vector<RootSet> locals;
  locals.reserve(fact.factors.size());
  std::size_t combined = 1;
  for (const auto& pp : fact.factors) {
    RootSet rs = roots_prime_power(c, pp, limit);
    if (rs.roots.empty()) return out;
    combined *= rs.roots.size();
    locals.push_back(std::move(rs));
  }

  // CRT coefficients: coeff_j = (N/m_j) * ((N/m_j)^-1 mod m_j)
  std::vector<Bigint> coeff(locals.size());
  for (std::size_t j = 0; j < locals.size(); ++j) {
    const Bigint& mj = locals[j].modulus;
    Bigint nj = out.modulus / mj;
    coeff[j] = (nj * mod_inverse(nj % mj, mj)) % out.modulus;
  }

  out.roots.reserve(combined);
  std::vector<std::size_t> idx(locals.size(), 0);
  std::vector<Bigint> prefix(locals.size() + 1);
  prefix[0] = 0;
  // odometer over local root tuples, keeping partial CRT sums per digit
  std::size_t pos = 0;
  while (true) {
    for (; pos < locals.size(); ++pos) {
      prefix[pos + 1] =
          (prefix[pos] + coeff[pos] * locals[pos].roots[idx[pos]]) % out.modulus;
    }
    out.roots.push_back(prefix[locals.size()]);
    // advance the odometer
    std::size_t j = locals.size();
    while (j > 0 && ++idx[j - 1] == locals[j - 1].roots.size()) {
      idx[j - 1] = 0;
      --j;
    }
    if (j == 0) break;
    pos = j - 1;
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace crashmod
