#include "crashmod/factor.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>
#include <numeric>
#include <vector>

#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"

namespace crashmod {

FactorBudget FactorBudget::unlimited_budget() {
  FactorBudget b;
  b.unlimited = true;
  return b;
}

FactorBudget FactorBudget::wall_ms(std::int64_t ms) {
  FactorBudget b;
  b.wall_limit = std::chrono::milliseconds(ms);
  return b;
}

FactorBudget FactorBudget::ops(std::uint64_t limit) {
  FactorBudget b;
  b.op_limit = limit;
  return b;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kBound = 1'000'000;
    std::vector<bool> composite(kBound, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < kBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < kBound; j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

bool is_square_free(const Factorization& fact) {
  return std::all_of(fact.factors.begin(), fact.factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct BudgetExhausted {};

// Cooperative budget enforcement. Group operations are counted always; in
// wall mode the clock is consulted only every check_interval operations,
// in op mode the counter itself is the limit (bit-for-bit reproducible).
class BudgetClock {
 public:
  explicit BudgetClock(const FactorBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {
    if (!budget_.unlimited && !budget_.op_limit) {
      deadline_ = start_ + budget_.wall_limit;
      interval_ = std::max<u64>(budget_.check_interval, 1);
      next_check_ = interval_;
    }
  }

  void spend(u64 cost = 1) {
    ops_ += cost;
    if (budget_.unlimited) return;
    if (budget_.op_limit) {
      if (ops_ > *budget_.op_limit) throw BudgetExhausted{};
      return;
    }
    if (ops_ >= next_check_) {
      next_check_ = ops_ + interval_;
      if (std::chrono::steady_clock::now() >= deadline_) {
        throw BudgetExhausted{};
      }
    }
  }

  // Immediate check, used at entry and phase boundaries.
  void checkpoint() const {
    if (budget_.unlimited) return;
    if (budget_.op_limit) {
      if (ops_ > *budget_.op_limit) throw BudgetExhausted{};
      return;
    }
    if (std::chrono::steady_clock::now() >= deadline_) throw BudgetExhausted{};
  }

  u64 ops() const { return ops_; }
  std::chrono::duration<double, std::milli> elapsed() const {
    return std::chrono::steady_clock::now() - start_;
  }

 private:
  const FactorBudget& budget_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point deadline_;
  u64 interval_ = 0;
  u64 next_check_ = 0;
  u64 ops_ = 0;
};

u64 mulmod64(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for the whole 64-bit range with this witness set.
bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Deterministic rho increment schedule; never 0 so x^2 + c stays nontrivial.
u64 rho_increment(u64 seed, u64 level) {
  u64 z = (seed + level) * 0x9E3779B97F4A7C15ULL + 1;
  z ^= z >> 29;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 32;
  return (z % 0x7FFFFFFF) + 1;
}

// x^2 + c mod n without intermediate overflow (n may be close to 2^64).
u64 rho_step_u64(u64 x, u64 c, u64 n) {
  u64 t = mulmod64(x, x, n);
  u64 sum = t + c;  // c < n, t < n: real sum < 2n, may wrap
  return (sum < t || sum >= n) ? sum - n : sum;
}

// Brent's cycle-finding rho with batched gcds. Returns a nontrivial factor
// of odd composite n, or 0 when this increment degenerates.
u64 brent_rho_u64(u64 n, u64 c, BudgetClock& clock) {
  const u64 batch = 128;
  u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
  c %= n;
  if (c == 0) c = 1;
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = rho_step_u64(y, c, n);
    clock.spend(r);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      u64 lim = std::min(batch, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = rho_step_u64(y, c, n);
        q = mulmod64(q, x > y ? x - y : y - x, n);
      }
      clock.spend(2 * lim);
      g = std::gcd(q, n);
      k += lim;
    }
    r <<= 1;
  }
  if (g == n) {
    // batched gcd overshot the first factor; replay one step at a time
    g = 1;
    while (g == 1) {
      ys = rho_step_u64(ys, c, n);
      clock.spend(1);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    }
  }
  return g == n ? 0 : g;
}

void record(std::map<Bigint, unsigned>& acc, const Bigint& p, unsigned e) {
  acc[p] += e;
}

void factor_u64(u64 n, unsigned mult, std::map<Bigint, unsigned>& acc,
                BudgetClock& clock, u64 rho_seed);

// Splits off perfect-power structure; returns true if n was decomposed.
bool split_perfect_power_u64(u64 n, unsigned mult,
                             std::map<Bigint, unsigned>& acc,
                             BudgetClock& clock, u64 rho_seed) {
  Bigint big(n);
  if (mpz_perfect_power_p(big.get_mpz_t()) == 0) return false;
  for (unsigned k = 2; k <= 63; ++k) {
    Bigint root;
    if (mpz_root(root.get_mpz_t(), big.get_mpz_t(), k) != 0) {
      factor_u64(to_u64(root), mult * k, acc, clock, rho_seed);
      return true;
    }
  }
  return false;
}

void factor_u64(u64 n, unsigned mult, std::map<Bigint, unsigned>& acc,
                BudgetClock& clock, u64 rho_seed) {
  const auto& primes = small_primes();
  for (u64 p : primes) {
    if (p * p > n) break;
    clock.spend(1);
    while (n % p == 0) {
      n /= p;
      record(acc, Bigint(p), mult);
    }
  }
  if (n == 1) return;
  clock.spend(48);  // primality certification below is ~12 exponentiations
  if (is_prime_u64(n)) {
    record(acc, Bigint(n), mult);
    return;
  }
  if (split_perfect_power_u64(n, mult, acc, clock, rho_seed)) return;
  for (u64 level = 0;; ++level) {
    clock.checkpoint();
    u64 f = brent_rho_u64(n, rho_increment(rho_seed, level), clock);
    if (f != 0) {
      factor_u64(f, mult, acc, clock, rho_seed);
      factor_u64(n / f, mult, acc, clock, rho_seed);
      return;
    }
  }
}

// Products of sieve-prime blocks, built once; gcd against a candidate pulls
// out every small factor in a couple hundred bignum gcds.
struct PrimeBlock {
  std::size_t first = 0;
  std::size_t count = 0;
  Bigint product;
};

const std::vector<PrimeBlock>& prime_blocks() {
  static const std::vector<PrimeBlock> blocks = [] {
    const auto& primes = small_primes();
    constexpr std::size_t kBlock = 512;
    std::vector<PrimeBlock> out;
    for (std::size_t i = 0; i < primes.size(); i += kBlock) {
      PrimeBlock b;
      b.first = i;
      b.count = std::min(kBlock, primes.size() - i);
      b.product = 1;
      for (std::size_t j = i; j < i + b.count; ++j) b.product *= primes[j];
      out.push_back(std::move(b));
    }
    return out;
  }();
  return blocks;
}

// Pollard p-1, stage 1 with bound b1. Returns a factor or 0.
Bigint pollard_pm1(const Bigint& n, std::uint32_t b1, BudgetClock& clock) {
  const auto& primes = small_primes();
  Bigint a = 2;
  for (std::uint32_t p : primes) {
    if (p > b1) break;
    u64 pe = p;
    while (pe <= b1 / p) pe *= p;
    a = mod_pow(a, Bigint(pe), n);
    clock.spend(64 - std::countl_zero(pe));
    if (a == 0) return 0;
  }
  Bigint g;
  Bigint am1 = a - 1;
  mpz_gcd(g.get_mpz_t(), am1.get_mpz_t(), n.get_mpz_t());
  if (g > 1 && g < n) return g;
  return 0;
}

// Brent rho on bignums, batched gcd, same contract as the u64 variant.
Bigint brent_rho_mpz(const Bigint& n, u64 c_raw, BudgetClock& clock) {
  const u64 batch = 128;
  Bigint c(c_raw);
  Bigint y = 2, q = 1, g = 1, x, ys;
  u64 r = 1;
  auto step = [&](Bigint& v) {
    v = v * v + c;
    v %= n;
  };
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) step(y);
    clock.spend(r);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      u64 lim = std::min(batch, r - k);
      for (u64 i = 0; i < lim; ++i) {
        step(y);
        Bigint d = x - y;
        if (d < 0) d = -d;
        q = (q * d) % n;
      }
      clock.spend(2 * lim);
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
    }
    r <<= 1;
  }
  if (g == n) {
    g = 1;
    while (g == 1) {
      step(ys);
      clock.spend(1);
      Bigint d = x - ys;
      if (d < 0) d = -d;
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    }
  }
  if (g == n) return 0;
  return g;
}

constexpr std::uint32_t kPm1Bounds[] = {2'000, 50'000, 500'000};

void factor_core(const Bigint& input, unsigned mult,
                 std::map<Bigint, unsigned>& acc, BudgetClock& clock,
                 u64 rho_seed);

void split_hard(const Bigint& n, unsigned mult, std::map<Bigint, unsigned>& acc,
                BudgetClock& clock, u64 rho_seed) {
  // n odd, composite, no factor < 10^6, not a perfect power, above 64 bits
  for (u64 level = 0;; ++level) {
    clock.checkpoint();
    if (level < std::size(kPm1Bounds)) {
      Bigint f = pollard_pm1(n, kPm1Bounds[level], clock);
      if (f != 0) {
        factor_core(f, mult, acc, clock, rho_seed);
        factor_core(n / f, mult, acc, clock, rho_seed);
        return;
      }
    }
    Bigint f = brent_rho_mpz(n, rho_increment(rho_seed, level), clock);
    if (f != 0) {
      factor_core(f, mult, acc, clock, rho_seed);
      factor_core(n / f, mult, acc, clock, rho_seed);
      return;
    }
  }
}

void factor_core(const Bigint& input, unsigned mult,
                 std::map<Bigint, unsigned>& acc, BudgetClock& clock,
                 u64 rho_seed) {
  if (input == 1) return;
  if (bit_length(input) <= 64) {
    factor_u64(to_u64(input), mult, acc, clock, rho_seed);
    return;
  }
  Bigint n = input;
  // trial division via block gcds
  for (const auto& block : prime_blocks()) {
    clock.spend(block.count / 8);
    Bigint g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), block.product.get_mpz_t());
    if (g == 1) continue;
    const auto& primes = small_primes();
    for (std::size_t j = block.first; j < block.first + block.count; ++j) {
      std::uint32_t p = primes[j];
      if (!mpz_divisible_ui_p(g.get_mpz_t(), p)) continue;
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      record(acc, Bigint(p), mult * e);
    }
    if (bit_length(n) <= 64) {
      factor_u64(to_u64(n), mult, acc, clock, rho_seed);
      return;
    }
  }
  if (n == 1) return;
  clock.spend(256);
  if (is_probable_prime(n)) {
    record(acc, n, mult);
    return;
  }
  // perfect powers: take the smallest exact root and recurse
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long k = 2; k <= bit_length(n); ++k) {
      Bigint root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        factor_core(root, mult * static_cast<unsigned>(k), acc, clock,
                    rho_seed);
        return;
      }
    }
  }
  split_hard(n, mult, acc, clock, rho_seed);
}

}  // namespace

FactorOutcome factorize(const Bigint& n, const FactorBudget& budget) {
  if (n < 2) throw ValueRange("factorize: n must be >= 2");
  BudgetClock clock(budget);
  FactorOutcome out;
  std::map<Bigint, unsigned> acc;
  try {
    clock.checkpoint();  // a zero budget times out before any work
    factor_core(n, 1, acc, clock, budget.rho_seed);
    std::vector<PrimePower> fs;
    fs.reserve(acc.size());
    Bigint check = 1;
    for (const auto& [p, e] : acc) {
      fs.push_back(PrimePower{p, e});
      for (unsigned i = 0; i < e; ++i) check *= p;
    }
    if (check != n) {
      throw std::logic_error("factorize: internal product mismatch");
    }
    out.factorization = Factorization::from_factors(std::move(fs));
    out.status = FactorStatus::Complete;
  } catch (const BudgetExhausted&) {
    out.status = FactorStatus::TimedOut;
  }
  out.elapsed = clock.elapsed();
  out.ops = clock.ops();
  return out;
}

}  // namespace crashmod
