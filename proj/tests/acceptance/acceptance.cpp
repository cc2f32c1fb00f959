// Acceptance gate: eight numbered end-to-end checks, each printing exactly
// one line
//
//   PASS criterion N: <measured quantities>
//   FAIL criterion N: <what diverged>
//
// Every tolerance and workload bound is pinned as a constant next to the
// check that uses it. Run everything, or a single criterion with --only N.
// The process exits nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <exception>
#include <numbers>
#include <string>
#include <vector>

#include "crashmod/attack.hpp"
#include "crashmod/campaign.hpp"
#include "crashmod/errors.hpp"
#include "crashmod/factor.hpp"
#include "crashmod/ntheory.hpp"
#include "crashmod/protocols.hpp"
#include "crashmod/rabin.hpp"
#include "crashmod/rng.hpp"
#include "crashmod/sqroots.hpp"

namespace {

using namespace crashmod;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string strfmt(const char* fmt, ...) {
  char buf[2048];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::uint64_t upow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

// base^exp mod m for m < 2^32, so intermediate products stay in 64 bits
std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp,
                         std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

bool roots_equal(const RootSet& rs, const std::vector<std::uint32_t>& want) {
  if (rs.roots.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (to_u64(rs.roots[i]) != want[i]) return false;
  return true;
}

std::vector<std::uint32_t> odd_primes_upto(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    if (i > 2) primes.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i)
      composite[j] = true;
  }
  return primes;
}

// Closed-form local root count modulo p^e (p odd, c reduced): p^floor(e/2)
// for the zero class, 0 for odd valuation or a non-residue unit part, else
// 2*p^(l/2) with the residuosity settled by Euler's criterion. Computed in
// plain 64-bit arithmetic, independent of the library's solvers.
std::uint64_t local_count_closed_form(std::uint32_t c, std::uint32_t p,
                                      unsigned e, std::uint32_t pe) {
  if (c == 0) return upow(p, e / 2);
  unsigned l = 0;
  while (c % p == 0) {
    c /= p;
    ++l;
  }
  if (l % 2 == 1) return 0;
  if (powmod_u64(c % p, (p - 1) / 2, p) != 1) return 0;
  return 2 * upow(p, l / 2);
}

// criterion 1 -------------------------------------------------------------
// For every odd modulus m <= 10^4 and every residue class c mod m, the CRT
// solver must agree with exhaustive search, and the root count must equal
// the product of the closed-form local counts. Exact; runtime bound 300 s.
Outcome criterion1() {
  constexpr std::uint32_t kMaxModulus = 10000;
  constexpr double kTimeLimitSeconds = 300;
  const auto start = Clock::now();

  // smallest-prime-factor sieve for the factorizations
  std::vector<std::uint32_t> spf(kMaxModulus + 1, 0);
  for (std::uint32_t i = 2; i <= kMaxModulus; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint32_t j = i; j <= kMaxModulus; j += i)
      if (spf[j] == 0) spf[j] = i;
  }

  std::uint64_t classes = 0;
  std::uint32_t moduli = 0;
  std::vector<std::vector<std::uint32_t>> table;
  for (std::uint32_t m = 1; m <= kMaxModulus; m += 2, ++moduli) {
    table.assign(m, {});
    for (std::uint32_t x = 0; x < m; ++x)
      table[std::uint32_t(std::uint64_t(x) * x % m)].push_back(x);

    struct Local {
      std::uint32_t p;
      unsigned e;
      std::uint32_t pe;
    };
    std::vector<Local> locals;
    std::vector<PrimePower> factors;
    for (std::uint32_t rest = m; rest > 1;) {
      const std::uint32_t p = spf[rest];
      unsigned e = 0;
      std::uint32_t pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
        ++e;
      }
      locals.push_back({p, e, pe});
      factors.push_back({Bigint(p), e});
    }
    const Factorization fact = Factorization::from_factors(factors);

    for (std::uint32_t c = 0; c < m; ++c, ++classes) {
      const auto& want = table[c];
      const RootSet rs = all_roots_mod(Bigint(c), fact);
      if (!roots_equal(rs, want))
        return {false, strfmt("all_roots_mod(%u, %u) disagrees with "
                              "exhaustive search (%zu vs %zu roots)",
                              c, m, rs.roots.size(), want.size())};

      std::uint64_t eta = 1;
      for (const auto& l : locals)
        eta *= local_count_closed_form(c % l.pe, l.p, l.e, l.pe);
      if (eta != want.size())
        return {false, strfmt("closed-form count for (%u, %u) is %llu, "
                              "exhaustive count %zu",
                              c, m, static_cast<unsigned long long>(eta),
                              want.size())};
      if (eta != 0 && to_u64(count_roots(Bigint(c), fact)) != eta)
        return {false,
                strfmt("count_roots(%u, %u) != %llu", c, m,
                       static_cast<unsigned long long>(eta))};
    }
  }

  const double secs = seconds_since(start);
  return {secs < kTimeLimitSeconds,
          strfmt("%llu residue classes across %u odd moduli match exhaustive "
                 "search with multiplicative counts, %.1f s (limit %.0f)",
                 static_cast<unsigned long long>(classes), moduli, secs,
                 kTimeLimitSeconds)};
}

// criterion 2 -------------------------------------------------------------
// Degenerate branches against exhaustive search for every odd prime power
// p^e <= 10^5: the zero class has exactly p^floor(e/2) roots and each
// ramified class matches with exactly 2*p^(l/2) roots (or none). Exact.
Outcome criterion2() {
  constexpr std::uint32_t kLimit = 100000;
  const auto start = Clock::now();

  std::size_t prime_powers = 0;
  std::size_t ramified_classes = 0;
  for (std::uint32_t p : odd_primes_upto(kLimit)) {
    for (std::uint64_t m64 = p, e = 1; m64 <= kLimit; m64 *= p, ++e) {
      const auto m = static_cast<std::uint32_t>(m64);
      const PrimePower pp{Bigint(p), static_cast<unsigned>(e)};
      ++prime_powers;

      std::vector<std::uint32_t> zero;
      for (std::uint32_t x = 0; x < m; ++x)
        if (std::uint64_t(x) * x % m == 0) zero.push_back(x);
      const RootSet rz = roots_zero(pp);
      if (!roots_equal(rz, zero) || rz.roots.size() != upow(p, unsigned(e / 2)))
        return {false, strfmt("roots_zero(%u^%u) has %zu roots, exhaustive "
                              "search %zu, formula %llu",
                              p, unsigned(e), rz.roots.size(), zero.size(),
                              static_cast<unsigned long long>(
                                  upow(p, unsigned(e / 2))))};

      if (e == 1) continue;

      std::vector<std::vector<std::uint32_t>> table(m);
      for (std::uint32_t x = 0; x < m; ++x)
        table[std::uint32_t(std::uint64_t(x) * x % m)].push_back(x);
      for (std::uint32_t c = 1; c < m; ++c) {
        if (c % p != 0) continue;
        unsigned l = 0;
        std::uint32_t a = c;
        while (a % p == 0) {
          a /= p;
          ++l;
        }
        const RootSet rr = roots_ramified(Bigint(c), pp);
        if (!roots_equal(rr, table[c]))
          return {false, strfmt("roots_ramified(%u mod %u^%u) disagrees with "
                                "exhaustive search",
                                c, p, unsigned(e))};
        if (!rr.roots.empty() &&
            (l % 2 != 0 || rr.roots.size() != 2 * upow(p, l / 2)))
          return {false, strfmt("roots_ramified(%u mod %u^%u) cardinality %zu "
                                "breaks the 2*p^(l/2) formula (l=%u)",
                                c, p, unsigned(e), rr.roots.size(), l)};
        ++ramified_classes;
      }
    }
  }

  return {true, strfmt("zero and ramified root sets match exhaustive search "
                       "for %zu odd prime powers (%zu ramified classes), "
                       "cardinalities exact, %.1f s",
                       prime_powers, ramified_classes, seconds_since(start))};
}

// criterion 3 -------------------------------------------------------------
// The p == 3 (mod 4) closed form against the general path, for every unit
// square modulo every applicable prime power <= 10^5: Tonelli-Shanks at the
// base prime followed by a Hensel lift must produce the same pair. Exact.
Outcome criterion3() {
  constexpr std::uint32_t kLimit = 100000;
  const auto start = Clock::now();

  std::uint64_t squares = 0;
  std::size_t moduli = 0;
  std::vector<bool> seen;
  for (std::uint32_t p : odd_primes_upto(kLimit)) {
    if (p % 4 != 3) continue;
    const Bigint pz(p);
    for (std::uint64_t m64 = p, e = 1; m64 <= kLimit; m64 *= p, ++e) {
      const auto m = static_cast<std::uint32_t>(m64);
      const PrimePower pp{pz, static_cast<unsigned>(e)};
      ++moduli;
      seen.assign(m, false);
      for (std::uint32_t x = 1; x < m; ++x) {
        if (x % p == 0) continue;
        const auto c = std::uint32_t(std::uint64_t(x) * x % m);
        if (seen[c]) continue;
        seen[c] = true;
        ++squares;

        const RootSet closed = sqrt_prime_power_unit(Bigint(c), pp);
        const RootSet base = tonelli_shanks(Bigint(c % p), pz);
        if (closed.roots.size() != 2 || base.roots.empty())
          return {false, strfmt("square %u mod %u^%u: closed form found %zu "
                                "roots, Tonelli-Shanks %zu",
                                c, p, unsigned(e), closed.roots.size(),
                                base.roots.size())};
        Bigint lo = base.roots[0];
        if (e > 1) lo = hensel_lift(Residue(lo, pz), Bigint(c), pz, e).value;
        Bigint hi = Bigint(m) - lo;
        if (lo > hi) std::swap(lo, hi);
        if (closed.roots[0] != lo || closed.roots[1] != hi)
          return {false, strfmt("square %u mod %u^%u: closed form disagrees "
                                "with Tonelli-Shanks + Hensel",
                                c, p, unsigned(e))};
      }
    }
  }

  return {true, strfmt("closed form == Tonelli-Shanks+Hensel on %llu unit "
                       "squares across %zu prime powers with p == 3 (mod 4), "
                       "%.1f s",
                       static_cast<unsigned long long>(squares), moduli,
                       seconds_since(start))};
}

// criterion 4 -------------------------------------------------------------
// Full recovery on all 200 trials of a seeded 64-bit WIPR byte-crash
// campaign under an unlimited budget. Forcing a degenerate (shared-factor)
// fault is impossible when the planted message has no small prime factor,
// so the first 25 trials attempt it and at least 20 must land. The
// challenge is widened to 32 bits so no unrelated root can masquerade as a
// reply. Runtime bound 600 s.
Outcome criterion4() {
  constexpr std::size_t kTrials = 200;
  constexpr std::size_t kDegenerateAttempts = 25;
  constexpr std::size_t kDegenerateRequired = 20;
  constexpr double kTimeLimitSeconds = 600;
  const auto start = Clock::now();

  CampaignConfig config;
  config.n_bits = 64;
  config.trials = kTrials;
  config.scheme = Scheme::Wipr;
  config.fault_model = FaultModel::ByteCrash;
  config.budget = FactorBudget::unlimited_budget();
  config.master_seed = 404;
  config.degenerate_trials = kDegenerateAttempts;
  config.wipr = WiprParams{64, 32, 16, 32};

  std::size_t successes = 0;
  std::size_t degenerate = 0;
  for (const TrialRecord& r : run_campaign(config)) {
    successes += r.success ? 1 : 0;
    degenerate += r.degenerate_forced ? 1 : 0;
  }

  const double secs = seconds_since(start);
  return {successes == kTrials && degenerate >= kDegenerateRequired &&
              secs < kTimeLimitSeconds,
          strfmt("%zu/%zu messages recovered under an unlimited budget, "
                 "%zu degenerate shared-factor trials (want >= %zu), "
                 "%.1f s (limit %.0f)",
                 successes, kTrials, degenerate, kDegenerateRequired, secs,
                 kTimeLimitSeconds)};
}

// criterion 5 -------------------------------------------------------------
// The per-fault success rate measured under a constrained budget must
// predict the grouped multi-fault rate through 1-(1-p)^X: an independent
// 120-group simulation with X=5 faults each has to land inside the 95%
// interval around the prediction. The interval carries both noise sources,
// the binomial variance of the grouped estimate and the delta-method
// variance the prediction inherits from the estimated p. The closed form
// itself must reproduce the published operating point 1-(1-0.144)^5 ~ 0.54.
Outcome criterion5() {
  constexpr std::uint64_t kOpLimit = 12000;  // per-candidate group operations
  constexpr std::size_t kPhaseATrials = 200;
  constexpr std::size_t kGroups = 120;
  constexpr std::size_t kFaultsPerGroup = 5;
  constexpr double kZ = 1.96;                // 95% normal quantile
  constexpr double kSpotTolerance = 2e-3;    // vs the rounded published 0.5396
  constexpr double kIdentityTolerance = 1e-12;
  const auto start = Clock::now();

  CampaignConfig config;
  config.n_bits = 64;
  config.scheme = Scheme::Wipr;
  config.fault_model = FaultModel::ByteCrash;
  config.budget = FactorBudget::ops(kOpLimit);
  config.trials = kPhaseATrials;
  config.master_seed = 505;

  std::size_t hits = 0;
  for (const TrialRecord& r : run_campaign(config)) hits += r.success ? 1 : 0;
  const double p_hat = double(hits) / double(kPhaseATrials);
  if (p_hat < 0.05 || p_hat > 0.95)
    return {false, strfmt("per-fault rate %.3f left the calibrated band "
                          "[0.05, 0.95]; the op budget needs retuning",
                          p_hat)};
  const double pred = success_curve(p_hat, kFaultsPerGroup);

  config.trials = kGroups * kFaultsPerGroup;
  config.master_seed = 606;
  const auto records = run_campaign(config);
  std::size_t group_hits = 0;
  for (std::size_t g = 0; g < kGroups; ++g) {
    bool any = false;
    for (std::size_t i = 0; i < kFaultsPerGroup; ++i)
      any = any || records[g * kFaultsPerGroup + i].success;
    group_hits += any ? 1 : 0;
  }
  const double q_hat = double(group_hits) / double(kGroups);
  const double slope =
      kFaultsPerGroup * std::pow(1 - p_hat, kFaultsPerGroup - 1);
  const double var = pred * (1 - pred) / double(kGroups) +
                     slope * slope * p_hat * (1 - p_hat) / double(kPhaseATrials);
  const double ci = kZ * std::sqrt(var);

  const double spot = success_curve(0.144, 5);
  const bool spot_ok =
      std::fabs(spot - 0.5396) < kSpotTolerance &&
      std::fabs(spot - (1 - std::pow(1 - 0.144, 5))) < kIdentityTolerance;

  return {std::fabs(q_hat - pred) <= ci && spot_ok,
          strfmt("per-fault rate 0.144 -> %.4f over 5 faults (published "
                 "0.5396 +- %.0e); measured p=%.3f predicts %.3f over 5 "
                 "faults, grouped simulation %.3f (95%% interval +-%.3f), "
                 "%.1f s",
                 spot, kSpotTolerance, p_hat, pred, q_hat, ci,
                 seconds_since(start))};
}

// criterion 6 -------------------------------------------------------------
// Square-free density: the sieve count at 10^6 must sit within 5e-4 of
// 6/pi^2, and the count at 100 must be exactly 61.
Outcome criterion6() {
  constexpr std::uint64_t kLimit = 1000000;
  constexpr double kTolerance = 5e-4;
  const double target = 6.0 / (std::numbers::pi * std::numbers::pi);
  const auto start = Clock::now();

  const std::uint64_t q = squarefree_count(kLimit);
  const std::uint64_t q100 = squarefree_count(100);
  const double frac = double(q) / double(kLimit);

  return {std::fabs(frac - target) <= kTolerance && q100 == 61,
          strfmt("Q(10^6) = %llu (density %.6f vs 6/pi^2 = %.6f, tolerance "
                 "%.0e), Q(100) = %llu (want 61), %.1f s",
                 static_cast<unsigned long long>(q), frac, target, kTolerance,
                 static_cast<unsigned long long>(q100),
                 seconds_since(start))};
}

// criterion 7 -------------------------------------------------------------
// Full-scale 1024-bit numbers are out of reach on a desk machine, so the
// scaled-down substitute checks the budget monotonicity they rely on: the
// same 100 seeded 128-bit trials under per-candidate budgets of 0, 10, 100
// and 1000 ms must show a non-decreasing success rate, with the completed-
// candidate distribution reported alongside.
Outcome criterion7() {
  constexpr std::int64_t kBudgetsMs[] = {0, 10, 100, 1000};
  constexpr std::size_t kTrials = 100;
  const auto start = Clock::now();

  CampaignConfig config;
  config.n_bits = 128;
  config.trials = kTrials;
  config.scheme = Scheme::Wipr;
  config.fault_model = FaultModel::ByteCrash;
  config.master_seed = 707;

  double rates[4] = {0, 0, 0, 0};
  double c_means[4] = {0, 0, 0, 0};
  CampaignStats top;
  for (std::size_t i = 0; i < 4; ++i) {
    config.budget = FactorBudget::wall_ms(kBudgetsMs[i]);
    const CampaignStats stats = aggregate(run_campaign(config));
    rates[i] = stats.success_rate;
    c_means[i] = stats.c_mean_overall;
    if (i == 3) top = stats;
  }

  const bool monotone =
      rates[0] <= rates[1] && rates[1] <= rates[2] && rates[2] <= rates[3];
  return {monotone,
          strfmt("success rate by per-candidate budget {0,10,100,1000} ms = "
                 "%.2f/%.2f/%.2f/%.2f (non-decreasing: %s); completed "
                 "candidates per trial c = %.1f/%.1f/%.1f/%.1f, top-budget "
                 "square-free fraction %.2f, %.0f s",
                 rates[0], rates[1], rates[2], rates[3],
                 monotone ? "yes" : "no", c_means[0], c_means[1], c_means[2],
                 c_means[3], top.squarefree_fraction, seconds_since(start))};
}

// criterion 8 -------------------------------------------------------------
// Protocol round trips: 1000 seeded 64-bit sessions per protocol must
// return exactly the planted uid, and every generated RAMON modulus must
// satisfy n == 1 (mod 2^32). Zero failures allowed.
Outcome criterion8() {
  constexpr std::size_t kSessions = 1000;
  const auto start = Clock::now();

  std::size_t wipr_ok = 0;
  {
    const SeededRng root(808);
    const WiprParams params = WiprParams::scaled(64);
    for (std::size_t s = 0; s < kSessions; ++s) {
      SeededRng rng = root.child(s);
      const RabinKeyPair key = keygen(64, rng);
      const auto challenge = rng.bytes(params.challenge_bits / 8);
      const auto uid = rng.bytes(params.uid_bits / 8);
      const Ciphertext ct = wipr_respond(challenge, uid, key.n, params, rng);
      const auto got = wipr_verify(ct, key, challenge, params);
      if (got && got->uid == uid && got->challenge == challenge) ++wipr_ok;
    }
  }

  std::size_t ramon_ok = 0;
  std::size_t congruent = 0;
  {
    const SeededRng root(809);
    const RamonParams params = RamonParams::scaled(64);
    for (std::size_t s = 0; s < kSessions; ++s) {
      SeededRng rng = root.child(s);
      const RabinKeyPair key = ramon_modulus(64, rng);
      congruent += (key.n - 1) % pow2(32) == 0 ? 1 : 0;
      const auto challenge = rng.bytes(params.challenge_bytes);
      const auto uid = rng.bytes(params.uid_bytes);
      const RamonMessage msg = ramon_format(challenge, uid, params, rng);
      const Ciphertext ct = ramon_encrypt(msg.value(), key.n);
      const auto got = ramon_verify(ct, key, challenge, params);
      if (got && got->uid == uid && got->challenge == challenge) ++ramon_ok;
    }
  }

  return {wipr_ok == kSessions && ramon_ok == kSessions &&
              congruent == kSessions,
          strfmt("uid recovered in %zu/%zu WIPR and %zu/%zu RAMON sessions; "
                 "%zu/%zu RAMON moduli == 1 (mod 2^32), %.1f s",
                 wipr_ok, kSessions, ramon_ok, kSessions, congruent,
                 kSessions, seconds_since(start))};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only >= 1 && only <= 8) continue;
    }
    std::fprintf(stderr, "usage: %s [--only N]  (N in 1..8)\n", argv[0]);
    return 2;
  }

  struct Check {
    int id;
    Outcome (*run)();
  };
  const Check checks[] = {{1, criterion1}, {2, criterion2}, {3, criterion3},
                          {4, criterion4}, {5, criterion5}, {6, criterion6},
                          {7, criterion7}, {8, criterion8}};

  bool all_pass = true;
  for (const Check& check : checks) {
    if (only != 0 && only != check.id) continue;
    Outcome outcome;
    try {
      outcome = check.run();
    } catch (const std::exception& e) {
      outcome = {false, strfmt("unexpected exception: %s", e.what())};
    }
    std::printf("%s criterion %d: %s\n", outcome.pass ? "PASS" : "FAIL",
                check.id, outcome.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
