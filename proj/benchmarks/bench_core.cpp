// Microbenchmarks for the arithmetic and protocol hot paths: Montgomery
// products, the square-root solvers, bounded factoring and full
// attack trials. Run manually; not part of the test suite.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "crashmod/attack.hpp"
#include "crashmod/campaign.hpp"
#include "crashmod/factor.hpp"
#include "crashmod/ntheory.hpp"
#include "crashmod/protocols.hpp"
#include "crashmod/rabin.hpp"
#include "crashmod/rng.hpp"
#include "crashmod/sqroots.hpp"

namespace {

using namespace crashmod;

void BM_MontReduce(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(11);
  const RabinKeyPair key = keygen(bits, rng);
  const Bigint a = rng.below(key.n);
  const Bigint b = rng.below(key.n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mont_reduce(a, b, key.n));
  }
}
BENCHMARK(BM_MontReduce)->Arg(64)->Arg(256)->Arg(1024);

void BM_SqrtUnit3Mod4(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(13);
  const Bigint p = gen_blum_prime(bits, rng);
  const PrimePower pp{p, 1};
  const Bigint c = mod_pow(rng.below(p - 2) + 2, 2, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrt_prime_power_unit(c, pp));
  }
}
BENCHMARK(BM_SqrtUnit3Mod4)->Arg(64)->Arg(256);

void BM_TonelliShanks(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(17);
  Bigint p = rng.nbits(bits) | 1;
  while (p % 4 != 1 || !is_probable_prime(p)) p += 2;
  const Bigint c = mod_pow(rng.below(p - 2) + 2, 2, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tonelli_shanks(c, p));
  }
}
BENCHMARK(BM_TonelliShanks)->Arg(64)->Arg(256);

void BM_AllRootsMod(benchmark::State& state) {
  const auto omega = static_cast<std::size_t>(state.range(0));
  SeededRng rng(19);
  std::vector<PrimePower> factors;
  Bigint m = 1;
  while (factors.size() < omega) {
    Bigint p = gen_blum_prime(28, rng);
    bool fresh = true;
    for (const auto& f : factors) fresh = fresh && f.prime != p;
    if (!fresh) continue;
    factors.push_back({p, 1});
    m *= p;
  }
  std::sort(factors.begin(), factors.end(),
            [](const PrimePower& a, const PrimePower& b) {
              return a.prime < b.prime;
            });
  const Factorization fact = Factorization::from_factors(factors);
  const Bigint c = mod_pow(rng.below(m), 2, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(all_roots_mod(c, fact));
  }
}
BENCHMARK(BM_AllRootsMod)->Arg(2)->Arg(4)->Arg(6);

void BM_Factorize(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(23);
  std::vector<Bigint> inputs;
  for (int i = 0; i < 32; ++i) inputs.push_back(rng.nbits(bits) | 1);
  const FactorBudget budget = FactorBudget::unlimited_budget();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(factorize(inputs[i++ % inputs.size()], budget));
  }
}
BENCHMARK(BM_Factorize)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WiprRound(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(29);
  const RabinKeyPair key = keygen(bits, rng);
  const WiprParams params = WiprParams::scaled(bits);
  for (auto _ : state) {
    const auto challenge = rng.bytes(params.challenge_bits / 8);
    const auto uid = rng.bytes(params.uid_bits / 8);
    const Ciphertext ct = wipr_respond(challenge, uid, key.n, params, rng);
    benchmark::DoNotOptimize(wipr_verify(ct, key, challenge, params));
  }
}
BENCHMARK(BM_WiprRound)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_RamonRound(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  SeededRng rng(31);
  const RabinKeyPair key = ramon_modulus(bits, rng);
  const RamonParams params = RamonParams::scaled(bits);
  for (auto _ : state) {
    const auto challenge = rng.bytes(params.challenge_bytes);
    const auto uid = rng.bytes(params.uid_bytes);
    const RamonMessage msg = ramon_format(challenge, uid, params, rng);
    const Ciphertext ct = ramon_encrypt(msg.value(), key.n);
    benchmark::DoNotOptimize(ramon_verify(ct, key, challenge, params));
  }
}
BENCHMARK(BM_RamonRound)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_AttackTrial(benchmark::State& state) {
  CampaignConfig config;
  config.n_bits = 64;
  config.trials = 1U << 30;
  config.scheme = Scheme::Wipr;
  config.budget = FactorBudget::ops(20000);
  config.master_seed = 37;
  std::size_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(config, trial++));
  }
}
BENCHMARK(BM_AttackTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
