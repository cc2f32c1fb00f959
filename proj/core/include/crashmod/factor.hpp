#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "crashmod/bigint.hpp"
#include "crashmod/sqroots.hpp"

namespace crashmod {

// Budget for one factorization attempt. Two modes:
//   - wall-clock (default): stop once `wall_limit` has elapsed, checked
//     every `check_interval` group operations;
//   - operation-count: when `op_limit` is set it replaces the clock and the
//     run becomes bit-for-bit deterministic, which campaign replays rely on.
// `unlimited` disables both.
struct FactorBudget {
  std::chrono::milliseconds wall_limit{60000};
  std::uint64_t check_interval = std::uint64_t{1} << 14;
  bool unlimited = false;
  std::optional<std::uint64_t> op_limit;
  std::uint64_t rho_seed = 0;  // offsets the Brent-rho parameter schedule

  static FactorBudget unlimited_budget();
  static FactorBudget wall_ms(std::int64_t ms);
  static FactorBudget ops(std::uint64_t limit);
};

enum class FactorStatus { Complete, TimedOut };

struct FactorOutcome {
  FactorStatus status = FactorStatus::TimedOut;
  Factorization factorization;  // meaningful only when Complete
  std::chrono::duration<double, std::milli> elapsed{0};
  std::uint64_t ops = 0;  // group operations actually spent
};

// Complete factorization of n >= 2 under the given budget. Pipeline:
// sieve-backed trial division below 10^6, perfect-power splitting, then
// alternating Pollard p-1 stages and Brent's rho with a deterministic
// parameter schedule. Every returned prime passes is_probable_prime.
FactorOutcome factorize(const Bigint& n, const FactorBudget& budget);

bool is_square_free(const Factorization& fact);

// Primes below 10^6, ascending. Built once, shared.
const std::vector<std::uint32_t>& small_primes();

}  // namespace crashmod
