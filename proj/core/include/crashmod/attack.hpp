#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "crashmod/bigint.hpp"
#include "crashmod/factor.hpp"
#include "crashmod/faults.hpp"
#include "crashmod/protocols.hpp"

namespace crashmod {

// Everything the attacker knows: the faulted ciphertext, the true public
// modulus, the fault model (pattern unknown), the reader challenge and the
// per-candidate factoring budget. Exactly one of wipr/ramon must be set,
// matching `scheme`.
struct AttackInput {
  Scheme scheme = Scheme::Wipr;
  Ciphertext ciphertext;
  Bigint modulus;
  FaultSpec fault;
  std::vector<std::uint8_t> challenge;
  FactorBudget budget;
  std::optional<WiprParams> wipr;
  std::optional<RamonParams> ramon;
  std::size_t root_limit = kDefaultRootLimit;
};

enum class AttackStatus { Recovered, Exhausted };

// Per-candidate diagnostics, streamed to an optional logger.
struct CandidateReport {
  unsigned pattern = 0;  // 1..255 for byte crashes, 0 for the skip model
  FactorStatus factor_status = FactorStatus::TimedOut;
  std::size_t omega = 0;
  Bigint eta;  // root count (0 when none or not computed)
  bool square_free = false;
  bool root_overflow = false;
  std::size_t roots_tried = 0;
  double factor_ms = 0;
  double solve_ms = 0;
  std::uint64_t factor_ops = 0;
};

struct AttackOutcome {
  AttackStatus status = AttackStatus::Exhausted;
  std::optional<FormattedMessage> message;
  unsigned matched_pattern = 0;
  Bigint matched_modulus;
  unsigned factor_successes = 0;  // candidates whose factorization completed
  std::size_t candidates_processed = 0;
  std::chrono::duration<double, std::milli> elapsed{0};

  // budget-unit accounting: each candidate contributes its consumed
  // fraction of the per-candidate budget (1 for a timeout, 0 under an
  // unlimited budget)
  double budget_units = 0;
  double factor_ms_total = 0;
  double solve_ms_total = 0;

  // per-completed-candidate statistics the campaign aggregates
  std::size_t squarefree_candidates = 0;
  std::vector<std::size_t> omega_values;
};

using CandidateLogger = std::function<void(const CandidateReport&)>;

// C-hat for a candidate modulus: plain reduction for WIPR/RAW, Montgomery
// unblinding with the true R = 2^n_bits for RAMON. n_hat must be odd.
Bigint reduce_ciphertext(const Ciphertext& ct, const Bigint& n_hat,
                         std::size_t n_bits);

// All values congruent to root mod n_hat that are valid messages mod n,
// i.e. root + k*n_hat < n.
std::vector<Bigint> lift_root_to_message(const Bigint& root,
                                         const Bigint& n_hat, const Bigint& n);

// The full candidate loop: factor, solve, lift, format-match. Stops at the
// first candidate that yields a challenge-matching message.
AttackOutcome run_attack(const AttackInput& input,
                         const CandidateLogger& log = {});

}  // namespace crashmod
