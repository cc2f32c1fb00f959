#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "crashmod/attack.hpp"

namespace crashmod {

// One Monte-Carlo experiment: `trials` independent fault injections against
// fresh keys, each followed by the full candidate-scanning attack under the
// per-candidate budget.
struct CampaignConfig {
  std::size_t n_bits = 96;
  std::size_t trials = 200;
  Scheme scheme = Scheme::Wipr;
  FaultModel fault_model = FaultModel::ByteCrash;
  FactorBudget budget = FactorBudget::wall_ms(50);
  std::uint64_t master_seed = 1;
  unsigned parallelism = 1;
  // The first `degenerate_trials` trials pick (j, k0) so that
  // gcd(M, N-hat) > 1, exercising the repeated-root solver paths.
  std::size_t degenerate_trials = 0;
  std::optional<WiprParams> wipr;    // defaults to WiprParams::scaled
  std::optional<RamonParams> ramon;  // defaults to RamonParams::scaled
};

struct TrialRecord {
  std::size_t trial_id = 0;
  int fault_index = -1;       // j; -1 for the instruction-skip model
  unsigned true_pattern = 0;  // k0; 0 for the skip model
  bool success = false;
  bool degenerate_forced = false;  // gcd(M, N-hat) > 1 held by construction
  double t_units = 0;              // budget units consumed (the cost metric T)
  double t_wall_ms = 0;            // raw wall clock over the whole attack
  double factor_ms = 0;
  double solve_ms = 0;
  unsigned c = 0;  // successful factorizations among scanned candidates
  std::size_t candidates = 0;
  std::size_t squarefree = 0;             // square-free completed candidates
  std::vector<std::size_t> omega_values;  // omega of each completed candidate
};

struct DistStats {
  std::size_t count = 0;
  double mean = 0;
  double median = 0;
  double stddev = 0;  // sample standard deviation, 0 for count < 2
};

// Fixed-width histogram; only populated bins are stored.
struct Histogram {
  double bin_width = 1;
  std::vector<std::pair<double, std::size_t>> bins;  // (lower edge, count)
};

struct CampaignStats {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0;
  DistStats t_units_success;
  DistStats t_units_failure;
  DistStats t_wall_ms_success;
  DistStats t_wall_ms_failure;
  double c_mean_failure = 0;
  double c_mean_overall = 0;
  // online estimate of the mean per-candidate solve time (T3) and the
  // composite cost factor_time + c * T3 per trial
  double t3_ms = 0;
  DistStats composite_ms_success;
  DistStats composite_ms_failure;
  double squarefree_fraction = 0;  // over all completed candidates
  std::map<std::size_t, std::size_t> omega_histogram;
  Histogram t_units_hist;
  Histogram c_hist;
};

// Deterministic function of (config, trial_id): the per-trial seed is
// derived from config.master_seed and trial_id.
TrialRecord run_trial(const CampaignConfig& config, std::size_t trial_id);

// All trials, honoring config.parallelism; results ordered by trial_id and
// independent of scheduling.
std::vector<TrialRecord> run_campaign(const CampaignConfig& config);

// Throws Precondition on an empty record set.
CampaignStats aggregate(const std::vector<TrialRecord>& records);

// 1 - (1 - per_fault_rate)^x: cumulative success over x independent faults.
double success_curve(double per_fault_rate, std::size_t x);

// Exact number of square-free integers in [1, limit], by sieve.
std::uint64_t squarefree_count(std::uint64_t limit);

// Empirical square-free fraction of a factored sample.
double squarefree_fraction(const std::vector<Factorization>& sample);

struct OmegaStats {
  double mean = 0;
  double variance = 0;  // sample variance
  std::map<std::size_t, std::size_t> histogram;
};

OmegaStats omega_stats(const std::vector<Factorization>& sample);

// trial_id,j,k0,success,T_units,T_wall_ms,c
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);
// bin,count
void write_histogram_csv(std::ostream& os, const Histogram& hist);
void write_omega_csv(std::ostream& os,
                     const std::map<std::size_t, std::size_t>& hist);

}  // namespace crashmod
