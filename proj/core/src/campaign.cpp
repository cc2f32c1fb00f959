#include "crashmod/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"
#include "crashmod/rabin.hpp"

namespace crashmod {

namespace {

struct PlantedTrial {
  RabinKeyPair key;
  std::vector<std::uint8_t> challenge;
  std::vector<std::uint8_t> uid;
  std::vector<std::uint8_t> tag_random;
  Bigint message;
};

bool shares_factor(const Bigint& a, const Bigint& b) {
  Bigint g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g > 1;
}

}  // namespace

TrialRecord run_trial(const CampaignConfig& config, std::size_t trial_id) {
  if (config.scheme == Scheme::Raw) {
    throw Precondition("run_trial: campaign needs a formatted scheme");
  }
  TrialRecord rec;
  rec.trial_id = trial_id;
  SeededRng rng = SeededRng(config.master_seed).child(trial_id);

  WiprParams wp;
  RamonParams rp;
  PlantedTrial plant;
  if (config.scheme == Scheme::Wipr) {
    wp = config.wipr ? *config.wipr : WiprParams::scaled(config.n_bits);
    plant.key = keygen(config.n_bits, rng);
    plant.challenge = rng.bytes(wp.challenge_bits / 8);
    plant.uid = rng.bytes(wp.uid_bits / 8);
    WiprMessage msg = wipr_build_message(plant.challenge, plant.uid, wp, rng);
    plant.tag_random = std::move(msg.fields.tag_random);
    plant.message = std::move(msg.value);
  } else {
    rp = config.ramon ? *config.ramon : RamonParams::scaled(config.n_bits);
    plant.key = ramon_modulus(config.n_bits, rng);
    plant.challenge = rng.bytes(rp.challenge_bytes);
    plant.uid = rng.bytes(rp.uid_bytes);
    RamonMessage msg = ramon_format(plant.challenge, plant.uid, rp, rng);
    plant.tag_random = std::move(msg.tag_random);
    plant.message = msg.value();
  }

  // plant the fault
  std::size_t n_bytes = byte_length(plant.key.n);
  Bigint n_hat;
  FaultSpec attacker_view;
  attacker_view.model = config.fault_model;
  if (config.fault_model == FaultModel::ByteCrash) {
    std::size_t j = 0;
    unsigned k0 = 0;
    bool forced = false;
    if (trial_id < config.degenerate_trials) {
      // lowest (j, k) whose perturbed modulus shares a factor with M
      for (std::size_t cj = 1; cj + 1 < n_bytes && !forced; ++cj) {
        for (unsigned ck = 1; ck <= 255; ++ck) {
          if (shares_factor(plant.message,
                            crash_byte(plant.key.n, cj,
                                       static_cast<std::uint8_t>(ck)))) {
            j = cj;
            k0 = ck;
            forced = true;
            break;
          }
        }
      }
    }
    if (!forced) {
      j = 1 + rng.below_u64(n_bytes - 2);  // uniform on [1, n_bytes - 2]
      k0 = 1 + static_cast<unsigned>(rng.below_u64(255));
    }
    n_hat = crash_byte(plant.key.n, j, static_cast<std::uint8_t>(k0));
    rec.fault_index = static_cast<int>(j);
    rec.true_pattern = k0;
    rec.degenerate_forced = forced && shares_factor(plant.message, n_hat);
    attacker_view.byte_index = j;
  } else {
    n_hat = skip_last_byte(plant.key.n);
    rec.fault_index = -1;
    rec.true_pattern = 0;
  }

  // the tag computes its reply with the corrupted modulus loaded
  Ciphertext faulted;
  if (config.scheme == Scheme::Wipr) {
    faulted = wipr_encrypt_message(plant.message, n_hat, wp, rng);
  } else {
    faulted = ramon_encrypt_with_r(plant.message, n_hat, plant.key.n_bits);
  }

  AttackInput input;
  input.scheme = config.scheme;
  input.ciphertext = std::move(faulted);
  input.modulus = plant.key.n;
  input.fault = attacker_view;
  input.challenge = plant.challenge;
  input.budget = config.budget;
  if (config.scheme == Scheme::Wipr) {
    input.wipr = wp;
  } else {
    input.ramon = rp;
  }

  AttackOutcome out = run_attack(input);
  if (out.status == AttackStatus::Recovered && out.message) {
    rec.success = out.message->challenge == plant.challenge &&
                  out.message->tag_random == plant.tag_random &&
                  out.message->uid == plant.uid;
  }
  rec.t_units = out.budget_units;
  rec.t_wall_ms = out.elapsed.count();
  rec.factor_ms = out.factor_ms_total;
  rec.solve_ms = out.solve_ms_total;
  rec.c = out.factor_successes;
  rec.candidates = out.candidates_processed;
  rec.squarefree = out.squarefree_candidates;
  rec.omega_values = std::move(out.omega_values);
  return rec;
}

std::vector<TrialRecord> run_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw Precondition("run_campaign: trials must be >= 1");
  std::vector<TrialRecord> records(config.trials);
  unsigned workers = std::max(1u, config.parallelism);
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, config.trials));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.trials; ++i) {
      records[i] = run_trial(config, i);
    }
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= config.trials) break;
        records[i] = run_trial(config, i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

namespace {

DistStats dist_stats(std::vector<double> values) {
  DistStats d;
  d.count = values.size();
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(values.size());
  std::size_t mid = values.size() / 2;
  d.median = values.size() % 2 == 1
                 ? values[mid]
                 : (values[mid - 1] + values[mid]) / 2;
  if (values.size() >= 2) {
    double acc = 0;
    for (double v : values) acc += (v - d.mean) * (v - d.mean);
    d.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
  }
  return d;
}

Histogram histogram(const std::vector<double>& values, double width) {
  Histogram h;
  h.bin_width = width;
  std::map<long long, std::size_t> counts;
  for (double v : values) {
    counts[static_cast<long long>(std::floor(v / width))]++;
  }
  for (const auto& [bin, count] : counts) {
    h.bins.emplace_back(static_cast<double>(bin) * width, count);
  }
  return h;
}

}  // namespace

CampaignStats aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw Precondition("aggregate: no records");
  CampaignStats s;
  s.trials = records.size();

  std::vector<double> tu_s, tu_f, tw_s, tw_f, tu_all, c_all;
  double c_fail_sum = 0, c_sum = 0;
  std::size_t fails = 0;
  double solve_ms_sum = 0;
  std::uint64_t completed = 0, squarefree = 0;
  for (const auto& r : records) {
    if (r.success) {
      ++s.successes;
      tu_s.push_back(r.t_units);
      tw_s.push_back(r.t_wall_ms);
    } else {
      ++fails;
      c_fail_sum += r.c;
      tu_f.push_back(r.t_units);
      tw_f.push_back(r.t_wall_ms);
    }
    tu_all.push_back(r.t_units);
    c_all.push_back(r.c);
    c_sum += r.c;
    solve_ms_sum += r.solve_ms;
    completed += r.c;
    squarefree += r.squarefree;
    for (std::size_t w : r.omega_values) s.omega_histogram[w]++;
  }
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.t_units_success = dist_stats(std::move(tu_s));
  s.t_units_failure = dist_stats(std::move(tu_f));
  s.t_wall_ms_success = dist_stats(std::move(tw_s));
  s.t_wall_ms_failure = dist_stats(std::move(tw_f));
  s.c_mean_failure = fails > 0 ? c_fail_sum / static_cast<double>(fails) : 0;
  s.c_mean_overall = c_sum / static_cast<double>(s.trials);
  s.t3_ms = completed > 0 ? solve_ms_sum / static_cast<double>(completed) : 0;

  std::vector<double> comp_s, comp_f;
  for (const auto& r : records) {
    double composite = r.factor_ms + static_cast<double>(r.c) * s.t3_ms;
    (r.success ? comp_s : comp_f).push_back(composite);
  }
  s.composite_ms_success = dist_stats(std::move(comp_s));
  s.composite_ms_failure = dist_stats(std::move(comp_f));
  s.squarefree_fraction =
      completed > 0 ? static_cast<double>(squarefree) / static_cast<double>(completed) : 0;
  s.t_units_hist = histogram(tu_all, 5.0);
  s.c_hist = histogram(c_all, 1.0);
  return s;
}

double success_curve(double per_fault_rate, std::size_t x) {
  if (per_fault_rate < 0 || per_fault_rate > 1) {
    throw ValueRange("success_curve: rate must lie in [0, 1]");
  }
  return 1.0 - std::pow(1.0 - per_fault_rate, static_cast<double>(x));
}

std::uint64_t squarefree_count(std::uint64_t limit) {
  if (limit < 1) throw ValueRange("squarefree_count: limit must be >= 1");
  std::vector<bool> squarefree(limit + 1, true);
  for (std::uint64_t d = 2; d * d <= limit; ++d) {
    std::uint64_t dd = d * d;
    for (std::uint64_t m = dd; m <= limit; m += dd) squarefree[m] = false;
  }
  std::uint64_t count = 0;
  for (std::uint64_t i = 1; i <= limit; ++i) {
    if (squarefree[i]) ++count;
  }
  return count;
}

double squarefree_fraction(const std::vector<Factorization>& sample) {
  if (sample.empty()) throw Precondition("squarefree_fraction: empty sample");
  std::size_t hits = 0;
  for (const auto& f : sample) {
    if (is_square_free(f)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sample.size());
}

OmegaStats omega_stats(const std::vector<Factorization>& sample) {
  if (sample.empty()) throw Precondition("omega_stats: empty sample");
  OmegaStats s;
  double sum = 0;
  for (const auto& f : sample) {
    s.histogram[f.omega()]++;
    sum += static_cast<double>(f.omega());
  }
  s.mean = sum / static_cast<double>(sample.size());
  if (sample.size() >= 2) {
    double acc = 0;
    for (const auto& f : sample) {
      double d = static_cast<double>(f.omega()) - s.mean;
      acc += d * d;
    }
    s.variance = acc / static_cast<double>(sample.size() - 1);
  }
  return s;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial_id,j,k0,success,T_units,T_wall_ms,c\n";
  for (const auto& r : records) {
    os << r.trial_id << ',' << r.fault_index << ',' << r.true_pattern << ','
       << (r.success ? 1 : 0) << ',' << r.t_units << ',' << r.t_wall_ms << ','
       << r.c << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const Histogram& hist) {
  os << "bin,count\n";
  for (const auto& [bin, count] : hist.bins) {
    os << bin << ',' << count << '\n';
  }
}

void write_omega_csv(std::ostream& os,
                     const std::map<std::size_t, std::size_t>& hist) {
  os << "bin,count\n";
  for (const auto& [bin, count] : hist) {
    os << bin << ',' << count << '\n';
  }
}

}  // namespace crashmod
