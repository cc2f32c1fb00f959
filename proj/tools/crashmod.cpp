// crashmod: command-line workbench for the crashing-modulus fault attack on
// Rabin-based RFID protocols. Results go to stdout as JSON (or to --out);
// progress and transcripts go to stderr.
//
// Exit codes: 0 success, 1 operation failed (attack exhausted, factoring
// timed out, verification rejected), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "crashmod/attack.hpp"
#include "crashmod/campaign.hpp"
#include "crashmod/errors.hpp"
#include "crashmod/factor.hpp"
#include "crashmod/faults.hpp"
#include "crashmod/json_io.hpp"
#include "crashmod/protocols.hpp"
#include "crashmod/rabin.hpp"
#include "crashmod/sqroots.hpp"

namespace {

using crashmod::Bigint;
using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw crashmod::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw crashmod::Error("cannot write " + path);
  out << text;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    write_file(out_path, text + "\n");
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
  if (given) return *given;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

crashmod::RabinKeyPair load_key(const std::string& path) {
  return crashmod::keypair_from_json(read_file(path));
}

// One stderr line per attack candidate.
void log_candidate(const crashmod::CandidateReport& r) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "pattern=%3u factor=%s omega=%zu eta=%s squarefree=%d "
                "overflow=%d roots_tried=%zu factor_ms=%.3f solve_ms=%.3f",
                r.pattern,
                r.factor_status == crashmod::FactorStatus::Complete
                    ? "complete"
                    : "timed_out",
                r.omega, r.eta.get_str().c_str(),
                r.square_free ? 1 : 0, r.root_overflow ? 1 : 0, r.roots_tried,
                r.factor_ms, r.solve_ms);
  std::cerr << line << '\n';
}

int run_keygen(std::size_t bits, const std::string& scheme_name,
               std::optional<std::uint64_t> seed_opt,
               const std::string& out_path) {
  std::uint64_t seed = resolve_seed(seed_opt);
  crashmod::SeededRng rng(seed);
  crashmod::Scheme scheme = crashmod::scheme_from_name(scheme_name);
  crashmod::RabinKeyPair key = scheme == crashmod::Scheme::Ramon
                                   ? crashmod::ramon_modulus(bits, rng)
                                   : crashmod::keygen(bits, rng);
  Json j = Json::parse(crashmod::keypair_to_json(key));
  j["scheme"] = scheme_name;
  j["seed"] = seed;
  emit(out_path, j.dump(2));
  return 0;
}

int run_encrypt(const std::string& m_hex, std::optional<std::string> n_hex,
                std::optional<std::string> key_path,
                const std::string& out_path) {
  Bigint n;
  if (n_hex) {
    n = crashmod::from_hex(*n_hex);
  } else if (key_path) {
    n = load_key(*key_path).n;
  } else {
    throw CLI::RequiredError("--modulus or --key");
  }
  Bigint c = crashmod::encrypt(crashmod::from_hex(m_hex), n);
  Json j{{"ciphertext_hex", crashmod::to_hex(c)}};
  emit(out_path, j.dump(2));
  return 0;
}

int run_decrypt(const std::string& c_hex, const std::string& key_path,
                const std::string& out_path) {
  crashmod::RabinKeyPair key = load_key(key_path);
  crashmod::RootSet roots =
      crashmod::decrypt(crashmod::from_hex(c_hex), key);
  Json arr = Json::array();
  for (const auto& r : roots.roots) arr.push_back(crashmod::to_hex(r));
  Json j{{"modulus", crashmod::to_hex(roots.modulus)}, {"roots", arr}};
  emit(out_path, j.dump(2));
  return 0;
}

// Simulates one fault-free protocol round: keygen (or --key), tag response,
// reader verification. Prints the transcript; exit 1 if the reader rejects.
int run_round(crashmod::Scheme scheme, std::size_t bits,
              std::optional<std::string> key_path,
              std::optional<std::string> challenge_hex,
              std::optional<std::string> uid_hex,
              std::optional<std::uint64_t> seed_opt,
              const std::string& out_path) {
  std::uint64_t seed = resolve_seed(seed_opt);
  crashmod::SeededRng rng(seed);
  crashmod::RabinKeyPair key;
  if (key_path) {
    key = load_key(*key_path);
  } else if (scheme == crashmod::Scheme::Ramon) {
    key = crashmod::ramon_modulus(bits, rng);
  } else {
    key = crashmod::keygen(bits, rng);
  }

  std::optional<crashmod::FormattedMessage> verified;
  std::vector<std::uint8_t> challenge, uid;
  std::string transcript;
  if (scheme == crashmod::Scheme::Wipr) {
    auto params = crashmod::WiprParams::scaled(key.n_bits);
    challenge = challenge_hex ? crashmod::hex_to_bytes(*challenge_hex)
                              : rng.bytes(params.challenge_bits / 8);
    uid = uid_hex ? crashmod::hex_to_bytes(*uid_hex)
                  : rng.bytes(params.uid_bits / 8);
    auto ct = crashmod::wipr_respond(challenge, uid, key.n, params, rng);
    transcript = crashmod::transcript_to_json(
        ct, challenge, static_cast<unsigned>(key.n_bits), &params, nullptr);
    verified = crashmod::wipr_verify(ct, key, challenge, params);
  } else {
    auto params = crashmod::RamonParams::scaled(key.n_bits);
    challenge = challenge_hex ? crashmod::hex_to_bytes(*challenge_hex)
                              : rng.bytes(params.challenge_bytes);
    uid = uid_hex ? crashmod::hex_to_bytes(*uid_hex)
                  : rng.bytes(params.uid_bytes);
    auto msg = crashmod::ramon_format(challenge, uid, params, rng);
    auto ct = crashmod::ramon_encrypt(msg.value(), key.n);
    transcript = crashmod::transcript_to_json(
        ct, challenge, static_cast<unsigned>(key.n_bits), nullptr, &params);
    verified = crashmod::ramon_verify(ct, key, challenge, params);
  }

  bool ok = verified.has_value() && verified->uid == uid;
  Json j = Json::parse(transcript);
  j["seed"] = seed;
  j["uid_hex"] = crashmod::bytes_to_hex(uid);
  j["verified"] = ok;
  emit(out_path, j.dump(2));
  if (!ok) {
    std::cerr << "verification rejected\n";
    return 1;
  }
  return 0;
}

int run_fault(const std::string& n_hex, const std::string& model_name,
              std::size_t byte_index, std::optional<std::string> pattern_hex,
              const std::string& out_path) {
  Bigint n = crashmod::from_hex(n_hex);
  crashmod::FaultModel model = crashmod::fault_model_from_name(model_name);
  Json j;
  if (model == crashmod::FaultModel::InstructionSkip) {
    j["n_hat_hex"] = crashmod::to_hex(crashmod::skip_last_byte(n));
  } else if (pattern_hex) {
    std::uint64_t pattern =
        crashmod::to_u64(crashmod::from_hex(*pattern_hex));
    if (pattern < 1 || pattern > 255) {
      throw crashmod::ParseError("--pattern must be 1..ff");
    }
    j["n_hat_hex"] = crashmod::to_hex(crashmod::crash_byte(
        n, byte_index, static_cast<std::uint8_t>(pattern)));
  } else {
    crashmod::FaultSpec spec;
    spec.model = model;
    spec.byte_index = byte_index;
    Json arr = Json::array();
    for (const auto& cand : crashmod::candidate_moduli(n, spec)) {
      arr.push_back(crashmod::to_hex(cand));
    }
    j["candidates"] = arr;
  }
  emit(out_path, j.dump(2));
  return 0;
}

int run_factor(const std::string& n_hex, const crashmod::FactorBudget& budget,
               const std::string& out_path) {
  crashmod::FactorOutcome outcome =
      crashmod::factorize(crashmod::from_hex(n_hex), budget);
  emit(out_path, crashmod::factor_outcome_to_json(outcome));
  return outcome.status == crashmod::FactorStatus::Complete ? 0 : 1;
}

int run_roots(const std::string& c_hex, const std::string& n_hex,
              std::size_t limit, const crashmod::FactorBudget& budget,
              const std::string& out_path) {
  Bigint modulus = crashmod::from_hex(n_hex);
  crashmod::FactorOutcome fact = crashmod::factorize(modulus, budget);
  if (fact.status != crashmod::FactorStatus::Complete) {
    std::cerr << "factoring the modulus timed out\n";
    return 1;
  }
  Bigint c = crashmod::Residue(crashmod::from_hex(c_hex), modulus).value;
  Json j{{"modulus", crashmod::to_hex(modulus)}};
  try {
    crashmod::RootSet roots =
        crashmod::all_roots_mod(c, fact.factorization, limit);
    Json arr = Json::array();
    for (const auto& r : roots.roots) arr.push_back(crashmod::to_hex(r));
    j["count"] = roots.roots.size();
    j["roots"] = arr;
  } catch (const crashmod::RootOverflow& e) {
    j["count_hex"] = crashmod::to_hex(e.count);
    j["overflow"] = true;
    emit(out_path, j.dump(2));
    return 1;
  }
  emit(out_path, j.dump(2));
  return 0;
}

int run_attack_cmd(const std::string& input_path, bool quiet,
                   const std::string& out_path) {
  crashmod::AttackInput input =
      crashmod::attack_input_from_json(read_file(input_path));
  crashmod::CandidateLogger logger;
  if (!quiet) logger = log_candidate;
  crashmod::AttackOutcome outcome = crashmod::run_attack(input, logger);
  emit(out_path, crashmod::attack_outcome_to_json(outcome));
  return outcome.status == crashmod::AttackStatus::Recovered ? 0 : 1;
}

int run_campaign_cmd(const crashmod::CampaignConfig& config,
                     const std::string& out_dir) {
  std::vector<crashmod::TrialRecord> records = crashmod::run_campaign(config);
  crashmod::CampaignStats stats = crashmod::aggregate(records);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto in_dir = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };
  {
    std::ofstream csv(in_dir("trials.csv"));
    crashmod::write_trials_csv(csv, records);
  }
  {
    std::ofstream csv(in_dir("t_units_hist.csv"));
    crashmod::write_histogram_csv(csv, stats.t_units_hist);
  }
  {
    std::ofstream csv(in_dir("c_hist.csv"));
    crashmod::write_histogram_csv(csv, stats.c_hist);
  }
  {
    std::ofstream csv(in_dir("omega_hist.csv"));
    crashmod::write_omega_csv(csv, stats.omega_histogram);
  }

  Json j{{"config", Json::parse(crashmod::campaign_config_to_json(config))}};
  j.update(Json::parse(crashmod::campaign_stats_to_json(stats)));
  write_file(in_dir("stats.json"), j.dump(2) + "\n");

  std::cerr << "campaign: " << stats.successes << '/' << stats.trials
            << " trials recovered the message (rate " << stats.success_rate
            << ")\n";
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crashing-modulus fault attack workbench"};
  app.require_subcommand(1);
  int rc = 0;

  // keygen ------------------------------------------------------------
  std::size_t kg_bits = 128;
  std::string kg_scheme = "wipr";
  std::optional<std::uint64_t> kg_seed;
  std::string kg_out;
  auto* kg = app.add_subcommand("keygen", "Generate a Rabin key pair");
  kg->add_option("--bits", kg_bits, "Modulus size in bits")
      ->capture_default_str();
  kg->add_option("--scheme", kg_scheme, "Key shape: wipr/raw or ramon")
      ->check(CLI::IsMember({"wipr", "ramon", "raw"}))
      ->capture_default_str();
  kg->add_option("--seed", kg_seed, "RNG seed (default: entropy)");
  kg->add_option("--out", kg_out, "Write JSON here instead of stdout");
  kg->callback([&] { rc = run_keygen(kg_bits, kg_scheme, kg_seed, kg_out); });

  // encrypt -------------------------------------------------------------
  std::string en_m, en_out;
  std::optional<std::string> en_n, en_key;
  auto* en = app.add_subcommand("encrypt", "Rabin-square a message value");
  en->add_option("--m", en_m, "Message value, hex")->required();
  en->add_option("--modulus", en_n, "Modulus, hex");
  en->add_option("--key", en_key, "Key-pair JSON file");
  en->add_option("--out", en_out, "Write JSON here instead of stdout");
  en->callback([&] { rc = run_encrypt(en_m, en_n, en_key, en_out); });

  // decrypt -------------------------------------------------------------
  std::string de_c, de_key, de_out;
  auto* de = app.add_subcommand("decrypt", "All square roots under a key");
  de->add_option("--c", de_c, "Ciphertext, hex")->required();
  de->add_option("--key", de_key, "Key-pair JSON file")->required();
  de->add_option("--out", de_out, "Write JSON here instead of stdout");
  de->callback([&] { rc = run_decrypt(de_c, de_key, de_out); });

  // wipr / ramon ----------------------------------------------------------
  std::size_t rd_bits = 128;
  std::optional<std::string> rd_key, rd_challenge, rd_uid;
  std::optional<std::uint64_t> rd_seed;
  std::string rd_out;
  for (const char* name : {"wipr", "ramon"}) {
    auto* sub = app.add_subcommand(
        name, std::string("Simulate one fault-free ") +
                  (name[0] == 'w' ? "WIPR" : "RAMON") + " round");
    sub->add_option("--bits", rd_bits, "Modulus bits when generating a key")
        ->capture_default_str();
    sub->add_option("--key", rd_key, "Key-pair JSON file (skips keygen)");
    sub->add_option("--challenge", rd_challenge, "Reader challenge, hex");
    sub->add_option("--uid", rd_uid, "Tag uid, hex");
    sub->add_option("--seed", rd_seed, "RNG seed (default: entropy)");
    sub->add_option("--out", rd_out, "Write JSON here instead of stdout");
    sub->callback([&, name] {
      rc = run_round(crashmod::scheme_from_name(name), rd_bits, rd_key,
                     rd_challenge, rd_uid, rd_seed, rd_out);
    });
  }

  // fault -----------------------------------------------------------------
  std::string fa_n, fa_model = "byte_crash", fa_out;
  std::size_t fa_index = 1;
  std::optional<std::string> fa_pattern;
  auto* fa = app.add_subcommand("fault", "Corrupt a modulus image");
  fa->add_option("--modulus", fa_n, "True modulus, hex")->required();
  fa->add_option("--model", fa_model, "byte_crash or instruction_skip")
      ->check(CLI::IsMember({"byte_crash", "instruction_skip"}))
      ->capture_default_str();
  fa->add_option("--byte-index", fa_index, "Crashed byte, 0 = least significant")
      ->capture_default_str();
  fa->add_option("--pattern", fa_pattern,
                 "XOR pattern (hex, 1..ff); omit to list all 255 candidates");
  fa->add_option("--out", fa_out, "Write JSON here instead of stdout");
  fa->callback([&] { rc = run_fault(fa_n, fa_model, fa_index, fa_pattern, fa_out); });

  // budget options shared by factor/roots/attack-ish commands ------------
  auto add_budget = [](CLI::App* sub, std::int64_t default_ms) {
    auto ms = std::make_shared<std::int64_t>(default_ms);
    auto ops = std::make_shared<std::optional<std::uint64_t>>();
    auto unlimited = std::make_shared<bool>(false);
    auto rho_seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--budget-ms", *ms, "Wall-clock budget in milliseconds")
        ->capture_default_str();
    sub->add_option("--op-limit", *ops,
                    "Deterministic operation budget (overrides the clock)");
    sub->add_flag("--unlimited", *unlimited, "No budget at all");
    sub->add_option("--rho-seed", *rho_seed, "Brent-rho parameter schedule seed");
    return [ms, ops, unlimited, rho_seed] {
      crashmod::FactorBudget b;
      if (*unlimited) {
        b = crashmod::FactorBudget::unlimited_budget();
      } else if (*ops) {
        b = crashmod::FactorBudget::ops(**ops);
      } else {
        b = crashmod::FactorBudget::wall_ms(*ms);
      }
      b.rho_seed = *rho_seed;
      return b;
    };
  };

  // factor ------------------------------------------------------------
  std::string fc_n, fc_out;
  auto* fc = app.add_subcommand("factor", "Factor an integer under a budget");
  fc->add_option("value", fc_n, "Integer to factor, hex")->required();
  auto fc_budget = add_budget(fc, 60000);
  fc->add_option("--out", fc_out, "Write JSON here instead of stdout");
  fc->callback([&] { rc = run_factor(fc_n, fc_budget(), fc_out); });

  // roots ------------------------------------------------------------
  std::string ro_c, ro_n, ro_out;
  std::size_t ro_limit = crashmod::kDefaultRootLimit;
  auto* ro = app.add_subcommand("roots", "All square roots of c mod an odd modulus");
  ro->add_option("--c", ro_c, "Square, hex")->required();
  ro->add_option("--modulus", ro_n, "Modulus, hex")->required();
  ro->add_option("--limit", ro_limit, "Enumeration cap")->capture_default_str();
  auto ro_budget = add_budget(ro, 60000);
  ro->add_option("--out", ro_out, "Write JSON here instead of stdout");
  ro->callback([&] { rc = run_roots(ro_c, ro_n, ro_limit, ro_budget(), ro_out); });

  // attack ------------------------------------------------------------
  std::string at_input, at_out;
  bool at_quiet = false;
  auto* at = app.add_subcommand("attack", "Run the candidate-scanning attack");
  at->add_option("--input", at_input, "Attack-input JSON file")->required();
  at->add_flag("--quiet", at_quiet, "Suppress the per-candidate stderr log");
  at->add_option("--out", at_out, "Write JSON here instead of stdout");
  at->callback([&] { rc = run_attack_cmd(at_input, at_quiet, at_out); });

  // campaign ------------------------------------------------------------
  std::string cp_config, cp_dir = ".";
  std::optional<std::size_t> cp_bits, cp_trials, cp_degenerate;
  std::optional<std::string> cp_scheme, cp_model;
  std::optional<std::int64_t> cp_ms;
  std::optional<std::uint64_t> cp_ops, cp_seed;
  std::optional<unsigned> cp_par;
  auto* cp = app.add_subcommand("campaign", "Monte-Carlo fault campaign");
  cp->add_option("--config", cp_config, "Campaign-config JSON file");
  cp->add_option("--n-bits", cp_bits, "Modulus size per trial");
  cp->add_option("--trials", cp_trials, "Number of trials");
  cp->add_option("--scheme", cp_scheme, "wipr or ramon")
      ->check(CLI::IsMember({"wipr", "ramon"}));
  cp->add_option("--model", cp_model, "byte_crash or instruction_skip")
      ->check(CLI::IsMember({"byte_crash", "instruction_skip"}));
  cp->add_option("--budget-ms", cp_ms, "Per-candidate wall budget");
  cp->add_option("--op-limit", cp_ops, "Per-candidate operation budget");
  cp->add_option("--seed", cp_seed, "Master seed (default: entropy)");
  cp->add_option("--parallelism", cp_par, "Worker threads");
  cp->add_option("--degenerate", cp_degenerate,
                 "Force gcd(M, N-hat) > 1 in the first k trials");
  cp->add_option("--out", cp_dir, "Directory for CSV/JSON artifacts")
      ->capture_default_str();
  cp->callback([&] {
    crashmod::CampaignConfig config;
    if (!cp_config.empty()) {
      config = crashmod::campaign_config_from_json(read_file(cp_config));
    }
    if (cp_bits) config.n_bits = *cp_bits;
    if (cp_trials) config.trials = *cp_trials;
    if (cp_scheme) config.scheme = crashmod::scheme_from_name(*cp_scheme);
    if (cp_model) {
      config.fault_model = crashmod::fault_model_from_name(*cp_model);
    }
    if (cp_ops) {
      config.budget = crashmod::FactorBudget::ops(*cp_ops);
    } else if (cp_ms) {
      config.budget = crashmod::FactorBudget::wall_ms(*cp_ms);
    }
    if (cp_seed) {
      config.master_seed = *cp_seed;
    } else if (cp_config.empty()) {
      config.master_seed = resolve_seed(cp_seed);
    }
    if (cp_par) config.parallelism = *cp_par;
    if (cp_degenerate) config.degenerate_trials = *cp_degenerate;
    rc = run_campaign_cmd(config, cp_dir);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const crashmod::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
