#include "crashmod/json_io.hpp"

#include <json.hpp>

#include "crashmod/errors.hpp"

namespace crashmod {

namespace {

using Json = nlohmann::ordered_json;

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
}

// Typed field access that converts nlohmann's errors into ours.
template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + '"');
  }
  try {
    return j.at(key).template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field \"") + key + "\" has the wrong type");
  }
}

template <typename T>
T get_field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return get_field<T>(j, key);
}

Json wipr_params_json(const WiprParams& p) {
  return Json{{"modulus_bits", p.modulus_bits},
              {"challenge_bits", p.challenge_bits},
              {"uid_bits", p.uid_bits},
              {"surplus_bits", p.surplus_bits}};
}

WiprParams wipr_params_from(const Json& j) {
  WiprParams p;
  p.modulus_bits = get_field<std::size_t>(j, "modulus_bits");
  p.challenge_bits = get_field<std::size_t>(j, "challenge_bits");
  p.uid_bits = get_field<std::size_t>(j, "uid_bits");
  p.surplus_bits = get_field<std::size_t>(j, "surplus_bits");
  return p;
}

Json ramon_params_json(const RamonParams& p) {
  return Json{{"modulus_bits", p.modulus_bits},
              {"challenge_bytes", p.challenge_bytes},
              {"random_bytes", p.random_bytes},
              {"uid_bytes", p.uid_bytes}};
}

RamonParams ramon_params_from(const Json& j) {
  RamonParams p;
  p.modulus_bits = get_field<std::size_t>(j, "modulus_bits");
  p.challenge_bytes = get_field<std::size_t>(j, "challenge_bytes");
  p.random_bytes = get_field<std::size_t>(j, "random_bytes");
  p.uid_bytes = get_field<std::size_t>(j, "uid_bytes");
  return p;
}

Json fault_json(const FaultSpec& fault) {
  Json j{{"model", fault_model_name(fault.model)},
         {"byte_index", fault.byte_index}};
  if (fault.pattern) j["pattern"] = *fault.pattern;
  return j;
}

FaultSpec fault_from(const Json& j) {
  FaultSpec f;
  f.model = fault_model_from_name(get_field<std::string>(j, "model"));
  f.byte_index = get_field_or<std::size_t>(j, "byte_index", 0);
  if (j.contains("pattern") && !j.at("pattern").is_null()) {
    unsigned p = get_field<unsigned>(j, "pattern");
    if (p < 1 || p > 255) throw ParseError("fault pattern must be 1..255");
    f.pattern = static_cast<std::uint8_t>(p);
  }
  return f;
}

Json budget_json(const FactorBudget& b) {
  Json j;
  if (b.unlimited) {
    j["mode"] = "unlimited";
  } else if (b.op_limit) {
    j["mode"] = "ops";
    j["op_limit"] = *b.op_limit;
  } else {
    j["mode"] = "wall";
    j["wall_ms"] = b.wall_limit.count();
  }
  j["check_interval"] = b.check_interval;
  j["rho_seed"] = b.rho_seed;
  return j;
}

FactorBudget budget_from(const Json& j) {
  FactorBudget b;
  std::string mode = get_field_or<std::string>(j, "mode", "wall");
  if (mode == "unlimited") {
    b = FactorBudget::unlimited_budget();
  } else if (mode == "ops") {
    b = FactorBudget::ops(get_field<std::uint64_t>(j, "op_limit"));
  } else if (mode == "wall") {
    b = FactorBudget::wall_ms(get_field_or<std::int64_t>(
        j, "wall_ms", FactorBudget{}.wall_limit.count()));
  } else {
    throw ParseError("budget mode must be wall, ops or unlimited");
  }
  b.check_interval =
      get_field_or<std::uint64_t>(j, "check_interval", b.check_interval);
  b.rho_seed = get_field_or<std::uint64_t>(j, "rho_seed", b.rho_seed);
  return b;
}

Json dist_json(const DistStats& d) {
  return Json{{"count", d.count},
              {"mean", d.mean},
              {"median", d.median},
              {"stddev", d.stddev}};
}

Json histogram_json(const Histogram& h) {
  Json bins = Json::array();
  for (const auto& [edge, count] : h.bins) {
    bins.push_back(Json::array({edge, count}));
  }
  return Json{{"bin_width", h.bin_width}, {"bins", bins}};
}

}  // namespace

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> hex_to_bytes(const std::string& hex) {
  if (hex.size() % 2 != 0) {
    throw ParseError("byte-string hex must have even length");
  }
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a') + 10;
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A') + 10;
    throw ParseError("invalid hex digit");
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 |
                                       nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Wipr:
      return "wipr";
    case Scheme::Ramon:
      return "ramon";
    case Scheme::Raw:
      return "raw";
  }
  throw ValueRange("scheme_name: unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "wipr") return Scheme::Wipr;
  if (name == "ramon") return Scheme::Ramon;
  if (name == "raw") return Scheme::Raw;
  throw ParseError("unknown scheme \"" + name + "\"");
}

std::string fault_model_name(FaultModel model) {
  switch (model) {
    case FaultModel::ByteCrash:
      return "byte_crash";
    case FaultModel::InstructionSkip:
      return "instruction_skip";
  }
  throw ValueRange("fault_model_name: unknown model");
}

FaultModel fault_model_from_name(const std::string& name) {
  if (name == "byte_crash") return FaultModel::ByteCrash;
  if (name == "instruction_skip") return FaultModel::InstructionSkip;
  throw ParseError("unknown fault model \"" + name + "\"");
}

std::string keypair_to_json(const RabinKeyPair& key) {
  Json j{{"n_bits", key.n_bits},
         {"n", to_hex(key.n)},
         {"p", to_hex(key.p)},
         {"q", to_hex(key.q)}};
  return j.dump(2);
}

RabinKeyPair keypair_from_json(const std::string& text) {
  Json j = parse_text(text);
  RabinKeyPair key = RabinKeyPair::from_primes(
      from_hex(get_field<std::string>(j, "p")),
      from_hex(get_field<std::string>(j, "q")));
  if (j.contains("n") && from_hex(get_field<std::string>(j, "n")) != key.n) {
    throw ParseError("keypair n does not match p*q");
  }
  return key;
}

std::string transcript_to_json(const Ciphertext& ct,
                               std::span<const std::uint8_t> challenge,
                               unsigned n_bits, const WiprParams* wipr,
                               const RamonParams* ramon) {
  Json j{{"scheme", scheme_name(ct.scheme)},
         {"challenge_hex", bytes_to_hex(challenge)},
         {"ciphertext_hex", to_hex(ct.value)},
         {"n_bits", n_bits}};
  if (wipr != nullptr) {
    j["params"] = wipr_params_json(*wipr);
  } else if (ramon != nullptr) {
    j["params"] = ramon_params_json(*ramon);
  } else {
    j["params"] = nullptr;
  }
  return j.dump(2);
}

std::string fault_to_json(const FaultSpec& fault) {
  return fault_json(fault).dump(2);
}

FaultSpec fault_from_json(const std::string& text) {
  return fault_from(parse_text(text));
}

std::string budget_to_json(const FactorBudget& budget) {
  return budget_json(budget).dump(2);
}

FactorBudget budget_from_json(const std::string& text) {
  return budget_from(parse_text(text));
}

std::string factor_outcome_to_json(const FactorOutcome& outcome) {
  Json factors = Json::array();
  if (outcome.status == FactorStatus::Complete) {
    for (const auto& pp : outcome.factorization.factors) {
      factors.push_back(
          Json{{"prime", to_hex(pp.prime)}, {"exponent", pp.exponent}});
    }
  }
  Json j{{"status",
          outcome.status == FactorStatus::Complete ? "complete" : "timed_out"},
         {"factors", factors},
         {"elapsed_ms", outcome.elapsed.count()},
         {"ops", outcome.ops}};
  return j.dump(2);
}

std::string attack_input_to_json(const AttackInput& input) {
  Json j{{"scheme", scheme_name(input.scheme)},
         {"ciphertext_hex", to_hex(input.ciphertext.value)},
         {"modulus_hex", to_hex(input.modulus)},
         {"fault", fault_json(input.fault)},
         {"challenge_hex", bytes_to_hex(input.challenge)},
         {"budget", budget_json(input.budget)},
         {"root_limit", input.root_limit}};
  if (input.wipr) j["wipr"] = wipr_params_json(*input.wipr);
  if (input.ramon) j["ramon"] = ramon_params_json(*input.ramon);
  return j.dump(2);
}

AttackInput attack_input_from_json(const std::string& text) {
  Json j = parse_text(text);
  AttackInput input;
  input.scheme = scheme_from_name(get_field<std::string>(j, "scheme"));
  input.ciphertext.scheme = input.scheme;
  input.ciphertext.value = from_hex(get_field<std::string>(j, "ciphertext_hex"));
  input.modulus = from_hex(get_field<std::string>(j, "modulus_hex"));
  if (!j.contains("fault")) throw ParseError("missing field \"fault\"");
  input.fault = fault_from(j.at("fault"));
  input.challenge = hex_to_bytes(get_field<std::string>(j, "challenge_hex"));
  input.budget =
      j.contains("budget") ? budget_from(j.at("budget")) : FactorBudget{};
  input.root_limit =
      get_field_or<std::size_t>(j, "root_limit", kDefaultRootLimit);
  if (j.contains("wipr") && !j.at("wipr").is_null())
    input.wipr = wipr_params_from(j.at("wipr"));
  if (j.contains("ramon") && !j.at("ramon").is_null())
    input.ramon = ramon_params_from(j.at("ramon"));
  return input;
}

std::string attack_outcome_to_json(const AttackOutcome& outcome) {
  Json j;
  j["status"] =
      outcome.status == AttackStatus::Recovered ? "recovered" : "exhausted";
  if (outcome.message) {
    j["message"] = Json{{"challenge_hex", bytes_to_hex(outcome.message->challenge)},
                        {"tag_random_hex", bytes_to_hex(outcome.message->tag_random)},
                        {"uid_hex", bytes_to_hex(outcome.message->uid)}};
    j["matched_pattern"] = outcome.matched_pattern;
    j["matched_modulus_hex"] = to_hex(outcome.matched_modulus);
  } else {
    j["message"] = nullptr;
  }
  j["factor_successes"] = outcome.factor_successes;
  j["candidates_processed"] = outcome.candidates_processed;
  j["elapsed_ms"] = outcome.elapsed.count();
  j["budget_units"] = outcome.budget_units;
  j["factor_ms_total"] = outcome.factor_ms_total;
  j["solve_ms_total"] = outcome.solve_ms_total;
  j["squarefree_candidates"] = outcome.squarefree_candidates;
  j["omega_values"] = outcome.omega_values;
  return j.dump(2);
}

std::string campaign_config_to_json(const CampaignConfig& config) {
  Json j{{"n_bits", config.n_bits},
         {"trials", config.trials},
         {"scheme", scheme_name(config.scheme)},
         {"fault_model", fault_model_name(config.fault_model)},
         {"budget", budget_json(config.budget)},
         {"master_seed", config.master_seed},
         {"parallelism", config.parallelism},
         {"degenerate_trials", config.degenerate_trials}};
  if (config.wipr) j["wipr"] = wipr_params_json(*config.wipr);
  if (config.ramon) j["ramon"] = ramon_params_json(*config.ramon);
  return j.dump(2);
}

CampaignConfig campaign_config_from_json(const std::string& text) {
  Json j = parse_text(text);
  CampaignConfig c;
  c.n_bits = get_field_or<std::size_t>(j, "n_bits", c.n_bits);
  c.trials = get_field_or<std::size_t>(j, "trials", c.trials);
  if (j.contains("scheme")) {
    c.scheme = scheme_from_name(get_field<std::string>(j, "scheme"));
  }
  if (j.contains("fault_model")) {
    c.fault_model =
        fault_model_from_name(get_field<std::string>(j, "fault_model"));
  }
  if (j.contains("budget")) c.budget = budget_from(j.at("budget"));
  c.master_seed = get_field_or<std::uint64_t>(j, "master_seed", c.master_seed);
  c.parallelism = get_field_or<unsigned>(j, "parallelism", c.parallelism);
  c.degenerate_trials =
      get_field_or<std::size_t>(j, "degenerate_trials", c.degenerate_trials);
  if (j.contains("wipr") && !j.at("wipr").is_null())
    c.wipr = wipr_params_from(j.at("wipr"));
  if (j.contains("ramon") && !j.at("ramon").is_null())
    c.ramon = ramon_params_from(j.at("ramon"));
  return c;
}

std::string campaign_stats_to_json(const CampaignStats& stats) {
  Json omega = Json::object();
  for (const auto& [w, count] : stats.omega_histogram) {
    omega[std::to_string(w)] = count;
  }
  Json j{{"trials", stats.trials},
         {"successes", stats.successes},
         {"success_rate", stats.success_rate},
         {"t_units_success", dist_json(stats.t_units_success)},
         {"t_units_failure", dist_json(stats.t_units_failure)},
         {"t_wall_ms_success", dist_json(stats.t_wall_ms_success)},
         {"t_wall_ms_failure", dist_json(stats.t_wall_ms_failure)},
         {"c_mean_failure", stats.c_mean_failure},
         {"c_mean_overall", stats.c_mean_overall},
         {"t3_ms", stats.t3_ms},
         {"composite_ms_success", dist_json(stats.composite_ms_success)},
         {"composite_ms_failure", dist_json(stats.composite_ms_failure)},
         {"squarefree_fraction", stats.squarefree_fraction},
         {"omega_histogram", omega},
         {"t_units_hist", histogram_json(stats.t_units_hist)},
         {"c_hist", histogram_json(stats.c_hist)}};
  return j.dump(2);
}

}  // namespace crashmod
