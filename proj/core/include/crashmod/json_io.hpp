#pragma once

// JSON (de)serialization for the types that cross process boundaries: key
// material, protocol transcripts, fault specs, and attack/campaign configs
// and results.  Everything is exchanged as serialized strings so the JSON
// backend stays private to the library.
//
// Integers that may exceed 64 bits travel as lowercase hex strings; byte
// strings travel as fixed-width hex (two digits per byte, preserving
// leading zeros).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashmod/attack.hpp"
#include "crashmod/bigint.hpp"
#include "crashmod/campaign.hpp"
#include "crashmod/factor.hpp"
#include "crashmod/faults.hpp"
#include "crashmod/protocols.hpp"
#include "crashmod/rabin.hpp"

namespace crashmod {

// Fixed-width byte-string hex, unlike to_hex/from_hex which trim to the
// numeric value.
std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> hex_to_bytes(const std::string& hex);

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);
std::string fault_model_name(FaultModel model);
FaultModel fault_model_from_name(const std::string& name);

std::string keypair_to_json(const RabinKeyPair& key);
RabinKeyPair keypair_from_json(const std::string& text);

std::string transcript_to_json(const Ciphertext& ct,
                               std::span<const std::uint8_t> challenge,
                               unsigned n_bits, const WiprParams* wipr,
                               const RamonParams* ramon);

std::string fault_to_json(const FaultSpec& fault);
FaultSpec fault_from_json(const std::string& text);

std::string budget_to_json(const FactorBudget& budget);
FactorBudget budget_from_json(const std::string& text);

std::string factor_outcome_to_json(const FactorOutcome& outcome);

std::string attack_input_to_json(const AttackInput& input);
AttackInput attack_input_from_json(const std::string& text);
std::string attack_outcome_to_json(const AttackOutcome& outcome);

std::string campaign_config_to_json(const CampaignConfig& config);
CampaignConfig campaign_config_from_json(const std::string& text);
std::string campaign_stats_to_json(const CampaignStats& stats);

}  // namespace crashmod
