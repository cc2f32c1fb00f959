#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crashmod/bigint.hpp"
#include "crashmod/rabin.hpp"
#include "crashmod/rng.hpp"

namespace crashmod {

enum class Scheme { Wipr, Ramon, Raw };

struct Ciphertext {
  Scheme scheme = Scheme::Raw;
  Bigint value;
};

// Byte permutation used by the WIPR tag before squaring: front half and
// back half interleaved (a A b B ...; odd lengths leave the middle byte
// last). A bijection on byte strings of any fixed length.
std::vector<std::uint8_t> bytemix(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> byteunmix(std::span<const std::uint8_t> data);

// WIPR field layout, all sizes in bits and byte-aligned. The serialized
// message is one byte shorter than the modulus, which keeps every message
// value below any modulus of `modulus_bits` bits.
struct WiprParams {
  std::size_t modulus_bits = 0;    // n
  std::size_t challenge_bits = 0;  // s (reader nonce)
  std::size_t uid_bits = 0;
  std::size_t surplus_bits = 0;  // t (extra bits of the blinding factor)

  // Full-scale layout defaults scaled down to a given modulus size
  // (challenge capped at 80 bits, uid at 16).
  static WiprParams scaled(std::size_t n_bits);

  std::size_t message_bytes() const { return modulus_bits / 8 - 1; }
  std::size_t tag_random_bits() const {
    return modulus_bits - 8 - challenge_bits - uid_bits;
  }
  // Throws Precondition when the layout is inconsistent.
  void validate() const;
};

// Decoded plaintext fields of either protocol.
struct FormattedMessage {
  Scheme scheme = Scheme::Wipr;
  std::vector<std::uint8_t> challenge;
  std::vector<std::uint8_t> tag_random;
  std::vector<std::uint8_t> uid;
};

// The message integer a WIPR tag squares: bytemix(challenge || r_t || uid)
// read big-endian. Kept separate from encryption so fault simulation can
// reuse the same message under a corrupted modulus.
struct WiprMessage {
  FormattedMessage fields;
  std::vector<std::uint8_t> mixed;
  Bigint value;
};

WiprMessage wipr_build_message(std::span<const std::uint8_t> challenge,
                               std::span<const std::uint8_t> uid,
                               const WiprParams& params, SeededRng& rng);

// m^2 + r*n without reduction, r a fresh (n_bits + surplus_bits)-bit value.
Ciphertext wipr_encrypt_message(const Bigint& m, const Bigint& n,
                                const WiprParams& params, SeededRng& rng);

// Full tag side: build message, square, blind.
Ciphertext wipr_respond(std::span<const std::uint8_t> challenge,
                        std::span<const std::uint8_t> uid, const Bigint& n,
                        const WiprParams& params, SeededRng& rng);

// Parses a candidate message value and checks the embedded challenge.
// nullopt when the value does not deserialize to the message length or the
// challenge differs.
std::optional<FormattedMessage> wipr_extract(
    const Bigint& value, std::span<const std::uint8_t> challenge,
    const WiprParams& params);

// All roots that parse as well-formed replies to `challenge`.
std::vector<FormattedMessage> wipr_match_roots(
    const RootSet& roots, std::span<const std::uint8_t> challenge,
    const WiprParams& params);

// Reader side: reduce, decrypt, match. nullopt on reject; AmbiguousMatch
// when more than one root parses.
std::optional<FormattedMessage> wipr_verify(
    const Ciphertext& ct, const RabinKeyPair& key,
    std::span<const std::uint8_t> challenge, const WiprParams& params);

// RAMON field layout, sizes in bytes. The message is assembled
// little-endian: byte 0 is the least significant. Fields in ascending
// order: challenge, tag randomness, a type-length-value block holding the
// uid (type 0x55), zero filler, a 16-bit ones'-complement checksum of all
// preceding bytes, and a zero top byte (which keeps the value below the
// modulus).
struct RamonParams {
  std::size_t modulus_bits = 0;
  std::size_t challenge_bytes = 0;
  std::size_t random_bytes = 0;
  std::size_t uid_bytes = 0;

  static RamonParams scaled(std::size_t n_bits);

  std::size_t message_bytes() const { return modulus_bits / 8; }
  std::size_t filler_bytes() const;
  void validate() const;
};

struct RamonMessage {
  std::vector<std::uint8_t> challenge;
  std::vector<std::uint8_t> tag_random;
  std::vector<std::uint8_t> uid;
  std::uint16_t checksum = 0;

  std::vector<std::uint8_t> bytes;  // full serialized message
  Bigint value() const;             // little-endian integer value
};

// 16-bit ones'-complement sum (end-around carry) of a byte string.
std::uint16_t ones_complement_sum(std::span<const std::uint8_t> bytes);

RamonMessage ramon_format(std::span<const std::uint8_t> challenge,
                          std::span<const std::uint8_t> uid,
                          const RamonParams& params, SeededRng& rng);

// Strict parse: layout, TLV, filler, checksum and top byte all checked.
std::optional<RamonMessage> parse_ramon(std::span<const std::uint8_t> bytes,
                                        const RamonParams& params);

// Modulus with the RAMON structure: n = p*q == 1 (mod 2^(bits/2)) with the
// usual Blum conditions, found by inverting p modulo 2^(bits/2). bits must
// be divisible by 4, >= 32. Throws GenerationFailed after the retry limit.
RabinKeyPair ramon_modulus(std::size_t bits, SeededRng& rng);

// Montgomery-domain squaring as the tag hardware performs it:
// mont_reduce(m, m, n) = m^2 * R^-1 mod n, R = 2^bit_length(n).
Ciphertext ramon_encrypt(const Bigint& m, const Bigint& n);

// Same residue computed algebraically with an explicit R = 2^r_bits and no
// operand-size constraints; used to simulate squaring under a corrupted
// modulus whose size differs from the true one.
Ciphertext ramon_encrypt_with_r(const Bigint& m, const Bigint& modulus,
                                std::size_t r_bits);

// Removes the Montgomery factor: ct * R mod n.
Bigint ramon_unblind(const Ciphertext& ct, const Bigint& n);

std::optional<FormattedMessage> ramon_extract(
    const Bigint& value, std::span<const std::uint8_t> challenge,
    const RamonParams& params);

std::vector<FormattedMessage> ramon_match_roots(
    const RootSet& roots, std::span<const std::uint8_t> challenge,
    const RamonParams& params);

std::optional<FormattedMessage> ramon_verify(
    const Ciphertext& ct, const RabinKeyPair& key,
    std::span<const std::uint8_t> challenge, const RamonParams& params);

}  // namespace crashmod
