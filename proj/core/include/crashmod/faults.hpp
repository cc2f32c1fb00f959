#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "crashmod/bigint.hpp"
#include "crashmod/protocols.hpp"

namespace crashmod {

enum class FaultModel { ByteCrash, InstructionSkip };

// Attacker-side description of an injected fault. For ByteCrash the
// pattern is normally unknown (the attack tries all 255); a simulation can
// pin it.
struct FaultSpec {
  FaultModel model = FaultModel::ByteCrash;
  std::size_t byte_index = 0;  // ByteCrash only; must be >= 1
  std::optional<std::uint8_t> pattern;  // ByteCrash oracle side; 1..255
};

// XORs `pattern` into byte `index` of n (byte 0 = least significant).
// index must be >= 1 (crashing byte 0 could flip parity) and inside the
// value; pattern must be nonzero.
Bigint crash_byte(const Bigint& n, std::size_t index, std::uint8_t pattern);

// Drops the most significant byte, as when the final load of the modulus
// transfer is skipped. n must occupy at least 2 bytes.
Bigint skip_last_byte(const Bigint& n);

// The moduli an attacker must consider given the fault model: 255 values
// in ascending pattern order for ByteCrash, a single value for
// InstructionSkip. spec.pattern is ignored.
std::vector<Bigint> candidate_moduli(const Bigint& n, const FaultSpec& spec);

// Half-open range of byte indices a fault can usefully target for the
// given protocol, out of n_bytes total. A WIPR modulus ships with a
// predefined upper half, so only low-half loads can be glitched; a RAMON
// modulus is structurally zero in the low half, so only upper bytes are
// ever transferred. Byte 0 is always excluded (parity).
struct ByteIndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

ByteIndexRange target_byte_range(Scheme scheme, std::size_t n_bytes);

}  // namespace crashmod
