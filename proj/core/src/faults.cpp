#include "crashmod/faults.hpp"

#include "crashmod/errors.hpp"

namespace crashmod {

Bigint crash_byte(const Bigint& n, std::size_t index, std::uint8_t pattern) {
  if (index == 0) {
    throw Precondition("crash_byte: byte 0 would break the parity guarantee");
  }
  if (index >= byte_length(n)) {
    throw ValueRange("crash_byte: byte index beyond the value");
  }
  if (pattern == 0) throw Precondition("crash_byte: pattern must be nonzero");
  Bigint eps = Bigint(pattern) << (8 * index);
  return n ^ eps;
}

Bigint skip_last_byte(const Bigint& n) {
  std::size_t len = byte_length(n);
  if (len < 2) throw ValueRange("skip_last_byte: value must span >= 2 bytes");
  Bigint r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), n.get_mpz_t(), 8 * (len - 1));
  return r;
}

std::vector<Bigint> candidate_moduli(const Bigint& n, const FaultSpec& spec) {
  std::vector<Bigint> out;
  if (spec.model == FaultModel::InstructionSkip) {
    out.push_back(skip_last_byte(n));
    return out;
  }
  out.reserve(255);
  for (unsigned k = 1; k <= 255; ++k) {
    out.push_back(crash_byte(n, spec.byte_index, static_cast<std::uint8_t>(k)));
  }
  return out;
}

ByteIndexRange target_byte_range(Scheme scheme, std::size_t n_bytes) {
  switch (scheme) {
    case Scheme::Wipr:
      return ByteIndexRange{1, n_bytes / 2};
    case Scheme::Ramon:
      return ByteIndexRange{n_bytes / 2, n_bytes};
    default:
      throw Precondition("target_byte_range: scheme has no fault window");
  }
}

}  // namespace crashmod
