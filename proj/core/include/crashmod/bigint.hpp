#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace crashmod {

// Arbitrary-precision integer. All arithmetic-heavy code in this library
// works on Bigint; callers convert at the edges.
using Bigint = mpz_class;

// Number of bits in |n|; 0 for n == 0.
std::size_t bit_length(const Bigint& n);

// Number of bytes needed to store |n|; 0 for n == 0.
std::size_t byte_length(const Bigint& n);

// 2^k.
Bigint pow2(std::size_t k);

// Lowercase hex, no prefix, "0" for zero. Nonnegative input only.
std::string to_hex(const Bigint& n);

// Parses hex with optional 0x/0X prefix. Throws ParseError on empty or
// non-hex input.
Bigint from_hex(const std::string& text);

// Big-endian serialization into exactly `len` bytes. Throws ValueRange if
// the value does not fit.
std::vector<std::uint8_t> to_bytes_be(const Bigint& n, std::size_t len);

// Little-endian serialization into exactly `len` bytes. Throws ValueRange
// if the value does not fit.
std::vector<std::uint8_t> to_bytes_le(const Bigint& n, std::size_t len);

Bigint from_bytes_be(std::span<const std::uint8_t> bytes);
Bigint from_bytes_le(std::span<const std::uint8_t> bytes);

// Checked narrowing; throws ValueRange if n is negative or exceeds 2^64-1.
std::uint64_t to_u64(const Bigint& n);

}  // namespace crashmod
