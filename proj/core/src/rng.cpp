#include "crashmod/rng.hpp"

#include <limits>

#include "crashmod/errors.hpp"

namespace crashmod {

namespace {

std::mt19937_64 make_engine(const std::vector<std::uint64_t>& lineage) {
  std::vector<std::uint32_t> words;
  words.reserve(lineage.size() * 2);
  for (std::uint64_t v : lineage) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed)
    : SeededRng(std::vector<std::uint64_t>{seed}) {}

SeededRng::SeededRng(std::vector<std::uint64_t> lineage)
    : lineage_(std::move(lineage)), engine_(make_engine(lineage_)) {}

SeededRng SeededRng::child(std::uint64_t index) const {
  std::vector<std::uint64_t> next = lineage_;
  next.push_back(index);
  return SeededRng(std::move(next));
}

std::uint64_t SeededRng::u64() { return engine_(); }

std::uint64_t SeededRng::below_u64(std::uint64_t bound) {
  if (bound == 0) throw ValueRange("below_u64: bound must be nonzero");
  // reject the uneven tail so the result is exactly uniform
  std::uint64_t cutoff = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    std::uint64_t v = u64();
    if (v >= cutoff) return v % bound;
  }
}

Bigint SeededRng::bits(std::size_t k) {
  Bigint r = 0;
  std::size_t full = k / 64;
  std::size_t rem = k % 64;
  for (std::size_t i = 0; i < full; ++i) {
    r <<= 64;
    r += Bigint(u64());
  }
  if (rem != 0) {
    r <<= rem;
    r += Bigint(u64() >> (64 - rem));
  }
  return r;
}

Bigint SeededRng::nbits(std::size_t k) {
  if (k == 0) throw ValueRange("nbits: k must be >= 1");
  return bits(k - 1) + pow2(k - 1);
}

Bigint SeededRng::below(const Bigint& bound) {
  if (bound <= 0) throw ValueRange("below: bound must be positive");
  std::size_t k = bit_length(bound);
  while (true) {
    Bigint v = bits(k);
    if (v < bound) return v;
  }
}

std::vector<std::uint8_t> SeededRng::bytes(std::size_t len) {
  std::vector<std::uint8_t> out(len);
  std::size_t i = 0;
  while (i < len) {
    std::uint64_t w = u64();
    for (int b = 0; b < 8 && i < len; ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
  }
  return out;
}

}  // namespace crashmod
