#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "crashmod/bigint.hpp"

namespace crashmod {

// Deterministic random source. A generator is identified by its seed
// lineage: the root seed plus the chain of child indices that produced it.
// Two generators with the same lineage emit identical streams on every
// platform (std::mt19937_64 seeded through std::seed_seq is fully
// specified), which is what makes campaigns replayable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  // Independent substream; children with distinct indices never share state
  // with each other or with the parent.
  SeededRng child(std::uint64_t index) const;

  std::uint64_t u64();

  // Uniform on [0, bound). bound must be nonzero.
  std::uint64_t below_u64(std::uint64_t bound);

  // Uniform on [0, 2^k).
  Bigint bits(std::size_t k);

  // Uniform k-bit value, i.e. on [2^(k-1), 2^k). k must be >= 1.
  Bigint nbits(std::size_t k);

  // Uniform on [0, bound). bound must be positive.
  Bigint below(const Bigint& bound);

  std::vector<std::uint8_t> bytes(std::size_t len);

  const std::vector<std::uint64_t>& lineage() const { return lineage_; }

 private:
  explicit SeededRng(std::vector<std::uint64_t> lineage);

  std::vector<std::uint64_t> lineage_;
  std::mt19937_64 engine_;
};

}  // namespace crashmod
