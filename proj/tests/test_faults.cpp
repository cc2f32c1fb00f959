#include <doctest.h>

#include "crashmod/faults.hpp"
#include "crashmod/rng.hpp"

using namespace crashmod;

TEST_CASE("faults: crash_byte worked example") {
  CHECK(crash_byte(0x1122, 1, 0x0f) == 0x1e22);
  CHECK(crash_byte(0x00ff0000, 2, 0xff) == 0);
  CHECK(crash_byte(0x123456, 1, 0xff) == 0x12cb56);
}

TEST_CASE("faults: crash_byte is an involution") {
  SeededRng rng(71);
  for (int i = 0; i < 40; ++i) {
    Bigint n = rng.nbits(96);
    std::size_t index = 1 + rng.below_u64(byte_length(n) - 1);
    auto pattern = static_cast<std::uint8_t>(1 + rng.below_u64(255));
    Bigint crashed = crash_byte(n, index, pattern);
    CHECK(crashed != n);
    CHECK(crash_byte(crashed, index, pattern) == n);
  }
}

TEST_CASE("faults: crash_byte input screening") {
  CHECK_THROWS_AS(crash_byte(0x1122, 0, 1), Precondition);
  CHECK_THROWS_AS(crash_byte(0x1122, 1, 0), Precondition);
  CHECK_THROWS_AS(crash_byte(0x1122, 2, 1), ValueRange);
  CHECK_THROWS_AS(crash_byte(0, 1, 1), ValueRange);
}

TEST_CASE("faults: skip_last_byte drops the top byte") {
  CHECK(skip_last_byte(0x1122) == 0x22);
  CHECK(skip_last_byte(0xaabbccdd) == 0xbbccdd);
  CHECK(skip_last_byte(0x0100) == 0);
  CHECK_THROWS_AS(skip_last_byte(0xff), ValueRange);
  CHECK_THROWS_AS(skip_last_byte(0), ValueRange);
}

TEST_CASE("faults: candidate_moduli enumerates the search space") {
  Bigint n = from_hex("1122334455667788");

  FaultSpec crash{FaultModel::ByteCrash, 3, std::nullopt};
  std::vector<Bigint> cands = candidate_moduli(n, crash);
  REQUIRE(cands.size() == 255);
  for (unsigned k = 1; k <= 255; ++k) {
    CHECK(cands[k - 1] == crash_byte(n, 3, static_cast<std::uint8_t>(k)));
  }

  // the oracle-side pattern does not narrow the attacker's list
  FaultSpec pinned = crash;
  pinned.pattern = 0x42;
  CHECK(candidate_moduli(n, pinned) == cands);

  FaultSpec skip{FaultModel::InstructionSkip, 0, std::nullopt};
  std::vector<Bigint> single = candidate_moduli(n, skip);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == skip_last_byte(n));
}

TEST_CASE("faults: target windows split the modulus by scheme") {
  ByteIndexRange w = target_byte_range(Scheme::Wipr, 16);
  CHECK(w.begin == 1);
  CHECK(w.end == 8);
  w = target_byte_range(Scheme::Ramon, 16);
  CHECK(w.begin == 8);
  CHECK(w.end == 16);
  w = target_byte_range(Scheme::Wipr, 128);
  CHECK(w.begin == 1);
  CHECK(w.end == 64);
  w = target_byte_range(Scheme::Ramon, 128);
  CHECK(w.begin == 64);
  CHECK(w.end == 128);
  CHECK_THROWS_AS(target_byte_range(Scheme::Raw, 16), Precondition);
}
