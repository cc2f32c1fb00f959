#include <doctest.h>

#include <algorithm>

#include "crashmod/sqroots.hpp"
#include "support/oracles.hpp"

using namespace crashmod;

namespace {

std::vector<Bigint> as_bigints(const std::vector<std::uint64_t>& v) {
  std::vector<Bigint> out;
  for (std::uint64_t x : v) out.emplace_back(static_cast<unsigned long>(x));
  return out;
}

Factorization fact(std::vector<PrimePower> pps) {
  return Factorization::from_factors(std::move(pps));
}

}  // namespace

TEST_CASE("sqroots: factorization invariants") {
  Factorization f = fact({{3, 2}, {5, 1}});
  CHECK(f.value() == 45);
  CHECK(f.omega() == 2);
  CHECK_FALSE(f.has_even_prime());
  CHECK(fact({{2, 3}}).has_even_prime());
  CHECK(fact({}).value() == 1);

  CHECK_THROWS_AS(fact({{5, 1}, {3, 1}}), Precondition);  // out of order
  CHECK_THROWS_AS(fact({{3, 1}, {3, 1}}), Precondition);  // repeated prime
  CHECK_THROWS_AS(fact({{3, 0}}), Precondition);          // zero exponent
  CHECK(PrimePower{5, 3}.value() == 125);
}

TEST_CASE("sqroots: closed form mod p == 3 (mod 4)") {
  CHECK(sqrt_prime_3mod4(2, 7).roots == std::vector<Bigint>{3, 4});
  CHECK(sqrt_prime_3mod4(4, 7).roots == std::vector<Bigint>{2, 5});
  CHECK(sqrt_prime_3mod4(3, 7).roots.empty());  // non-residue
  CHECK(sqrt_prime_3mod4(5, 7).roots.empty());
  CHECK_THROWS_AS(sqrt_prime_3mod4(2, 13), Precondition);  // 13 == 1 (mod 4)
  CHECK_THROWS_AS(sqrt_prime_3mod4(7, 7), Precondition);   // not a unit
}

TEST_CASE("sqroots: tonelli-shanks") {
  CHECK(tonelli_shanks(10, 13).roots == std::vector<Bigint>{6, 7});
  CHECK(tonelli_shanks(2, 17).roots == std::vector<Bigint>{6, 11});
  CHECK(tonelli_shanks(5, 13).roots.empty());  // non-residue
  CHECK(tonelli_shanks(2, 7).roots == std::vector<Bigint>{3, 4});  // 3 mod 4 path

  // exhaustive agreement with enumeration for a mix of residue classes
  for (std::uint64_t p : {3ull, 5ull, 13ull, 17ull, 41ull, 97ull, 193ull}) {
    auto table = oracles::square_table(static_cast<std::uint32_t>(p));
    for (std::uint64_t c = 1; c < p; ++c) {
      std::vector<std::uint32_t> expect = table[c];
      RootSet got = tonelli_shanks(Bigint(static_cast<unsigned long>(c)),
                                   Bigint(static_cast<unsigned long>(p)));
      REQUIRE(got.roots.size() == expect.size());
      for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(got.roots[i] == expect[i]);
      }
    }
  }
}

TEST_CASE("sqroots: hensel lifting") {
  // 3^2 == 2 (mod 7) lifts to 10^2 == 2 (mod 49)
  Residue lifted = hensel_lift(Residue(3, 7), 2, 7, 2);
  CHECK(lifted.value == 10);
  CHECK(lifted.modulus == 49);

  // 6^2 == 10 (mod 13) lifts to 32^2 == 10 (mod 169)
  lifted = hensel_lift(Residue(6, 13), 10, 13, 2);
  CHECK(lifted.value == 32);
  CHECK(lifted.modulus == 169);

  // lifting is exact at high exponents: verify by squaring
  lifted = hensel_lift(Residue(3, 7), 2, 7, 9);
  CHECK(lifted.modulus == Bigint(40353607));  // 7^9
  CHECK(lifted.value * lifted.value % lifted.modulus == 2);

  // already at the target is a no-op
  CHECK(hensel_lift(Residue(10, 49), 2, 7, 2).value == 10);

  CHECK_THROWS_AS(hensel_lift(Residue(10, 49), 2, 7, 1), Precondition);
  CHECK_THROWS_AS(hensel_lift(Residue(5, 7), 2, 7, 2), Precondition);  // 25 != 2
  CHECK_THROWS_AS(hensel_lift(Residue(0, 7), 0, 7, 2), NonSimpleRoot);
  CHECK_THROWS_AS(hensel_lift(Residue(3, 8), 1, 7, 2), Precondition);  // 8 not 7^k
}

TEST_CASE("sqroots: prime-power units") {
  CHECK(sqrt_prime_power_unit(2, {7, 2}).roots == std::vector<Bigint>{10, 39});
  CHECK(sqrt_prime_power_unit(10, {13, 2}).roots == std::vector<Bigint>{32, 137});
  CHECK(sqrt_prime_power_unit(3, {7, 2}).roots.empty());  // non-residue mod 7
  CHECK(sqrt_prime_power_unit(1, {3, 1}).roots == std::vector<Bigint>{1, 2});
  CHECK_THROWS_AS(sqrt_prime_power_unit(7, {7, 2}), Precondition);  // not a unit
  CHECK_THROWS_AS(sqrt_prime_power_unit(1, {2, 3}), Precondition);  // p == 2

  // brute-force agreement over assorted odd prime powers
  for (auto [p, e] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {3, 4}, {5, 3}, {7, 2}, {11, 2}, {13, 2}, {17, 1}, {19, 3}}) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    auto table = oracles::square_table(static_cast<std::uint32_t>(pe));
    for (std::uint64_t c = 1; c < pe; ++c) {
      if (c % p == 0) continue;
      RootSet got = sqrt_prime_power_unit(
          Bigint(static_cast<unsigned long>(c)), {p, e});
      CHECK(got.roots == as_bigints({table[c].begin(), table[c].end()}));
    }
  }
}

TEST_CASE("sqroots: roots of zero") {
  CHECK(roots_zero({3, 3}).roots == std::vector<Bigint>{0, 9, 18});
  CHECK(roots_zero({3, 1}).roots == std::vector<Bigint>{0});
  CHECK(roots_zero({5, 2}).roots == std::vector<Bigint>{0, 5, 10, 15, 20});
  CHECK(roots_zero({3, 4}).roots.size() == 9);  // p^floor(e/2)

  CHECK_THROWS_AS(roots_zero({3, 13}, 10), RootOverflow);
  try {
    roots_zero({3, 13}, 10);
  } catch (const RootOverflow& e) {
    CHECK(e.count == 729);  // 3^6
  }
}

TEST_CASE("sqroots: ramified roots") {
  CHECK(roots_ramified(9, {3, 3}).roots ==
        std::vector<Bigint>{3, 6, 12, 15, 21, 24});
  CHECK(roots_ramified(100, {5, 3}).roots.size() == 10);  // 2 * 5^(2/2)
  CHECK(roots_ramified(3, {3, 2}).roots.empty());   // odd valuation
  CHECK(roots_ramified(45, {3, 3}).roots.empty());  // 45 == 5*3^2, 5 nonresidue mod 3

  // exhaustive check against enumeration
  for (auto [p, e] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {3, 3}, {3, 4}, {3, 5}, {5, 3}, {7, 3}, {11, 2}}) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    auto table = oracles::square_table(static_cast<std::uint32_t>(pe));
    for (std::uint64_t c = 1; c < pe; ++c) {
      if (c % p != 0) continue;  // ramified branch wants 0 < val < e
      Bigint cb(static_cast<unsigned long>(c));
      RootSet got = roots_ramified(cb, {p, e});
      CHECK(got.roots == as_bigints({table[c].begin(), table[c].end()}));
    }
  }

  CHECK_THROWS_AS(roots_ramified(25, {5, 3}, 1), RootOverflow);
  CHECK_THROWS_AS(roots_ramified(0, {5, 3}), Precondition);  // zero class
}

TEST_CASE("sqroots: prime-power dispatch") {
  CHECK(roots_prime_power(0, {3, 3}).roots == roots_zero({3, 3}).roots);
  CHECK(roots_prime_power(9, {3, 3}).roots == roots_ramified(9, {3, 3}).roots);
  CHECK(roots_prime_power(2, {7, 2}).roots ==
        sqrt_prime_power_unit(2, {7, 2}).roots);
  CHECK(roots_prime_power(27 + 9, {3, 3}).roots ==
        roots_ramified(9, {3, 3}).roots);  // reduces first
}

TEST_CASE("sqroots: root counting is multiplicative and exact") {
  CHECK(count_roots(36, fact({{3, 2}, {5, 1}})) == 6);
  CHECK(count_roots(4, fact({{3, 1}, {5, 1}, {7, 1}})) == 8);
  CHECK(count_roots(0, fact({{3, 3}})) == 3);
  CHECK(count_roots(3, fact({{3, 2}})) == 0);    // odd valuation
  CHECK(count_roots(1, fact({{2, 1}, {3, 1}})) == 0);  // even prime
  CHECK(count_roots(1, fact({})) == 1);

  // counts match enumeration sizes whenever the residue is solvable
  for (std::uint64_t m : {45ull, 105ull, 225ull, 693ull}) {
    auto table = oracles::square_table(static_cast<std::uint32_t>(m));
    std::vector<PrimePower> pps;
    for (auto [p, e] : oracles::trial_factor(m)) {
      pps.push_back({Bigint(static_cast<unsigned long>(p)), e});
    }
    Factorization f = fact(pps);
    for (std::uint64_t c = 0; c < m; ++c) {
      if (table[c].empty()) continue;
      CHECK(count_roots(Bigint(static_cast<unsigned long>(c)), f) ==
            table[c].size());
    }
  }
}

TEST_CASE("sqroots: all roots by CRT") {
  CHECK(all_roots_mod(4, fact({{7, 1}, {11, 1}})).roots ==
        std::vector<Bigint>{2, 9, 68, 75});
  CHECK(all_roots_mod(36, fact({{3, 2}, {5, 1}})).roots ==
        std::vector<Bigint>{6, 9, 21, 24, 36, 39});
  CHECK(all_roots_mod(1, fact({{3, 1}, {5, 1}})).roots ==
        std::vector<Bigint>{1, 4, 11, 14});
  CHECK(all_roots_mod(3, fact({{7, 1}, {11, 1}})).roots.empty());
  CHECK(all_roots_mod(0, fact({})).roots == std::vector<Bigint>{0});
  CHECK(all_roots_mod(1, fact({{2, 1}, {3, 1}})).roots.empty());

  CHECK_THROWS_AS(all_roots_mod(0, fact({{3, 13}}), 10), RootOverflow);
  // overflow reports the exact count before enumerating
  try {
    all_roots_mod(0, fact({{3, 13}}), 10);
  } catch (const RootOverflow& e) {
    CHECK(e.count == 729);
  }
  // but an unsolvable factor still short-circuits to "no roots":
  // 3^13 is the zero class mod 3^13 (729 roots) and a non-residue mod 7
  CHECK(all_roots_mod(1594323, fact({{3, 13}, {7, 1}}), 10).roots.empty());
}

TEST_CASE("sqroots: modulus field is the factorization product") {
  RootSet rs = all_roots_mod(4, fact({{7, 1}, {11, 1}}));
  CHECK(rs.modulus == 77);
  for (const Bigint& r : rs.roots) {
    CHECK(r * r % rs.modulus == 4);
  }
}
