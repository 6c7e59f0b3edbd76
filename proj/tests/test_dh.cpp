#include <gtest/gtest.h>

#include <random>

#include "btpair/dh.hpp"
#include "oracle/reference.hpp"

using namespace btpair;

TEST(ModExp, WorkedValues) {
  EXPECT_EQ(modexp(5, 1, 23), 5u);
  EXPECT_EQ(modexp(5, 6, 23), 8u);
  EXPECT_EQ(modexp(5, 15, 23), 19u);
  EXPECT_EQ(modexp(40, 1, 23), 40u % 23);
  EXPECT_EQ(modexp(7, 0, 13), 1u);
}

TEST(ModExp, RejectsSmallModulus) {
  EXPECT_THROW(modexp(3, 4, 1), std::invalid_argument);
  EXPECT_THROW(modexp(3, 4, 0), std::invalid_argument);
}

TEST(ModExp, ExhaustiveSmallGridMatchesRepeatedMultiplication) {
  int mismatches = 0;
  for (DhInt m = 2; m < 50; ++m)
    for (DhInt b = 0; b < 20; ++b)
      for (DhInt e = 0; e < 20; ++e) mismatches += modexp(b, e, m) != oracle::modexp(b, e, m);
  EXPECT_EQ(mismatches, 0);
}

TEST(ModExp, RandomSampleMatchesRepeatedMultiplication) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const DhInt b = rng() % 100, e = rng() % 100, m = 2 + rng() % 998;
    ASSERT_EQ(modexp(b, e, m), oracle::modexp(b, e, m)) << b << "^" << e << " mod " << m;
  }
}

TEST(ModExp, LargeModulusDoesNotOverflow) {
  // Fermat: a^(p-1) = 1 mod p for the largest 64-bit prime.
  const DhInt p = 18446744073709551557ULL;
  EXPECT_EQ(modexp(123456789, p - 1, p), 1u);
}

TEST(Primality, AgreesWithTrialDivision) {
  for (DhInt n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), oracle::is_prime_trial(n)) << n;
  EXPECT_TRUE(is_prime(2147483647));
  EXPECT_FALSE(is_prime(2147483647ULL * 3));
}

TEST(Primality, FactorsOfLargeComposites) {
  EXPECT_EQ(prime_factors(2147483646), (std::vector<DhInt>{2, 3, 7, 11, 31, 151, 331}));
  EXPECT_EQ(prime_factors(4294967291ULL * 4294967279ULL), (std::vector<DhInt>{4294967279ULL, 4294967291ULL}));
  EXPECT_EQ(prime_factors(1), std::vector<DhInt>{});
}

TEST(PrimitiveRoot, WorkedValues) {
  EXPECT_TRUE(is_primitive_root(5, 23));
  EXPECT_FALSE(is_primitive_root(4, 23));
  for (DhInt p : {3, 5, 7, 23, 97}) EXPECT_FALSE(is_primitive_root(1, p));
  EXPECT_TRUE(is_primitive_root(7, 2147483647));
}

TEST(PrimitiveRoot, OrderOfFourModTwentyThreeIsEleven) {
  DhInt k = 1;
  while (oracle::modexp(4, k, 23) != 1) ++k;
  EXPECT_EQ(k, 11u);
}

TEST(PrimitiveRoot, AgreesWithEnumerationExhaustively) {
  for (DhInt p : {5, 7, 11, 13, 23, 97}) {
    for (DhInt a = 1; a < p; ++a) EXPECT_EQ(is_primitive_root(a, p), oracle::is_primitive_root(a, p)) << a << " mod " << p;
  }
}

TEST(PrimitiveRoot, RejectsCompositeModulus) {
  EXPECT_THROW(is_primitive_root(2, 21), std::invalid_argument);
  EXPECT_THROW(is_primitive_root(2, 1), std::invalid_argument);
}

TEST(DhParams, Validation) {
  EXPECT_NO_THROW(DhParams(23, 5));
  EXPECT_NO_THROW(DhParams(2147483647, 7));
  EXPECT_THROW(DhParams(22, 5), std::invalid_argument);
  EXPECT_THROW(DhParams(23, 4), std::invalid_argument);
  EXPECT_THROW(DhParams(23, 23), std::invalid_argument);
  try {
    DhParams(23, 4);
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("not a primitive root"), std::string::npos);
  }
}

TEST(DhKeyPair, WorkedValuesAndRange) {
  const DhParams g(23, 5);
  EXPECT_EQ(dh_keypair(g, 6).s_public, 8u);
  EXPECT_EQ(dh_keypair(g, 15).s_public, 19u);
  EXPECT_THROW(dh_keypair(g, 0), std::out_of_range);
  EXPECT_THROW(dh_keypair(g, 23), std::out_of_range);
  EXPECT_NO_THROW(dh_keypair(g, 22));
}

TEST(DhShared, WorkedExchange) {
  const DhParams g(23, 5);
  const auto a = dh_keypair(g, 6);
  const auto b = dh_keypair(g, 15);
  EXPECT_EQ(dh_shared(g, b.s_public, a.r_private), 2u);
  EXPECT_EQ(dh_shared(g, a.s_public, b.r_private), 2u);
}

TEST(DhShared, PublicOneAndRange) {
  const DhParams g(23, 5);
  for (DhInt r = 1; r < 23; ++r) EXPECT_EQ(dh_shared(g, 1, r), 1u);
  EXPECT_THROW(dh_shared(g, 0, 3), std::out_of_range);
  EXPECT_THROW(dh_shared(g, 23, 3), std::out_of_range);
}

TEST(DhShared, AgreementOverDeskScalePrimes) {
  const std::vector<DhInt> primes = {23, 97, 101, 257, 1009, 2027, 4099, 7919, 10007};
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const DhInt p = primes[trial % primes.size()];
    const DhParams g(p, smallest_primitive_root(p));
    const DhInt r1 = 1 + rng() % (p - 1), r2 = 1 + rng() % (p - 1);
    const auto a = dh_keypair(g, r1), b = dh_keypair(g, r2);
    ASSERT_EQ(dh_shared(g, b.s_public, r1), dh_shared(g, a.s_public, r2));
  }
}

TEST(SessionKey, GoldenAndDistinctness) {
  const DhParams g(23, 5);
  const auto golden = oracle::load_golden(std::string(BTPAIR_TEST_DATA_DIR) + "/golden_vectors.txt");
  for (const auto& r : golden) {
    if (r.name == "session_key_k2_p23") {
      EXPECT_EQ(session_key_from_shared(2, g).bytes(), r.output);
    } else if (r.name == "session_key_k3_p23") {
      EXPECT_EQ(session_key_from_shared(3, g).bytes(), r.output);
    }
  }
  for (DhInt k = 0; k + 1 < 23; ++k) EXPECT_NE(session_key_from_shared(k, g), session_key_from_shared(k + 1, g));
  EXPECT_EQ(session_key_from_shared(2, g), session_key_from_shared(2, g));
  EXPECT_THROW(session_key_from_shared(23, g), std::out_of_range);
}
