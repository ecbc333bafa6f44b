#include <gtest/gtest.h>

#include <random>

#include "autopeer/errors.hpp"
#include "autopeer/identity.hpp"
#include "autopeer/oracles.hpp"
#include "support.hpp"

namespace autopeer {
namespace {

using test::salt_of;

// Reference values below come from an independent SHA-256 (Python hashlib)
// and an independent mt19937_64 written from the published algorithm.
constexpr const char* kH1Zero = "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925";
constexpr const char* kH2Zero = "2b32db6c2c0a6235fb1397e8225ea85e0f0e6e8c7b126d0016ccbde0e667151e";
constexpr const char* kH3Zero = "12771355e46cd47c71ed1721fd5319b383cca3a1f9fce3aa1c8cd3bd37af20d7";

TEST(Digest, PublishedVectors) {
  for (const auto& v : oracles::sha256_vectors()) {
    EXPECT_EQ(to_hex(sha256(v.input)), v.sha256_hex) << v.name;
  }
}

TEST(Digest, ConcatMatchesOneShot) {
  Bytes32 a{}, b{}, c{};
  a.fill(0x00);
  b.fill(0x01);
  c.fill(0x02);
  EXPECT_EQ(to_hex(sha256_concat(a, b, c)), oracles::sha256_vectors()[3].sha256_hex);
}

TEST(Digest, HexRoundTrip) {
  const Bytes32 d = bytes32_from_hex(kH2Zero);
  EXPECT_EQ(to_hex(d), kH2Zero);
  EXPECT_THROW(bytes32_from_hex("abc"), InvalidParameter);
  EXPECT_THROW(bytes32_from_hex(std::string(64, 'g')), InvalidParameter);
}

TEST(Rng, EngineIsStandardMt19937_64) {
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ULL);
}

TEST(Rng, FillIsLittleEndianDraws) {
  Rng a(0);
  NodeId id = new_identity(a);
  EXPECT_EQ(id.hex(), "3edc41cbc537e8288bf9403e7c3afdfdb9e832f01732210aeefce3ce0369f598");
  Salt s = new_private_salt(a);
  EXPECT_EQ(to_hex(s.bytes), "ac25073b1330d38aeee95ffd2a06a20e2fe12a04f3d7aba1e8468245451e6f6c");
  EXPECT_EQ(s.kind, SaltKind::Private);
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(rng.below(0), InvalidParameter);
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(Rng::derive_seed(1, 0), Rng::derive_seed(1, 1));
  EXPECT_NE(Rng::derive_seed(1, 0), Rng::derive_seed(2, 0));
  EXPECT_EQ(Rng::derive_seed(9, 4), Rng::derive_seed(9, 4));
}

TEST(HashChain, ZeroSeedGolden) {
  HashChain c = HashChain::create(Bytes32{}, 4);
  EXPECT_EQ(c.length(), 4u);
  EXPECT_EQ(c.cursor(), 3u);
  EXPECT_EQ(to_hex(c.current().bytes), kH3Zero);
  EXPECT_EQ(to_hex(c.advance().bytes), kH2Zero);
  EXPECT_EQ(to_hex(c.advance().bytes), kH1Zero);
  EXPECT_EQ(c.advance().bytes, Bytes32{});
  EXPECT_TRUE(c.exhausted());
  EXPECT_THROW(c.advance(), ChainExhausted);
}

TEST(HashChain, RejectsShortChains) {
  EXPECT_THROW(HashChain::create(Bytes32{}, 1), InvalidParameter);
  EXPECT_THROW(HashChain::create(Bytes32{}, 0), InvalidParameter);
  EXPECT_NO_THROW(HashChain::create(Bytes32{}, 2));
}

TEST(HashChain, ElementsAreLinked) {
  Rng rng(11);
  Bytes32 seed{};
  rng.fill(seed);
  const HashChain c = HashChain::create(seed, 10);
  EXPECT_EQ(c.element(0), seed);
  for (std::size_t i = 1; i < c.length(); ++i) EXPECT_EQ(c.element(i), sha256(c.element(i - 1)));
}

TEST(VerifySalt, Examples) {
  HashChain c = HashChain::create(Bytes32{}, 8);
  const Salt s7 = c.current();
  c.advance();
  c.advance();
  const Salt s5 = c.current();
  EXPECT_TRUE(verify_salt(s5, s7, 2));
  EXPECT_FALSE(verify_salt(s5, s7, 1));
  EXPECT_FALSE(verify_salt(s5, s7, 3));
  EXPECT_TRUE(verify_salt(s7, s7, 0));
  EXPECT_FALSE(verify_salt(s5, s7, 0));
  // Running the chain forwards (revealing a later element) must not verify.
  EXPECT_FALSE(verify_salt(s7, s5, 2));
  EXPECT_THROW(verify_salt(s5, s7, 17, 16), VerificationRefused);
  EXPECT_TRUE(verify_salt(s5, s7, 2, 2));
}

// Honest advances verify; any single flipped bit in the claimed salt does not.
TEST(VerifySalt, SoundnessOverRandomChains) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes32 seed{};
    rng.fill(seed);
    const std::size_t len = 2 + rng.below(30);
    HashChain c = HashChain::create(seed, len);
    const std::uint32_t m = static_cast<std::uint32_t>(rng.below(len));
    const Salt old = c.current();
    for (std::uint32_t i = 0; i < m; ++i) c.advance();
    const Salt now = c.current();
    ASSERT_TRUE(verify_salt(now, old, m, 64)) << "trial " << trial;

    Salt tampered = now;
    const std::size_t bit = rng.below(256);
    tampered.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ASSERT_FALSE(verify_salt(tampered, old, m, 64)) << "trial " << trial;
  }
}

TEST(Identity, PoolNeverRepeats) {
  Rng rng(5);
  IdentityPool pool;
  std::unordered_set<NodeId, NodeIdHash> seen;
  for (int i = 0; i < 2000; ++i) EXPECT_TRUE(seen.insert(pool.draw(rng)).second);
  EXPECT_EQ(pool.size(), 2000u);
}

TEST(Identity, OrderingIsLexicographic) {
  EXPECT_LT(test::id_of(0x01), test::id_of(0x02));
  NodeId a = test::id_of(0x00);
  NodeId b = a;
  b.bytes[31] = 1;
  EXPECT_LT(a, b);
  EXPECT_EQ(test::id_of(0xab).short_hex(), "abababab");
  EXPECT_EQ(salt_of(1), salt_of(1));
}

}  // namespace
}  // namespace autopeer
