#include <unordered_set>

#include "doctest.h"
#include "evercommit/commitment.hpp"
#include "test_support.hpp"

using namespace evercommit;
using evercommit::testing::chi_square_uniform;

TEST_CASE("commit then open returns the message") {
  auto params = CcdParams::defaults();
  Rng rng(1);
  auto oracles = OracleSet::create(params, rng);
  for (int i = 0; i < 200; ++i) {
    auto m = BitString::random(params.ske.msg_len, rng);
    auto out = ccd_commit(m, params, oracles, rng);
    CHECK(out.com.h.size() == 63);
    CHECK(out.com.f.size() == 96);
    auto opened = ccd_verify(out.com, out.decommitment, oracles, params, rng);
    REQUIRE(opened.has_value());
    CHECK(*opened == m);
  }
}

TEST_CASE("commitments to the same message differ") {
  auto params = CcdParams::defaults();
  Rng rng(2);
  auto oracles = OracleSet::create(params, rng);
  std::unordered_set<std::string> fs;
  for (int i = 0; i < 100; ++i) fs.insert(ccd_commit(BitString(8), params, oracles, rng).com.f.key());
  CHECK(fs.size() == 100);
}

TEST_CASE("verify1 rejects any flipped opening bit") {
  auto params = CcdParams::defaults();
  Rng rng(3);
  auto oracles = OracleSet::create(params, rng);
  auto out = ccd_commit(BitString(8), params, oracles, rng);
  const auto& d = out.decommitment;
  CHECK(ccd_verify1(out.com, d.d1, d.d2, oracles, params));
  for (std::size_t i = 0; i < d.d1.size(); ++i) {
    auto bad = d.d1;
    bad.flip(i);
    CHECK_FALSE(ccd_verify1(out.com, bad, d.d2, oracles, params));
  }
  for (std::size_t i = 0; i < d.d2.size(); ++i) {
    auto bad = d.d2;
    bad.flip(i);
    CHECK_FALSE(ccd_verify1(out.com, d.d1, bad, oracles, params));
  }
  CHECK_FALSE(ccd_verify(out.com, {d.d1.slice(0, 15), d.d2}, oracles, params, rng).has_value());
  CHECK_FALSE(ccd_verify(out.com, {d.d1, BitString(17)}, oracles, params, rng).has_value());
}

TEST_CASE("verify2 with a wrong d1 yields a uniform message") {
  auto params = CcdParams::defaults().with_msg_len(4);
  Rng rng(4);
  auto oracles = OracleSet::create(params, rng);
  std::vector<std::size_t> counts(16, 0);
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    auto out = ccd_commit(BitString(4), params, oracles, rng);
    auto wrong = BitString::random(params.classical.s, rng);
    if (wrong == out.decommitment.d1) wrong.flip(0);
    counts[ccd_verify2(out.com, wrong, oracles, params, rng).to_uint()]++;
  }
  // 15 degrees of freedom; 99.9% quantile is 37.7.
  CHECK(chi_square_uniform(counts) < 37.7);
}

TEST_CASE("deletion certificate") {
  auto params = CcdParams::defaults();
  Rng rng(5);
  auto oracles = OracleSet::create(params, rng);
  for (int i = 0; i < 200; ++i) {
    auto out = ccd_commit(BitString::random(8, rng), params, oracles, rng);
    auto cert = ccd_del(out.com, rng);
    CHECK(ccd_cert(cert, out.key, params));
    auto forged = cert;
    forged.outcomes.flip(out.key.ck.hadamard_positions()[i % 16]);
    CHECK_FALSE(ccd_cert(forged, out.key, params));
  }
}

TEST_CASE("key mask uses the hash at R") {
  auto params = CcdParams::defaults();
  Rng rng(6);
  auto oracles = OracleSet::create(params, rng);
  auto out = ccd_commit(BitString(8), params, oracles, rng);
  CHECK((oracles.hash.query(out.decommitment.d1) ^ out.com.h) == out.key.ck.serialize());
}

TEST_CASE("extractor recovers R and only R") {
  auto params = CcdParams::small();  // s = t = 8
  Rng rng(7);
  auto oracles = OracleSet::create(params, rng);
  for (int i = 0; i < 100; ++i) {
    auto out = ccd_commit(BitString::random(params.ske.msg_len, rng), params, oracles, rng);
    auto extracted = ccd_extract(out.com.f, oracles, params);
    REQUIRE(extracted.has_value());
    CHECK(*extracted == out.decommitment.d1);
  }
  for (int i = 0; i < 5; ++i) CHECK_FALSE(ccd_extract(BitString::random(80, rng), oracles, params).has_value());
  CHECK_THROWS_AS(ccd_extract(BitString(96), oracles, CcdParams::defaults()), SearchSpaceError);
}

TEST_CASE("sum-binding audit for honest single-bit commitments") {
  auto params = CcdParams::defaults().with_msg_len(1);
  Rng rng(8);
  auto oracles = OracleSet::create(params, rng);
  for (int i = 0; i < 100; ++i) {
    std::uint8_t b = i & 1;
    auto out = ccd_commit(BitString{b}, params, oracles, rng);
    double p0 = ccd_verify_sum_probability(out.com, out.decommitment, 0, oracles, params);
    double p1 = ccd_verify_sum_probability(out.com, out.decommitment, 1, oracles, params);
    CHECK(p0 + p1 <= 1.0 + 1e-12);
    CHECK((b ? p1 : p0) == 1.0);
    CHECK(ccd_verify_sum(out.com, out.decommitment, b, oracles, params, rng));
  }
  // A wrong d1 opens neither bit.
  auto out = ccd_commit(BitString{1}, params, oracles, rng);
  auto bad = out.decommitment;
  bad.d1.flip(0);
  CHECK(ccd_verify_sum_probability(out.com, bad, 0, oracles, params) == 0.0);
  CHECK(ccd_verify_sum_probability(out.com, bad, 1, oracles, params) == 0.0);
  CHECK_THROWS_AS(ccd_verify_sum(out.com, out.decommitment, 1, oracles, CcdParams::defaults(), rng), Error);
}
