#include <unordered_set>

#include "doctest.h"
#include "evercommit/oracle.hpp"

using namespace evercommit;

TEST_CASE("random oracle persistence and logging") {
  RandomOracle ro(64, 1);
  auto x = BitString::from_string("10110");
  auto first = ro.query(x);
  CHECK(first.size() == 64);
  CHECK(ro.query(x) == first);
  ro.query(BitString::from_string("1"));
  REQUIRE(ro.query_log().size() == 3);
  CHECK(ro.query_log()[0] == x);
  CHECK(ro.query_log()[2] == BitString::from_string("1"));
  // Inputs of different length never alias.
  CHECK_FALSE(ro.query(BitString::from_string("0")) == ro.query(BitString::from_string("00")));
}

TEST_CASE("fresh inputs give independent outputs") {
  RandomOracle ro(64, 2);
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < 20000; ++i) seen.insert(ro.query(BitString::from_uint(i, 32)).key());
  CHECK(seen.size() == 20000);
}

TEST_CASE("reprogramming") {
  RandomOracle ro(16, 3);
  auto p = BitString::from_string("0101");
  auto q = BitString::from_string("0111");
  auto base_q = ro.query(q);
  auto v1 = BitString::from_uint(0xbeef, 16);
  auto v2 = BitString::from_uint(0x1234, 16);
  ro.reprogram(p, v1);
  CHECK(ro.query(p) == v1);
  CHECK(ro.query(q) == base_q);
  ro.reprogram(p, v2);
  CHECK(ro.query(p) == v2);
  CHECK_THROWS_AS(ro.reprogram(p, BitString(15)), Error);
}

TEST_CASE("forked oracles share the base function but not patches") {
  RandomOracle h(16, 4);
  auto point = BitString::from_string("11");
  auto other = BitString::from_string("10");
  auto base = h.query(point);
  RandomOracle view = h.fork();
  view.reprogram(point, BitString(16));
  CHECK(view.query(point) == BitString(16));
  CHECK(h.query(point) == base);
  // A point first sampled through the fork is visible to the original.
  auto through_fork = view.query(other);
  CHECK(h.query(other) == through_fork);
  CHECK(view.query_log().size() == 2);
}

TEST_CASE("classical commitment") {
  ClassicalParams params{16, 16};
  CHECK(params.q() == 96);
  RandomOracle ro(params.q(), 5);
  Rng rng(1005);
  auto r = BitString::random(16, rng);
  auto rp = BitString::random(16, rng);
  auto f = commit_classical(r, rp, ro, params);
  CHECK(f.size() == 96);
  CHECK(commit_classical(r, rp, ro, params) == f);
  CHECK(verify_opening(f, r, rp, ro, params));

  auto r_bad = r;
  r_bad.flip(3);
  CHECK_FALSE(verify_opening(f, r_bad, rp, ro, params));
  auto f_bad = f;
  f_bad.flip(0);
  CHECK_FALSE(verify_opening(f_bad, r, rp, ro, params));
  CHECK_FALSE(verify_opening(f, r.slice(0, 15), rp, ro, params));

  CHECK_THROWS_AS(commit_classical(r.slice(0, 8), rp, ro, params), Error);
  CHECK_THROWS_AS(extract_classical(f, ro, params), SearchSpaceError);
}

TEST_CASE("exhaustive collision scan at s = t = 8") {
  ClassicalParams params{8, 8};
  RandomOracle ro(params.q(), 6);
  std::unordered_set<std::string> outputs;
  for (std::uint64_t v = 0; v < (1u << 16); ++v) outputs.insert(ro.query(BitString::from_uint(v, 16)).key());
  CHECK(outputs.size() == (1u << 16));
}

TEST_CASE("brute-force extraction") {
  ClassicalParams params{8, 8};
  RandomOracle ro(params.q(), 7);
  Rng rng(1007);
  for (int i = 0; i < 3; ++i) {
    auto r = BitString::random(8, rng);
    auto rp = BitString::random(8, rng);
    auto f = commit_classical(r, rp, ro, params);
    auto extracted = extract_classical(f, ro, params);
    REQUIRE(extracted.has_value());
    CHECK(*extracted == r);
    auto openings = all_openings(f, ro, params);
    REQUIRE(openings.size() == 1);
    CHECK(openings[0].second == rp);
  }
  // Uniform strings are not commitments: the 2^16 outputs cover a 2^-64
  // fraction of {0,1}^80.
  for (int i = 0; i < 5; ++i) CHECK_FALSE(extract_classical(BitString::random(80, rng), ro, params).has_value());
}

TEST_CASE("extraction reports collisions instead of choosing") {
  ClassicalParams params{4, 4};
  RandomOracle ro(params.q(), 8);
  auto target = BitString::from_uint(0xabc, 64).concat(BitString(params.q() - 64));
  ro.reprogram(BitString::from_string("10000000"), target);
  ro.reprogram(BitString::from_string("01000000"), target);
  CHECK_THROWS_AS(extract_classical(target, ro, params), CollisionError);

  RandomOracle same_msg(params.q(), 9);
  same_msg.reprogram(BitString::from_string("10000000"), target);
  same_msg.reprogram(BitString::from_string("10001000"), target);
  auto extracted = extract_classical(target, same_msg, params);
  REQUIRE(extracted.has_value());
  CHECK(*extracted == BitString::from_string("1000"));
}
