#include <doctest.h>

#include <cmath>
#include <set>

#include "uqdc/rng.hpp"

using uqdc::CounterRng;

TEST_SUITE("rng") {
  TEST_CASE("philox4x32-10 known answers") {
    using B = CounterRng::Block;
    CHECK(CounterRng::philox(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(CounterRng::philox(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(CounterRng::philox(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("draws are addressed by index") {
    const CounterRng a(42, 7), b(42, 7), c(43, 7), d(42, 8);
    for (std::uint64_t i = 0; i < 100; ++i) {
      CHECK(a.uniform(i) == b.uniform(i));
      CHECK(a.normal(i) == b.normal(i));
    }
    CHECK(a.uniform(0) != c.uniform(0));
    CHECK(a.uniform(0) != d.uniform(0));
  }

  TEST_CASE("uniform lies in [0, 1) with the right mean") {
    const CounterRng rng(1);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const double u = rng.uniform(i);
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 100000));
  }

  TEST_CASE("normal draws have unit variance") {
    const CounterRng rng(3);
    const int n = 100000;
    double s = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = rng.normal(i);
      s += z;
      sq += z * z;
    }
    CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("streams and replicate seeds") {
    CHECK(uqdc::replicate_seed(123, 0) == 123);
    std::set<std::uint64_t> seeds;
    for (std::uint64_t k = 0; k < 10; ++k) seeds.insert(uqdc::replicate_seed(123, k));
    CHECK(seeds.size() == 10);
    CHECK(uqdc::derive_stream("initial", 0) != uqdc::derive_stream("initial", 1));
    CHECK(uqdc::derive_stream("initial", 1) != uqdc::derive_stream("rejection", 1));
    CHECK(uqdc::derive_stream("initial", 1) == uqdc::derive_stream("initial", 1));
  }
}
