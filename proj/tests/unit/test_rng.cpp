#include <doctest.h>

#include <cmath>
#include <vector>

#include "kolmonet/rng.hpp"

using namespace kolmonet;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and separated") {
  CounterStream a(42, 3, 7, StreamTag::kBrownian), b(42, 3, 7, StreamTag::kBrownian);
  CounterStream c(42, 3, 7, StreamTag::kOracle), d(43, 3, 7, StreamTag::kBrownian);
  bool differs_tag = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs_tag = differs_tag || x != c.normal();
    differs_seed = differs_seed || x != d.normal();
  }
  CHECK(differs_tag);
  CHECK(differs_seed);
}

TEST_CASE("uniform and normal moments") {
  CounterStream s(7, 0, 0, StreamTag::kTest);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    const double z = s.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(su / n - 0.5) <= 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sn / n) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) <= 4.0 * std::sqrt(2.0 / n));
}
