#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "nst/rng.hpp"

using nst::Philox;

// Known-answer vectors for philox4x64-10 with counter starting at zero,
// generated with an independent reference implementation of the same stream.
TEST_CASE("philox4x64-10 known-answer vectors", "[rng]") {
  {
    Philox rng(0);
    const std::uint64_t expect[8] = {
        0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull, 0x1c8667a55d902e79ull,
        0x907d7a052fd5b4dcull, 0x809bf322883987c3ull, 0x471128b9e807f7ddull,
        0xf250ba0dbec065b7ull, 0xfc6ed66767a457bcull};
    for (std::uint64_t e : expect) CHECK(rng.next_u64() == e);
  }
  {
    Philox rng(0xdeadbeef);
    const std::uint64_t expect[8] = {
        0xa4e930dc738acaf1ull, 0xb1c7ecc6484e9cf0ull, 0x6b88a411909298aaull,
        0x66f3c896201f7262ull, 0x8217df84a2c417d2ull, 0x6545baef6469464dull,
        0xcb729362b22b9981ull, 0x8455360174d010a1ull};
    for (std::uint64_t e : expect) CHECK(rng.next_u64() == e);
  }
  {
    Philox rng(0x123456789abcdef0ull);
    const std::uint64_t expect[8] = {
        0x6cbbf974e52b24dcull, 0xf7b1843d1e4fd656ull, 0xd8ff397f5c0b9a62ull,
        0x8cb8647259442556ull, 0x10d0a23ee520e17cull, 0x152955c118cda58aull,
        0x7c6bbeb9c7d0f15dull, 0xcdf5f2a5ef692eafull};
    for (std::uint64_t e : expect) CHECK(rng.next_u64() == e);
  }
}

TEST_CASE("uniform doubles match the reference mapping", "[rng]") {
  Philox rng(42);
  const double expect[6] = {0.82019814786088763, 0.18924562408645496,
                            0.86766081488214619, 0.39458147028272028,
                            0.36812845090913937, 0.43444625395959169};
  for (double e : expect) CHECK(rng.next_double() == Catch::Approx(e).epsilon(0.0).margin(0.0));
}

TEST_CASE("gaussians match the Box-Muller reference values", "[rng]") {
  Philox rng(42);
  const double expect[12] = {
      0.2345499249868942,    0.58429870875522882, -0.42015878925861722,
      0.32768186663284921,   -1.2955005147471352, 0.56597271750304512,
      1.6725885638284876,    0.68971079838147942, 0.054791233550196439,
      -0.50985810046277502,  1.3971689593097245,  0.38452150071766017};
  for (double e : expect)
    CHECK(rng.next_gaussian() == Catch::Approx(e).epsilon(1e-12));
}

TEST_CASE("streams with different tags are different", "[rng]") {
  Philox a(7, 0);
  Philox b(7, 1);
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) any_diff |= a.next_u64() != b.next_u64();
  CHECK(any_diff);
}

TEST_CASE("next_below stays in range and covers it", "[rng]") {
  Philox rng(123);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("sample_subset draws distinct in-range indices deterministically", "[rng]") {
  Philox a(55), b(55);
  const auto s1 = a.sample_subset(100, 20);
  const auto s2 = b.sample_subset(100, 20);
  CHECK(s1 == s2);
  std::set<nst::Index> uniq(s1.begin(), s1.end());
  CHECK(uniq.size() == 20);
  for (nst::Index v : s1) {
    CHECK(v >= 0);
    CHECK(v < 100);
  }
}

TEST_CASE("derive_seed separates nearby keys", "[rng]") {
  const auto s1 = nst::derive_seed(1, 2, 3, 4);
  const auto s2 = nst::derive_seed(1, 2, 3, 5);
  const auto s3 = nst::derive_seed(2, 2, 3, 4);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 == nst::derive_seed(1, 2, 3, 4));
}
