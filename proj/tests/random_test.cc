// Copyright 2026 The FacEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "faceval/random.h"

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "faceval/error.h"

namespace faceval {
namespace {

TEST(SeededRngTest, EngineMatchesStandardSequence) {
  // 10000th output of the default-seeded mt19937_64, fixed by the standard.
  SeededRng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.Next();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(SeededRngTest, SameSeedSameDraws) {
  SeededRng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.UniformIndex(17), b.UniformIndex(17));
    EXPECT_EQ(a.UniformReal(), b.UniformReal());
  }
}

TEST(SeededRngTest, UniformIndexStaysInRangeAndCoversIt) {
  SeededRng rng(7);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 6000; ++i) {
    const std::size_t v = rng.UniformIndex(6);
    ASSERT_LT(v, 6u);
    ++hits[v];
  }
  for (int h : hits) {
    EXPECT_GT(h, 850);
    EXPECT_LT(h, 1150);
  }
}

TEST(SeededRngTest, UniformRealInUnitInterval) {
  SeededRng rng(9);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.UniformReal();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(SeededRngTest, SampleIndicesAreSortedDistinctAndSized) {
  SeededRng rng(11);
  for (std::size_t n : {0u, 1u, 5u, 40u}) {
    for (std::size_t k = 0; k <= n + 2; ++k) {
      auto s = rng.SampleIndices(n, k);
      EXPECT_EQ(s.size(), std::min(k, n));
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
      EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), s.size());
      for (std::size_t v : s) EXPECT_LT(v, n);
    }
  }
}

TEST(SeededRngTest, ShuffleIsAPermutation) {
  SeededRng rng(13);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto shuffled = v;
  rng.Shuffle(shuffled);
  EXPECT_NE(shuffled, v);
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, v);
}

TEST(DeriveSeedTest, DependsOnEveryPart) {
  const auto base = DeriveSeed(1, "d1", "SS");
  EXPECT_EQ(base, DeriveSeed(1, "d1", "SS"));
  EXPECT_NE(base, DeriveSeed(2, "d1", "SS"));
  EXPECT_NE(base, DeriveSeed(1, "d2", "SS"));
  EXPECT_NE(base, DeriveSeed(1, "d1", "PS"));
  // Moving bytes between the parts changes the seed.
  EXPECT_NE(DeriveSeed(1, "ab", "c"), DeriveSeed(1, "a", "bc"));
}

TEST(HashBytesTest, MatchesFnv1aReferenceValues) {
  EXPECT_EQ(HashBytes(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(HashBytes("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(HashBytes("foobar"), 0x85944171f73967e8ULL);
}

TEST(ErrorTest, KindsAndDecoration) {
  ParseError with_line("bad record", 3);
  EXPECT_EQ(with_line.kind(), "parse_error");
  EXPECT_STREQ(with_line.what(), "line 3: bad record");
  EXPECT_EQ(with_line.line(), 3u);
  ParseError with_offset("truncated", std::nullopt, 120);
  EXPECT_STREQ(with_offset.what(), "byte 120: truncated");
  EXPECT_EQ(UndefinedCorrelationError("x").kind(), "domain_error");
  EXPECT_EQ(ServiceError("x").kind(), "service_error");
  EXPECT_EQ(MissingScoreError("x").kind(), "missing_score");
  EXPECT_EQ(VersionError("x").kind(), "version_error");
}

}  // namespace
}  // namespace faceval
