/*
 * Copyright 2026 the tcsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>
#include <vector>

#include "doctest.h"
#include "support/reference_kernels.hpp"
#include "tcsim/accel.hpp"
#include "tcsim/mem.hpp"

using namespace tcsim;
using accel::CycleModel;
using refk::vec;

namespace {

constexpr uint32_t kDmemBytes = 1 << 20;

void put(MemoryBank& m, uint32_t addr, const vec& words) {
  for (size_t i = 0; i < words.size(); ++i)
    m.write32(addr + 4 * static_cast<uint32_t>(i), words[i]);
}

vec take(const MemoryBank& m, uint32_t addr, size_t n) {
  vec out(n);
  for (size_t i = 0; i < n; ++i) out[i] = m.read32(addr + 4 * static_cast<uint32_t>(i));
  return out;
}

vec rand_words(std::mt19937_64& rng, size_t n, uint32_t max = 0xffffffffu) {
  std::uniform_int_distribution<uint32_t> d(0, max);
  vec v(n);
  for (auto& w : v) w = d(rng);
  return v;
}

// args[0] already holds the payload count.
void invoke(const murac::Accelerator& acc, MemoryBank& m, const vec& args) {
  acc.apply(m, std::span<const uint32_t>(args));
}

}  // namespace

TEST_CASE("CycleModel charges startup plus ceil(work / throughput)") {
  CycleModel cm{4, 5};
  CHECK(cm.cost(0) == 4u);
  CHECK(cm.cost(1) == 5u);
  CHECK(cm.cost(5) == 5u);
  CHECK(cm.cost(6) == 6u);
  CHECK(cm.cost(11) == 7u);
  CycleModel degenerate{2, 0};  // zero throughput reads as one per cycle
  CHECK(degenerate.cost(3) == 5u);
}

TEST_CASE("default cycle models match the declared throughputs") {
  for (auto [name, epc] :
       std::initializer_list<std::pair<std::string_view, uint64_t>>{
           {"mm-tile", 5},
           {"mm-full", 5},
           {"fir-tile", 50},
           {"fir-full", 50},
           {"km-tile", 8},
           {"km-full", 8},
           {"se-tile", 9},
           {"se-full", 9}}) {
    CAPTURE(name);
    auto cm = accel::default_cycle_model(name);
    CHECK(cm.startup_cycles == 4u);
    CHECK(cm.elems_per_cycle == epc);
  }
  CHECK_THROWS_AS(accel::default_cycle_model("nope"), std::invalid_argument);
}

TEST_CASE("the factory builds every listed accelerator") {
  const auto& names = accel::accelerator_names();
  CHECK(names.size() == 8u);
  for (auto n : names) {
    CAPTURE(n);
    auto acc = accel::make_accelerator(n);
    REQUIRE(acc != nullptr);
    CHECK(acc->name() == n);
  }
  CHECK_THROWS_AS(accel::make_accelerator("mm"), std::invalid_argument);
}

TEST_CASE("mm-full reproduces the reference product on random matrices") {
  std::mt19937_64 rng(11);
  for (uint32_t n : {1u, 2u, 3u, 5u, 8u, 12u}) {
    CAPTURE(n);
    MemoryBank m(kDmemBytes);
    vec a = rand_words(rng, n * n), b = rand_words(rng, n * n);
    const uint32_t A = 0x1000, B = A + 4 * n * n, C = B + 4 * n * n;
    put(m, A, a);
    put(m, B, b);
    accel::MmFull acc({4, 5});
    vec args{4, A, B, C, n};
    CHECK(acc.cycle_cost(std::span<const uint32_t>(args)) ==
          4 + (static_cast<uint64_t>(n) * n * n + 4) / 5);
    invoke(acc, m, args);
    CHECK(take(m, C, n * n) == refk::mm(a, b, n));
  }
}

TEST_CASE("mm-tile strips compose to the full product") {
  std::mt19937_64 rng(12);
  const uint32_t n = 10;
  MemoryBank m(kDmemBytes);
  vec a = rand_words(rng, n * n), b = rand_words(rng, n * n);
  const uint32_t A = 0x1000, B = A + 4 * n * n, C = B + 4 * n * n;
  put(m, A, a);
  put(m, B, b);
  put(m, C, vec(n * n, 0xdeadbeefu));  // sentinel to spot stray writes

  accel::MmTile acc({4, 5});
  vec probe{6, A, B, C, n, 0, 5};
  CHECK(acc.cycle_cost(std::span<const uint32_t>(probe)) == 4u + n);

  // One strip first: exactly five sentinel words change.
  invoke(acc, m, probe);
  vec expect = refk::mm(a, b, n);
  auto c_now = take(m, C, n * n);
  for (uint32_t i = 0; i < n * n; ++i) {
    if (i >= 5 && i < 10)
      CHECK(c_now[i] == expect[i]);
    else
      CHECK(c_now[i] == 0xdeadbeefu);
  }

  for (uint32_t row = 0; row < n; ++row)
    for (uint32_t col5 = 0; col5 < n; col5 += 5)
      invoke(acc, m, vec{6, A, B, C, n, row, col5});
  CHECK(take(m, C, n * n) == expect);
}

TEST_CASE("fir-full reproduces the reference convolution") {
  std::mt19937_64 rng(13);
  for (auto [len, taps] : std::initializer_list<std::pair<uint32_t, uint32_t>>{
           {1, 1}, {8, 3}, {200, 50}, {64, 64}}) {
    CAPTURE(len);
    CAPTURE(taps);
    MemoryBank m(kDmemBytes);
    vec x = rand_words(rng, len), h = rand_words(rng, taps);
    const uint32_t n_out = len - taps + 1;
    const uint32_t X = 0x1000, H = X + 4 * len, Y = H + 4 * taps;
    put(m, X, x);
    put(m, H, h);
    accel::FirFull acc({4, 50});
    vec args{5, X, H, Y, taps, n_out};
    CHECK(acc.cycle_cost(std::span<const uint32_t>(args)) ==
          4 + (static_cast<uint64_t>(n_out) * taps + 49) / 50);
    invoke(acc, m, args);
    CHECK(take(m, Y, n_out) == refk::fir(x, h));
  }
}

TEST_CASE("fir-tile chunks compose to the full convolution") {
  std::mt19937_64 rng(14);
  const uint32_t len = 173, taps = 7, n_out = len - taps + 1;
  MemoryBank m(kDmemBytes);
  vec x = rand_words(rng, len), h = rand_words(rng, taps);
  const uint32_t X = 0x1000, H = X + 4 * len, Y = H + 4 * taps;
  put(m, X, x);
  put(m, H, h);
  accel::FirTile acc({4, 50});
  for (uint32_t start = 0; start < n_out; start += 50) {
    uint32_t cnt = std::min(50u, n_out - start);
    vec args{6, X, H, Y, taps, start, cnt};
    CHECK(acc.cycle_cost(std::span<const uint32_t>(args)) ==
          4 + (static_cast<uint64_t>(cnt) * taps + 49) / 50);
    invoke(acc, m, args);
  }
  CHECK(take(m, Y, n_out) == refk::fir(x, h));
}

TEST_CASE("km-full matches the reference assignment pass") {
  std::mt19937_64 rng(15);
  for (auto [n, k, dims] :
       std::initializer_list<std::array<uint32_t, 3>>{
           {1, 1, 1}, {17, 4, 2}, {100, 3, 5}}) {
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(dims);
    MemoryBank m(kDmemBytes);
    vec nodes = rand_words(rng, n * dims), cents = rand_words(rng, k * dims);
    const uint32_t NODES = 0x1000, CENTS = NODES + 4 * n * dims,
                   ASSIGN = CENTS + 4 * k * dims, SUMS = ASSIGN + 4 * n,
                   COUNTS = SUMS + 4 * k * dims;
    put(m, NODES, nodes);
    put(m, CENTS, cents);
    accel::KmFull acc({4, 8});
    vec args{8, NODES, CENTS, ASSIGN, SUMS, COUNTS, n, k, dims};
    CHECK(acc.cycle_cost(std::span<const uint32_t>(args)) ==
          4 + (static_cast<uint64_t>(n) * k * dims + 7) / 8);
    invoke(acc, m, args);
    auto want = refk::km(nodes, cents, n, k, dims);
    CHECK(take(m, ASSIGN, n) == want.assign);
    CHECK(take(m, SUMS, k * dims) == want.sums);
    CHECK(take(m, COUNTS, k) == want.counts);
  }
}

TEST_CASE("km ties go to the lowest centroid index") {
  MemoryBank m(kDmemBytes);
  const uint32_t n = 3, k = 2, dims = 1;
  // Node 5 is equidistant from centroids 4 and 6.
  put(m, 0x1000, vec{5, 4, 6});
  put(m, 0x1010, vec{4, 6});
  accel::KmFull acc({4, 8});
  invoke(acc, m, vec{8, 0x1000, 0x1010, 0x1020, 0x1030, 0x1040, n, k, dims});
  CHECK(take(m, 0x1020, n) == vec{0, 0, 1});
  CHECK(take(m, 0x1030, k * dims) == vec{9, 6});
  CHECK(take(m, 0x1040, k) == vec{2, 1});
}

TEST_CASE("km-tile chunks accumulate into the same digest region") {
  std::mt19937_64 rng(16);
  const uint32_t n = 500, k = 4, dims = 2;
  MemoryBank full_m(kDmemBytes), tile_m(kDmemBytes);
  vec nodes = rand_words(rng, n * dims), cents = rand_words(rng, k * dims);
  const uint32_t NODES = 0x1000, CENTS = NODES + 4 * n * dims,
                 ASSIGN = CENTS + 4 * k * dims, SUMS = ASSIGN + 4 * n,
                 COUNTS = SUMS + 4 * k * dims;
  for (MemoryBank* m : {&full_m, &tile_m}) {
    put(*m, NODES, nodes);
    put(*m, CENTS, cents);
  }
  accel::KmFull full({4, 8});
  invoke(full, full_m, vec{8, NODES, CENTS, ASSIGN, SUMS, COUNTS, n, k, dims});
  accel::KmTile tile({4, 8});
  for (uint32_t start = 0; start < n; start += 125) {
    uint32_t cnt = std::min(125u, n - start);
    invoke(tile, tile_m,
           vec{9, NODES, CENTS, ASSIGN, SUMS, COUNTS, start, cnt, k, dims});
  }
  // Assignments, partial sums and counts all agree word for word.
  const size_t digest_words = n + k * dims + k;
  CHECK(take(tile_m, ASSIGN, digest_words) == take(full_m, ASSIGN, digest_words));
  auto want = refk::km(nodes, cents, n, k, dims);
  CHECK(take(full_m, ASSIGN, n) == want.assign);
}

TEST_CASE("se-full applies clamp-to-edge Sobel over the whole image") {
  std::mt19937_64 rng(17);
  for (auto [h, w] : std::initializer_list<std::pair<uint32_t, uint32_t>>{
           {3, 3}, {5, 9}, {20, 20}}) {
    CAPTURE(h);
    CAPTURE(w);
    MemoryBank m(kDmemBytes);
    vec in = rand_words(rng, h * w, (1u << 20) - 1);
    const uint32_t IN = 0x1000, OUT = IN + 4 * h * w;
    put(m, IN, in);
    accel::SeFull acc({4, 9});
    vec args{4, IN, OUT, w, h};
    CHECK(acc.cycle_cost(std::span<const uint32_t>(args)) ==
          4 + (static_cast<uint64_t>(w) * h * 9 + 8) / 9);
    invoke(acc, m, args);
    CHECK(take(m, OUT, h * w) == refk::sobel(in, h, w));
  }
}

TEST_CASE("se-tile computes an interior tile without edge clamping") {
  std::mt19937_64 rng(18);
  const uint32_t h = 34, w = 34;
  MemoryBank m(kDmemBytes);
  vec in = rand_words(rng, h * w, (1u << 20) - 1);
  const uint32_t IN = 0x1000, OUT = IN + 4 * h * w;
  put(m, IN, in);
  accel::SeTile acc({4, 9});
  vec probe{5, IN, OUT, w, 1, 1};
  CHECK(acc.cycle_cost(std::span<const uint32_t>(probe)) ==
        4 + (16ull * 16 * 9 + 8) / 9);
  for (uint32_t r = 1; r + 16 <= h - 1; r += 16)
    for (uint32_t c = 1; c + 16 <= w - 1; c += 16)
      invoke(acc, m, vec{5, IN, OUT, w, r, c});
  auto want = refk::sobel(in, h, w);
  auto got = take(m, OUT, h * w);
  for (uint32_t r = 1; r < h - 1; ++r)
    for (uint32_t c = 1; c < w - 1; ++c) {
      CAPTURE(r);
      CAPTURE(c);
      CHECK(got[r * w + c] == want[r * w + c]);
    }
}

TEST_CASE("malformed argument arrays are rejected") {
  MemoryBank m(kDmemBytes);
  accel::MmFull mm({4, 5});
  SUBCASE("wrong count word") {
    CHECK_THROWS_AS(invoke(mm, m, vec{3, 0x1000, 0x2000, 0x3000, 2}),
                    murac::BadArgs);
  }
  SUBCASE("array too short for the count") {
    vec args{4, 0x1000, 0x2000, 0x3000};
    CHECK_THROWS_AS(mm.cycle_cost(std::span<const uint32_t>(args)),
                    murac::BadArgs);
  }
  SUBCASE("misaligned array base") {
    CHECK_THROWS_AS(invoke(mm, m, vec{4, 0x1001, 0x2000, 0x3000, 2}),
                    murac::BadArgs);
  }
  SUBCASE("matrix spills out of DMEM") {
    CHECK_THROWS_AS(invoke(mm, m, vec{4, kDmemBytes - 16, 0x2000, 0x3000, 4}),
                    murac::BadArgs);
  }
  SUBCASE("se-tile window touching the image edge") {
    accel::SeTile se({4, 9});
    CHECK_THROWS_AS(invoke(se, m, vec{5, 0x1000, 0x9000, 34, 0, 1}),
                    murac::BadArgs);
    CHECK_THROWS_AS(invoke(se, m, vec{5, 0x1000, 0x9000, 34, 1, 0}),
                    murac::BadArgs);
    CHECK_THROWS_AS(invoke(se, m, vec{5, 0x1000, 0x9000, 34, 1, 18}),
                    murac::BadArgs);
  }
}
