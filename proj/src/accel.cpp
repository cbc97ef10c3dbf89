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

#include "tcsim/accel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tcsim::accel {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw murac::BadArgs(msg);
}

void require_count(std::span<const uint32_t> args, uint32_t n,
                   const char* who) {
  if (args.empty() || args[0] != n || args.size() != n + 1)
    throw murac::BadArgs(std::string(who) + ": argument count must be " +
                         std::to_string(n));
}

/// Bounds-checked view of a word array in DMEM. Indices are signed 64-bit
/// so that negative intermediate indices are caught instead of wrapping.
class Words {
 public:
  Words(MemoryBank& mem, uint32_t base) : mem_(mem), base_(base) {
    require(base % 4 == 0, "array base not word-aligned");
  }

  uint32_t get(int64_t idx) const { return mem_.read32(addr(idx)); }
  void set(int64_t idx, uint32_t v) const { mem_.write32(addr(idx), v); }

 private:
  uint32_t addr(int64_t idx) const {
    int64_t a = static_cast<int64_t>(base_) + 4 * idx;
    require(idx >= 0 && a + 4 <= static_cast<int64_t>(mem_.size_bytes()),
            "array index outside DMEM");
    return static_cast<uint32_t>(a);
  }

  MemoryBank& mem_;
  uint32_t base_;
};

uint32_t clamp_byte(int32_t v) {
  return static_cast<uint32_t>(std::clamp(v, 0, 255));
}

int32_t wrap_abs(int32_t v) {
  return v < 0 ? static_cast<int32_t>(-static_cast<uint32_t>(v)) : v;
}

// One Sobel response with the standard 3x3 kernels; `at` maps (row, col)
// to a pixel value.
template <typename At>
uint32_t sobel_at(At at, int64_t r, int64_t c) {
  uint32_t p[3][3];
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      p[dy + 1][dx + 1] = at(r + dy, c + dx);
  uint32_t gx = (p[0][2] + 2 * p[1][2] + p[2][2]) -
                (p[0][0] + 2 * p[1][0] + p[2][0]);
  uint32_t gy = (p[2][0] + 2 * p[2][1] + p[2][2]) -
                (p[0][0] + 2 * p[0][1] + p[0][2]);
  int32_t s = wrap_abs(static_cast<int32_t>(gx)) +
              wrap_abs(static_cast<int32_t>(gy));
  return clamp_byte(s);
}

}  // namespace

uint64_t MmTile::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 6, "mm-tile");
  return cm_.cost(5ull * args[4]);
}

void MmTile::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 6, "mm-tile");
  Words a(dmem, args[1]), b(dmem, args[2]), c(dmem, args[3]);
  const int64_t n = args[4], row = args[5], col5 = args[6];
  for (int64_t j = 0; j < 5; ++j) {
    uint32_t acc = 0;
    for (int64_t k = 0; k < n; ++k)
      acc += a.get(row * n + k) * b.get(k * n + col5 + j);
    c.set(row * n + col5 + j, acc);
  }
}

uint64_t FirTile::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 6, "fir-tile");
  return cm_.cost(static_cast<uint64_t>(args[6]) * args[4]);
}

void FirTile::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 6, "fir-tile");
  Words x(dmem, args[1]), h(dmem, args[2]), y(dmem, args[3]);
  const int64_t taps = args[4], start = args[5], cnt = args[6];
  for (int64_t i = start; i < start + cnt; ++i) {
    uint32_t acc = 0;
    for (int64_t t = 0; t < taps; ++t) acc += h.get(t) * x.get(i + t);
    y.set(i, acc);
  }
}

namespace {

// Shared assignment pass used by both the km tile and the full variant.
void km_assign(MemoryBank& dmem, uint32_t nodes_a, uint32_t cents_a,
               uint32_t assign_a, uint32_t sums_a, uint32_t counts_a,
               int64_t start, int64_t cnt, int64_t k, int64_t dims) {
  Words nodes(dmem, nodes_a), cents(dmem, cents_a), assign(dmem, assign_a),
      sums(dmem, sums_a), counts(dmem, counts_a);
  for (int64_t node = start; node < start + cnt; ++node) {
    uint32_t bestd = 0xffffffffu;
    int64_t best = 0;
    for (int64_t c = 0; c < k; ++c) {
      uint32_t d = 0;
      for (int64_t dim = 0; dim < dims; ++dim) {
        uint32_t diff = nodes.get(node * dims + dim) -
                        cents.get(c * dims + dim);
        d += diff * diff;
      }
      if (d < bestd) {  // strict: ties stay with the lowest index
        bestd = d;
        best = c;
      }
    }
    assign.set(node, static_cast<uint32_t>(best));
    for (int64_t dim = 0; dim < dims; ++dim)
      sums.set(best * dims + dim, sums.get(best * dims + dim) +
                                      nodes.get(node * dims + dim));
    counts.set(best, counts.get(best) + 1);
  }
}

}  // namespace

uint64_t KmTile::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 9, "km-tile");
  return cm_.cost(static_cast<uint64_t>(args[7]) * args[8] * args[9]);
}

void KmTile::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 9, "km-tile");
  km_assign(dmem, args[1], args[2], args[3], args[4], args[5], args[6],
            args[7], args[8], args[9]);
}

uint64_t SeTile::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 5, "se-tile");
  return cm_.cost(static_cast<uint64_t>(kTile) * kTile * 9);
}

void SeTile::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 5, "se-tile");
  Words in(dmem, args[1]), out(dmem, args[2]);
  const int64_t w = args[3], r = args[4], c = args[5];
  // Height is not part of the arguments, so only three of the four window
  // edges can be policed here; a bottom overrun is caught by Words.
  require(r >= 1 && c >= 1 && c + kTile + 1 <= w,
          "se-tile: 18x18 input window leaves the image");
  auto at = [&](int64_t y, int64_t x) { return in.get(y * w + x); };
  for (int64_t y = r; y < r + kTile; ++y)
    for (int64_t x = c; x < c + kTile; ++x)
      out.set(y * w + x, sobel_at(at, y, x));
}

uint64_t MmFull::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 4, "mm-full");
  uint64_t n = args[4];
  return cm_.cost(n * n * n);
}

void MmFull::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 4, "mm-full");
  Words a(dmem, args[1]), b(dmem, args[2]), c(dmem, args[3]);
  const int64_t n = args[4];
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) {
      uint32_t acc = 0;
      for (int64_t k = 0; k < n; ++k) acc += a.get(i * n + k) * b.get(k * n + j);
      c.set(i * n + j, acc);
    }
}

uint64_t FirFull::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 5, "fir-full");
  return cm_.cost(static_cast<uint64_t>(args[5]) * args[4]);
}

void FirFull::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 5, "fir-full");
  Words x(dmem, args[1]), h(dmem, args[2]), y(dmem, args[3]);
  const int64_t taps = args[4], n_out = args[5];
  for (int64_t i = 0; i < n_out; ++i) {
    uint32_t acc = 0;
    for (int64_t t = 0; t < taps; ++t) acc += h.get(t) * x.get(i + t);
    y.set(i, acc);
  }
}

uint64_t KmFull::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 8, "km-full");
  return cm_.cost(static_cast<uint64_t>(args[6]) * args[7] * args[8]);
}

void KmFull::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 8, "km-full");
  km_assign(dmem, args[1], args[2], args[3], args[4], args[5], 0, args[6],
            args[7], args[8]);
}

uint64_t SeFull::cycle_cost(std::span<const uint32_t> args) const {
  require_count(args, 4, "se-full");
  return cm_.cost(static_cast<uint64_t>(args[3]) * args[4] * 9);
}

void SeFull::apply(MemoryBank& dmem, std::span<const uint32_t> args) const {
  require_count(args, 4, "se-full");
  Words in(dmem, args[1]), out(dmem, args[2]);
  const int64_t w = args[3], h = args[4];
  // Whole image, boundary ring included, sampling clamped to the edge.
  auto at = [&](int64_t y, int64_t x) {
    y = std::clamp<int64_t>(y, 0, h - 1);
    x = std::clamp<int64_t>(x, 0, w - 1);
    return in.get(y * w + x);
  };
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x)
      out.set(y * w + x, sobel_at(at, y, x));
}

CycleModel default_cycle_model(std::string_view name) {
  if (name == "mm-tile" || name == "mm-full") return {4, 5};
  if (name == "fir-tile" || name == "fir-full") return {4, 50};
  if (name == "km-tile" || name == "km-full") return {4, 8};
  if (name == "se-tile" || name == "se-full") return {4, 9};
  throw std::invalid_argument("unknown accelerator '" + std::string(name) +
                              "'");
}

const std::vector<std::string_view>& accelerator_names() {
  static const std::vector<std::string_view> names = {
      "mm-tile", "fir-tile", "km-tile", "se-tile",
      "mm-full", "fir-full", "km-full", "se-full"};
  return names;
}

std::unique_ptr<murac::Accelerator> make_accelerator(std::string_view name,
                                                     CycleModel cm) {
  if (name == "mm-tile") return std::make_unique<MmTile>(cm);
  if (name == "fir-tile") return std::make_unique<FirTile>(cm);
  if (name == "km-tile") return std::make_unique<KmTile>(cm);
  if (name == "se-tile") return std::make_unique<SeTile>(cm);
  if (name == "mm-full") return std::make_unique<MmFull>(cm);
  if (name == "fir-full") return std::make_unique<FirFull>(cm);
  if (name == "km-full") return std::make_unique<KmFull>(cm);
  if (name == "se-full") return std::make_unique<SeFull>(cm);
  throw std::invalid_argument("unknown accelerator '" + std::string(name) +
                              "'");
}

std::unique_ptr<murac::Accelerator> make_accelerator(std::string_view name) {
  return make_accelerator(name, default_cycle_model(name));
}

}  // namespace tcsim::accel
