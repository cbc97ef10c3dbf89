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

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "tcsim/murac.hpp"

namespace tcsim::accel {

/// Throughput model: a fixed startup latency plus ceil(W / elems_per_cycle)
/// cycles for W work items.
struct CycleModel {
  uint64_t startup_cycles = 4;
  uint64_t elems_per_cycle = 1;

  uint64_t cost(uint64_t work) const {
    uint64_t epc = elems_per_cycle == 0 ? 1 : elems_per_cycle;
    return startup_cycles + (work + epc - 1) / epc;
  }
};

/// All kernels use wrapping 32-bit integer arithmetic over word arrays so
/// software, tile, and full-hardware paths stay bit-comparable.
///
/// Tile argument arrays (args[0] is the count word):
///   mm-tile  [6, A, B, C, n, row, col5]       W = 5n, one 1x5 strip of C
///   fir-tile [6, X, H, Y, taps, start, cnt]   W = cnt*taps outputs of y
///   km-tile  [9, NODES, CENTS, ASSIGN, SUMS, COUNTS, start, cnt, k, dims]
///                                             W = cnt*k*dims, one pass
///   se-tile  [5, IN, OUT, width, r, c]        W = 16*16*9, one output tile;
///                                             the 18x18 input window must
///                                             be fully inside the image
/// Full-application variants (whole kernel per invocation):
///   mm-full  [4, A, B, C, n]                  W = n^3
///   fir-full [5, X, H, Y, taps, n_out]        W = n_out*taps
///   km-full  [8, NODES, CENTS, ASSIGN, SUMS, COUNTS, n, k, dims]
///                                             W = n*k*dims
///   se-full  [4, IN, OUT, width, height]      W = width*height*9, includes
///                                             the boundary ring with
///                                             clamp-to-edge sampling
class MmTile final : public murac::Accelerator {
 public:
  explicit MmTile(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "mm-tile"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class FirTile final : public murac::Accelerator {
 public:
  explicit FirTile(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "fir-tile"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class KmTile final : public murac::Accelerator {
 public:
  explicit KmTile(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "km-tile"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class SeTile final : public murac::Accelerator {
 public:
  explicit SeTile(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "se-tile"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

  static constexpr uint32_t kTile = 16;

 private:
  CycleModel cm_;
};

class MmFull final : public murac::Accelerator {
 public:
  explicit MmFull(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "mm-full"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class FirFull final : public murac::Accelerator {
 public:
  explicit FirFull(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "fir-full"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class KmFull final : public murac::Accelerator {
 public:
  explicit KmFull(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "km-full"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

class SeFull final : public murac::Accelerator {
 public:
  explicit SeFull(CycleModel cm) : cm_(cm) {}
  std::string_view name() const override { return "se-full"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override;
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override;

 private:
  CycleModel cm_;
};

/// Declared default models: startup 4, throughput = the tile's innermost
/// parallel width (mm 5, fir 50, km 8, se 9). Freely overridable.
CycleModel default_cycle_model(std::string_view name);

const std::vector<std::string_view>& accelerator_names();

std::unique_ptr<murac::Accelerator> make_accelerator(std::string_view name,
                                                     CycleModel cm);
std::unique_ptr<murac::Accelerator> make_accelerator(std::string_view name);

}  // namespace tcsim::accel
