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
#include <span>
#include <vector>

namespace tcsim {

/// Who currently drives the port of a memory bank. The processor and an
/// accelerator session never overlap in time; the owner tag lets tests audit
/// that claim instead of trusting it.
enum class BusOwner : uint8_t { Processor, Accelerator };

/// Little-endian byte-addressable RAM with single-port accounting.
///
/// Sizes are powers of two. Callers validate range and alignment before
/// touching the bank; the accessors here assert in debug builds only. Every
/// access is attributed to the current BusOwner, and while an auxiliary
/// window is open any processor-owned access is tallied separately so the
/// arbitration contract can be checked after the fact.
class MemoryBank {
 public:
  explicit MemoryBank(uint32_t size_bytes);

  uint32_t size_bytes() const { return static_cast<uint32_t>(bytes_.size()); }

  bool in_range(uint32_t addr, uint32_t nbytes) const {
    // addr + nbytes can wrap; phrase the check subtraction-side.
    return addr < bytes_.size() && nbytes <= bytes_.size() - addr;
  }

  uint8_t read8(uint32_t addr) const;
  uint16_t read16(uint32_t addr) const;
  uint32_t read32(uint32_t addr) const;
  void write8(uint32_t addr, uint8_t v);
  void write16(uint32_t addr, uint16_t v);
  void write32(uint32_t addr, uint32_t v);

  void set_owner(BusOwner o) { owner_ = o; }
  BusOwner owner() const { return owner_; }

  void begin_aux_window() { aux_window_ = true; }
  void end_aux_window() { aux_window_ = false; }
  bool aux_window_open() const { return aux_window_; }

  uint64_t processor_accesses() const { return processor_accesses_; }
  uint64_t accelerator_accesses() const { return accelerator_accesses_; }
  /// Processor-owned accesses observed while an aux window was open.
  /// Stays zero iff the stall really keeps the core off the bus.
  uint64_t aux_window_violations() const { return aux_window_violations_; }

  /// Direct view of the backing store, for image loading and digests.
  /// Bypasses the access accounting.
  std::span<uint8_t> raw() { return bytes_; }
  std::span<const uint8_t> raw() const { return bytes_; }

 private:
  void account() const;

  std::vector<uint8_t> bytes_;
  BusOwner owner_ = BusOwner::Processor;
  bool aux_window_ = false;
  mutable uint64_t processor_accesses_ = 0;
  mutable uint64_t accelerator_accesses_ = 0;
  mutable uint64_t aux_window_violations_ = 0;
};

}  // namespace tcsim
