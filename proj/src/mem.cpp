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

#include "tcsim/mem.hpp"

#include <cassert>

namespace tcsim {

MemoryBank::MemoryBank(uint32_t size_bytes) : bytes_(size_bytes, 0) {
  assert(size_bytes != 0 && (size_bytes & (size_bytes - 1)) == 0);
}

void MemoryBank::account() const {
  if (owner_ == BusOwner::Accelerator) {
    ++accelerator_accesses_;
  } else {
    ++processor_accesses_;
    if (aux_window_) ++aux_window_violations_;
  }
}

uint8_t MemoryBank::read8(uint32_t addr) const {
  assert(in_range(addr, 1));
  account();
  return bytes_[addr];
}

uint16_t MemoryBank::read16(uint32_t addr) const {
  assert(in_range(addr, 2));
  account();
  return static_cast<uint16_t>(bytes_[addr] | bytes_[addr + 1] << 8);
}

uint32_t MemoryBank::read32(uint32_t addr) const {
  assert(in_range(addr, 4));
  account();
  return static_cast<uint32_t>(bytes_[addr]) |
         static_cast<uint32_t>(bytes_[addr + 1]) << 8 |
         static_cast<uint32_t>(bytes_[addr + 2]) << 16 |
         static_cast<uint32_t>(bytes_[addr + 3]) << 24;
}

void MemoryBank::write8(uint32_t addr, uint8_t v) {
  assert(in_range(addr, 1));
  account();
  bytes_[addr] = v;
}

void MemoryBank::write16(uint32_t addr, uint16_t v) {
  assert(in_range(addr, 2));
  account();
  bytes_[addr] = static_cast<uint8_t>(v);
  bytes_[addr + 1] = static_cast<uint8_t>(v >> 8);
}

void MemoryBank::write32(uint32_t addr, uint32_t v) {
  assert(in_range(addr, 4));
  account();
  bytes_[addr] = static_cast<uint8_t>(v);
  bytes_[addr + 1] = static_cast<uint8_t>(v >> 8);
  bytes_[addr + 2] = static_cast<uint8_t>(v >> 16);
  bytes_[addr + 3] = static_cast<uint8_t>(v >> 24);
}

}  // namespace tcsim
