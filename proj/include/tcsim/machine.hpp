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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "tcsim/mem.hpp"

namespace tcsim {

enum class FaultKind : uint8_t {
  IllegalInstruction,
  MisalignedFetch,
  MisalignedAccess,
  OutOfRangeAccess,
  BadArgumentArray,
  NoAcceleratorRegistered,
};

std::string_view fault_name(FaultKind k);

/// A fault stops execution at a precise architectural point: everything
/// older than `pc` has retired, nothing younger has had any effect.
struct Fault {
  FaultKind kind;
  uint32_t pc = 0;
  std::string detail;
};

/// Architectural register file plus program counter. x0 reads as zero and
/// swallows writes.
struct MachineState {
  std::array<uint32_t, 32> regs{};
  uint32_t pc = 0;
  bool halted = false;
  uint64_t retired = 0;

  uint32_t reg(uint8_t i) const { return i == 0 ? 0u : regs[i]; }
  void set_reg(uint8_t i, uint32_t v) {
    if (i != 0) regs[i] = v;
  }
};

/// Harvard machine: instruction and data live in separate single-port banks.
struct Machine {
  MachineState state;
  MemoryBank imem;
  MemoryBank dmem;

  Machine(uint32_t imem_bytes, uint32_t dmem_bytes)
      : imem(imem_bytes), dmem(dmem_bytes) {}
};

}  // namespace tcsim
