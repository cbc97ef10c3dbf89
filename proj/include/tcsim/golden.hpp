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
#include <optional>

#include "tcsim/machine.hpp"
#include "tcsim/murac.hpp"

namespace tcsim::golden {

struct RunResult {
  bool halted = false;
  bool runaway = false;
  std::optional<Fault> fault;
  uint64_t retired = 0;
};

/// Executes one instruction architecturally: fetch, decode, execute, with
/// wrapping two's-complement arithmetic. BAA applies the registered
/// accelerator's functional model atomically and continues at pc+4; RPA
/// jumps to regs[rs1]+imm. EBREAK sets halted (pc stays at the EBREAK).
/// Returns the fault instead of mutating further state when one occurs.
std::optional<Fault> step(MachineState& st, MemoryBank& imem, MemoryBank& dmem,
                          const murac::Accelerator* accel);

/// Steps until halt, fault, or max_steps (reported as runaway).
RunResult run_to_halt(MachineState& st, MemoryBank& imem, MemoryBank& dmem,
                      const murac::Accelerator* accel, uint64_t max_steps);

}  // namespace tcsim::golden
