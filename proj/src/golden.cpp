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

#include "tcsim/golden.hpp"

#include <cstdio>

#include "tcsim/isa.hpp"

namespace tcsim::golden {

namespace {

using isa::Op;

std::string hex(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

// Alignment and range checks shared by all data accesses.
std::optional<Fault> check_access(const MemoryBank& dmem, uint32_t addr,
                                  uint32_t bytes, uint32_t pc) {
  if (addr % bytes != 0)
    return Fault{FaultKind::MisalignedAccess, pc,
                 std::to_string(bytes) + "-byte access at " + hex(addr)};
  if (!dmem.in_range(addr, bytes))
    return Fault{FaultKind::OutOfRangeAccess, pc,
                 "data access at " + hex(addr)};
  return std::nullopt;
}

}  // namespace

std::optional<Fault> step(MachineState& st, MemoryBank& imem, MemoryBank& dmem,
                          const murac::Accelerator* accel) {
  const uint32_t pc = st.pc;
  if (pc % 4 != 0)
    return Fault{FaultKind::MisalignedFetch, pc, "fetch at " + hex(pc)};
  if (!imem.in_range(pc, 4))
    return Fault{FaultKind::OutOfRangeAccess, pc, "fetch at " + hex(pc)};

  const uint32_t word = imem.read32(pc);
  auto decoded = isa::decode(word);
  if (!decoded)
    return Fault{FaultKind::IllegalInstruction, pc, "word " + hex(word)};
  const isa::Inst& i = *decoded;

  const uint32_t a = st.reg(i.rs1);
  const uint32_t b = st.reg(i.rs2);
  const uint32_t imm = static_cast<uint32_t>(i.imm);
  uint32_t next_pc = pc + 4;

  switch (i.op) {
    case Op::Lui: st.set_reg(i.rd, imm); break;
    case Op::Auipc: st.set_reg(i.rd, pc + imm); break;
    case Op::Jal:
      st.set_reg(i.rd, pc + 4);
      next_pc = pc + imm;
      break;
    case Op::Jalr: {
      uint32_t target = (a + imm) & ~1u;
      st.set_reg(i.rd, pc + 4);
      next_pc = target;
      break;
    }
    case Op::Beq: if (a == b) next_pc = pc + imm; break;
    case Op::Bne: if (a != b) next_pc = pc + imm; break;
    case Op::Blt:
      if (static_cast<int32_t>(a) < static_cast<int32_t>(b)) next_pc = pc + imm;
      break;
    case Op::Bge:
      if (static_cast<int32_t>(a) >= static_cast<int32_t>(b)) next_pc = pc + imm;
      break;
    case Op::Bltu: if (a < b) next_pc = pc + imm; break;
    case Op::Bgeu: if (a >= b) next_pc = pc + imm; break;

    case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu: {
      uint32_t addr = a + imm;
      uint32_t bytes = (i.op == Op::Lw) ? 4 : (i.op == Op::Lh || i.op == Op::Lhu) ? 2 : 1;
      if (auto f = check_access(dmem, addr, bytes, pc)) return f;
      uint32_t v = 0;
      switch (i.op) {
        case Op::Lb:
          v = static_cast<uint32_t>(static_cast<int32_t>(
              static_cast<int8_t>(dmem.read8(addr))));
          break;
        case Op::Lbu: v = dmem.read8(addr); break;
        case Op::Lh:
          v = static_cast<uint32_t>(static_cast<int32_t>(
              static_cast<int16_t>(dmem.read16(addr))));
          break;
        case Op::Lhu: v = dmem.read16(addr); break;
        default: v = dmem.read32(addr); break;
      }
      st.set_reg(i.rd, v);
      break;
    }

    case Op::Sb: case Op::Sh: case Op::Sw: {
      uint32_t addr = a + imm;
      uint32_t bytes = (i.op == Op::Sw) ? 4 : (i.op == Op::Sh) ? 2 : 1;
      if (auto f = check_access(dmem, addr, bytes, pc)) return f;
      if (i.op == Op::Sb) dmem.write8(addr, static_cast<uint8_t>(b));
      else if (i.op == Op::Sh) dmem.write16(addr, static_cast<uint16_t>(b));
      else dmem.write32(addr, b);
      break;
    }

    case Op::Addi: st.set_reg(i.rd, a + imm); break;
    case Op::Slti:
      st.set_reg(i.rd, static_cast<int32_t>(a) < i.imm ? 1 : 0);
      break;
    case Op::Sltiu: st.set_reg(i.rd, a < imm ? 1 : 0); break;
    case Op::Xori: st.set_reg(i.rd, a ^ imm); break;
    case Op::Ori: st.set_reg(i.rd, a | imm); break;
    case Op::Andi: st.set_reg(i.rd, a & imm); break;
    case Op::Slli: st.set_reg(i.rd, a << (imm & 31)); break;
    case Op::Srli: st.set_reg(i.rd, a >> (imm & 31)); break;
    case Op::Srai:
      st.set_reg(i.rd,
                 static_cast<uint32_t>(static_cast<int32_t>(a) >> (imm & 31)));
      break;

    case Op::Add: st.set_reg(i.rd, a + b); break;
    case Op::Sub: st.set_reg(i.rd, a - b); break;
    case Op::Sll: st.set_reg(i.rd, a << (b & 31)); break;
    case Op::Slt:
      st.set_reg(i.rd,
                 static_cast<int32_t>(a) < static_cast<int32_t>(b) ? 1 : 0);
      break;
    case Op::Sltu: st.set_reg(i.rd, a < b ? 1 : 0); break;
    case Op::Xor: st.set_reg(i.rd, a ^ b); break;
    case Op::Srl: st.set_reg(i.rd, a >> (b & 31)); break;
    case Op::Sra:
      st.set_reg(i.rd, static_cast<uint32_t>(static_cast<int32_t>(a) >>
                                             (b & 31)));
      break;
    case Op::Or: st.set_reg(i.rd, a | b); break;
    case Op::And: st.set_reg(i.rd, a & b); break;

    case Op::Fence:
    case Op::Ecall:
      break;  // architectural no-ops on this core

    case Op::Ebreak:
      st.halted = true;
      next_pc = pc;  // halt point stays visible in diagnostics
      break;

    case Op::Baa: {
      if (accel == nullptr)
        return Fault{FaultKind::NoAcceleratorRegistered, pc,
                     "baa with no accelerator registered"};
      auto r = murac::open_session(*accel, a + imm, dmem, pc);
      if (auto* f = std::get_if<Fault>(&r)) return *f;
      // Functionally atomic: the cycle cost only matters to the pipeline.
      murac::close_session(dmem);
      break;
    }
    case Op::Rpa:
      next_pc = a + imm;  // unconditional; target checked at next fetch
      break;
  }

  st.pc = next_pc;
  ++st.retired;
  return std::nullopt;
}

RunResult run_to_halt(MachineState& st, MemoryBank& imem, MemoryBank& dmem,
                      const murac::Accelerator* accel, uint64_t max_steps) {
  RunResult r;
  for (uint64_t n = 0; n < max_steps && !st.halted; ++n) {
    if (auto f = step(st, imem, dmem, accel)) {
      r.fault = std::move(f);
      break;
    }
  }
  r.halted = st.halted;
  r.runaway = !st.halted && !r.fault;
  r.retired = st.retired;
  return r;
}

}  // namespace tcsim::golden
