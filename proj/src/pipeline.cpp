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

#include "tcsim/pipeline.hpp"

#include <cstdio>

#include "tcsim/assembler.hpp"

namespace tcsim::pipeline {

namespace {

using isa::Op;

std::string hex(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

uint32_t access_bytes(Op op) {
  switch (op) {
    case Op::Lw: case Op::Sw: return 4;
    case Op::Lh: case Op::Lhu: case Op::Sh: return 2;
    default: return 1;
  }
}

}  // namespace

double derive_latency_s(uint64_t total_cycles, double freq_mhz) {
  return static_cast<double>(total_cycles) / (freq_mhz * 1e6);
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::IF: return "IF";
    case Stage::ID: return "ID";
    case Stage::EXMEM: return "EXMEM";
    case Stage::WB: return "WB";
    case Stage::AUX: return "AUX";
  }
  return "?";
}

std::string format_trace_line(const TraceEvent& e) {
  const char* tag = "";
  switch (e.tag) {
    case Tag::Normal: tag = ""; break;
    case Tag::Bubble: tag = " [bubble]"; break;
    case Tag::Stall: tag = " [stall]"; break;
    case Tag::Flush: tag = " [flush]"; break;
  }
  char head[48];
  std::snprintf(head, sizeof head, "%8llu %-5s %08x  ",
                static_cast<unsigned long long>(e.cycle),
                std::string(stage_name(e.stage)).c_str(), e.pc);
  return head + e.text + tag;
}

void Pipeline::raise(Fault f) {
  fault_ = std::move(f);
  fault_cycle_ = cycle_;
}

void Pipeline::emit(Stage s, uint32_t pc, Tag tag, std::string text) {
  trace_(TraceEvent{cycle_, s, pc, tag, std::move(text)});
}

void Pipeline::tick() {
  if (halted_ || fault_) return;
  ++cycle_;

  // A busy auxiliary session freezes pc and every latch; the only thing
  // that advances is the accelerator.
  if (session_.busy) {
    ++stall_cycles_;
    ++aux_cycles_;
    if (trace_)
      emit(Stage::AUX, baa_pc_, Tag::Stall,
           "aux busy, " + std::to_string(session_.cycles_remaining) +
               " cycle(s) left");
    if (murac::session_tick(session_)) murac::close_session(m_.dmem);
    return;
  }

  // WB runs first: the register file is write-before-read within a cycle,
  // and an EBREAK reaching WB halts before any younger, wrong-path work
  // in EX/MEM could take effect.
  if (ex_wb_.valid) {
    if (trace_)
      emit(Stage::WB, ex_wb_.pc, Tag::Normal,
           assembler::disassemble_word(ex_wb_.word));
    if (ex_wb_.writes) m_.state.set_reg(ex_wb_.rd, ex_wb_.value);
    ++m_.state.retired;
    if (ex_wb_.is_ebreak) {
      halted_ = true;
      m_.state.halted = true;
      m_.state.pc = ex_wb_.pc;
      return;
    }
  } else if (trace_) {
    emit(Stage::WB, 0, Tag::Bubble, "bubble");
  }

  // EX/MEM: ALU, DMEM access at the ID-computed address, control transfer
  // resolution, session opening. Faults riding the latch raise here, the
  // first point where the instruction is known to be on the true path.
  ExWb new_wb{};
  bool redirect = false;
  uint32_t redirect_pc = 0;
  bool opened_session = false;
  if (id_ex_.valid) {
    if (id_ex_.fault) {
      if (trace_)
        emit(Stage::EXMEM, id_ex_.pc, Tag::Normal, "fault: " +
             std::string(fault_name(id_ex_.fault->kind)));
      raise(*id_ex_.fault);
      return;
    }
    const isa::Inst& i = id_ex_.inst;
    const uint32_t a = id_ex_.rs1_val;
    const uint32_t b = id_ex_.rs2_val;
    const uint32_t imm = static_cast<uint32_t>(i.imm);
    const uint32_t pc = id_ex_.pc;
    new_wb.valid = true;
    new_wb.pc = pc;
    new_wb.word = id_ex_.word;
    new_wb.rd = i.rd;
    new_wb.writes = isa::writes_rd(i.op) && i.rd != 0;

    switch (i.op) {
      case Op::Lui: new_wb.value = imm; break;
      case Op::Auipc: new_wb.value = pc + imm; break;
      case Op::Addi: new_wb.value = a + imm; break;
      case Op::Slti:
        new_wb.value = static_cast<int32_t>(a) < i.imm ? 1 : 0;
        break;
      case Op::Sltiu: new_wb.value = a < imm ? 1 : 0; break;
      case Op::Xori: new_wb.value = a ^ imm; break;
      case Op::Ori: new_wb.value = a | imm; break;
      case Op::Andi: new_wb.value = a & imm; break;
      case Op::Slli: new_wb.value = a << (imm & 31); break;
      case Op::Srli: new_wb.value = a >> (imm & 31); break;
      case Op::Srai:
        new_wb.value = static_cast<uint32_t>(static_cast<int32_t>(a) >>
                                             (imm & 31));
        break;
      case Op::Add: new_wb.value = a + b; break;
      case Op::Sub: new_wb.value = a - b; break;
      case Op::Sll: new_wb.value = a << (b & 31); break;
      case Op::Slt:
        new_wb.value = static_cast<int32_t>(a) < static_cast<int32_t>(b) ? 1 : 0;
        break;
      case Op::Sltu: new_wb.value = a < b ? 1 : 0; break;
      case Op::Xor: new_wb.value = a ^ b; break;
      case Op::Srl: new_wb.value = a >> (b & 31); break;
      case Op::Sra:
        new_wb.value = static_cast<uint32_t>(static_cast<int32_t>(a) >>
                                             (b & 31));
        break;
      case Op::Or: new_wb.value = a | b; break;
      case Op::And: new_wb.value = a & b; break;

      case Op::Jal:
        new_wb.value = pc + 4;
        redirect = true;
        redirect_pc = pc + imm;
        break;
      case Op::Jalr:
        new_wb.value = pc + 4;
        redirect = true;
        redirect_pc = id_ex_.addr & ~1u;
        break;

      case Op::Beq: redirect = a == b; break;
      case Op::Bne: redirect = a != b; break;
      case Op::Blt:
        redirect = static_cast<int32_t>(a) < static_cast<int32_t>(b);
        break;
      case Op::Bge:
        redirect = static_cast<int32_t>(a) >= static_cast<int32_t>(b);
        break;
      case Op::Bltu: redirect = a < b; break;
      case Op::Bgeu: redirect = a >= b; break;

      case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu: {
        const uint32_t addr = id_ex_.addr;
        const uint32_t bytes = access_bytes(i.op);
        if (addr % bytes != 0) {
          raise({FaultKind::MisalignedAccess, pc,
                 std::to_string(bytes) + "-byte load at " + hex(addr)});
          return;
        }
        if (!m_.dmem.in_range(addr, bytes)) {
          raise({FaultKind::OutOfRangeAccess, pc, "load at " + hex(addr)});
          return;
        }
        switch (i.op) {
          case Op::Lb:
            new_wb.value = static_cast<uint32_t>(static_cast<int32_t>(
                static_cast<int8_t>(m_.dmem.read8(addr))));
            break;
          case Op::Lbu: new_wb.value = m_.dmem.read8(addr); break;
          case Op::Lh:
            new_wb.value = static_cast<uint32_t>(static_cast<int32_t>(
                static_cast<int16_t>(m_.dmem.read16(addr))));
            break;
          case Op::Lhu: new_wb.value = m_.dmem.read16(addr); break;
          default: new_wb.value = m_.dmem.read32(addr); break;
        }
        break;
      }

      case Op::Sb: case Op::Sh: case Op::Sw: {
        const uint32_t addr = id_ex_.addr;
        const uint32_t bytes = access_bytes(i.op);
        if (addr % bytes != 0) {
          raise({FaultKind::MisalignedAccess, pc,
                 std::to_string(bytes) + "-byte store at " + hex(addr)});
          return;
        }
        if (!m_.dmem.in_range(addr, bytes)) {
          raise({FaultKind::OutOfRangeAccess, pc, "store at " + hex(addr)});
          return;
        }
        if (i.op == Op::Sb) m_.dmem.write8(addr, static_cast<uint8_t>(b));
        else if (i.op == Op::Sh) m_.dmem.write16(addr, static_cast<uint16_t>(b));
        else m_.dmem.write32(addr, b);
        break;
      }

      case Op::Fence:
      case Op::Ecall:
        break;

      case Op::Ebreak:
        new_wb.is_ebreak = true;
        break;

      case Op::Baa: {
        ++baa_count_;
        if (accel_ == nullptr) {
          raise({FaultKind::NoAcceleratorRegistered, pc,
                 "baa with no accelerator registered"});
          return;
        }
        auto r = murac::open_session(*accel_, id_ex_.addr, m_.dmem, pc);
        if (auto* f = std::get_if<Fault>(&r)) {
          raise(*f);
          return;
        }
        session_ = std::get<murac::AuxiliarySession>(r);
        if (!session_.busy) murac::close_session(m_.dmem);
        baa_pc_ = pc;
        opened_session = true;
        redirect = true;
        redirect_pc = pc + 4;  // resume path, paid as a 2-cycle refill
        break;
      }
      case Op::Rpa:
        redirect = true;
        redirect_pc = id_ex_.addr;
        break;
    }

    if (isa::is_branch(i.op) && redirect) redirect_pc = pc + imm;
    if (redirect) ++flush_count_;
    if (trace_)
      emit(Stage::EXMEM, pc, Tag::Normal,
           assembler::disassemble_word(id_ex_.word) +
               (opened_session ? " (aux open)" : redirect ? " (taken)" : ""));
  } else if (trace_) {
    emit(Stage::EXMEM, 0, Tag::Bubble, "bubble");
  }

  // ID: decode, capture operands (forwarding from this cycle's EX/MEM
  // result), and run the address adder. A redirect squashes the slot.
  IdEx new_id{};
  if (redirect) {
    if (trace_ && if_id_.valid)
      emit(Stage::ID, if_id_.pc, Tag::Flush, "flush");
  } else if (if_id_.valid) {
    new_id.valid = true;
    new_id.pc = if_id_.pc;
    new_id.word = if_id_.word;
    if (if_id_.fault) {
      new_id.fault = if_id_.fault;
    } else if (auto dec = isa::decode(if_id_.word)) {
      new_id.inst = *dec;
      auto read = [&](uint8_t r) {
        if (r != 0 && new_wb.valid && new_wb.writes && new_wb.rd == r)
          return new_wb.value;
        return m_.state.reg(r);
      };
      new_id.rs1_val = read(dec->rs1);
      new_id.rs2_val = read(dec->rs2);
      if (isa::uses_addr_adder(dec->op))
        new_id.addr = new_id.rs1_val + static_cast<uint32_t>(dec->imm);
    } else {
      new_id.fault = Fault{FaultKind::IllegalInstruction, if_id_.pc,
                           "word " + hex(if_id_.word)};
    }
    if (trace_)
      emit(Stage::ID, if_id_.pc, Tag::Normal,
           new_id.fault ? "(undecodable)"
                        : assembler::disassemble_word(if_id_.word));
  } else if (trace_) {
    emit(Stage::ID, 0, Tag::Bubble, "bubble");
  }

  // IF: fetch at pc. Fetch problems poison the slot and raise later at
  // EX/MEM, so a wrong-path bad fetch can never fault the machine.
  IfId new_if{};
  if (redirect) {
    if (trace_) emit(Stage::IF, pc_, Tag::Flush, "flush");
    pc_ = redirect_pc;
  } else if (pc_ % 4 != 0) {
    new_if = {true, pc_, 0,
              Fault{FaultKind::MisalignedFetch, pc_, "fetch at " + hex(pc_)}};
    if (trace_) emit(Stage::IF, pc_, Tag::Normal, "fetch (misaligned)");
  } else if (!m_.imem.in_range(pc_, 4)) {
    new_if = {true, pc_, 0,
              Fault{FaultKind::OutOfRangeAccess, pc_, "fetch at " + hex(pc_)}};
    if (trace_) emit(Stage::IF, pc_, Tag::Normal, "fetch (out of range)");
  } else {
    new_if = {true, pc_, m_.imem.read32(pc_), std::nullopt};
    if (trace_) emit(Stage::IF, pc_, Tag::Normal, "fetch");
    pc_ += 4;
  }

  ex_wb_ = new_wb;
  id_ex_ = std::move(new_id);
  if_id_ = std::move(new_if);
}

RunReport Pipeline::run(uint64_t max_cycles, double freq_mhz) {
  while (!halted_ && !fault_ && cycle_ < max_cycles) tick();
  RunReport r;
  r.total_cycles = cycle_;
  r.retired = m_.state.retired;
  r.stall_cycles = stall_cycles_;
  r.aux_cycles = aux_cycles_;
  r.flushes = flush_count_;
  r.baa_count = baa_count_;
  r.freq_mhz = freq_mhz;
  r.latency_s = derive_latency_s(cycle_, freq_mhz);
  r.halted = halted_;
  r.fault = fault_;
  r.fault_cycle = fault_cycle_;
  r.runaway = !halted_ && !fault_;
  return r;
}

}  // namespace tcsim::pipeline
