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

#include "tcsim/isa.hpp"

namespace tcsim::isa {

namespace {

constexpr uint32_t kOpcLui = 0b0110111;
constexpr uint32_t kOpcAuipc = 0b0010111;
constexpr uint32_t kOpcJal = 0b1101111;
constexpr uint32_t kOpcJalr = 0b1100111;
constexpr uint32_t kOpcBranch = 0b1100011;
constexpr uint32_t kOpcLoad = 0b0000011;
constexpr uint32_t kOpcStore = 0b0100011;
constexpr uint32_t kOpcOpImm = 0b0010011;
constexpr uint32_t kOpcOp = 0b0110011;
constexpr uint32_t kOpcMiscMem = 0b0001111;
constexpr uint32_t kOpcSystem = 0b1110011;
constexpr uint32_t kOpcCustom0 = 0b0001011;  // inst[6:0] == 0001011

inline uint32_t opcode(uint32_t w) { return w & 0x7f; }
inline uint8_t rd_field(uint32_t w) { return (w >> 7) & 0x1f; }
inline uint8_t rs1_field(uint32_t w) { return (w >> 15) & 0x1f; }
inline uint8_t rs2_field(uint32_t w) { return (w >> 20) & 0x1f; }
inline uint32_t funct3(uint32_t w) { return (w >> 12) & 0x7; }
inline uint32_t funct7(uint32_t w) { return (w >> 25) & 0x7f; }

inline int32_t imm_i(uint32_t w) { return static_cast<int32_t>(w) >> 20; }

inline int32_t imm_s(uint32_t w) {
  return ((static_cast<int32_t>(w) >> 25) << 5) |
         static_cast<int32_t>((w >> 7) & 0x1f);
}

inline int32_t imm_b(uint32_t w) {
  uint32_t v = ((w >> 31) & 1) << 12 | ((w >> 7) & 1) << 11 |
               ((w >> 25) & 0x3f) << 5 | ((w >> 8) & 0xf) << 1;
  return static_cast<int32_t>(v << 19) >> 19;
}

inline int32_t imm_u(uint32_t w) { return static_cast<int32_t>(w & 0xfffff000); }

inline int32_t imm_j(uint32_t w) {
  uint32_t v = ((w >> 31) & 1) << 20 | ((w >> 12) & 0xff) << 12 |
               ((w >> 20) & 1) << 11 | ((w >> 21) & 0x3ff) << 1;
  return static_cast<int32_t>(v << 11) >> 11;
}

struct OpInfo {
  std::string_view name;
  Format format;
};

// Indexed by Op.
constexpr OpInfo kOpInfo[kOpCount] = {
    {"lui", Format::U},    {"auipc", Format::U},  {"jal", Format::J},
    {"jalr", Format::I},   {"beq", Format::B},    {"bne", Format::B},
    {"blt", Format::B},    {"bge", Format::B},    {"bltu", Format::B},
    {"bgeu", Format::B},   {"lb", Format::I},     {"lh", Format::I},
    {"lw", Format::I},     {"lbu", Format::I},    {"lhu", Format::I},
    {"sb", Format::S},     {"sh", Format::S},     {"sw", Format::S},
    {"addi", Format::I},   {"slti", Format::I},   {"sltiu", Format::I},
    {"xori", Format::I},   {"ori", Format::I},    {"andi", Format::I},
    {"slli", Format::Shift}, {"srli", Format::Shift}, {"srai", Format::Shift},
    {"add", Format::R},    {"sub", Format::R},    {"sll", Format::R},
    {"slt", Format::R},    {"sltu", Format::R},   {"xor", Format::R},
    {"srl", Format::R},    {"sra", Format::R},    {"or", Format::R},
    {"and", Format::R},    {"fence", Format::I},  {"ecall", Format::Sys},
    {"ebreak", Format::Sys}, {"baa", Format::Custom}, {"rpa", Format::Custom},
};

[[noreturn]] void fail_imm(const Inst& inst, const char* what) {
  throw EncodeError(EncodeError::Kind::ImmediateOutOfRange,
                    std::string(mnemonic(inst.op)) + ": " + what);
}

[[noreturn]] void fail_operand(const Inst& inst, const char* what) {
  throw EncodeError(EncodeError::Kind::InvalidOperandForFormat,
                    std::string(mnemonic(inst.op)) + ": " + what);
}

void check_i_imm(const Inst& inst) {
  if (inst.imm < -2048 || inst.imm > 2047)
    fail_imm(inst, "immediate outside signed 12-bit range");
}

uint32_t enc_i(uint32_t opc, uint32_t f3, const Inst& i) {
  return (static_cast<uint32_t>(i.imm) & 0xfff) << 20 |
         static_cast<uint32_t>(i.rs1) << 15 | f3 << 12 |
         static_cast<uint32_t>(i.rd) << 7 | opc;
}

uint32_t enc_r(uint32_t f7, uint32_t f3, const Inst& i) {
  return f7 << 25 | static_cast<uint32_t>(i.rs2) << 20 |
         static_cast<uint32_t>(i.rs1) << 15 | f3 << 12 |
         static_cast<uint32_t>(i.rd) << 7 | kOpcOp;
}

uint32_t enc_s(uint32_t f3, const Inst& i) {
  uint32_t imm = static_cast<uint32_t>(i.imm);
  return ((imm >> 5) & 0x7f) << 25 | static_cast<uint32_t>(i.rs2) << 20 |
         static_cast<uint32_t>(i.rs1) << 15 | f3 << 12 | (imm & 0x1f) << 7 |
         kOpcStore;
}

uint32_t enc_b(uint32_t f3, const Inst& i) {
  uint32_t imm = static_cast<uint32_t>(i.imm);
  return ((imm >> 12) & 1) << 31 | ((imm >> 5) & 0x3f) << 25 |
         static_cast<uint32_t>(i.rs2) << 20 |
         static_cast<uint32_t>(i.rs1) << 15 | f3 << 12 |
         ((imm >> 1) & 0xf) << 8 | ((imm >> 11) & 1) << 7 | kOpcBranch;
}

uint32_t enc_j(const Inst& i) {
  uint32_t imm = static_cast<uint32_t>(i.imm);
  return ((imm >> 20) & 1) << 31 | ((imm >> 1) & 0x3ff) << 21 |
         ((imm >> 11) & 1) << 20 | ((imm >> 12) & 0xff) << 12 |
         static_cast<uint32_t>(i.rd) << 7 | kOpcJal;
}

}  // namespace

Format format_of(Op op) { return kOpInfo[static_cast<int>(op)].format; }

std::string_view mnemonic(Op op) { return kOpInfo[static_cast<int>(op)].name; }

bool writes_rd(Op op) {
  switch (format_of(op)) {
    case Format::R:
    case Format::U:
    case Format::J:
    case Format::Shift:
      return true;
    case Format::I:
      return op != Op::Fence;  // fence rd is a hint field, never written
    default:
      return false;
  }
}

bool is_load(Op op) {
  return op == Op::Lb || op == Op::Lh || op == Op::Lw || op == Op::Lbu ||
         op == Op::Lhu;
}

bool is_store(Op op) { return op == Op::Sb || op == Op::Sh || op == Op::Sw; }

bool is_branch(Op op) {
  return op == Op::Beq || op == Op::Bne || op == Op::Blt || op == Op::Bge ||
         op == Op::Bltu || op == Op::Bgeu;
}

bool uses_addr_adder(Op op) {
  return is_load(op) || is_store(op) || op == Op::Jalr || op == Op::Baa ||
         op == Op::Rpa;
}

std::optional<Inst> decode(uint32_t w) {
  Inst r;
  switch (opcode(w)) {
    case kOpcLui:
      r = {Op::Lui, rd_field(w), 0, 0, imm_u(w)};
      return r;
    case kOpcAuipc:
      r = {Op::Auipc, rd_field(w), 0, 0, imm_u(w)};
      return r;
    case kOpcJal:
      r = {Op::Jal, rd_field(w), 0, 0, imm_j(w)};
      return r;
    case kOpcJalr:
      if (funct3(w) != 0) return std::nullopt;
      r = {Op::Jalr, rd_field(w), rs1_field(w), 0, imm_i(w)};
      return r;
    case kOpcBranch: {
      Op op;
      switch (funct3(w)) {
        case 0b000: op = Op::Beq; break;
        case 0b001: op = Op::Bne; break;
        case 0b100: op = Op::Blt; break;
        case 0b101: op = Op::Bge; break;
        case 0b110: op = Op::Bltu; break;
        case 0b111: op = Op::Bgeu; break;
        default: return std::nullopt;
      }
      r = {op, 0, rs1_field(w), rs2_field(w), imm_b(w)};
      return r;
    }
    case kOpcLoad: {
      Op op;
      switch (funct3(w)) {
        case 0b000: op = Op::Lb; break;
        case 0b001: op = Op::Lh; break;
        case 0b010: op = Op::Lw; break;
        case 0b100: op = Op::Lbu; break;
        case 0b101: op = Op::Lhu; break;
        default: return std::nullopt;
      }
      r = {op, rd_field(w), rs1_field(w), 0, imm_i(w)};
      return r;
    }
    case kOpcStore: {
      Op op;
      switch (funct3(w)) {
        case 0b000: op = Op::Sb; break;
        case 0b001: op = Op::Sh; break;
        case 0b010: op = Op::Sw; break;
        default: return std::nullopt;
      }
      r = {op, 0, rs1_field(w), rs2_field(w), imm_s(w)};
      return r;
    }
    case kOpcOpImm: {
      uint32_t f3 = funct3(w);
      uint32_t f7 = funct7(w);
      Op op;
      switch (f3) {
        case 0b000: op = Op::Addi; break;
        case 0b010: op = Op::Slti; break;
        case 0b011: op = Op::Sltiu; break;
        case 0b100: op = Op::Xori; break;
        case 0b110: op = Op::Ori; break;
        case 0b111: op = Op::Andi; break;
        case 0b001:
          if (f7 != 0) return std::nullopt;
          r = {Op::Slli, rd_field(w), rs1_field(w), 0,
               static_cast<int32_t>(rs2_field(w))};
          return r;
        case 0b101:
          if (f7 == 0)
            r = {Op::Srli, rd_field(w), rs1_field(w), 0,
                 static_cast<int32_t>(rs2_field(w))};
          else if (f7 == 0b0100000)
            r = {Op::Srai, rd_field(w), rs1_field(w), 0,
                 static_cast<int32_t>(rs2_field(w))};
          else
            return std::nullopt;
          return r;
        default: return std::nullopt;
      }
      r = {op, rd_field(w), rs1_field(w), 0, imm_i(w)};
      return r;
    }
    case kOpcOp: {
      uint32_t f3 = funct3(w);
      uint32_t f7 = funct7(w);
      Op op;
      if (f7 == 0) {
        switch (f3) {
          case 0b000: op = Op::Add; break;
          case 0b001: op = Op::Sll; break;
          case 0b010: op = Op::Slt; break;
          case 0b011: op = Op::Sltu; break;
          case 0b100: op = Op::Xor; break;
          case 0b101: op = Op::Srl; break;
          case 0b110: op = Op::Or; break;
          case 0b111: op = Op::And; break;
          default: return std::nullopt;
        }
      } else if (f7 == 0b0100000) {
        if (f3 == 0b000) op = Op::Sub;
        else if (f3 == 0b101) op = Op::Sra;
        else return std::nullopt;
      } else {
        return std::nullopt;  // covers the RV32M funct7 == 0000001 space
      }
      r = {op, rd_field(w), rs1_field(w), rs2_field(w), 0};
      return r;
    }
    case kOpcMiscMem:
      if (funct3(w) != 0) return std::nullopt;
      r = {Op::Fence, rd_field(w), rs1_field(w), 0, imm_i(w)};
      return r;
    case kOpcSystem: {
      if (funct3(w) != 0 || rd_field(w) != 0 || rs1_field(w) != 0)
        return std::nullopt;  // CSR instructions are removed from this core
      uint32_t f12 = w >> 20;
      if (f12 == 0) { r = {Op::Ecall, 0, 0, 0, 0}; return r; }
      if (f12 == 1) { r = {Op::Ebreak, 0, 0, 0, 0}; return r; }
      return std::nullopt;
    }
    case kOpcCustom0: {
      // The width field (funct3) picks the coupling instruction; bits 11:7
      // are don't-care on decode and ignored.
      switch (funct3(w)) {
        case 0b000: r = {Op::Baa, 0, rs1_field(w), 0, imm_i(w)}; return r;
        case 0b001: r = {Op::Rpa, 0, rs1_field(w), 0, imm_i(w)}; return r;
        default: return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

uint32_t encode(const Inst& inst) {
  const Inst& i = inst;
  if (i.rd > 31 || i.rs1 > 31 || i.rs2 > 31)
    fail_operand(i, "register index out of range");

  auto require_zero = [&](bool ok, const char* what) {
    if (!ok) fail_operand(i, what);
  };

  switch (i.op) {
    case Op::Lui:
    case Op::Auipc:
      require_zero(i.rs1 == 0 && i.rs2 == 0, "U-format carries no rs fields");
      if ((i.imm & 0xfff) != 0)
        fail_imm(i, "U immediate must have bits 11:0 clear");
      return (static_cast<uint32_t>(i.imm) & 0xfffff000) |
             static_cast<uint32_t>(i.rd) << 7 |
             (i.op == Op::Lui ? kOpcLui : kOpcAuipc);

    case Op::Jal:
      require_zero(i.rs1 == 0 && i.rs2 == 0, "J-format carries no rs fields");
      if (i.imm < -1048576 || i.imm > 1048574)
        fail_imm(i, "J offset outside signed 21-bit range");
      if (i.imm & 1) fail_imm(i, "J offset must be even");
      return enc_j(i);

    case Op::Jalr:
      require_zero(i.rs2 == 0, "I-format carries no rs2");
      check_i_imm(i);
      return enc_i(kOpcJalr, 0b000, i);

    case Op::Beq: case Op::Bne: case Op::Blt:
    case Op::Bge: case Op::Bltu: case Op::Bgeu: {
      require_zero(i.rd == 0, "B-format carries no rd");
      if (i.imm < -4096 || i.imm > 4094)
        fail_imm(i, "B offset outside signed 13-bit range");
      if (i.imm & 1) fail_imm(i, "B offset must be even");
      static constexpr uint32_t f3[] = {0b000, 0b001, 0b100, 0b101, 0b110, 0b111};
      return enc_b(f3[static_cast<int>(i.op) - static_cast<int>(Op::Beq)], i);
    }

    case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu: {
      require_zero(i.rs2 == 0, "I-format carries no rs2");
      check_i_imm(i);
      static constexpr uint32_t f3[] = {0b000, 0b001, 0b010, 0b100, 0b101};
      return enc_i(kOpcLoad, f3[static_cast<int>(i.op) - static_cast<int>(Op::Lb)], i);
    }

    case Op::Sb: case Op::Sh: case Op::Sw: {
      require_zero(i.rd == 0, "S-format carries no rd");
      check_i_imm(i);
      static constexpr uint32_t f3[] = {0b000, 0b001, 0b010};
      return enc_s(f3[static_cast<int>(i.op) - static_cast<int>(Op::Sb)], i);
    }

    case Op::Addi: case Op::Slti: case Op::Sltiu:
    case Op::Xori: case Op::Ori: case Op::Andi: {
      require_zero(i.rs2 == 0, "I-format carries no rs2");
      check_i_imm(i);
      static constexpr uint32_t f3[] = {0b000, 0b010, 0b011, 0b100, 0b110, 0b111};
      return enc_i(kOpcOpImm, f3[static_cast<int>(i.op) - static_cast<int>(Op::Addi)], i);
    }

    case Op::Slli: case Op::Srli: case Op::Srai: {
      require_zero(i.rs2 == 0, "shift amount lives in imm");
      if (i.imm < 0 || i.imm > 31) fail_imm(i, "shift amount outside 0..31");
      uint32_t f7 = (i.op == Op::Srai) ? 0b0100000u : 0u;
      uint32_t f3 = (i.op == Op::Slli) ? 0b001u : 0b101u;
      return f7 << 25 | (static_cast<uint32_t>(i.imm) & 0x1f) << 20 |
             static_cast<uint32_t>(i.rs1) << 15 | f3 << 12 |
             static_cast<uint32_t>(i.rd) << 7 | kOpcOpImm;
    }

    case Op::Add: case Op::Sub: case Op::Sll: case Op::Slt: case Op::Sltu:
    case Op::Xor: case Op::Srl: case Op::Sra: case Op::Or: case Op::And: {
      require_zero(i.imm == 0, "R-format carries no immediate");
      switch (i.op) {
        case Op::Add:  return enc_r(0, 0b000, i);
        case Op::Sub:  return enc_r(0b0100000, 0b000, i);
        case Op::Sll:  return enc_r(0, 0b001, i);
        case Op::Slt:  return enc_r(0, 0b010, i);
        case Op::Sltu: return enc_r(0, 0b011, i);
        case Op::Xor:  return enc_r(0, 0b100, i);
        case Op::Srl:  return enc_r(0, 0b101, i);
        case Op::Sra:  return enc_r(0b0100000, 0b101, i);
        case Op::Or:   return enc_r(0, 0b110, i);
        default:       return enc_r(0, 0b111, i);
      }
    }

    case Op::Fence:
      require_zero(i.rs2 == 0, "I-format carries no rs2");
      check_i_imm(i);
      return enc_i(kOpcMiscMem, 0b000, i);

    case Op::Ecall:
    case Op::Ebreak:
      require_zero(i.rd == 0 && i.rs1 == 0 && i.rs2 == 0 && i.imm == 0,
                   "system instructions carry no operands");
      return (i.op == Op::Ebreak ? 1u : 0u) << 20 | kOpcSystem;

    case Op::Baa:
    case Op::Rpa:
      require_zero(i.rd == 0 && i.rs2 == 0,
                   "custom-0 encodes zero in the don't-care bits");
      check_i_imm(i);
      return enc_i(kOpcCustom0, i.op == Op::Baa ? 0b000 : 0b001, i);
  }
  fail_operand(i, "unknown operation");
}

}  // namespace tcsim::isa
