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
#include <exception>
#include <optional>
#include <string>
#include <string_view>

namespace tcsim::isa {

/// Every operation the core understands: the RV32I base set plus the two
/// custom-0 coupling instructions. BAA hands control to the auxiliary
/// architecture; RPA is an unconditional jump to rs1+imm.
enum class Op : uint8_t {
  Lui, Auipc, Jal, Jalr,
  Beq, Bne, Blt, Bge, Bltu, Bgeu,
  Lb, Lh, Lw, Lbu, Lhu,
  Sb, Sh, Sw,
  Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
  Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
  Fence, Ecall, Ebreak,
  Baa, Rpa,
};

constexpr int kOpCount = static_cast<int>(Op::Rpa) + 1;

/// Encoding shape of an operation. Shift covers SLLI/SRLI/SRAI (immediate is
/// the 5-bit shamt); Sys covers ECALL/EBREAK; Custom covers BAA/RPA, which
/// reuse the I layout with bits 11:7 don't-care.
enum class Format : uint8_t { R, I, S, B, U, J, Shift, Sys, Custom };

/// One decoded instruction. Fields not present in the encoding are zero, so
/// decode(encode(i)) == i holds exactly for canonically built values.
struct Inst {
  Op op = Op::Addi;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0;  // sign-extended; B/J hold byte offsets, U holds bits 31:12

  bool operator==(const Inst&) const = default;
};

Format format_of(Op op);
std::string_view mnemonic(Op op);

bool writes_rd(Op op);  // rd is architecturally written (x0 still discards)
bool is_load(Op op);
bool is_store(Op op);
bool is_branch(Op op);  // conditional branches only
/// True for the ops whose rs1+imm address is produced by the decode-stage
/// adder: loads, stores, JALR, BAA, RPA.
bool uses_addr_adder(Op op);

/// Decodes one instruction word. Empty result means the word has no legal
/// encoding: unknown opcode, bad funct fields, or a custom-0 width other
/// than the two defined values.
std::optional<Inst> decode(uint32_t word);

class EncodeError : public std::exception {
 public:
  enum class Kind { ImmediateOutOfRange, InvalidOperandForFormat };

  EncodeError(Kind kind, std::string msg) : kind_(kind), msg_(std::move(msg)) {}

  Kind kind() const { return kind_; }
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  Kind kind_;
  std::string msg_;
};

/// Produces the unique canonical encoding; the inverse of decode. Throws
/// EncodeError when a register index or immediate does not fit the format,
/// or when a field the format does not carry is nonzero.
uint32_t encode(const Inst& inst);

}  // namespace tcsim::isa
