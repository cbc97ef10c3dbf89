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

// Independent instruction-encoding oracle. Written field by field straight
// from the base ISA encoding tables and shares no code with the library,
// so encoder bugs and oracle bugs cannot cancel out.

#include <cstdint>

namespace oracle {

// funct7 | rs2 | rs1 | funct3 | rd | opcode
inline uint32_t r_type(uint32_t f7, uint32_t rs2, uint32_t rs1, uint32_t f3,
                       uint32_t rd, uint32_t opc) {
  return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
}

// imm[11:0] | rs1 | funct3 | rd | opcode
inline uint32_t i_type(int32_t imm, uint32_t rs1, uint32_t f3, uint32_t rd,
                       uint32_t opc) {
  return ((static_cast<uint32_t>(imm) & 0xfffu) << 20) | (rs1 << 15) |
         (f3 << 12) | (rd << 7) | opc;
}

// imm[11:5] | rs2 | rs1 | funct3 | imm[4:0] | opcode
inline uint32_t s_type(int32_t imm, uint32_t rs2, uint32_t rs1, uint32_t f3,
                       uint32_t opc) {
  uint32_t u = static_cast<uint32_t>(imm);
  return (((u >> 5) & 0x7fu) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) |
         ((u & 0x1fu) << 7) | opc;
}

// imm[12|10:5] | rs2 | rs1 | funct3 | imm[4:1|11] | opcode
inline uint32_t b_type(int32_t imm, uint32_t rs2, uint32_t rs1, uint32_t f3,
                       uint32_t opc) {
  uint32_t u = static_cast<uint32_t>(imm);
  return (((u >> 12) & 1u) << 31) | (((u >> 5) & 0x3fu) << 25) | (rs2 << 20) |
         (rs1 << 15) | (f3 << 12) | (((u >> 1) & 0xfu) << 8) |
         (((u >> 11) & 1u) << 7) | opc;
}

// imm[31:12] | rd | opcode; `page` is the already-shifted 32-bit value
inline uint32_t u_type(uint32_t page, uint32_t rd, uint32_t opc) {
  return (page & 0xfffff000u) | (rd << 7) | opc;
}

// imm[20|10:1|11|19:12] | rd | opcode
inline uint32_t j_type(int32_t imm, uint32_t rd, uint32_t opc) {
  uint32_t u = static_cast<uint32_t>(imm);
  return (((u >> 20) & 1u) << 31) | (((u >> 1) & 0x3ffu) << 21) |
         (((u >> 11) & 1u) << 20) | (((u >> 12) & 0xffu) << 12) | (rd << 7) |
         opc;
}

// Frozen golden vectors, checked by hand against the encoding tables; both
// the assembler and the encoder must reproduce these words exactly.
struct GoldenWord {
  const char* text;
  uint32_t word;
};

inline constexpr GoldenWord kGoldenWords[] = {
    {"nop", 0x00000013u},
    {"addi x1, x0, 5", 0x00500093u},
    {"add x3, x1, x2", 0x002081b3u},
    {"sub x3, x1, x2", 0x402081b3u},
    {"lw x1, 4(x2)", 0x00412083u},
    {"sw x2, 4(x1)", 0x0020a223u},
    {"lui x5, 0x12345", 0x123452b7u},
    {"auipc x5, 0x12345", 0x12345297u},
    {"jal x1, 8", 0x008000efu},
    {"jalr x1, 8(x2)", 0x008100e7u},
    {"beq x1, x2, 8", 0x00208463u},
    {"bne x1, x2, -4", 0xfe209ee3u},
    {"srai x3, x4, 7", 0x40725193u},
    {"slli x3, x4, 7", 0x00721193u},
    {"sltiu x6, x7, 2047", 0x7ff3b313u},
    {"ecall", 0x00000073u},
    {"ebreak", 0x00100073u},
    {"fence", 0x0ff0000fu},
    {"baa 8(x1)", 0x0080800bu},
    {"rpa 8(x1)", 0x0080900bu},
};

}  // namespace oracle
