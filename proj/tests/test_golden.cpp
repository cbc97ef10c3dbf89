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

#include <string>

#include "doctest.h"
#include "support/run_programs.hpp"
#include "tcsim/golden.hpp"
#include "tcsim/murac.hpp"

using namespace tcsim;
using harness::GoldenRun;

namespace {

// Minimal accelerator: word at args[1] += args[2]; cost is args[3] cycles.
class StubAccel final : public murac::Accelerator {
 public:
  std::string_view name() const override { return "stub"; }
  uint64_t cycle_cost(std::span<const uint32_t> args) const override {
    return args.size() > 3 ? args[3] : 0;
  }
  void apply(MemoryBank& dmem, std::span<const uint32_t> args) const override {
    if (args.size() < 3 || args[0] < 2) throw murac::BadArgs("need 2 args");
    dmem.write32(args[1], dmem.read32(args[1]) + args[2]);
  }
};

}  // namespace

TEST_CASE("ALU semantics match hand-computed values") {
  GoldenRun r(
      "  li x1, 7\n"
      "  li x2, -3\n"
      "  add x3, x1, x2\n"    // 4
      "  sub x4, x2, x1\n"    // -10
      "  and x5, x1, x2\n"    // 7 & 0xfffffffd = 5
      "  or x6, x1, x2\n"     // 0xffffffff
      "  xor x7, x1, x2\n"    // 0xfffffffa
      "  slt x8, x2, x1\n"    // -3 < 7 -> 1
      "  slt x9, x1, x2\n"    // 0
      "  sltu x10, x1, x2\n"  // 7 < 0xfffffffd -> 1
      "  sltu x11, x2, x1\n"  // 0
      "  ebreak\n");
  CHECK(r.res.halted);
  CHECK(r.reg(3) == 4u);
  CHECK(r.reg(4) == static_cast<uint32_t>(-10));
  CHECK(r.reg(5) == 5u);
  CHECK(r.reg(6) == 0xffffffffu);
  CHECK(r.reg(7) == 0xfffffffau);
  CHECK(r.reg(8) == 1u);
  CHECK(r.reg(9) == 0u);
  CHECK(r.reg(10) == 1u);
  CHECK(r.reg(11) == 0u);
}

TEST_CASE("additions wrap modulo 2^32") {
  GoldenRun r(
      "  li x1, 0x7fffffff\n"
      "  li x2, 1\n"
      "  add x3, x1, x2\n"
      "  li x4, -1\n"
      "  add x5, x4, x2\n"
      "  ebreak\n");
  CHECK(r.reg(3) == 0x80000000u);
  CHECK(r.reg(5) == 0u);
}

TEST_CASE("shift semantics: amount masked to 5 bits, sra sign-fills") {
  GoldenRun r(
      "  li x1, -8\n"
      "  li x2, 33\n"          // reads as shift amount 1
      "  sll x3, x1, x2\n"     // -16
      "  srl x4, x1, x2\n"     // 0x7ffffffc
      "  sra x5, x1, x2\n"     // -4
      "  srai x6, x1, 2\n"     // -2
      "  srli x7, x1, 28\n"    // 0xf
      "  slli x8, x1, 0\n"     // unchanged
      "  ebreak\n");
  CHECK(r.reg(3) == static_cast<uint32_t>(-16));
  CHECK(r.reg(4) == 0x7ffffffcu);
  CHECK(r.reg(5) == static_cast<uint32_t>(-4));
  CHECK(r.reg(6) == static_cast<uint32_t>(-2));
  CHECK(r.reg(7) == 0xfu);
  CHECK(r.reg(8) == static_cast<uint32_t>(-8));
}

TEST_CASE("immediate ops and upper immediates") {
  GoldenRun r(
      "  addi x1, x0, -2048\n"
      "  andi x2, x1, 0xff\n"   // 0
      "  ori x3, x0, -1\n"      // all ones
      "  xori x4, x3, -1\n"     // 0
      "  slti x5, x1, 0\n"      // 1
      "  sltiu x6, x1, 0\n"     // 0 (big unsigned)
      "  lui x7, 0xfffff\n"
      "  auipc x8, 0\n"         // pc of this instruction
      "  ebreak\n");
  CHECK(r.reg(1) == static_cast<uint32_t>(-2048));
  CHECK(r.reg(2) == 0u);
  CHECK(r.reg(3) == 0xffffffffu);
  CHECK(r.reg(4) == 0u);
  CHECK(r.reg(5) == 1u);
  CHECK(r.reg(6) == 0u);
  CHECK(r.reg(7) == 0xfffff000u);
  CHECK(r.reg(8) == 28u);  // eighth instruction, pc = 7*4
}

TEST_CASE("x0 swallows writes") {
  GoldenRun r(
      "  li x1, 5\n"
      "  add x0, x1, x1\n"
      "  addi x0, x0, 7\n"
      "  add x2, x0, x0\n"
      "  ebreak\n");
  CHECK(r.reg(0) == 0u);
  CHECK(r.reg(2) == 0u);
}

TEST_CASE("loads and stores are little-endian with correct extension") {
  GoldenRun r(
      "  li x1, 0x100\n"
      "  li x2, 0x80e1f2a3\n"
      "  sw x2, 0(x1)\n"
      "  lb x3, 0(x1)\n"    // 0xa3 sign-extends
      "  lbu x4, 0(x1)\n"   // 0xa3 zero-extends
      "  lb x5, 3(x1)\n"    // 0x80 sign-extends
      "  lh x6, 0(x1)\n"    // 0xf2a3 sign-extends
      "  lhu x7, 0(x1)\n"
      "  lh x8, 2(x1)\n"    // 0x80e1 sign-extends
      "  lw x9, 0(x1)\n"
      "  sb x2, 4(x1)\n"    // low byte only
      "  lw x10, 4(x1)\n"
      "  sh x2, 8(x1)\n"    // low half only
      "  lw x11, 8(x1)\n"
      "  ebreak\n");
  CHECK(r.reg(3) == 0xffffffa3u);
  CHECK(r.reg(4) == 0x000000a3u);
  CHECK(r.reg(5) == 0xffffff80u);
  CHECK(r.reg(6) == 0xfffff2a3u);
  CHECK(r.reg(7) == 0x0000f2a3u);
  CHECK(r.reg(8) == 0xffff80e1u);
  CHECK(r.reg(9) == 0x80e1f2a3u);
  CHECK(r.reg(10) == 0x000000a3u);
  CHECK(r.reg(11) == 0x0000f2a3u);
  CHECK(r.m.dmem.read32(0x100) == 0x80e1f2a3u);
}

TEST_CASE("branches take the right arm") {
  GoldenRun r(
      "  li x1, -1\n"
      "  li x2, 1\n"
      "  li x10, 0\n"
      "  blt x1, x2, a\n"   // taken (signed)
      "  addi x10, x10, 1\n"
      "a:\n"
      "  bltu x1, x2, b\n"  // not taken (unsigned: huge < 1 is false)
      "  addi x10, x10, 2\n"
      "b:\n"
      "  bge x2, x1, c\n"   // taken
      "  addi x10, x10, 4\n"
      "c:\n"
      "  bgeu x2, x1, d\n"  // not taken
      "  addi x10, x10, 8\n"
      "d:\n"
      "  beq x1, x1, e\n"   // taken
      "  addi x10, x10, 16\n"
      "e:\n"
      "  bne x1, x1, f\n"   // not taken
      "  addi x10, x10, 32\n"
      "f:\n"
      "  ebreak\n");
  CHECK(r.reg(10) == 2u + 8u + 32u);
}

TEST_CASE("jal links and jalr clears bit 0 of the target") {
  GoldenRun r(
      "  jal x1, skip\n"      // 0
      "  addi x10, x10, 1\n"  // 4, skipped
      "skip:\n"
      "  li x2, 21\n"         // 8, target 20 with bit 0 set
      "  jalr x3, 0(x2)\n"    // 12, lands on 21 & ~1 = 20
      "  addi x10, x10, 2\n"  // 16, skipped
      "  ebreak\n");          // 20
  CHECK(r.res.halted);
  CHECK(r.reg(1) == 4u);   // jal link
  CHECK(r.reg(3) == 16u);  // jalr link
  CHECK(r.reg(10) == 0u);  // both fall-through slots skipped
}

TEST_CASE("jalr uses the pre-link rs1 value when rd == rs1") {
  GoldenRun r(
      "  li x1, 12\n"
      "  jalr x1, 0(x1)\n"  // jump to 12, then x1 = 8
      "  addi x10, x10, 1\n"
      "  ebreak\n");
  CHECK(r.res.halted);
  CHECK(r.reg(1) == 8u);
  CHECK(r.reg(10) == 0u);  // instruction at 8 was skipped
}

TEST_CASE("ebreak halts with pc parked on it; retired counts it") {
  GoldenRun r("  nop\n  nop\n  ebreak\n  nop\n");
  CHECK(r.res.halted);
  CHECK_FALSE(r.res.runaway);
  CHECK(r.res.retired == 3u);
  CHECK(r.m.state.pc == 8u);
}

TEST_CASE("ecall and fence are architectural no-ops") {
  GoldenRun r("  li x1, 3\n  ecall\n  fence\n  addi x1, x1, 1\n  ebreak\n");
  CHECK(r.res.halted);
  CHECK(r.reg(1) == 4u);
}

TEST_CASE("runaway is reported when max_steps is exhausted") {
  GoldenRun r("loop:\n  jal x0, loop\n", nullptr, 1000);
  CHECK_FALSE(r.res.halted);
  CHECK(r.res.runaway);
  CHECK(r.res.retired == 1000u);
}

TEST_CASE("faults carry the kind and pc") {
  SUBCASE("misaligned lw") {
    GoldenRun r("  li x1, 0x102\n  lw x2, 0(x1)\n  ebreak\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::MisalignedAccess);
    CHECK(r.res.fault->pc == 4u);
    CHECK(r.res.retired == 1u);
  }
  SUBCASE("misaligned sh") {
    GoldenRun r("  li x1, 0x101\n  sh x2, 0(x1)\n  ebreak\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::MisalignedAccess);
  }
  SUBCASE("byte access never misaligns") {
    GoldenRun r("  li x1, 0x103\n  lb x2, 0(x1)\n  sb x2, 0(x1)\n  ebreak\n");
    CHECK(r.res.halted);
  }
  SUBCASE("data access out of range") {
    GoldenRun r("  lui x1, 0x10\n  lw x2, 0(x1)\n  ebreak\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::OutOfRangeAccess);
  }
  SUBCASE("store beyond the top of dmem") {
    // Alignment implies containment in a power-of-two bank, so the only
    // out-of-range word access starts at or past the end.
    GoldenRun r("  li x1, 16384\n  sw x2, 0(x1)\n  ebreak\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::OutOfRangeAccess);
  }
  SUBCASE("illegal instruction") {
    GoldenRun r("  .word 0\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::IllegalInstruction);
    CHECK(r.res.fault->pc == 0u);
    CHECK(r.res.retired == 0u);
  }
  SUBCASE("misaligned fetch via jalr") {
    GoldenRun r("  li x1, 6\n  jalr x0, 0(x1)\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::MisalignedFetch);
    CHECK(r.res.fault->pc == 6u);
  }
  SUBCASE("fetch past the end of imem") {
    GoldenRun r("  lui x1, 0x10\n  jalr x0, 0(x1)\n");
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::OutOfRangeAccess);
    CHECK(r.res.fault->pc == 0x10000u);
  }
}

TEST_CASE("baa without an accelerator faults; with one it applies and continues") {
  const char* src =
      "  li x1, 0x40\n"
      "  li x2, 3\n"     // count = 3: [addr, delta, cost]
      "  sw x2, 0(x1)\n"
      "  li x2, 0x100\n"
      "  sw x2, 4(x1)\n"
      "  li x2, 41\n"
      "  sw x2, 8(x1)\n"
      "  li x2, 9\n"
      "  sw x2, 12(x1)\n"
      "  li x2, 1\n"
      "  sw x2, 0x100(x0)\n"
      "  baa 0(x1)\n"
      "  lw x3, 0x100(x0)\n"
      "  ebreak\n";
  SUBCASE("no accelerator registered") {
    GoldenRun r(src);
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::NoAcceleratorRegistered);
    CHECK(r.res.fault->pc == 4u * 11);
  }
  SUBCASE("stub applies its effect atomically") {
    StubAccel acc;
    GoldenRun r(src, &acc);
    CHECK(r.res.halted);
    CHECK(r.reg(3) == 42u);
  }
  SUBCASE("misaligned argument array") {
    StubAccel acc;
    GoldenRun r("  li x1, 0x102\n  baa 0(x1)\n", &acc);
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::BadArgumentArray);
  }
  SUBCASE("rejected arguments become BadArgumentArray") {
    StubAccel acc;
    GoldenRun r("  li x1, 0x40\n  li x2, 1\n  sw x2, 0(x1)\n  baa 0(x1)\n",
                &acc);
    REQUIRE(r.res.fault.has_value());
    CHECK(r.res.fault->kind == FaultKind::BadArgumentArray);
  }
}

TEST_CASE("rpa jumps to rs1+imm") {
  GoldenRun r(
      "  li x1, 8\n"
      "  rpa 4(x1)\n"      // to 12
      "  addi x10, x10, 1\n"
      "  ebreak\n");
  CHECK(r.res.halted);
  CHECK(r.reg(10) == 0u);
  CHECK(r.res.retired == 3u);
}

TEST_CASE("word after a fault is never executed") {
  GoldenRun r(
      "  li x1, 0x102\n"
      "  lw x2, 0(x1)\n"
      "  li x3, 99\n"
      "  ebreak\n");
  REQUIRE(r.res.fault.has_value());
  CHECK(r.reg(3) == 0u);
}
