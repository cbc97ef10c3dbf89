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

#include "tcsim/bench.hpp"

#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "tcsim/golden.hpp"

namespace tcsim::bench {
namespace {

constexpr uint32_t kImemBytes = 64 * 1024;
constexpr uint32_t kMinDmemBytes = 64 * 1024;
constexpr uint32_t kMaxDmemBytes = 256u * 1024 * 1024;
constexpr uint32_t kArgsAddr = 0x40;
constexpr uint32_t kDataBase = 0x80;

std::string vfmt(const char* f, va_list ap) {
  va_list copy;
  va_copy(copy, ap);
  int n = std::vsnprintf(nullptr, 0, f, copy);
  va_end(copy);
  std::string out(n > 0 ? static_cast<size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, f, ap);
  return out;
}

std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  std::string out = vfmt(f, ap);
  va_end(ap);
  return out;
}

// Assembly text builder. Instructions are indented two spaces; labels are
// flush left, matching the hand-written demo programs.
class Asm {
 public:
  void ins(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    text_ += "  ";
    text_ += vfmt(f, ap);
    text_ += '\n';
    va_end(ap);
  }
  void label(const std::string& name) {
    text_ += name;
    text_ += ":\n";
  }
  void comment(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    text_ += "# ";
    text_ += vfmt(f, ap);
    text_ += '\n';
    va_end(ap);
  }
  void blank() { text_ += '\n'; }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

uint32_t next_pow2(uint32_t v) {
  uint32_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Resolved array addresses for one benchmark instance. Input arrays come
// first so they form one contiguous run to seed; outputs follow and form
// the digest region.
struct Arrays {
  uint32_t a = 0, b = 0, c = 0;                                   // mm
  uint32_t x = 0, h = 0, y = 0;                                   // fir
  uint32_t nodes = 0, cents = 0, assign = 0, sums = 0, cnts = 0;  // km
  uint32_t in = 0, out = 0;                                       // se
  uint32_t input_words = 0;  // seeded words starting at kDataBase
  uint32_t end = 0;          // first byte past every array
};

uint32_t fir_outputs(const KernelParams& p) {
  return p.fir_inputs - p.fir_taps + 1;
}

Arrays compute_arrays(App app, const KernelParams& p, Layout& layout) {
  Arrays ar;
  uint32_t d = kDataBase;
  switch (app) {
    case App::Mm: {
      uint32_t n2 = p.mm_n * p.mm_n;
      ar.a = d;
      ar.b = ar.a + 4 * n2;
      ar.c = ar.b + 4 * n2;
      ar.end = ar.c + 4 * n2;
      ar.input_words = 2 * n2;
      layout.digest_addr = ar.c;
      layout.digest_bytes = 4 * n2;
      break;
    }
    case App::Fir: {
      uint32_t n_out = fir_outputs(p);
      ar.x = d;
      ar.h = ar.x + 4 * p.fir_inputs;
      ar.y = ar.h + 4 * p.fir_taps;
      ar.end = ar.y + 4 * n_out;
      ar.input_words = p.fir_inputs + p.fir_taps;
      layout.digest_addr = ar.y;
      layout.digest_bytes = 4 * n_out;
      break;
    }
    case App::Km: {
      uint32_t nd = p.km_nodes * p.km_dims;
      uint32_t kd = p.km_k * p.km_dims;
      ar.nodes = d;
      ar.cents = ar.nodes + 4 * nd;
      ar.assign = ar.cents + 4 * kd;
      ar.sums = ar.assign + 4 * p.km_nodes;
      ar.cnts = ar.sums + 4 * kd;
      ar.end = ar.cnts + 4 * p.km_k;
      ar.input_words = nd + kd;
      layout.digest_addr = ar.assign;
      layout.digest_bytes = 4 * (p.km_nodes + kd + p.km_k);
      break;
    }
    case App::Se: {
      uint32_t hw = p.se_height * p.se_width;
      ar.in = d;
      ar.out = ar.in + 4 * hw;
      ar.end = ar.out + 4 * hw;
      ar.input_words = hw;
      layout.digest_addr = ar.out;
      layout.digest_bytes = 4 * hw;
      break;
    }
  }
  layout.args_addr = kArgsAddr;
  layout.data_base = kDataBase;
  if (ar.end > kMaxDmemBytes)
    throw std::invalid_argument("params exceed data memory capacity");
  layout.dmem_bytes = next_pow2(ar.end < kMinDmemBytes ? kMinDmemBytes : ar.end);
  return ar;
}

void validate(App app, Mode mode, const KernelParams& p) {
  auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
  switch (app) {
    case App::Mm:
      if (p.mm_n == 0) bad("mm: n must be positive");
      if (mode == Mode::Tc && p.mm_n % 5 != 0)
        bad("mm: tiled mode needs n to be a multiple of 5");
      break;
    case App::Fir:
      if (p.fir_taps == 0) bad("fir: taps must be positive");
      if (p.fir_inputs < p.fir_taps) bad("fir: inputs must be >= taps");
      break;
    case App::Km:
      if (p.km_nodes == 0 || p.km_k == 0 || p.km_dims == 0)
        bad("km: nodes, k, dims must be positive");
      break;
    case App::Se:
      if (p.se_height < 3 || p.se_width < 3)
        bad("se: image must be at least 3x3");
      if (mode == Mode::Tc) {
        if (p.se_height < 18 || p.se_width < 18 ||
            (p.se_height - 2) % 16 != 0 || (p.se_width - 2) % 16 != 0)
          bad("se: tiled mode needs height-2 and width-2 multiples of 16");
      }
      break;
  }
}

// Stages constant argument words at the staging area; s1 is left pointing
// at it so callers can update per-tile slots with plain stores.
void emit_static_args(Asm& w, std::span<const uint32_t> values) {
  w.ins("li s1, %" PRIu32, kArgsAddr);
  for (size_t i = 0; i < values.size(); ++i) {
    w.ins("li t0, %" PRIu32, values[i]);
    w.ins("sw t0, %zu(s1)", 4 * i);
  }
}

// Shift-add multiply, the RV32I substitute for a MUL instruction.
//   a0 = low 32 bits of a0 * a1; clobbers t0, t1, t2.
void emit_mul32(Asm& w) {
  w.blank();
  w.comment("a0 = a0 * a1 (low 32 bits), shift-add; clobbers t0-t2");
  w.label("mul32");
  w.ins("mv t0, a0");
  w.ins("mv t1, a1");
  w.ins("li a0, 0");
  w.label("mul32_loop");
  w.ins("andi t2, t1, 1");
  w.ins("beq t2, x0, mul32_skip");
  w.ins("add a0, a0, t0");
  w.label("mul32_skip");
  w.ins("slli t0, t0, 1");
  w.ins("srli t1, t1, 1");
  w.ins("bne t1, x0, mul32_loop");
  w.ins("jalr x0, 0(ra)");
}

// Adds coeff * t4 into the accumulator register (coeff in -2..2).
void emit_accumulate(Asm& w, const char* acc, int coeff) {
  switch (coeff) {
    case -2:
      w.ins("slli t5, t4, 1");
      w.ins("sub %s, %s, t5", acc, acc);
      break;
    case -1:
      w.ins("sub %s, %s, t4", acc, acc);
      break;
    case 1:
      w.ins("add %s, %s, t4", acc, acc);
      break;
    case 2:
      w.ins("slli t5, t4, 1");
      w.ins("add %s, %s, t5", acc, acc);
      break;
    default:
      break;
  }
}

// One 3x3 sample: clamp the column, load the pixel, accumulate both
// gradients. The row offset is already in s10.
void emit_sobel_sample(Asm& w, int idx, int dx, int gx, int gy) {
  if (dx < 0) {
    w.ins("addi t5, a3, -1");
    w.ins("bge t5, x0, sp_c%d", idx);
    w.ins("li t5, 0");
    w.label(fmt("sp_c%d", idx));
  } else if (dx == 0) {
    w.ins("mv t5, a3");
  } else {
    w.ins("addi t5, a3, 1");
    w.ins("bge s5, t5, sp_c%d", idx);
    w.ins("mv t5, s5");
    w.label(fmt("sp_c%d", idx));
  }
  w.ins("add t5, t5, s10");
  w.ins("slli t5, t5, 2");
  w.ins("add t5, t5, s1");
  w.ins("lw t4, 0(t5)");
  emit_accumulate(w, "s8", gx);
  emit_accumulate(w, "s9", gy);
}

// Full Sobel response for one pixel, with clamp-to-edge sampling.
//   inputs   a2 = row, a3 = col
//   globals  s1 = input base, s2 = output base, s3 = width,
//            s4 = height-1, s5 = width-1
//   clobbers ra, a0, a1, t0-t2, t4-t6, s8-s11
// The final value is |gx|+|gy| clamped above at 255; with byte-range
// inputs the sum is never negative, so no lower clamp is emitted.
void emit_sobel_pixel(Asm& w) {
  static constexpr int kGx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int kGy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  w.blank();
  w.comment("sobel response for pixel (a2, a3); see register notes above");
  w.label("sobel_pixel");
  w.ins("mv t6, ra");
  w.ins("li s8, 0");
  w.ins("li s9, 0");
  for (int dy = -1; dy <= 1; ++dy) {
    int b = dy + 1;
    if (dy < 0) {
      w.ins("addi a0, a2, -1");
      w.ins("bge a0, x0, sp_r%d", b);
      w.ins("li a0, 0");
      w.label(fmt("sp_r%d", b));
    } else if (dy == 0) {
      w.ins("mv a0, a2");
    } else {
      w.ins("addi a0, a2, 1");
      w.ins("bge s4, a0, sp_r%d", b);
      w.ins("mv a0, s4");
      w.label(fmt("sp_r%d", b));
    }
    w.ins("mv a1, s3");
    w.ins("jal ra, mul32");
    w.ins("mv s10, a0");
    // The dy = 0 row offset doubles as the output row for the store.
    if (dy == 0) w.ins("mv s11, a0");
    for (int dx = -1; dx <= 1; ++dx)
      emit_sobel_sample(w, b * 3 + dx + 1, dx, kGx[b][dx + 1], kGy[b][dx + 1]);
  }
  w.ins("bge s8, x0, sp_ax");
  w.ins("sub s8, x0, s8");
  w.label("sp_ax");
  w.ins("bge s9, x0, sp_ay");
  w.ins("sub s9, x0, s9");
  w.label("sp_ay");
  w.ins("add s8, s8, s9");
  w.ins("li t5, 255");
  w.ins("bge t5, s8, sp_sat");
  w.ins("mv s8, t5");
  w.label("sp_sat");
  w.ins("add t5, s11, a3");
  w.ins("slli t5, t5, 2");
  w.ins("add t5, t5, s2");
  w.ins("sw s8, 0(t5)");
  w.ins("jalr x0, 0(t6)");
}

// ---- matrix multiply -------------------------------------------------

uint64_t gen_mm_sw(Asm& w, const KernelParams& p, const Arrays& ar) {
  uint32_t n = p.mm_n;
  w.comment("mm/sw: %ux%u matmul, row-major, shift-add multiplier", n, n);
  w.ins("li t4, %u", n);
  w.ins("li t3, %u", 4 * n);  // row stride in bytes
  w.ins("li s4, %u", ar.a);
  w.ins("li s5, %u", ar.c);
  w.ins("li s1, 0");
  w.label("mm_i");
  w.ins("li s6, %u", ar.b);
  w.ins("li s2, 0");
  w.label("mm_j");
  w.ins("li s7, 0");
  w.ins("mv s8, s4");
  w.ins("mv s9, s6");
  w.ins("li s3, 0");
  w.label("mm_k");
  w.ins("lw a0, 0(s8)");
  w.ins("lw a1, 0(s9)");
  w.ins("jal ra, mul32");
  w.ins("add s7, s7, a0");
  w.ins("addi s8, s8, 4");
  w.ins("add s9, s9, t3");
  w.ins("addi s3, s3, 1");
  w.ins("blt s3, t4, mm_k");
  w.ins("sw s7, 0(s5)");
  w.ins("addi s5, s5, 4");
  w.ins("addi s6, s6, 4");
  w.ins("addi s2, s2, 1");
  w.ins("blt s2, t4, mm_j");
  w.ins("add s4, s4, t3");
  w.ins("addi s1, s1, 1");
  w.ins("blt s1, t4, mm_i");
  w.ins("ebreak");
  emit_mul32(w);
  return 0;
}

uint64_t gen_mm_tc(Asm& w, const KernelParams& p, const Arrays& ar) {
  uint32_t n = p.mm_n;
  w.comment("mm/tc: %ux%u matmul in 1x5 output strips on mm-tile", n, n);
  const uint32_t args[] = {6, ar.a, ar.b, ar.c, n};
  emit_static_args(w, args);
  w.ins("li s2, 0");      // row
  w.ins("li s4, %u", n);  // limit for both loops
  w.label("mm_row");
  w.ins("sw s2, 20(s1)");
  w.ins("li s3, 0");  // col5
  w.label("mm_col");
  w.ins("sw s3, 24(s1)");
  w.ins("baa 0(s1)");
  w.ins("addi s3, s3, 5");
  w.ins("blt s3, s4, mm_col");
  w.ins("addi s2, s2, 1");
  w.ins("blt s2, s4, mm_row");
  w.ins("ebreak");
  return static_cast<uint64_t>(n) * (n / 5);
}

uint64_t gen_mm_hw(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("mm/hw: whole %ux%u matmul in one mm-full call", p.mm_n, p.mm_n);
  const uint32_t args[] = {4, ar.a, ar.b, ar.c, p.mm_n};
  emit_static_args(w, args);
  w.ins("baa 0(s1)");
  w.ins("ebreak");
  return 1;
}

// ---- FIR filter ------------------------------------------------------

uint64_t gen_fir_sw(Asm& w, const KernelParams& p, const Arrays& ar) {
  uint32_t n_out = fir_outputs(p);
  w.comment("fir/sw: %u-tap filter over %u samples", p.fir_taps,
            p.fir_inputs);
  w.ins("li t3, %u", n_out);
  w.ins("li t4, %u", p.fir_taps);
  w.ins("li s3, %u", ar.x);  // window base, advances per output
  w.ins("li s4, %u", ar.y);
  w.ins("li s1, 0");
  w.label("fir_i");
  w.ins("li s7, 0");
  w.ins("mv s6, s3");
  w.ins("li s5, %u", ar.h);
  w.ins("li s2, 0");
  w.label("fir_t");
  w.ins("lw a0, 0(s6)");
  w.ins("lw a1, 0(s5)");
  w.ins("jal ra, mul32");
  w.ins("add s7, s7, a0");
  w.ins("addi s6, s6, 4");
  w.ins("addi s5, s5, 4");
  w.ins("addi s2, s2, 1");
  w.ins("blt s2, t4, fir_t");
  w.ins("sw s7, 0(s4)");
  w.ins("addi s4, s4, 4");
  w.ins("addi s3, s3, 4");
  w.ins("addi s1, s1, 1");
  w.ins("blt s1, t3, fir_i");
  w.ins("ebreak");
  emit_mul32(w);
  return 0;
}

constexpr uint32_t kFirTileOutputs = 50;

uint64_t gen_fir_tc(Asm& w, const KernelParams& p, const Arrays& ar) {
  uint32_t n_out = fir_outputs(p);
  w.comment("fir/tc: %u outputs in chunks of %u on fir-tile", n_out,
            kFirTileOutputs);
  const uint32_t args[] = {6, ar.x, ar.h, ar.y, p.fir_taps};
  emit_static_args(w, args);
  w.ins("li s2, 0");
  w.ins("li s3, %u", n_out);
  w.ins("li s4, %u", kFirTileOutputs);
  w.label("fir_tile");
  w.ins("sw s2, 20(s1)");
  // Last chunk may be short: count = min(quota, remaining).
  w.ins("sub t0, s3, s2");
  w.ins("blt t0, s4, fir_go");
  w.ins("mv t0, s4");
  w.label("fir_go");
  w.ins("sw t0, 24(s1)");
  w.ins("baa 0(s1)");
  w.ins("add s2, s2, t0");
  w.ins("blt s2, s3, fir_tile");
  w.ins("ebreak");
  return (n_out + kFirTileOutputs - 1) / kFirTileOutputs;
}

uint64_t gen_fir_hw(Asm& w, const KernelParams& p, const Arrays& ar) {
  uint32_t n_out = fir_outputs(p);
  w.comment("fir/hw: whole filter in one fir-full call");
  const uint32_t args[] = {5, ar.x, ar.h, ar.y, p.fir_taps, n_out};
  emit_static_args(w, args);
  w.ins("baa 0(s1)");
  w.ins("ebreak");
  return 1;
}

// ---- k-means assignment ----------------------------------------------

uint64_t gen_km_sw(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("km/sw: assign %u nodes to %u centroids (dims=%u)", p.km_nodes,
            p.km_k, p.km_dims);
  w.ins("li t3, %u", p.km_nodes);
  w.ins("li t4, %u", p.km_dims);
  w.ins("li t5, %u", 4 * p.km_dims);  // stride of one point
  w.ins("li t6, %u", p.km_k);
  w.ins("li s2, %u", ar.nodes);
  w.ins("li s11, %u", ar.assign);
  w.ins("li s1, 0");
  w.label("km_node");
  w.ins("li s3, 0");
  w.ins("li s4, %u", ar.cents);
  w.ins("li s5, -1");  // best distance sentinel, 0xffffffff
  w.ins("li s6, 0");
  w.label("km_cent");
  w.ins("li s7, 0");
  w.ins("mv s8, s2");
  w.ins("mv s9, s4");
  w.ins("li s10, 0");
  w.label("km_dim");
  w.ins("lw a0, 0(s8)");
  w.ins("lw a1, 0(s9)");
  w.ins("sub a0, a0, a1");
  w.ins("mv a1, a0");
  w.ins("jal ra, mul32");  // squared difference, wrapping
  w.ins("add s7, s7, a0");
  w.ins("addi s8, s8, 4");
  w.ins("addi s9, s9, 4");
  w.ins("addi s10, s10, 1");
  w.ins("blt s10, t4, km_dim");
  // Strict unsigned compare keeps the first centroid on ties.
  w.ins("bgeu s7, s5, km_keep");
  w.ins("mv s5, s7");
  w.ins("mv s6, s3");
  w.label("km_keep");
  w.ins("add s4, s4, t5");
  w.ins("addi s3, s3, 1");
  w.ins("blt s3, t6, km_cent");
  w.ins("sw s6, 0(s11)");
  w.ins("addi s11, s11, 4");
  w.ins("mv a0, s6");
  w.ins("mv a1, t5");
  w.ins("jal ra, mul32");  // byte offset of the chosen sum row
  w.ins("li t0, %u", ar.sums);
  w.ins("add t0, t0, a0");
  w.ins("mv s8, s2");
  w.ins("li s10, 0");
  w.label("km_sum");
  w.ins("lw a0, 0(s8)");
  w.ins("lw t1, 0(t0)");
  w.ins("add t1, t1, a0");
  w.ins("sw t1, 0(t0)");
  w.ins("addi t0, t0, 4");
  w.ins("addi s8, s8, 4");
  w.ins("addi s10, s10, 1");
  w.ins("blt s10, t4, km_sum");
  w.ins("li t0, %u", ar.cnts);
  w.ins("slli t1, s6, 2");
  w.ins("add t0, t0, t1");
  w.ins("lw t1, 0(t0)");
  w.ins("addi t1, t1, 1");
  w.ins("sw t1, 0(t0)");
  w.ins("add s2, s2, t5");
  w.ins("addi s1, s1, 1");
  w.ins("blt s1, t3, km_node");
  w.ins("ebreak");
  emit_mul32(w);
  return 0;
}

constexpr uint32_t kKmTileNodes = 125;

uint64_t gen_km_tc(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("km/tc: %u nodes in chunks of %u on km-tile", p.km_nodes,
            kKmTileNodes);
  const uint32_t args[] = {9,       ar.nodes, ar.cents, ar.assign, ar.sums,
                           ar.cnts, 0,        0,        p.km_k,    p.km_dims};
  emit_static_args(w, args);
  w.ins("li s2, 0");
  w.ins("li s3, %u", p.km_nodes);
  w.ins("li s4, %u", kKmTileNodes);
  w.label("km_tile");
  w.ins("sw s2, 24(s1)");
  w.ins("sub t0, s3, s2");
  w.ins("blt t0, s4, km_go");
  w.ins("mv t0, s4");
  w.label("km_go");
  w.ins("sw t0, 28(s1)");
  w.ins("baa 0(s1)");
  w.ins("add s2, s2, t0");
  w.ins("blt s2, s3, km_tile");
  w.ins("ebreak");
  return (p.km_nodes + kKmTileNodes - 1) / kKmTileNodes;
}

uint64_t gen_km_hw(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("km/hw: whole assignment pass in one km-full call");
  const uint32_t args[] = {8,       ar.nodes,   ar.cents, ar.assign, ar.sums,
                           ar.cnts, p.km_nodes, p.km_k,   p.km_dims};
  emit_static_args(w, args);
  w.ins("baa 0(s1)");
  w.ins("ebreak");
  return 1;
}

// ---- Sobel edge detection --------------------------------------------

void emit_sobel_globals(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.ins("li s1, %u", ar.in);
  w.ins("li s2, %u", ar.out);
  w.ins("li s3, %u", p.se_width);
  w.ins("li s4, %u", p.se_height - 1);
  w.ins("li s5, %u", p.se_width - 1);
}

uint64_t gen_se_sw(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("se/sw: %ux%u Sobel, clamp-to-edge borders", p.se_height,
            p.se_width);
  emit_sobel_globals(w, p, ar);
  w.ins("li s6, 0");
  w.label("se_row");
  w.ins("li s7, 0");
  w.label("se_col");
  w.ins("mv a2, s6");
  w.ins("mv a3, s7");
  w.ins("jal ra, sobel_pixel");
  w.ins("addi s7, s7, 1");
  w.ins("bge s5, s7, se_col");
  w.ins("addi s6, s6, 1");
  w.ins("bge s4, s6, se_row");
  w.ins("ebreak");
  emit_sobel_pixel(w);
  emit_mul32(w);
  return 0;
}

uint64_t gen_se_tc(Asm& w, const KernelParams& p, const Arrays& ar,
                   uint32_t* border_pixels) {
  uint32_t h = p.se_height, wd = p.se_width;
  w.comment("se/tc: border ring in software, 16x16 interior tiles on se-tile");
  emit_sobel_globals(w, p, ar);
  // Top and bottom rows.
  w.ins("li s6, 0");
  w.label("se_tb");
  w.ins("mv a2, x0");
  w.ins("mv a3, s6");
  w.ins("jal ra, sobel_pixel");
  w.ins("mv a2, s4");
  w.ins("mv a3, s6");
  w.ins("jal ra, sobel_pixel");
  w.ins("addi s6, s6, 1");
  w.ins("bge s5, s6, se_tb");
  // Left and right columns, excluding the corners already done.
  w.ins("li s6, 1");
  w.label("se_lr");
  w.ins("mv a2, s6");
  w.ins("mv a3, x0");
  w.ins("jal ra, sobel_pixel");
  w.ins("mv a2, s6");
  w.ins("mv a3, s5");
  w.ins("jal ra, sobel_pixel");
  w.ins("addi s6, s6, 1");
  w.ins("blt s6, s4, se_lr");
  // Interior tiles. sobel_pixel is done with s8-s11 by now.
  w.ins("li s6, %u", kArgsAddr);
  w.ins("li t0, 5");
  w.ins("sw t0, 0(s6)");
  w.ins("sw s1, 4(s6)");
  w.ins("sw s2, 8(s6)");
  w.ins("sw s3, 12(s6)");
  w.ins("li s7, 1");           // tile row
  w.ins("li s8, %u", h - 17);  // last tile row
  w.ins("li s9, %u", wd - 17);
  w.label("se_trow");
  w.ins("sw s7, 16(s6)");
  w.ins("li s10, 1");  // tile col
  w.label("se_tcol");
  w.ins("sw s10, 20(s6)");
  w.ins("baa 0(s6)");
  w.ins("addi s10, s10, 16");
  w.ins("bge s9, s10, se_tcol");
  w.ins("addi s7, s7, 16");
  w.ins("bge s8, s7, se_trow");
  w.ins("ebreak");
  emit_sobel_pixel(w);
  emit_mul32(w);
  *border_pixels = 2 * wd + 2 * (h - 2);
  return static_cast<uint64_t>((h - 2) / 16) * ((wd - 2) / 16);
}

uint64_t gen_se_hw(Asm& w, const KernelParams& p, const Arrays& ar) {
  w.comment("se/hw: whole %ux%u image in one se-full call", p.se_height,
            p.se_width);
  const uint32_t args[] = {4, ar.in, ar.out, p.se_width, p.se_height};
  emit_static_args(w, args);
  w.ins("baa 0(s1)");
  w.ins("ebreak");
  return 1;
}

}  // namespace

std::string_view app_name(App app) {
  switch (app) {
    case App::Mm: return "mm";
    case App::Fir: return "fir";
    case App::Km: return "km";
    case App::Se: return "se";
  }
  return "?";
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Sw: return "sw";
    case Mode::Tc: return "tc";
    case Mode::Hw: return "hw";
  }
  return "?";
}

std::optional<App> parse_app(std::string_view text) {
  for (App a : kAllApps)
    if (text == app_name(a)) return a;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : kAllModes)
    if (text == mode_name(m)) return m;
  return std::nullopt;
}

uint64_t fnv1a64(std::span<const uint8_t> bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

KernelParams desk_params(App app) {
  KernelParams p;
  switch (app) {
    case App::Mm: p.mm_n = 20; break;
    case App::Fir: p.fir_inputs = 1000; p.fir_taps = 50; break;
    case App::Km: p.km_nodes = 500; p.km_k = 4; p.km_dims = 2; break;
    case App::Se: p.se_height = 34; p.se_width = 34; break;
  }
  return p;
}

KernelParams paper_params(App app) {
  KernelParams p;
  switch (app) {
    case App::Mm: p.mm_n = 100; break;
    case App::Fir: p.fir_inputs = 10000; p.fir_taps = 50; break;
    case App::Km: p.km_nodes = 5000; p.km_k = 4; p.km_dims = 2; break;
    case App::Se: p.se_height = 130; p.se_width = 130; break;
  }
  return p;
}

Program generate_program(const BenchmarkSpec& spec) {
  validate(spec.app, spec.mode, spec.params);
  Program prog;
  Arrays ar = compute_arrays(spec.app, spec.params, prog.layout);

  Asm w;
  uint64_t planned = 0;
  uint32_t border = 0;
  switch (spec.app) {
    case App::Mm:
      planned = spec.mode == Mode::Sw   ? gen_mm_sw(w, spec.params, ar)
                : spec.mode == Mode::Tc ? gen_mm_tc(w, spec.params, ar)
                                        : gen_mm_hw(w, spec.params, ar);
      break;
    case App::Fir:
      planned = spec.mode == Mode::Sw   ? gen_fir_sw(w, spec.params, ar)
                : spec.mode == Mode::Tc ? gen_fir_tc(w, spec.params, ar)
                                        : gen_fir_hw(w, spec.params, ar);
      break;
    case App::Km:
      planned = spec.mode == Mode::Sw   ? gen_km_sw(w, spec.params, ar)
                : spec.mode == Mode::Tc ? gen_km_tc(w, spec.params, ar)
                                        : gen_km_hw(w, spec.params, ar);
      break;
    case App::Se:
      planned = spec.mode == Mode::Sw ? gen_se_sw(w, spec.params, ar)
                : spec.mode == Mode::Tc
                    ? gen_se_tc(w, spec.params, ar, &border)
                    : gen_se_hw(w, spec.params, ar);
      break;
  }
  prog.source = w.take();
  prog.planned_baa = planned;
  prog.sw_border_pixels = border;
  if (spec.mode != Mode::Sw) {
    prog.accel_name = std::string(app_name(spec.app)) +
                      (spec.mode == Mode::Tc ? "-tile" : "-full");
  }

  try {
    prog.imem_image = assembler::assemble(prog.source);
  } catch (const assembler::AsmError& e) {
    throw std::runtime_error(fmt("generated program failed to assemble: %s",
                                 e.what()));
  }
  if (prog.imem_image.end_address() > kImemBytes)
    throw std::invalid_argument("params exceed instruction memory capacity");

  // Deterministic input data: one PRNG stream over the input arrays in
  // address order, each word a byte-range value.
  XorShift64 rng(spec.seed);
  prog.dmem_image.base_address = kDataBase;
  prog.dmem_image.words.resize(ar.input_words);
  for (uint32_t& word : prog.dmem_image.words) word = rng.next_byte();
  return prog;
}

Machine make_machine(const Program& program) {
  Machine m(kImemBytes, program.layout.dmem_bytes);
  assembler::load_image(program.imem_image, m.imem);
  assembler::load_image(program.dmem_image, m.dmem);
  return m;
}

std::unique_ptr<murac::Accelerator> make_accelerator(
    const Program& program, const std::optional<accel::CycleModel>& override) {
  if (program.accel_name.empty()) return nullptr;
  if (override) return accel::make_accelerator(program.accel_name, *override);
  return accel::make_accelerator(program.accel_name);
}

uint64_t digest_output(const Machine& machine, const Layout& layout) {
  auto raw = machine.dmem.raw();
  return fnv1a64(raw.subspan(layout.digest_addr, layout.digest_bytes));
}

BenchResult run_benchmark(const BenchmarkSpec& spec, uint64_t max_cycles) {
  BenchResult r;
  r.program = generate_program(spec);
  Machine m = make_machine(r.program);
  auto acc = make_accelerator(r.program, spec.cycle_model);
  pipeline::Pipeline pipe(m, acc.get());
  r.report = pipe.run(max_cycles, spec.freq_mhz);
  std::string tag = fmt("%s/%s", std::string(app_name(spec.app)).c_str(),
                        std::string(mode_name(spec.mode)).c_str());
  if (r.report.fault) {
    throw std::runtime_error(fmt(
        "%s faulted: %s at pc=0x%08x (%s)", tag.c_str(),
        std::string(fault_name(r.report.fault->kind)).c_str(),
        r.report.fault->pc, r.report.fault->detail.c_str()));
  }
  if (r.report.runaway) {
    throw std::runtime_error(
        fmt("%s exceeded the %" PRIu64 " cycle budget", tag.c_str(),
            max_cycles));
  }
  r.output_digest = digest_output(m, r.program.layout);
  r.accelerator_accesses = m.dmem.accelerator_accesses();
  r.aux_window_violations = m.dmem.aux_window_violations();
  return r;
}

Comparison compare_modes(App app, const KernelParams& params, uint64_t seed,
                         double freq_mhz, uint64_t max_cycles) {
  Comparison cmp;
  for (size_t i = 0; i < kAllModes.size(); ++i) {
    BenchmarkSpec spec;
    spec.app = app;
    spec.mode = kAllModes[i];
    spec.params = params;
    spec.seed = seed;
    spec.freq_mhz = freq_mhz;
    cmp.results[i] = run_benchmark(spec, max_cycles);
  }
  cmp.digests_match =
      cmp.results[0].output_digest == cmp.results[1].output_digest &&
      cmp.results[1].output_digest == cmp.results[2].output_digest;
  return cmp;
}

namespace {

nlohmann::ordered_json params_json(App app, const KernelParams& p) {
  nlohmann::ordered_json j;
  switch (app) {
    case App::Mm:
      j["n"] = p.mm_n;
      break;
    case App::Fir:
      j["inputs"] = p.fir_inputs;
      j["taps"] = p.fir_taps;
      break;
    case App::Km:
      j["nodes"] = p.km_nodes;
      j["k"] = p.km_k;
      j["dims"] = p.km_dims;
      break;
    case App::Se:
      j["height"] = p.se_height;
      j["width"] = p.se_width;
      break;
  }
  return j;
}

std::string params_text(App app, const KernelParams& p) {
  switch (app) {
    case App::Mm:
      return fmt("n=%u", p.mm_n);
    case App::Fir:
      return fmt("inputs=%u taps=%u", p.fir_inputs, p.fir_taps);
    case App::Km:
      return fmt("nodes=%u k=%u dims=%u", p.km_nodes, p.km_k, p.km_dims);
    case App::Se:
      return fmt("height=%u width=%u", p.se_height, p.se_width);
  }
  return "";
}

}  // namespace

std::string result_json(const BenchmarkSpec& spec, const BenchResult& r) {
  nlohmann::ordered_json j;
  j["app"] = app_name(spec.app);
  j["mode"] = mode_name(spec.mode);
  j["params"] = params_json(spec.app, spec.params);
  j["seed"] = spec.seed;
  j["total_cycles"] = r.report.total_cycles;
  j["retired"] = r.report.retired;
  j["stall_cycles"] = r.report.stall_cycles;
  j["aux_cycles"] = r.report.aux_cycles;
  j["flushes"] = r.report.flushes;
  j["baa_count"] = r.report.baa_count;
  j["freq_mhz"] = r.report.freq_mhz;
  j["latency_s"] = r.report.latency_s;
  j["output_digest"] = fmt("0x%016" PRIx64, r.output_digest);
  return j.dump(2);
}

std::string csv_header() {
  return "app,mode,params,seed,total_cycles,retired,stall_cycles,aux_cycles,"
         "flushes,baa_count,freq_mhz,latency_s,output_digest";
}

std::string csv_row(const BenchmarkSpec& spec, const BenchResult& r) {
  return fmt("%s,%s,%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
             ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%.6f,%.9g,0x%016" PRIx64,
             std::string(app_name(spec.app)).c_str(),
             std::string(mode_name(spec.mode)).c_str(),
             params_text(spec.app, spec.params).c_str(), spec.seed,
             r.report.total_cycles, r.report.retired, r.report.stall_cycles,
             r.report.aux_cycles, r.report.flushes, r.report.baa_count,
             r.report.freq_mhz, r.report.latency_s, r.output_digest);
}

}  // namespace tcsim::bench
