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
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "tcsim/isa.hpp"
#include "tcsim/machine.hpp"
#include "tcsim/murac.hpp"

namespace tcsim::pipeline {

/// Per-run statistics. The accounting identity for halting programs is
///   total_cycles == retired + 3 + stall_cycles + 2 * flushes
/// where flushes counts resolved control transfers (each squashes the two
/// younger pipeline slots).
struct RunReport {
  uint64_t total_cycles = 0;
  uint64_t retired = 0;
  uint64_t stall_cycles = 0;
  uint64_t aux_cycles = 0;
  uint64_t flushes = 0;
  uint64_t baa_count = 0;
  double freq_mhz = 0.0;
  double latency_s = 0.0;
  bool halted = false;
  bool runaway = false;
  std::optional<Fault> fault;
  uint64_t fault_cycle = 0;
};

double derive_latency_s(uint64_t total_cycles, double freq_mhz);

enum class Stage : uint8_t { IF, ID, EXMEM, WB, AUX };
enum class Tag : uint8_t { Normal, Bubble, Stall, Flush };

struct TraceEvent {
  uint64_t cycle = 0;
  Stage stage = Stage::IF;
  uint32_t pc = 0;
  Tag tag = Tag::Normal;
  std::string text;
};

std::string_view stage_name(Stage s);
std::string format_trace_line(const TraceEvent& e);

using TraceSink = std::function<void(const TraceEvent&)>;

/// Cycle-accurate 4-stage pipeline: IF, ID, EX/MEM, WB.
///
/// The ID stage holds the address adder, so loads, stores, JALR, BAA and
/// RPA enter EX/MEM with their effective address already computed and the
/// DMEM access happens in the same stage as the ALU; no load-use bubble
/// exists. Forwarding: the EX/MEM result of the current cycle feeds both
/// the next ID's operand capture and its address adder, and the register
/// file is write-before-read, which covers the write-back path. All control
/// transfers resolve in EX/MEM and squash the two younger slots. BAA opens
/// an auxiliary session and freezes every latch and the fetch pc until the
/// accelerator's cycle model runs out, then resumes at PC+4 through the
/// normal 2-cycle refill.
///
/// The execution semantics here are deliberately implemented independently
/// of the golden interpreter so differential tests compare two separately
/// written models.
class Pipeline {
 public:
  Pipeline(Machine& m, const murac::Accelerator* accel)
      : m_(m), accel_(accel) {}

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

  /// Advances one clock. No-op once halted or faulted.
  void tick();

  /// Ticks to halt, fault, or max_cycles (runaway).
  RunReport run(uint64_t max_cycles, double freq_mhz);

  bool halted() const { return halted_; }
  const std::optional<Fault>& fault() const { return fault_; }
  uint64_t cycle() const { return cycle_; }
  uint64_t stall_cycles() const { return stall_cycles_; }
  uint64_t aux_cycles() const { return aux_cycles_; }
  uint64_t flush_count() const { return flush_count_; }
  uint64_t baa_count() const { return baa_count_; }

 private:
  struct IfId {
    bool valid = false;
    uint32_t pc = 0;
    uint32_t word = 0;
    std::optional<Fault> fault;  // fetch fault rides the latch
  };
  struct IdEx {
    bool valid = false;
    uint32_t pc = 0;
    uint32_t word = 0;
    isa::Inst inst{};
    uint32_t rs1_val = 0;
    uint32_t rs2_val = 0;
    uint32_t addr = 0;  // ID-stage adder output
    std::optional<Fault> fault;
  };
  struct ExWb {
    bool valid = false;
    uint32_t pc = 0;
    uint32_t word = 0;
    bool writes = false;
    uint8_t rd = 0;
    uint32_t value = 0;
    bool is_ebreak = false;
  };

  void raise(Fault f);
  void emit(Stage s, uint32_t pc, Tag tag, std::string text);

  Machine& m_;
  const murac::Accelerator* accel_;
  TraceSink trace_;

  IfId if_id_;
  IdEx id_ex_;
  ExWb ex_wb_;
  uint32_t pc_ = 0;

  murac::AuxiliarySession session_;
  uint32_t baa_pc_ = 0;

  uint64_t cycle_ = 0;
  uint64_t stall_cycles_ = 0;
  uint64_t aux_cycles_ = 0;
  uint64_t flush_count_ = 0;
  uint64_t baa_count_ = 0;
  bool halted_ = false;
  std::optional<Fault> fault_;
  uint64_t fault_cycle_ = 0;
};

}  // namespace tcsim::pipeline
