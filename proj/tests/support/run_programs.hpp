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

// Shared helpers that assemble a source string and run it to completion on
// the golden interpreter or the pipeline.

#include <string>

#include "tcsim/assembler.hpp"
#include "tcsim/golden.hpp"
#include "tcsim/machine.hpp"
#include "tcsim/pipeline.hpp"

namespace harness {

inline constexpr uint32_t kImemBytes = 16 * 1024;
inline constexpr uint32_t kDmemBytes = 16 * 1024;

inline tcsim::Machine load(const std::string& src) {
  tcsim::Machine m(kImemBytes, kDmemBytes);
  tcsim::assembler::load_image(tcsim::assembler::assemble(src), m.imem);
  return m;
}

struct GoldenRun {
  tcsim::Machine m;
  tcsim::golden::RunResult res;

  GoldenRun(const std::string& src,
            const tcsim::murac::Accelerator* acc = nullptr,
            uint64_t max_steps = 1'000'000)
      : m(load(src)) {
    res = tcsim::golden::run_to_halt(m.state, m.imem, m.dmem, acc, max_steps);
  }

  uint32_t reg(int i) const { return m.state.reg(static_cast<uint8_t>(i)); }
};

struct PipeRun {
  tcsim::Machine m;
  tcsim::pipeline::RunReport rep;

  PipeRun(const std::string& src,
          const tcsim::murac::Accelerator* acc = nullptr,
          uint64_t max_cycles = 4'000'000, double freq_mhz = 100.0)
      : m(load(src)) {
    tcsim::pipeline::Pipeline pipe(m, acc);
    rep = pipe.run(max_cycles, freq_mhz);
  }

  uint32_t reg(int i) const { return m.state.reg(static_cast<uint8_t>(i)); }
};

}  // namespace harness
