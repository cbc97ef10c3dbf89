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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/accel.hpp"
#include "tcsim/assembler.hpp"
#include "tcsim/machine.hpp"
#include "tcsim/pipeline.hpp"

// Benchmark harness: generates self-contained assembly programs for each
// kernel (matrix multiply, FIR filter, k-means assignment, Sobel edge
// detection) in three builds, seeds input data deterministically, runs them
// on the cycle-accurate pipeline, and reduces the output region to a digest
// so the three builds can be compared for bit-exactness.
//
// The three builds per kernel:
//   sw  pure RV32I, multiplies via a shift-add subroutine (no hardware mul)
//   tc  tiled accelerator calls interleaved with processor-side control and
//       (for Sobel) processor-side border handling
//   hw  one accelerator call covering the whole kernel
namespace tcsim::bench {

enum class App : uint8_t { Mm, Fir, Km, Se };
enum class Mode : uint8_t { Sw, Tc, Hw };

std::string_view app_name(App app);
std::string_view mode_name(Mode mode);
std::optional<App> parse_app(std::string_view text);
std::optional<Mode> parse_mode(std::string_view text);

inline constexpr std::array<App, 4> kAllApps{App::Mm, App::Fir, App::Km,
                                             App::Se};
inline constexpr std::array<Mode, 3> kAllModes{Mode::Sw, Mode::Tc, Mode::Hw};

// Target clock for converting cycle counts to wall time.
inline constexpr double kDefaultFreqMhz = 147.929;

// xorshift64: deterministic, seedable, identical across hosts. A zero seed
// would be a fixed point of the update, so it is remapped to 1.
class XorShift64 {
 public:
  explicit XorShift64(uint64_t seed) : state_(seed == 0 ? 1 : seed) {}

  uint64_t next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }

  // Uniform byte, used for all kernel inputs (stored as 32-bit words).
  uint8_t next_byte() { return static_cast<uint8_t>(next() & 0xff); }

 private:
  uint64_t state_;
};

// FNV-1a over a byte range, 64-bit variant.
uint64_t fnv1a64(std::span<const uint8_t> bytes);

// Problem sizes. Only the fields for the selected app are meaningful.
struct KernelParams {
  uint32_t mm_n = 0;         // square matrix dimension, multiple of 5
  uint32_t fir_inputs = 0;   // input sample count
  uint32_t fir_taps = 0;     // filter length
  uint32_t km_nodes = 0;     // points to assign
  uint32_t km_k = 0;         // centroid count
  uint32_t km_dims = 0;      // coordinate dimensionality
  uint32_t se_height = 0;    // image rows, (height-2) a multiple of 16
  uint32_t se_width = 0;     // image cols, (width-2) a multiple of 16
};

// Small sizes that finish quickly; used by default and in tests.
KernelParams desk_params(App app);
// Full-size runs, an order of magnitude beyond desk scale.
KernelParams paper_params(App app);

struct BenchmarkSpec {
  App app = App::Mm;
  Mode mode = Mode::Sw;
  KernelParams params;
  uint64_t seed = 1;
  double freq_mhz = kDefaultFreqMhz;
  // Optional override of the per-accelerator cycle model; nullopt keeps
  // default_cycle_model() for the accelerator the mode selects.
  std::optional<accel::CycleModel> cycle_model;
};

// Resolved data-memory layout for one generated program.
struct Layout {
  uint32_t args_addr = 0;     // accelerator argument staging area
  uint32_t data_base = 0;     // first input array
  uint32_t digest_addr = 0;   // start of the output region
  uint32_t digest_bytes = 0;  // length of the output region
  uint32_t dmem_bytes = 0;    // power-of-two bank size covering everything
};

// One generated benchmark program plus everything needed to run and
// cross-check it.
struct Program {
  std::string source;                 // assembly text
  assembler::MemoryImage imem_image;  // assembled instructions
  assembler::MemoryImage dmem_image;  // seeded input data
  Layout layout;
  std::string accel_name;             // empty for pure-software builds
  uint64_t planned_baa = 0;           // accelerator invocations scheduled
  uint32_t sw_border_pixels = 0;      // Sobel pixels handled in software
};

// Builds the program for a spec. Throws std::invalid_argument when the
// parameters violate a generator precondition (for example a matrix
// dimension that does not tile evenly).
Program generate_program(const BenchmarkSpec& spec);

// Machine sized and loaded per the program (64 KiB imem, layout-sized dmem).
Machine make_machine(const Program& program);

// Accelerator instance the program expects, or nullptr for sw builds.
std::unique_ptr<murac::Accelerator> make_accelerator(
    const Program& program, const std::optional<accel::CycleModel>& override);

// FNV-1a over the program's output region in dmem.
uint64_t digest_output(const Machine& machine, const Layout& layout);

struct BenchResult {
  Program program;
  pipeline::RunReport report;
  uint64_t output_digest = 0;
  // Bus arbitration instrumentation, carried out of the memory bank.
  uint64_t accelerator_accesses = 0;
  uint64_t aux_window_violations = 0;
};

// Generates, runs, and digests one benchmark. Throws std::runtime_error if
// the run faults or exceeds max_cycles.
BenchResult run_benchmark(const BenchmarkSpec& spec, uint64_t max_cycles);

// Runs all three builds of one kernel with a shared seed and checks the
// output digests for bit-exact agreement.
struct Comparison {
  std::array<BenchResult, 3> results;  // indexed by Mode order: sw, tc, hw
  bool digests_match = false;
};
Comparison compare_modes(App app, const KernelParams& params, uint64_t seed,
                         double freq_mhz, uint64_t max_cycles);

// Report serialization for the CLI.
std::string result_json(const BenchmarkSpec& spec, const BenchResult& result);
std::string csv_header();
std::string csv_row(const BenchmarkSpec& spec, const BenchResult& result);

}  // namespace tcsim::bench
