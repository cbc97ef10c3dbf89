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
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "tcsim/machine.hpp"
#include "tcsim/mem.hpp"

namespace tcsim::murac {

/// Thrown by accelerators when the argument array is malformed or points
/// outside DMEM; the session layer converts it into a BadArgumentArray fault.
class BadArgs : public std::exception {
 public:
  explicit BadArgs(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

/// Behavioral contract every auxiliary architecture implements.
///
/// `args` always includes the leading count word: args[0] == count and
/// args[1..count] are the payload. Both operations are deterministic;
/// apply touches only DMEM addresses derivable from the argument array.
class Accelerator {
 public:
  virtual ~Accelerator() = default;
  virtual std::string_view name() const = 0;
  virtual uint64_t cycle_cost(std::span<const uint32_t> args) const = 0;
  virtual void apply(MemoryBank& dmem, std::span<const uint32_t> args) const = 0;
};

/// In-flight accelerator invocation. At most one exists per machine at any
/// cycle; while busy the processor side of DMEM is frozen.
struct AuxiliarySession {
  uint32_t args_addr = 0;
  uint64_t cycles_total = 0;
  uint64_t cycles_remaining = 0;
  bool busy = false;
};

/// Validates and reads the count-first argument array, computes the cycle
/// cost, and applies the functional effect. The effect is architecturally
/// a commit-at-completion: the processor is stalled for the whole session,
/// so applying eagerly here is unobservable, and it lets the golden
/// interpreter reuse the same functional model.
///
/// On success DMEM is left tagged for the accelerator with the aux window
/// open; the caller must invoke close_session once the session is done
/// (immediately, for a zero-cost session). On a fault the window is
/// already closed.
std::variant<AuxiliarySession, Fault> open_session(const Accelerator& acc,
                                                   uint32_t args_addr,
                                                   MemoryBank& dmem,
                                                   uint32_t baa_pc);

/// One stall cycle of progress. Returns true once the session is done.
bool session_tick(AuxiliarySession& s);

/// Returns DMEM to the processor and closes the instrumentation window.
void close_session(MemoryBank& dmem);

}  // namespace tcsim::murac
