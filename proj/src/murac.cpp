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

#include "tcsim/murac.hpp"

#include <cassert>
#include <cstdio>
#include <vector>

namespace tcsim::murac {

namespace {

std::string hex(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%x", v);
  return buf;
}

}  // namespace

std::variant<AuxiliarySession, Fault> open_session(const Accelerator& acc,
                                                   uint32_t args_addr,
                                                   MemoryBank& dmem,
                                                   uint32_t baa_pc) {
  auto bad = [&](std::string detail) {
    return Fault{FaultKind::BadArgumentArray, baa_pc, std::move(detail)};
  };
  if (args_addr % 4 != 0)
    return bad("argument address " + hex(args_addr) +
               " is not word-aligned");
  if (!dmem.in_range(args_addr, 4))
    return bad("argument address outside DMEM");

  // The accelerator owns the bus from the count read onward so that every
  // access of the invocation lands inside the instrumented window.
  dmem.set_owner(BusOwner::Accelerator);
  dmem.begin_aux_window();

  uint32_t count = dmem.read32(args_addr);
  uint64_t array_bytes = 4ull * (1ull + count);
  if (!dmem.in_range(args_addr, static_cast<uint32_t>(array_bytes)) ||
      array_bytes > dmem.size_bytes()) {
    close_session(dmem);
    return bad("argument array of " + std::to_string(count) +
               " elements exceeds DMEM");
  }

  std::vector<uint32_t> args(count + 1);
  args[0] = count;
  for (uint32_t i = 1; i <= count; ++i)
    args[i] = dmem.read32(args_addr + 4 * i);

  AuxiliarySession s;
  s.args_addr = args_addr;
  try {
    s.cycles_total = acc.cycle_cost(args);
    acc.apply(dmem, args);
  } catch (const BadArgs& e) {
    close_session(dmem);
    return bad(e.what());
  }
  s.cycles_remaining = s.cycles_total;
  s.busy = s.cycles_remaining > 0;
  return s;
}

bool session_tick(AuxiliarySession& s) {
  assert(s.busy && s.cycles_remaining > 0);
  if (--s.cycles_remaining == 0) s.busy = false;
  return !s.busy;
}

void close_session(MemoryBank& dmem) {
  dmem.end_aux_window();
  dmem.set_owner(BusOwner::Processor);
}

}  // namespace tcsim::murac
