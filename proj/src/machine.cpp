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

#include "tcsim/machine.hpp"

namespace tcsim {

std::string_view fault_name(FaultKind k) {
  switch (k) {
    case FaultKind::IllegalInstruction: return "illegal-instruction";
    case FaultKind::MisalignedFetch: return "misaligned-fetch";
    case FaultKind::MisalignedAccess: return "misaligned-access";
    case FaultKind::OutOfRangeAccess: return "out-of-range-access";
    case FaultKind::BadArgumentArray: return "bad-argument-array";
    case FaultKind::NoAcceleratorRegistered: return "no-accelerator-registered";
  }
  return "unknown-fault";
}

}  // namespace tcsim
