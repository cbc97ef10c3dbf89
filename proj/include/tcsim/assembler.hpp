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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/mem.hpp"

namespace tcsim::assembler {

/// Assembled program: a dense run of words starting at base_address, plus
/// the label table. base_address and all label addresses are word-aligned.
struct MemoryImage {
  uint32_t base_address = 0;
  std::vector<uint32_t> words;
  std::map<std::string, uint32_t> symbols;

  uint32_t end_address() const {
    return base_address + 4 * static_cast<uint32_t>(words.size());
  }
};

class AsmError : public std::exception {
 public:
  enum class Kind {
    SyntaxError,
    UnknownMnemonic,
    UndefinedLabel,
    DuplicateLabel,
    OperandOutOfRange,
    MisalignedTarget,
  };

  AsmError(Kind kind, int line, std::string message)
      : kind_(kind), line_(line), message_(std::move(message)) {
    rendered_ = "line " + std::to_string(line_) + ": " + message_;
  }

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  const char* what() const noexcept override { return rendered_.c_str(); }

 private:
  Kind kind_;
  int line_;
  std::string message_;
  std::string rendered_;
};

/// Two-pass assembly.
///
/// Grammar: `#` or `//` comments; `label:` definitions (forward references
/// fine); directives `.org ADDR`, `.word V`, `.space NBYTES` (both .org and
/// .space must keep the location counter word-aligned, and .org only moves
/// forward). Registers are x0..x31 or ABI names. Literals are decimal or
/// 0x hex. Loads/stores/jalr/baa/rpa use `imm(rs1)` operands. Branch and
/// jump targets are labels or raw numeric PC-relative offsets, so that
/// disassembled text re-assembles position-independently.
///
/// Pseudo-instructions: nop, mv, li (one or two words), j.
MemoryImage assemble(std::string_view source);

/// One word to one canonical source line. Words that do not decode, and
/// fence encodings with hint bits set, render as `.word 0x........` so that
/// re-assembly is bit-exact.
std::string disassemble_word(uint32_t word);

/// Whole image to source lines, one per word, in address order.
std::vector<std::string> disassemble(const MemoryImage& img);

/// Hex image file format: one 8-hex-digit word per line, `@HEXADDR` sets
/// the current address counted in words, `#` comments. parse accepts gaps
/// (zero-filled); to_hex emits a single @ header when base is nonzero.
std::string to_hex_image(const MemoryImage& img);
MemoryImage parse_hex_image(std::string_view text);

/// Copies the image into a bank little-endian via the raw view (loader
/// traffic is not architectural and is not accounted).
/// Throws std::out_of_range if the image does not fit.
void load_image(const MemoryImage& img, MemoryBank& bank);

}  // namespace tcsim::assembler
