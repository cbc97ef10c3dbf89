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

#include "tcsim/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "tcsim/isa.hpp"

namespace tcsim::assembler {

namespace {

using isa::Inst;
using isa::Op;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  size_t hash = s.find('#');
  size_t slashes = s.find("//");
  size_t cut = std::min(hash, slashes);
  return cut == std::string_view::npos ? s : s.substr(0, cut);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  };
  auto tail = [&](char c) {
    return head(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '$';
  };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), tail);
}

std::string hex8(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string hexn(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%x", v);
  return buf;
}

const std::unordered_map<std::string_view, uint8_t> kAbiNames = {
    {"zero", 0}, {"ra", 1},  {"sp", 2},  {"gp", 3},  {"tp", 4},  {"t0", 5},
    {"t1", 6},   {"t2", 7},  {"s0", 8},  {"fp", 8},  {"s1", 9},  {"a0", 10},
    {"a1", 11},  {"a2", 12}, {"a3", 13}, {"a4", 14}, {"a5", 15}, {"a6", 16},
    {"a7", 17},  {"s2", 18}, {"s3", 19}, {"s4", 20}, {"s5", 21}, {"s6", 22},
    {"s7", 23},  {"s8", 24}, {"s9", 25}, {"s10", 26}, {"s11", 27}, {"t3", 28},
    {"t4", 29},  {"t5", 30}, {"t6", 31},
};

const std::unordered_map<std::string_view, Op>& mnemonic_table() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string_view, Op>;
    for (int i = 0; i < isa::kOpCount; ++i) {
      Op op = static_cast<Op>(i);
      m->emplace(isa::mnemonic(op), op);
    }
    return m;
  }();
  return *table;
}

std::optional<uint8_t> parse_reg(std::string_view tok) {
  std::string t = lower(trim(tok));
  if (auto it = kAbiNames.find(t); it != kAbiNames.end()) return it->second;
  if (t.size() >= 2 && t.size() <= 3 && t[0] == 'x') {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), v, 10);
    if (ec == std::errc() && p == t.data() + t.size() && v <= 31)
      return static_cast<uint8_t>(v);
  }
  return std::nullopt;
}

std::optional<int64_t> parse_number(std::string_view tok) {
  tok = trim(tok);
  bool neg = false;
  if (!tok.empty() && tok[0] == '-') {
    neg = true;
    tok.remove_prefix(1);
  }
  int base = 10;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    base = 16;
    tok.remove_prefix(2);
  }
  if (tok.empty()) return std::nullopt;
  uint64_t mag = 0;
  auto [p, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), mag, base);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  if (mag > 0xffffffffull) return std::nullopt;
  int64_t v = neg ? -static_cast<int64_t>(mag) : static_cast<int64_t>(mag);
  if (v < -2147483648ll) return std::nullopt;
  return v;
}

std::vector<std::string> split_operands(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      auto piece = trim(s.substr(start, i - start));
      if (!piece.empty()) out.emplace_back(piece);
      start = i + 1;
    }
  }
  return out;
}

struct Item {
  enum class Kind { Inst, Word, Space };
  Kind kind;
  int line;
  uint32_t addr;
  uint32_t size;                 // bytes
  std::string mnemonic;          // Inst only
  std::vector<std::string> ops;  // Inst/Word operand strings
};

struct Parser {
  std::vector<Item> items;
  std::map<std::string, uint32_t> symbols;
  uint32_t loc = 0;
  std::optional<uint32_t> base;

  [[noreturn]] void fail(AsmError::Kind k, int line, std::string msg) {
    throw AsmError(k, line, std::move(msg));
  }

  int64_t number_or_fail(std::string_view tok, int line, const char* ctx) {
    auto v = parse_number(tok);
    if (!v)
      fail(AsmError::Kind::SyntaxError, line,
           std::string(ctx) + ": bad numeric literal '" + std::string(tok) +
               "'");
    return *v;
  }

  void append(Item::Kind kind, int line, uint32_t size, std::string mnem = {},
              std::vector<std::string> ops = {}) {
    if (!base) base = loc;
    items.push_back(
        {kind, line, loc, size, std::move(mnem), std::move(ops)});
    loc += size;
  }

  void define_label(std::string_view name, int line) {
    auto [it, inserted] = symbols.emplace(std::string(name), loc);
    if (!inserted)
      fail(AsmError::Kind::DuplicateLabel, line,
           "duplicate label '" + std::string(name) + "'");
  }

  void directive(const std::string& name, std::string_view rest, int line) {
    if (name == ".org") {
      int64_t v = number_or_fail(rest, line, ".org");
      if (v < 0 || v > 0xffffffffll)
        fail(AsmError::Kind::OperandOutOfRange, line, ".org out of range");
      if (v % 4 != 0)
        fail(AsmError::Kind::MisalignedTarget, line,
             ".org address must be word-aligned");
      if (static_cast<uint32_t>(v) < loc)
        fail(AsmError::Kind::SyntaxError, line, ".org may only move forward");
      loc = static_cast<uint32_t>(v);
    } else if (name == ".word") {
      auto ops = split_operands(rest);
      if (ops.empty())
        fail(AsmError::Kind::SyntaxError, line, ".word needs a value");
      for (auto& op : ops)
        append(Item::Kind::Word, line, 4, {}, {op});
    } else if (name == ".space") {
      int64_t v = number_or_fail(rest, line, ".space");
      if (v < 0 || v > 0xffffffffll)
        fail(AsmError::Kind::OperandOutOfRange, line, ".space out of range");
      if (v % 4 != 0)
        fail(AsmError::Kind::MisalignedTarget, line,
             ".space must be a multiple of 4 bytes");
      if (v > 0) append(Item::Kind::Space, line, static_cast<uint32_t>(v));
    } else {
      fail(AsmError::Kind::UnknownMnemonic, line,
           "unknown directive '" + name + "'");
    }
  }

  void instruction(const std::string& mnem, std::string_view rest, int line) {
    auto ops = split_operands(rest);
    // Pseudo-instructions rewrite to base forms here so pass 2 sees only
    // real mnemonics.
    if (mnem == "nop") {
      if (!ops.empty())
        fail(AsmError::Kind::SyntaxError, line, "nop takes no operands");
      append(Item::Kind::Inst, line, 4, "addi", {"x0", "x0", "0"});
      return;
    }
    if (mnem == "mv") {
      if (ops.size() != 2)
        fail(AsmError::Kind::SyntaxError, line, "mv needs rd, rs");
      append(Item::Kind::Inst, line, 4, "addi", {ops[0], ops[1], "0"});
      return;
    }
    if (mnem == "j") {
      if (ops.size() != 1)
        fail(AsmError::Kind::SyntaxError, line, "j needs a target");
      append(Item::Kind::Inst, line, 4, "jal", {"x0", ops[0]});
      return;
    }
    if (mnem == "li") {
      if (ops.size() != 2)
        fail(AsmError::Kind::SyntaxError, line, "li needs rd, value");
      int64_t value = number_or_fail(ops[1], line, "li");
      uint32_t uv = static_cast<uint32_t>(value);
      int32_t lo = static_cast<int32_t>(uv << 20) >> 20;
      if (lo == static_cast<int32_t>(uv)) {
        append(Item::Kind::Inst, line, 4, "addi",
               {ops[0], "x0", std::to_string(lo)});
      } else {
        uint32_t hi = uv - static_cast<uint32_t>(lo);
        append(Item::Kind::Inst, line, 4, "lui", {ops[0], hexn(hi >> 12)});
        if (lo != 0)
          append(Item::Kind::Inst, line, 4, "addi",
                 {ops[0], ops[0], std::to_string(lo)});
      }
      return;
    }
    if (!mnemonic_table().count(mnem))
      fail(AsmError::Kind::UnknownMnemonic, line,
           "unknown mnemonic '" + mnem + "'");
    append(Item::Kind::Inst, line, 4, mnem, std::move(ops));
  }

  void parse_line(std::string_view raw, int line) {
    std::string_view s = trim(strip_comment(raw));
    // Peel any number of leading `label:` definitions.
    for (;;) {
      size_t colon = s.find(':');
      if (colon == std::string_view::npos) break;
      auto name = trim(s.substr(0, colon));
      if (!is_ident(name)) break;  // ':' belongs to something else; not ours
      define_label(name, line);
      s = trim(s.substr(colon + 1));
    }
    if (s.empty()) return;
    size_t sp = s.find_first_of(" \t");
    std::string head = lower(s.substr(0, sp));
    std::string_view rest =
        sp == std::string_view::npos ? std::string_view{} : trim(s.substr(sp));
    if (head[0] == '.')
      directive(head, rest, line);
    else
      instruction(head, rest, line);
  }
};

struct Encoder {
  const std::map<std::string, uint32_t>& symbols;

  [[noreturn]] void fail(AsmError::Kind k, int line, std::string msg) {
    throw AsmError(k, line, std::move(msg));
  }

  uint8_t reg(const Item& it, size_t idx) {
    auto r = parse_reg(it.ops[idx]);
    if (!r)
      fail(AsmError::Kind::SyntaxError, it.line,
           "bad register '" + it.ops[idx] + "'");
    return *r;
  }

  int64_t imm(const Item& it, size_t idx, int64_t lo, int64_t hi) {
    auto v = parse_number(it.ops[idx]);
    if (!v)
      fail(AsmError::Kind::SyntaxError, it.line,
           "bad numeric literal '" + it.ops[idx] + "'");
    if (*v < lo || *v > hi)
      fail(AsmError::Kind::OperandOutOfRange, it.line,
           "immediate " + it.ops[idx] + " outside [" + std::to_string(lo) +
               ", " + std::to_string(hi) + "]");
    return *v;
  }

  // `imm(rs1)` operand used by loads, stores, jalr, baa, rpa.
  std::pair<int32_t, uint8_t> mem_operand(const Item& it, size_t idx) {
    const std::string& s = it.ops[idx];
    size_t open = s.find('(');
    size_t close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos ||
        close < open || close != s.size() - 1)
      fail(AsmError::Kind::SyntaxError, it.line,
           "expected imm(rs1), got '" + s + "'");
    auto off = parse_number(std::string_view(s).substr(0, open));
    if (!off)
      fail(AsmError::Kind::SyntaxError, it.line,
           "bad offset in '" + s + "'");
    if (*off < -2048 || *off > 2047)
      fail(AsmError::Kind::OperandOutOfRange, it.line,
           "offset " + std::to_string(*off) + " outside [-2048, 2047]");
    auto r = parse_reg(std::string_view(s).substr(open + 1, close - open - 1));
    if (!r)
      fail(AsmError::Kind::SyntaxError, it.line,
           "bad base register in '" + s + "'");
    return {static_cast<int32_t>(*off), *r};
  }

  // Branch/jump target: label resolved PC-relative, or a raw offset.
  int64_t target(const Item& it, size_t idx, int64_t lo, int64_t hi) {
    const std::string& s = it.ops[idx];
    int64_t off;
    if (auto v = parse_number(s)) {
      off = *v;
    } else if (is_ident(s)) {
      auto sym = symbols.find(s);
      if (sym == symbols.end())
        fail(AsmError::Kind::UndefinedLabel, it.line,
             "undefined label '" + s + "'");
      off = static_cast<int64_t>(sym->second) - static_cast<int64_t>(it.addr);
    } else {
      fail(AsmError::Kind::SyntaxError, it.line, "bad target '" + s + "'");
    }
    // No compressed instructions exist, so every reachable instruction
    // address is word-aligned; reject targets that could never be fetched.
    if (off % 4 != 0)
      fail(AsmError::Kind::MisalignedTarget, it.line,
           "target offset must be word-aligned");
    if (off < lo || off > hi)
      fail(AsmError::Kind::OperandOutOfRange, it.line,
           "target offset " + std::to_string(off) + " out of range");
    return off;
  }

  void want(const Item& it, size_t n) {
    if (it.ops.size() != n)
      fail(AsmError::Kind::SyntaxError, it.line,
           it.mnemonic + " expects " + std::to_string(n) + " operand(s)");
  }

  uint32_t encode_inst(const Item& it) {
    Op op = mnemonic_table().at(it.mnemonic);
    Inst inst{op, 0, 0, 0, 0};
    switch (isa::format_of(op)) {
      case isa::Format::R:
        want(it, 3);
        inst.rd = reg(it, 0);
        inst.rs1 = reg(it, 1);
        inst.rs2 = reg(it, 2);
        break;
      case isa::Format::I:
        if (op == Op::Fence) {
          want(it, 0);
          inst.imm = 0x0ff;  // canonical fence iorw,iorw
          break;
        }
        if (op == Op::Jalr) {
          want(it, 2);
          inst.rd = reg(it, 0);
          auto [off, base] = mem_operand(it, 1);
          inst.imm = off;
          inst.rs1 = base;
          break;
        }
        if (isa::is_load(op)) {
          want(it, 2);
          inst.rd = reg(it, 0);
          auto [off, base] = mem_operand(it, 1);
          inst.imm = off;
          inst.rs1 = base;
          break;
        }
        want(it, 3);
        inst.rd = reg(it, 0);
        inst.rs1 = reg(it, 1);
        inst.imm = static_cast<int32_t>(imm(it, 2, -2048, 2047));
        break;
      case isa::Format::Shift:
        want(it, 3);
        inst.rd = reg(it, 0);
        inst.rs1 = reg(it, 1);
        inst.imm = static_cast<int32_t>(imm(it, 2, 0, 31));
        break;
      case isa::Format::S: {
        want(it, 2);
        inst.rs2 = reg(it, 0);
        auto [off, base] = mem_operand(it, 1);
        inst.imm = off;
        inst.rs1 = base;
        break;
      }
      case isa::Format::B:
        want(it, 3);
        inst.rs1 = reg(it, 0);
        inst.rs2 = reg(it, 1);
        inst.imm = static_cast<int32_t>(target(it, 2, -4096, 4094));
        break;
      case isa::Format::U:
        want(it, 2);
        inst.rd = reg(it, 0);
        inst.imm = static_cast<int32_t>(
            static_cast<uint32_t>(imm(it, 1, 0, 0xfffff)) << 12);
        break;
      case isa::Format::J:
        want(it, 2);
        inst.rd = reg(it, 0);
        inst.imm = static_cast<int32_t>(target(it, 1, -1048576, 1048574));
        break;
      case isa::Format::Sys:
        want(it, 0);
        break;
      case isa::Format::Custom: {
        want(it, 1);
        auto [off, base] = mem_operand(it, 0);
        inst.imm = off;
        inst.rs1 = base;
        break;
      }
    }
    try {
      return isa::encode(inst);
    } catch (const isa::EncodeError& e) {
      // All user-reachable ranges are checked above; this is a backstop.
      fail(AsmError::Kind::OperandOutOfRange, it.line, e.what());
    }
  }
};

}  // namespace

MemoryImage assemble(std::string_view source) {
  Parser parser;
  int line = 1;
  size_t pos = 0;
  while (pos <= source.size()) {
    size_t nl = source.find('\n', pos);
    size_t len = (nl == std::string_view::npos ? source.size() : nl) - pos;
    parser.parse_line(source.substr(pos, len), line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++line;
  }

  MemoryImage img;
  img.symbols = parser.symbols;
  img.base_address = parser.base.value_or(0);
  uint32_t end = img.base_address;
  for (const auto& it : parser.items)
    end = std::max(end, it.addr + it.size);
  img.words.assign((end - img.base_address) / 4, 0);

  Encoder enc{parser.symbols};
  for (const auto& it : parser.items) {
    uint32_t wi = (it.addr - img.base_address) / 4;
    switch (it.kind) {
      case Item::Kind::Word: {
        auto v = parse_number(it.ops[0]);
        if (!v)
          throw AsmError(AsmError::Kind::SyntaxError, it.line,
                         ".word: bad literal '" + it.ops[0] + "'");
        img.words[wi] = static_cast<uint32_t>(*v);
        break;
      }
      case Item::Kind::Space:
        break;  // already zero-filled
      case Item::Kind::Inst:
        img.words[wi] = enc.encode_inst(it);
        break;
    }
  }
  return img;
}

std::string disassemble_word(uint32_t word) {
  auto d = isa::decode(word);
  if (!d) return ".word 0x" + hex8(word);
  const Inst& i = *d;
  auto x = [](uint8_t r) { return "x" + std::to_string(r); };
  auto memop = [&](int32_t off, uint8_t base) {
    return std::to_string(off) + "(" + x(base) + ")";
  };
  std::string m(isa::mnemonic(i.op));
  switch (isa::format_of(i.op)) {
    case isa::Format::R:
      return m + " " + x(i.rd) + ", " + x(i.rs1) + ", " + x(i.rs2);
    case isa::Format::I:
      if (i.op == Op::Fence) {
        // Only the canonical fence round-trips as a mnemonic; encodings
        // carrying hint bits fall back to raw words.
        if (word == 0x0ff0000f) return "fence";
        return ".word 0x" + hex8(word);
      }
      if (i.op == Op::Jalr || isa::is_load(i.op))
        return m + " " + x(i.rd) + ", " + memop(i.imm, i.rs1);
      return m + " " + x(i.rd) + ", " + x(i.rs1) + ", " +
             std::to_string(i.imm);
    case isa::Format::Shift:
      return m + " " + x(i.rd) + ", " + x(i.rs1) + ", " +
             std::to_string(i.imm);
    case isa::Format::S:
      return m + " " + x(i.rs2) + ", " + memop(i.imm, i.rs1);
    case isa::Format::B:
      return m + " " + x(i.rs1) + ", " + x(i.rs2) + ", " +
             std::to_string(i.imm);
    case isa::Format::U:
      return m + " " + x(i.rd) + ", " +
             hexn(static_cast<uint32_t>(i.imm) >> 12);
    case isa::Format::J:
      return m + " " + x(i.rd) + ", " + std::to_string(i.imm);
    case isa::Format::Sys:
      return m;
    case isa::Format::Custom:
      return m + " " + memop(i.imm, i.rs1);
  }
  return ".word 0x" + hex8(word);
}

std::vector<std::string> disassemble(const MemoryImage& img) {
  std::vector<std::string> lines;
  lines.reserve(img.words.size());
  for (uint32_t w : img.words) lines.push_back(disassemble_word(w));
  return lines;
}

std::string to_hex_image(const MemoryImage& img) {
  std::string out;
  out.reserve(img.words.size() * 9 + 16);
  if (img.base_address != 0) {
    out += "@" + hex8(img.base_address / 4) + "\n";
  }
  for (uint32_t w : img.words) {
    out += hex8(w);
    out += '\n';
  }
  return out;
}

MemoryImage parse_hex_image(std::string_view text) {
  MemoryImage img;
  std::map<uint32_t, uint32_t> sparse;  // word address -> word
  uint32_t word_addr = 0;
  int line = 1;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    size_t len = (nl == std::string_view::npos ? text.size() : nl) - pos;
    std::string_view s = trim(strip_comment(text.substr(pos, len)));
    if (!s.empty()) {
      bool at = s[0] == '@';
      if (at) s.remove_prefix(1);
      uint32_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
      if (ec != std::errc() || p != s.data() + s.size() ||
          (!at && s.size() != 8))
        throw AsmError(AsmError::Kind::SyntaxError, line,
                       "bad hex image line '" + std::string(s) + "'");
      if (at)
        word_addr = v;
      else
        sparse[word_addr++] = v;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++line;
  }
  if (sparse.empty()) return img;
  uint32_t first = sparse.begin()->first;
  uint32_t last = sparse.rbegin()->first;
  img.base_address = first * 4;
  img.words.assign(last - first + 1, 0);
  for (auto [wa, w] : sparse) img.words[wa - first] = w;
  return img;
}

void load_image(const MemoryImage& img, MemoryBank& bank) {
  if (img.words.empty()) return;
  if (!bank.in_range(img.base_address, 4 * static_cast<uint32_t>(img.words.size())))
    throw std::out_of_range("image does not fit in memory bank");
  auto raw = bank.raw();
  for (size_t i = 0; i < img.words.size(); ++i) {
    uint32_t w = img.words[i];
    size_t a = img.base_address + 4 * i;
    raw[a] = static_cast<uint8_t>(w);
    raw[a + 1] = static_cast<uint8_t>(w >> 8);
    raw[a + 2] = static_cast<uint8_t>(w >> 16);
    raw[a + 3] = static_cast<uint8_t>(w >> 24);
  }
}

}  // namespace tcsim::assembler
