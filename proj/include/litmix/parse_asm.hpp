#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "asmtest.hpp"
#include "scan.hpp"

namespace litmix {

inline std::optional<AReg> reg_from_string(const std::string& s) {
  if (s == "WZR") return AReg{AReg::kZero, AReg::Style::W};
  if (s == "XZR") return AReg{AReg::kZero, AReg::Style::X};
  if (s.size() < 2) return std::nullopt;
  AReg::Style style;
  switch (s[0]) {
    case 'W': style = AReg::Style::W; break;
    case 'X': style = AReg::Style::X; break;
    case 'R': style = AReg::Style::R; break;
    default: return std::nullopt;
  }
  int idx = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    idx = idx * 10 + (s[i] - '0');
  }
  if (idx < 0 || idx > 30) return std::nullopt;
  return AReg{static_cast<std::uint8_t>(idx), style};
}

inline std::optional<AMnem> mnemonic_from_string(const std::string& s) {
  static const std::pair<const char*, AMnem> table[] = {
      {"MOV", AMnem::MOV},       {"LDR", AMnem::LDR},
      {"LDA", AMnem::LDA},       {"LDAR", AMnem::LDAR},
      {"LDAPR", AMnem::LDAPR},   {"STR", AMnem::STR},
      {"STL", AMnem::STL},       {"STLR", AMnem::STLR},
      {"LDXR", AMnem::LDXR},     {"LDAXR", AMnem::LDAXR},
      {"STXR", AMnem::STXR},     {"STLXR", AMnem::STLXR},
      {"SWP", AMnem::SWP},       {"SWPA", AMnem::SWPA},
      {"SWPL", AMnem::SWPL},     {"SWPAL", AMnem::SWPAL},
      {"CAS", AMnem::CAS},       {"CASA", AMnem::CASA},
      {"CASL", AMnem::CASL},     {"CASAL", AMnem::CASAL},
      {"CASP", AMnem::CASP},     {"CASPAL", AMnem::CASPAL},
      {"LDADD", AMnem::LDADD},   {"LDADDA", AMnem::LDADDA},
      {"LDADDL", AMnem::LDADDL}, {"LDADDAL", AMnem::LDADDAL},
      {"LDP", AMnem::LDP},       {"STP", AMnem::STP},
      {"LDXP", AMnem::LDXP},     {"STXP", AMnem::STXP},
      {"STLXP", AMnem::STLXP},   {"DMB", AMnem::DMB},
      {"CBZ", AMnem::CBZ},       {"CBNZ", AMnem::CBNZ},
      {"B", AMnem::B},           {"BL", AMnem::BL},
      {"RET", AMnem::RET},
  };
  for (const auto& [name, m] : table)
    if (s == name) return m;
  return std::nullopt;
}

namespace detail {

// Parses one instruction cell such as "MOV W2,#1" or "L0: LDXR W4,[X1]".
// A bare "L0:" yields only the label pseudo-instruction.
inline std::vector<AsmInstr> parse_asm_cell(const std::string& cell, int line) {
  std::vector<AsmInstr> out;
  Scanner s(cell);
  s.skip_ws();
  if (s.eof()) return out;

  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(line, s.col(), msg);
  };

  std::string head = s.ident();
  if (s.accept(':')) {
    AsmInstr lbl;
    lbl.m = AMnem::LABEL;
    lbl.label = head;
    out.push_back(lbl);
    s.skip_ws();
    if (s.eof()) return out;
    head = s.ident();
  }

  auto mn = mnemonic_from_string(head);
  if (!mn) fail("unknown mnemonic '" + head + "'");
  AsmInstr ins;
  ins.m = *mn;

  auto reg_operand = [&]() -> AReg {
    std::string w = s.ident();
    auto r = reg_from_string(w);
    if (!r) fail("bad register '" + w + "'");
    return *r;
  };
  auto addr_operand = [&]() -> AReg {
    s.expect('[');
    AReg r = reg_operand();
    s.expect(']');
    return r;
  };

  switch (ins.m) {
    case AMnem::MOV: {
      ins.regs.push_back(reg_operand());
      s.expect(',');
      s.skip_ws();
      if (s.accept('#')) {
        ins.imm = s.integer();
      } else {
        ins.regs.push_back(reg_operand());
      }
      break;
    }
    case AMnem::LDR: case AMnem::LDA: case AMnem::LDAR: case AMnem::LDAPR:
    case AMnem::LDXR: case AMnem::LDAXR:
    case AMnem::STR: case AMnem::STL: case AMnem::STLR: {
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.addr = addr_operand();
      break;
    }
    case AMnem::STXR: case AMnem::STLXR: {
      ins.regs.push_back(reg_operand());  // status
      s.expect(',');
      ins.regs.push_back(reg_operand());  // value
      s.expect(',');
      ins.addr = addr_operand();
      break;
    }
    case AMnem::SWP: case AMnem::SWPA: case AMnem::SWPL: case AMnem::SWPAL:
    case AMnem::CAS: case AMnem::CASA: case AMnem::CASL: case AMnem::CASAL:
    case AMnem::LDADD: case AMnem::LDADDA: case AMnem::LDADDL:
    case AMnem::LDADDAL: {
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.addr = addr_operand();
      break;
    }
    case AMnem::CASP: case AMnem::CASPAL: {
      for (int i = 0; i < 4; ++i) {
        ins.regs.push_back(reg_operand());
        s.expect(',');
      }
      ins.addr = addr_operand();
      break;
    }
    case AMnem::LDP: case AMnem::LDXP: case AMnem::STP: {
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.addr = addr_operand();
      break;
    }
    case AMnem::STXP: case AMnem::STLXP: {
      ins.regs.push_back(reg_operand());  // status
      s.expect(',');
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.addr = addr_operand();
      break;
    }
    case AMnem::DMB: {
      std::string kind = s.ident();
      if (kind == "ISH") ins.dmb = BarrierKind::ish;
      else if (kind == "ISHLD") ins.dmb = BarrierKind::ishld;
      else if (kind == "ISHST") ins.dmb = BarrierKind::ishst;
      else fail("bad barrier kind '" + kind + "'");
      break;
    }
    case AMnem::CBZ: case AMnem::CBNZ: {
      ins.regs.push_back(reg_operand());
      s.expect(',');
      ins.label = s.ident();
      break;
    }
    case AMnem::B: case AMnem::BL: {
      ins.label = s.ident();
      break;
    }
    case AMnem::RET:
      break;
    case AMnem::LABEL:
      fail("unreachable");
  }
  s.skip_ws();
  if (!s.eof()) fail("trailing input after instruction");
  out.push_back(ins);
  return out;
}

class AsmParser {
 public:
  explicit AsmParser(std::string text) : text_(std::move(text)) {}

  AsmLitmusTest run() {
    split_lines();
    AsmLitmusTest t;
    std::size_t i = 0;
    auto next_line = [&]() -> std::string {
      while (i < lines_.size() && trimmed(lines_[i]).empty()) ++i;
      if (i >= lines_.size()) throw ParseError(lineno(i), 1, "unexpected end of input");
      return lines_[i++];
    };

    {
      Scanner s(next_line());
      std::string arch = s.ident();
      if (arch != "ARM" && arch != "AArch64")
        throw ParseError(1, 1, "expected 'ARM' or 'AArch64' header");
      t.name = s.ident();
    }

    // init block
    {
      std::string l = trimmed(next_line());
      if (l != "{") throw ParseError(lineno(i - 1), 1, "expected '{'");
      std::string body;
      while (true) {
        std::string raw = next_line();
        if (trimmed(raw) == "}") break;
        body += raw;
        body.push_back('\n');
      }
      parse_init(t, body);
    }

    // column header: "P0 | P1 ;"
    std::vector<int> tids;
    {
      std::string header = next_line();
      for (auto& cell : split_cells(header)) {
        Scanner s(cell);
        s.skip_ws();
        if (s.peek() != 'P') throw ParseError(lineno(i - 1), 1, "expected thread column header");
        s.get();
        tids.push_back(s.small_int());
      }
      t.threads.resize(tids.size());
      for (std::size_t k = 0; k < tids.size(); ++k) t.threads[k].tid = tids[k];
    }

    // instruction rows until an 'obs' or 'exists' line
    while (true) {
      std::string raw = next_line();
      std::string l = trimmed(raw);
      if (l.rfind("exists", 0) == 0 || l.rfind("obs", 0) == 0) {
        --i;  // hand back
        break;
      }
      auto cells = split_cells(raw);
      if (cells.size() > t.threads.size())
        throw ParseError(lineno(i - 1), 1, "more columns than threads");
      for (std::size_t k = 0; k < cells.size(); ++k) {
        for (auto& ins : parse_asm_cell(cells[k], lineno(i - 1)))
          t.threads[k].code.push_back(ins);
      }
    }

    // optional observation lines
    while (true) {
      std::string raw = next_line();
      std::string l = trimmed(raw);
      if (l.rfind("obs", 0) == 0) {
        parse_obs(t, l.substr(3), lineno(i - 1));
        continue;
      }
      if (l.rfind("exists", 0) == 0) {
        parse_pred(t, l, lineno(i - 1));
        break;
      }
      throw ParseError(lineno(i - 1), 1, "expected 'obs' or 'exists'");
    }

    validate(t);
    return t;
  }

 private:
  std::string text_;
  std::vector<std::string> lines_;

  int lineno(std::size_t idx) const { return static_cast<int>(idx) + 1; }

  void split_lines() {
    std::string cur;
    for (char c : text_) {
      if (c == '\n') {
        lines_.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) lines_.push_back(cur);
  }

  static std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  // Splits an instruction row on '|'; strips a trailing ';'.
  static std::vector<std::string> split_cells(std::string row) {
    std::string r = trimmed(row);
    if (!r.empty() && r.back() == ';') r.pop_back();
    std::vector<std::string> cells;
    std::string cur;
    for (char c : r) {
      if (c == '|') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    return cells;
  }

  void parse_init(AsmLitmusTest& t, const std::string& body) {
    Scanner s(body);
    while (true) {
      s.skip_ws();
      if (s.eof()) break;
      bool ro = s.accept_word("const");
      std::string first = s.ident();
      if (!ro && s.accept(':')) {
        // thread binding "0:X1 = x" (location widths use "loc : w = v")
        bool is_binding = !first.empty() &&
                          std::isdigit(static_cast<unsigned char>(first[0]));
        if (is_binding) {
          int tid = std::stoi(first);
          std::string rs = s.ident();
          auto reg = reg_from_string(rs);
          if (!reg) s.fail("bad register '" + rs + "' in binding");
          s.expect('=');
          std::string loc = s.ident();
          s.expect(';');
          t.addr_of[tid][*reg] = loc;
          if (!t.init.count(loc)) t.init[loc] = LocDecl{Width::w32, 0, false};
          continue;
        }
        int bits = s.small_int();
        auto w = width_from_bits(bits);
        if (!w) s.fail("bad width");
        s.expect('=');
        Value v = s.integer();
        s.expect(';');
        auto& d = t.init[first];
        d.width = *w;
        d.init = mask_to_width(v, *w);
        continue;
      }
      if (ro) {
        s.expect(':');
        int bits = s.small_int();
        auto w = width_from_bits(bits);
        if (!w) s.fail("bad width");
        s.expect('=');
        Value v = s.integer();
        s.expect(';');
        t.init[first] = LocDecl{*w, mask_to_width(v, *w), true};
        continue;
      }
      // plain "loc = v" (width defaults to 32)
      s.expect('=');
      Value v = s.integer();
      s.expect(';');
      auto& d = t.init[first];
      d.init = mask_to_width(v, d.width);
      continue;
    }
  }

  void parse_obs(AsmLitmusTest& t, const std::string& rest, int line) {
    Scanner s(rest);
    while (true) {
      s.skip_ws();
      if (s.eof()) break;
      int tid = s.small_int();
      s.expect(':');
      std::string src = s.ident();
      s.expect('=');
      std::string rs = s.ident();
      auto reg = reg_from_string(rs);
      if (!reg) throw ParseError(line, s.col(), "bad register in obs");
      t.obs.regs[tid][src] = *reg;
      s.accept(';');
    }
  }

  void parse_pred(AsmLitmusTest& t, const std::string& l, int line) {
    Scanner s(l);
    if (!s.accept_word("exists")) throw ParseError(line, 1, "expected 'exists'");
    s.expect('(');
    while (true) {
      PredAtom a;
      s.skip_ws();
      if (std::isdigit(static_cast<unsigned char>(s.peek()))) {
        a.kind = PredAtom::Kind::reg;
        a.tid = s.small_int();
        s.expect(':');
        a.name = s.ident();
        if (!reg_from_string(a.name))
          throw ParseError(line, s.col(), "bad register '" + a.name + "' in predicate");
      } else {
        a.kind = PredAtom::Kind::mem;
        a.name = s.ident();
      }
      s.expect('=');
      a.val = s.integer();
      t.pred.atoms.push_back(a);
      if (s.accept('/')) {
        s.expect('\\');
        continue;
      }
      s.expect(')');
      break;
    }
  }
};

}  // namespace detail

inline AsmLitmusTest parse_asm(const std::string& text) {
  return detail::AsmParser(text).run();
}

}  // namespace litmix
