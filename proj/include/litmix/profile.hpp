#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parse_asm.hpp"
#include "scan.hpp"
#include "source.hpp"

namespace litmix {

// Key of one mapping-table entry. The result-used flag distinguishes
// special-cased discarded-result RMWs; lookups for a discarded result fall
// back to the generic entry when no dedicated one exists, but never to a
// different op, width, or order.
struct MappingKey {
  OpKind op = OpKind::load;
  Width w = Width::w32;
  MemOrder mo = MemOrder::relaxed;
  bool result_unused = false;

  auto operator<=>(const MappingKey&) const = default;

  std::string str() const {
    std::string s = to_string(op);
    if (op != OpKind::fence)
      s += " w=" + std::to_string(width_bits(w));
    s += " mo=" + std::string(to_string(mo));
    if (result_unused) s += " unused";
    return s;
  }
};

// Assembly fragment template. Lines hold placeholders:
//   {addr}            address register of the accessed location
//   {val} {exp} {des} immediate operands
//   {dst}             result register ({dst} present iff the op has a result)
//   {tmp} {tmp2} ...  fresh per-fragment temporaries
//   {lbl} {lbl2} ...  fresh per-fragment labels
// Register placeholders take an optional style suffix, e.g. {dst:w} {tmp:x}.
struct MappingEntry {
  std::vector<std::string> lines;
  bool uses_exclusives = false;
  bool writes_memory = false;
};

struct CompilerProfile {
  std::string name;
  std::string arch;
  std::map<MappingKey, MappingEntry> table;
};

// Per-thread pools for fresh temporaries and labels. Issued names never
// repeat within a thread.
class ThreadAllocator {
 public:
  explicit ThreadAllocator(int first_free_slot) : next_slot_(first_free_slot) {}

  AReg alloc_temp(AReg::Style style) {
    if (next_slot_ > kMaxSlot)
      throw MappingError("temporary register pool exhausted");
    return AReg{static_cast<std::uint8_t>(next_slot_++), style};
  }

  std::string alloc_label() { return "L" + std::to_string(next_label_++); }

 private:
  // X29/X30 stay reserved (frame pointer and link register).
  static constexpr int kMaxSlot = 28;
  int next_slot_;
  int next_label_ = 0;
};

struct OperandBinding {
  AReg addr{1, AReg::Style::X};
  std::optional<AReg> dst;  // empty: result discarded
  Value val = 0;
  Value exp = 0;
  Value des = 0;
  Width width = Width::w32;
};

namespace detail {

inline AReg::Style default_style(Width w) {
  return width_bits(w) <= 32 ? AReg::Style::W : AReg::Style::X;
}

struct FragmentInstantiator {
  const MappingEntry& entry;
  const OperandBinding& bind;
  ThreadAllocator& alloc;

  std::map<std::string, AReg> temps;
  std::map<std::string, std::string> labels;
  std::optional<AReg> discard_dst;

  std::string reg_text(AReg r, std::optional<AReg::Style> style) {
    if (style) r.style = *style;
    return r.str();
  }

  std::string expand(const std::string& inner) {
    std::string name = inner;
    std::optional<AReg::Style> style;
    if (auto colon = inner.find(':'); colon != std::string::npos) {
      name = inner.substr(0, colon);
      std::string st = inner.substr(colon + 1);
      if (st == "w") style = AReg::Style::W;
      else if (st == "x") style = AReg::Style::X;
      else if (st == "r") style = AReg::Style::R;
      else throw MappingError("bad register style '" + st + "' in template");
    }
    if (name == "addr") return reg_text(bind.addr, style ? style : std::optional{AReg::Style::X});
    if (name == "val") return to_string(bind.val);
    if (name == "exp") return to_string(bind.exp);
    if (name == "des") return to_string(bind.des);
    if (name == "dst") {
      if (bind.dst) return reg_text(*bind.dst, style);
      if (!discard_dst)
        discard_dst = alloc.alloc_temp(style ? *style : default_style(bind.width));
      return reg_text(*discard_dst, style);
    }
    if (name.rfind("tmp", 0) == 0) {
      auto [it, fresh] = temps.try_emplace(name, AReg{});
      if (fresh)
        it->second = alloc.alloc_temp(style ? *style : default_style(bind.width));
      return reg_text(it->second, style);
    }
    if (name.rfind("lbl", 0) == 0) {
      auto [it, fresh] = labels.try_emplace(name, std::string{});
      if (fresh) it->second = alloc.alloc_label();
      return it->second;
    }
    throw MappingError("unknown placeholder '{" + inner + "}' in template");
  }

  std::vector<AsmInstr> run() {
    std::vector<AsmInstr> out;
    for (const auto& line : entry.lines) {
      std::string text;
      for (std::size_t i = 0; i < line.size();) {
        if (line[i] == '{') {
          auto close = line.find('}', i);
          if (close == std::string::npos)
            throw MappingError("unterminated placeholder in template line '" +
                               line + "'");
          text += expand(line.substr(i + 1, close - i - 1));
          i = close + 1;
        } else {
          text.push_back(line[i++]);
        }
      }
      for (auto& ins : parse_asm_cell(text, 0)) out.push_back(ins);
    }
    return out;
  }
};

}  // namespace detail

// Instantiates a fragment template with concrete operands. Fresh labels and
// temporaries are drawn from the thread's pools and never collide with
// previously issued ones.
inline std::vector<AsmInstr> instantiate(const MappingEntry& entry,
                                         const OperandBinding& bind,
                                         ThreadAllocator& alloc) {
  return detail::FragmentInstantiator{entry, bind, alloc}.run();
}

// Returns the entry or raises: no silent substitution of a weaker or
// stronger order.
inline const MappingEntry& lookup(const CompilerProfile& p, MappingKey key) {
  if (key.op == OpKind::fence) key.w = Width::w32;
  auto it = p.table.find(key);
  if (it == p.table.end() && key.result_unused) {
    key.result_unused = false;  // generic entry with the result kept live
    it = p.table.find(key);
  }
  if (it == p.table.end())
    throw MappingError("unsupported mapping " + key.str() + " in profile " +
                       p.name);
  return it->second;
}

inline bool supports(const CompilerProfile& p, MappingKey key) {
  if (key.op == OpKind::fence) key.w = Width::w32;
  if (p.table.count(key)) return true;
  if (key.result_unused) {
    key.result_unused = false;
    return p.table.count(key) > 0;
  }
  return false;
}

// Profile fixture grammar:
//   profile NAME arch=LABEL
//   map OP w=WIDTH mo=MO [unused]:
//     <one assembly template per line>
//   end
inline CompilerProfile load_profile(const std::string& text) {
  detail::Scanner s(text);
  CompilerProfile p;
  if (!s.accept_word("profile")) s.fail("expected 'profile'");
  p.name = s.ident();
  if (!s.accept_word("arch")) s.fail("expected 'arch=...'");
  s.expect('=');
  p.arch = s.ident();

  while (true) {
    s.skip_ws();
    if (s.eof()) break;
    if (!s.accept_word("map")) s.fail("expected 'map'");
    MappingKey key;
    std::string opname = s.ident();
    auto op = op_kind_from_string(opname);
    if (!op) s.fail("unknown op '" + opname + "'");
    key.op = *op;
    if (key.op != OpKind::fence) {
      if (!s.accept_word("w")) s.fail("expected 'w=...'");
      s.expect('=');
      auto w = width_from_bits(s.small_int());
      if (!w) s.fail("bad width");
      key.w = *w;
    }
    if (!s.accept_word("mo")) s.fail("expected 'mo=...'");
    s.expect('=');
    auto mo = mem_order_from_string(s.ident());
    if (!mo) s.fail("bad memory order");
    key.mo = *mo;
    key.result_unused = s.accept_word("unused");
    s.expect(':');

    MappingEntry entry;
    while (true) {
      s.skip_ws();
      if (s.eof()) s.fail("unterminated map entry");
      if (s.accept_word("end")) break;
      std::string line = s.line_rest();
      if (!line.empty()) entry.lines.push_back(line);
    }
    if (key.op == OpKind::fence) key.w = Width::w32;
    if (p.table.count(key))
      s.fail("duplicate mapping key '" + key.str() + "'");

    // Validate by instantiating with dummy operands; derive metadata.
    OperandBinding dummy;
    dummy.width = key.w;
    dummy.addr = AReg{1, AReg::Style::X};
    dummy.dst = key.result_unused ? std::optional<AReg>{}
                                  : std::optional<AReg>{AReg{0, detail::default_style(key.w)}};
    dummy.val = 1;
    dummy.exp = 0;
    dummy.des = 1;
    ThreadAllocator alloc(10);
    auto instrs = instantiate(entry, dummy, alloc);
    bool has_dst = false;
    for (const auto& ins : instrs) {
      if (is_exclusive_load(ins.m) || is_exclusive_store(ins.m))
        entry.uses_exclusives = true;
      if (can_store(ins.m)) entry.writes_memory = true;
      for (const auto& r : ins.regs)
        if (r.index == 0) has_dst = true;
    }
    bool produces_result = key.op == OpKind::load || key.op == OpKind::exchange ||
                           key.op == OpKind::fetch_add || key.op == OpKind::cas;
    if (!key.result_unused && produces_result && !has_dst)
      s.fail("entry for " + key.str() + " never writes {dst}");

    p.table.emplace(key, std::move(entry));
  }
  if (p.table.empty()) s.fail("profile has no mappings");
  return p;
}

}  // namespace litmix
