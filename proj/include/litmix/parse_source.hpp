#pragma once

#include <string>
#include <vector>

#include "scan.hpp"
#include "source.hpp"

namespace litmix {

namespace detail {

class SourceParser {
 public:
  explicit SourceParser(std::string text) : s_(std::move(text)) {}

  SourceLitmusTest run() {
    SourceLitmusTest t;
    if (!s_.accept_word("C")) s_.fail("expected 'C' header");
    t.name = s_.ident();
    parse_init(t);
    while (true) {
      s_.skip_ws();
      if (s_.accept_word("exists")) break;
      if (s_.eof()) s_.fail("expected thread or 'exists'");
      t.threads.push_back(parse_thread());
    }
    if (t.threads.empty()) s_.fail("no threads");
    for (int i = 0; i < static_cast<int>(t.threads.size()); ++i)
      if (t.threads[i].tid != i)
        s_.fail("thread P" + std::to_string(t.threads[i].tid) +
                " out of order (expected P" + std::to_string(i) + ")");
    t.pred = parse_pred();
    assign_iids(t);
    validate(t);
    return t;
  }

 private:
  Scanner s_;

  void parse_init(SourceLitmusTest& t) {
    s_.expect('{');
    while (!s_.accept('}')) {
      bool ro = s_.accept_word("const");
      std::string loc = s_.ident();
      s_.expect(':');
      int bits = s_.small_int();
      auto w = width_from_bits(bits);
      if (!w) s_.fail("bad width " + std::to_string(bits));
      s_.expect('=');
      Value v = s_.integer();
      s_.expect(';');
      if (t.init.count(loc)) s_.fail("duplicate location '" + loc + "'");
      t.init[loc] = LocDecl{*w, mask_to_width(v, *w), ro};
    }
  }

  SourceThread parse_thread() {
    SourceThread th;
    if (!s_.accept_word("P")) {
      // allow "P0" as single identifier
      s_.skip_ws();
      if (s_.peek() != 'P') s_.fail("expected thread 'P<n>'");
      s_.get();
    }
    th.tid = s_.small_int();
    s_.expect('{');
    th.code = parse_block();
    return th;
  }

  std::vector<SourceInstr> parse_block() {
    std::vector<SourceInstr> block;
    while (!s_.accept('}')) {
      if (s_.eof()) s_.fail("unterminated block");
      block.push_back(parse_stmt());
    }
    return block;
  }

  MemOrder parse_mo() {
    std::string w = s_.ident();
    auto mo = mem_order_from_string(w);
    if (!mo) s_.fail("unknown memory order '" + w + "'");
    return *mo;
  }

  SourceInstr parse_stmt() {
    SourceInstr ins;
    s_.skip_ws();
    if (s_.accept_word("store")) {
      SourceInstr::Store st;
      s_.expect('(');
      st.loc = s_.ident();
      s_.expect(',');
      st.val = s_.integer();
      s_.expect(',');
      st.mo = parse_mo();
      s_.expect(')');
      s_.expect(';');
      ins.op = st;
      return ins;
    }
    if (s_.accept_word("fence")) {
      SourceInstr::Fence f;
      s_.expect('(');
      f.mo = parse_mo();
      s_.expect(')');
      s_.expect(';');
      ins.op = f;
      return ins;
    }
    if (s_.accept_word("if")) {
      SourceInstr::If c;
      s_.expect('(');
      c.reg = s_.ident();
      s_.expect('=');
      s_.expect('=');
      c.val = s_.integer();
      s_.expect(')');
      s_.expect('{');
      c.body = parse_block();
      ins.op = c;
      return ins;
    }
    // REG = op(...)
    std::string reg = s_.ident();
    s_.expect('=');
    std::string op = s_.ident();
    s_.expect('(');
    if (op == "load") {
      SourceInstr::Load l;
      l.reg = reg;
      l.loc = s_.ident();
      s_.expect(',');
      l.mo = parse_mo();
      ins.op = l;
    } else if (op == "exchange") {
      SourceInstr::Exchange x;
      x.reg = reg;
      x.loc = s_.ident();
      s_.expect(',');
      x.val = s_.integer();
      s_.expect(',');
      x.mo = parse_mo();
      ins.op = x;
    } else if (op == "fetch_add") {
      SourceInstr::FetchAdd f;
      f.reg = reg;
      f.loc = s_.ident();
      s_.expect(',');
      f.val = s_.integer();
      s_.expect(',');
      f.mo = parse_mo();
      ins.op = f;
    } else if (op == "cas") {
      SourceInstr::Cas c;
      c.reg = reg;
      c.loc = s_.ident();
      s_.expect(',');
      c.expected = s_.integer();
      s_.expect(',');
      c.desired = s_.integer();
      s_.expect(',');
      c.mo = parse_mo();
      ins.op = c;
    } else {
      s_.fail("unknown operation '" + op + "'");
    }
    s_.expect(')');
    s_.expect(';');
    return ins;
  }

  Predicate parse_pred() {
    Predicate p;
    s_.expect('(');
    while (true) {
      p.atoms.push_back(parse_atom());
      s_.skip_ws();
      if (s_.accept('/')) {
        s_.expect('\\');
        continue;
      }
      s_.expect(')');
      break;
    }
    return p;
  }

  PredAtom parse_atom() {
    PredAtom a;
    std::string name = s_.ident();
    if (s_.accept(':')) {
      if (name.size() < 2 || name[0] != 'P')
        s_.fail("expected thread label 'P<n>' in predicate");
      a.kind = PredAtom::Kind::reg;
      a.tid = std::stoi(name.substr(1));
      a.name = s_.ident();
    } else {
      a.kind = PredAtom::Kind::mem;
      a.name = name;
    }
    s_.expect('=');
    a.val = s_.integer();
    return a;
  }
};

}  // namespace detail

inline SourceLitmusTest parse_source(const std::string& text) {
  return detail::SourceParser(text).run();
}

}  // namespace litmix
