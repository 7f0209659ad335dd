#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "asmtest.hpp"
#include "source.hpp"

namespace litmix {

inline std::string render_atom(const PredAtom& a) {
  if (a.kind == PredAtom::Kind::reg)
    return "P" + std::to_string(a.tid) + ":" + a.name + " = " + to_string(a.val);
  return a.name + " = " + to_string(a.val);
}

namespace detail {

inline void render_block(std::ostringstream& os,
                         const std::vector<SourceInstr>& block, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& ins : block) {
    os << pad;
    if (const auto* s = std::get_if<SourceInstr::Store>(&ins.op)) {
      os << "store(" << s->loc << "," << to_string(s->val) << ","
         << to_string(s->mo) << ");\n";
    } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
      os << l->reg << " = load(" << l->loc << "," << to_string(l->mo) << ");\n";
    } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
      os << x->reg << " = exchange(" << x->loc << "," << to_string(x->val)
         << "," << to_string(x->mo) << ");\n";
    } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
      os << f->reg << " = fetch_add(" << f->loc << "," << to_string(f->val)
         << "," << to_string(f->mo) << ");\n";
    } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
      os << c->reg << " = cas(" << c->loc << "," << to_string(c->expected)
         << "," << to_string(c->desired) << "," << to_string(c->mo) << ");\n";
    } else if (const auto* fe = std::get_if<SourceInstr::Fence>(&ins.op)) {
      os << "fence(" << to_string(fe->mo) << ");\n";
    } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
      os << "if (" << cond->reg << " == " << to_string(cond->val) << ") {\n";
      render_block(os, cond->body, indent + 1);
      os << pad << "}\n";
    }
  }
}

}  // namespace detail

inline std::string render_source(const SourceLitmusTest& t) {
  std::ostringstream os;
  os << "C " << t.name << "\n{";
  for (const auto& [loc, d] : t.init) {
    os << " ";
    if (d.read_only) os << "const ";
    os << loc << " : " << width_bits(d.width) << " = " << to_string(d.init)
       << ";";
  }
  os << " }\n";
  for (const auto& th : t.threads) {
    os << "P" << th.tid << " {\n";
    detail::render_block(os, th.code, 1);
    os << "}\n";
  }
  os << "exists (";
  for (std::size_t i = 0; i < t.pred.atoms.size(); ++i) {
    if (i) os << " /\\ ";
    os << render_atom(t.pred.atoms[i]);
  }
  os << ")\n";
  return os.str();
}

inline std::string render_asm_instr(const AsmInstr& ins) {
  if (ins.m == AMnem::LABEL) return ins.label + ":";
  std::string s = to_string(ins.m);
  switch (ins.m) {
    case AMnem::MOV:
      s += " " + ins.regs[0].str() + ",";
      if (ins.imm) s += "#" + to_string(*ins.imm);
      else s += ins.regs[1].str();
      break;
    case AMnem::DMB:
      s += std::string(" ") + to_string(ins.dmb);
      break;
    case AMnem::CBZ:
    case AMnem::CBNZ:
      s += " " + ins.regs[0].str() + "," + ins.label;
      break;
    case AMnem::B:
    case AMnem::BL:
      s += " " + ins.label;
      break;
    case AMnem::RET:
      break;
    default: {
      s += " ";
      for (std::size_t i = 0; i < ins.regs.size(); ++i) {
        if (i) s += ",";
        s += ins.regs[i].str();
      }
      if (ins.addr) {
        if (!ins.regs.empty()) s += ",";
        s += "[" + ins.addr->str() + "]";
      }
      break;
    }
  }
  return s;
}

inline std::string render_asm(const AsmLitmusTest& t) {
  std::ostringstream os;
  os << "ARM " << t.name << "\n{\n";
  for (const auto& [loc, d] : t.init) {
    os << "  ";
    if (d.read_only) os << "const ";
    os << loc << " : " << width_bits(d.width) << " = " << to_string(d.init)
       << ";\n";
  }
  for (const auto& [tid, binds] : t.addr_of) {
    os << " ";
    for (const auto& [reg, loc] : binds)
      os << " " << tid << ":" << reg.str() << " = " << loc << ";";
    os << "\n";
  }
  os << "}\n";

  // column layout, one instruction per row
  std::size_t rows = 0;
  for (const auto& th : t.threads) rows = std::max(rows, th.code.size());
  std::vector<std::vector<std::string>> cells(rows + 1);
  std::vector<std::size_t> width(t.threads.size(), 0);
  for (std::size_t k = 0; k < t.threads.size(); ++k) {
    cells[0].push_back("P" + std::to_string(t.threads[k].tid));
    for (std::size_t r = 0; r < rows; ++r) {
      std::string cell = r < t.threads[k].code.size()
                             ? render_asm_instr(t.threads[k].code[r])
                             : "";
      cells[r + 1].push_back(cell);
    }
    for (std::size_t r = 0; r <= rows; ++r)
      width[k] = std::max(width[k], cells[r][k].size());
  }
  for (std::size_t r = 0; r <= rows; ++r) {
    os << " ";
    for (std::size_t k = 0; k < t.threads.size(); ++k) {
      std::string cell = cells[r][k];
      cell.resize(width[k], ' ');
      os << cell << (k + 1 < t.threads.size() ? " | " : " ;");
    }
    os << "\n";
  }

  if (!t.obs.empty()) {
    os << "obs";
    for (const auto& [tid, m] : t.obs.regs)
      for (const auto& [src, reg] : m)
        os << " " << tid << ":" << src << "=" << reg.str() << ";";
    os << "\n";
  }

  os << "exists (";
  for (std::size_t i = 0; i < t.pred.atoms.size(); ++i) {
    const auto& a = t.pred.atoms[i];
    if (i) os << " /\\ ";
    if (a.kind == PredAtom::Kind::reg)
      os << a.tid << ":" << a.name << "=" << to_string(a.val);
    else
      os << a.name << "=" << to_string(a.val);
  }
  os << ")\n";
  return os.str();
}

}  // namespace litmix
