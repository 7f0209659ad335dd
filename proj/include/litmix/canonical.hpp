#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asmtest.hpp"
#include "parse_asm.hpp"
#include "render.hpp"
#include "sha256.hpp"
#include "source.hpp"

namespace litmix {

namespace detail {

// Canonical spelling of a register inside one thread: registers observable
// through the predicate or the observation map keep their slot identity
// ("g<slot>"); everything else is a temporary renamed in first-use order.
// Styles (W/X/R) are views of the same slot and never change behaviour here,
// so they are erased.
class RegRenamer {
 public:
  RegRenamer(const AsmLitmusTest& t, int tid) {
    for (const auto& a : t.pred.atoms)
      if (a.kind == PredAtom::Kind::reg && a.tid == tid)
        if (auto r = reg_from_string(a.name)) observable_.insert(r->index);
    auto it = t.obs.regs.find(tid);
    if (it != t.obs.regs.end())
      for (const auto& [src, reg] : it->second) observable_.insert(reg.index);
  }

  std::string name(const AReg& r) {
    if (r.is_zero()) return "zr";
    if (observable_.count(r.index)) return "g" + std::to_string(r.index);
    auto [it, fresh] = temp_.try_emplace(r.index, next_temp_);
    if (fresh) ++next_temp_;
    return "t" + std::to_string(it->second);
  }

 private:
  std::set<std::uint8_t> observable_;
  std::map<std::uint8_t, int> temp_;
  int next_temp_ = 0;
};

class LabelRenamer {
 public:
  std::string name(const std::string& l) {
    auto [it, fresh] = map_.try_emplace(l, next_);
    if (fresh) ++next_;
    return "L" + std::to_string(it->second);
  }

 private:
  std::map<std::string, int> map_;
  int next_ = 0;
};

inline std::string canonical_instr(const AsmInstr& ins, RegRenamer& regs,
                                   LabelRenamer& labels) {
  if (ins.m == AMnem::LABEL) return labels.name(ins.label) + ":";
  std::string s = to_string(ins.m);
  s += " ";
  switch (ins.m) {
    case AMnem::MOV:
      s += regs.name(ins.regs[0]) + ",";
      s += ins.imm ? "#" + to_string(*ins.imm) : regs.name(ins.regs[1]);
      break;
    case AMnem::DMB:
      s += to_string(ins.dmb);
      break;
    case AMnem::CBZ:
    case AMnem::CBNZ:
      s += regs.name(ins.regs[0]) + "," + labels.name(ins.label);
      break;
    case AMnem::B:
    case AMnem::BL:
      s += labels.name(ins.label);
      break;
    case AMnem::RET:
      break;
    default: {
      for (std::size_t i = 0; i < ins.regs.size(); ++i) {
        if (i) s += ",";
        s += regs.name(ins.regs[i]);
      }
      if (ins.addr) {
        if (!ins.regs.empty()) s += ",";
        s += "[" + regs.name(*ins.addr) + "]";
      }
      break;
    }
  }
  return s;
}

}  // namespace detail

// The canonical text: whitespace-normalized, temporaries and labels renamed
// in first-use order per thread, init sorted by location, predicate and
// observation entries sorted. The test name is excluded so alpha-equivalent
// tests agree.
inline std::string canonical_text(const AsmLitmusTest& t) {
  std::ostringstream os;
  for (const auto& [loc, d] : t.init)
    os << "mem " << loc << ":" << width_bits(d.width) << "="
       << to_string(d.init) << (d.read_only ? " ro" : "") << "\n";

  for (const auto& th : t.threads) {
    detail::RegRenamer regs(t, th.tid);
    detail::LabelRenamer labels;
    os << "thread " << th.tid << "\n";
    std::vector<std::string> body;
    body.reserve(th.code.size());
    for (const auto& ins : th.code)
      body.push_back(detail::canonical_instr(ins, regs, labels));
    // bindings keyed by location, registers spelled via the thread renaming
    auto it = t.addr_of.find(th.tid);
    if (it != t.addr_of.end()) {
      std::map<std::string, std::string> by_loc;
      for (const auto& [reg, loc] : it->second) by_loc[loc] = regs.name(reg);
      for (const auto& [loc, reg] : by_loc)
        os << "bind " << reg << "=" << loc << "\n";
    }
    for (const auto& line : body) os << line << "\n";
  }

  std::vector<std::string> obs_lines;
  for (const auto& [tid, m] : t.obs.regs) {
    detail::RegRenamer regs(t, tid);
    for (const auto& [src, reg] : m)
      obs_lines.push_back("obs " + std::to_string(tid) + ":" + src + "=" +
                          regs.name(reg));
  }
  std::sort(obs_lines.begin(), obs_lines.end());
  for (const auto& l : obs_lines) os << l << "\n";

  std::vector<std::string> atoms;
  for (const auto& a : t.pred.atoms) {
    if (a.kind == PredAtom::Kind::reg) {
      auto r = reg_from_string(a.name);
      std::string reg = r ? (r->is_zero() ? "zr" : "g" + std::to_string(r->index))
                          : a.name;
      atoms.push_back("pred " + std::to_string(a.tid) + ":" + reg + "=" +
                      to_string(a.val));
    } else {
      atoms.push_back("pred " + a.name + "=" + to_string(a.val));
    }
  }
  std::sort(atoms.begin(), atoms.end());
  for (const auto& a : atoms) os << a << "\n";
  return os.str();
}

// 256-bit digest (hex) of the canonical form. Two tests with identical
// canonical forms hash equal; the digest algorithm is SHA-256 and is fixed
// so golden files stay valid.
inline std::string canonical_hash(const AsmLitmusTest& t) {
  return Sha256::hex(canonical_text(t));
}

// Canonical key for source tests under thread permutation plus location and
// register renaming; used by symmetry reduction.
inline std::string canonical_source_key(const SourceLitmusTest& t) {
  int n = static_cast<int>(t.threads.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  std::string best;
  do {
    std::map<std::string, std::string> loc_map;
    auto loc_name = [&](const std::string& loc) -> std::string {
      auto [it, fresh] =
          loc_map.try_emplace(loc, "l" + std::to_string(loc_map.size()));
      (void)fresh;
      return it->second;
    };
    std::ostringstream os;
    std::vector<std::map<std::string, std::string>> reg_maps(n);
    auto reg_name = [&](int pos, const std::string& r) -> std::string {
      if (r == kDiscard) return r;
      auto& m = reg_maps[pos];
      auto [it, fresh] = m.try_emplace(r, "r" + std::to_string(m.size()));
      (void)fresh;
      return it->second;
    };

    std::vector<int> inv(n);
    for (int pos = 0; pos < n; ++pos) inv[perm[pos]] = pos;

    std::function<void(const std::vector<SourceInstr>&, int)> walk =
        [&](const std::vector<SourceInstr>& block, int pos) {
          for (const auto& ins : block) {
            if (const auto* s = std::get_if<SourceInstr::Store>(&ins.op)) {
              os << "store " << loc_name(s->loc) << " " << to_string(s->val)
                 << " " << to_string(s->mo) << "\n";
            } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
              os << "load " << reg_name(pos, l->reg) << " " << loc_name(l->loc)
                 << " " << to_string(l->mo) << "\n";
            } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
              os << "xchg " << reg_name(pos, x->reg) << " " << loc_name(x->loc)
                 << " " << to_string(x->val) << " " << to_string(x->mo) << "\n";
            } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
              os << "fadd " << reg_name(pos, f->reg) << " " << loc_name(f->loc)
                 << " " << to_string(f->val) << " " << to_string(f->mo) << "\n";
            } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
              os << "cas " << reg_name(pos, c->reg) << " " << loc_name(c->loc)
                 << " " << to_string(c->expected) << " " << to_string(c->desired)
                 << " " << to_string(c->mo) << "\n";
            } else if (const auto* fe = std::get_if<SourceInstr::Fence>(&ins.op)) {
              os << "fence " << to_string(fe->mo) << "\n";
            } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
              os << "if " << reg_name(pos, cond->reg) << " "
                 << to_string(cond->val) << "\n";
              walk(cond->body, pos);
              os << "endif\n";
            }
          }
        };

    for (int pos = 0; pos < n; ++pos) {
      os << "thread " << pos << "\n";
      walk(t.threads[perm[pos]].code, pos);
    }

    // init after code so location names follow first use
    std::vector<std::string> init_lines;
    for (const auto& [loc, d] : t.init)
      init_lines.push_back("mem " + loc_name(loc) + ":" +
                           std::to_string(width_bits(d.width)) + "=" +
                           to_string(d.init) + (d.read_only ? " ro" : ""));
    std::sort(init_lines.begin(), init_lines.end());
    for (const auto& l : init_lines) os << l << "\n";

    std::vector<std::string> atoms;
    for (const auto& a : t.pred.atoms) {
      if (a.kind == PredAtom::Kind::reg)
        atoms.push_back("pred " + std::to_string(inv[a.tid]) + ":" +
                        reg_name(inv[a.tid], a.name) + "=" + to_string(a.val));
      else
        atoms.push_back("pred " + loc_name(a.name) + "=" + to_string(a.val));
    }
    std::sort(atoms.begin(), atoms.end());
    for (const auto& a : atoms) os << a << "\n";

    std::string text = os.str();
    if (best.empty() || text < best) best = text;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace litmix
