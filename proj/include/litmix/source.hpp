#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "common.hpp"

namespace litmix {

enum class OpKind : std::uint8_t { load, store, exchange, fetch_add, cas, fence };

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::load: return "load";
    case OpKind::store: return "store";
    case OpKind::exchange: return "exchange";
    case OpKind::fetch_add: return "fetch_add";
    case OpKind::cas: return "cas";
    case OpKind::fence: return "fence";
  }
  return "?";
}

inline std::optional<OpKind> op_kind_from_string(const std::string& s) {
  if (s == "load") return OpKind::load;
  if (s == "store") return OpKind::store;
  if (s == "exchange") return OpKind::exchange;
  if (s == "fetch_add") return OpKind::fetch_add;
  if (s == "cas") return OpKind::cas;
  if (s == "fence") return OpKind::fence;
  return std::nullopt;
}

struct SourceInstr;

// One source statement. Conditionals own their block; the block's
// instructions receive their own Iids when the test is numbered.
struct SourceInstr {
  struct Store {
    std::string loc;
    Value val = 0;
    MemOrder mo = MemOrder::relaxed;
  };
  struct Load {
    std::string reg;
    std::string loc;
    MemOrder mo = MemOrder::relaxed;
  };
  struct Exchange {
    std::string reg;  // may be kDiscard
    std::string loc;
    Value val = 0;
    MemOrder mo = MemOrder::relaxed;
  };
  struct FetchAdd {
    std::string reg;
    std::string loc;
    Value val = 0;
    MemOrder mo = MemOrder::relaxed;
  };
  struct Cas {
    std::string reg;  // receives the previous value
    std::string loc;
    Value expected = 0;
    Value desired = 0;
    MemOrder mo = MemOrder::relaxed;
  };
  struct Fence {
    MemOrder mo = MemOrder::seq_cst;
  };
  struct If {
    std::string reg;
    Value val = 0;
    std::vector<SourceInstr> body;
  };

  std::variant<Store, Load, Exchange, FetchAdd, Cas, Fence, If> op;
  Iid iid;

  // defined once the nested types are complete, so the variant traits see
  // whole types
  SourceInstr();
  bool operator==(const SourceInstr& other) const;
};

inline SourceInstr::SourceInstr() : op(Store{}) {}

inline bool operator==(const SourceInstr::Store& a, const SourceInstr::Store& b) {
  return a.loc == b.loc && a.val == b.val && a.mo == b.mo;
}
inline bool operator==(const SourceInstr::Load& a, const SourceInstr::Load& b) {
  return a.reg == b.reg && a.loc == b.loc && a.mo == b.mo;
}
inline bool operator==(const SourceInstr::Exchange& a, const SourceInstr::Exchange& b) {
  return a.reg == b.reg && a.loc == b.loc && a.val == b.val && a.mo == b.mo;
}
inline bool operator==(const SourceInstr::FetchAdd& a, const SourceInstr::FetchAdd& b) {
  return a.reg == b.reg && a.loc == b.loc && a.val == b.val && a.mo == b.mo;
}
inline bool operator==(const SourceInstr::Cas& a, const SourceInstr::Cas& b) {
  return a.reg == b.reg && a.loc == b.loc && a.expected == b.expected &&
         a.desired == b.desired && a.mo == b.mo;
}
inline bool operator==(const SourceInstr::Fence& a, const SourceInstr::Fence& b) {
  return a.mo == b.mo;
}
inline bool operator==(const SourceInstr::If& a, const SourceInstr::If& b) {
  return a.reg == b.reg && a.val == b.val && a.body == b.body;
}
inline bool SourceInstr::operator==(const SourceInstr& other) const {
  return op == other.op && iid == other.iid;
}

struct LocDecl {
  Width width = Width::w32;
  Value init = 0;
  bool read_only = false;

  bool operator==(const LocDecl&) const = default;
};

// Final-state predicate: existential conjunction of register and memory atoms.
struct PredAtom {
  enum class Kind : std::uint8_t { reg, mem } kind = Kind::mem;
  int tid = -1;      // reg atoms only
  std::string name;  // register name (reg) or location (mem)
  Value val = 0;

  bool operator==(const PredAtom&) const = default;
};

struct Predicate {
  std::vector<PredAtom> atoms;

  bool operator==(const Predicate&) const = default;
};

struct SourceThread {
  int tid = 0;
  std::vector<SourceInstr> code;

  bool operator==(const SourceThread&) const = default;
};

struct SourceLitmusTest {
  std::string name;
  std::map<std::string, LocDecl> init;
  std::vector<SourceThread> threads;
  Predicate pred;

  bool operator==(const SourceLitmusTest&) const = default;
};

namespace detail {

inline void number_block(std::vector<SourceInstr>& block, int tid, int& next) {
  for (auto& ins : block) {
    ins.iid = Iid{tid, next++};
    if (auto* cond = std::get_if<SourceInstr::If>(&ins.op))
      number_block(cond->body, tid, next);
  }
}

}  // namespace detail

// Assigns Iids by depth-first position within each thread.
inline void assign_iids(SourceLitmusTest& t) {
  for (auto& th : t.threads) {
    int next = 0;
    detail::number_block(th.code, th.tid, next);
  }
}

inline int count_instructions(const std::vector<SourceInstr>& block) {
  int n = 0;
  for (const auto& ins : block) {
    ++n;
    if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op))
      n += count_instructions(cond->body);
  }
  return n;
}

namespace detail {

struct SourceValidator {
  const SourceLitmusTest& t;
  static constexpr int kMaxThreads = 5;
  static constexpr int kMaxInstrs = 20;
  static constexpr int kMaxIfDepth = 2;

  void require(bool ok, const std::string& msg) const {
    if (!ok) throw ValidationError(msg);
  }

  void check_loc(const std::string& loc, Width* w = nullptr) const {
    auto it = t.init.find(loc);
    require(it != t.init.end(), "undeclared location '" + loc + "'");
    if (w) *w = it->second.width;
  }

  void check_order(OpKind k, MemOrder mo, const Iid& iid) const {
    if (k == OpKind::load)
      require(!(mo == MemOrder::release || mo == MemOrder::acq_rel),
              "load cannot be " + std::string(to_string(mo)) + " at " + iid.str());
    if (k == OpKind::store)
      require(!(mo == MemOrder::acquire || mo == MemOrder::acq_rel),
              "store cannot be " + std::string(to_string(mo)) + " at " + iid.str());
  }

  void check_width_op(OpKind k, Width w, const Iid& iid) const {
    if (w == Width::w128)
      require(k == OpKind::load || k == OpKind::store || k == OpKind::cas ||
                  k == OpKind::exchange,
              "128-bit width not valid for " + std::string(to_string(k)) +
                  " at " + iid.str());
  }

  void check_block(const std::vector<SourceInstr>& block, int depth,
                   std::set<std::string>& defined) const {
    require(depth <= kMaxIfDepth, "conditional blocks nest deeper than " +
                                      std::to_string(kMaxIfDepth));
    for (const auto& ins : block) {
      Width w = Width::w32;
      if (const auto* s = std::get_if<SourceInstr::Store>(&ins.op)) {
        check_loc(s->loc, &w);
        check_order(OpKind::store, s->mo, ins.iid);
        check_width_op(OpKind::store, w, ins.iid);
      } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
        check_loc(l->loc, &w);
        check_order(OpKind::load, l->mo, ins.iid);
        check_width_op(OpKind::load, w, ins.iid);
        if (l->reg != kDiscard) defined.insert(l->reg);
      } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
        check_loc(x->loc, &w);
        check_width_op(OpKind::exchange, w, ins.iid);
        if (x->reg != kDiscard) defined.insert(x->reg);
      } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
        check_loc(f->loc, &w);
        check_width_op(OpKind::fetch_add, w, ins.iid);
        if (f->reg != kDiscard) defined.insert(f->reg);
      } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
        check_loc(c->loc, &w);
        check_width_op(OpKind::cas, w, ins.iid);
        if (c->reg != kDiscard) defined.insert(c->reg);
      } else if (std::get_if<SourceInstr::Fence>(&ins.op)) {
        // any order is accepted; a relaxed fence is a no-op
      } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
        require(defined.count(cond->reg) > 0,
                "register '" + cond->reg + "' used before assignment at " +
                    ins.iid.str());
        check_block(cond->body, depth + 1, defined);
      }
    }
  }

  void run() const {
    require(!t.threads.empty(), "no threads");
    require(static_cast<int>(t.threads.size()) <= kMaxThreads,
            "more than " + std::to_string(kMaxThreads) + " threads");
    int total = 0;
    for (const auto& th : t.threads) total += count_instructions(th.code);
    require(total <= kMaxInstrs,
            "more than " + std::to_string(kMaxInstrs) + " instructions");

    for (const auto& th : t.threads) {
      std::set<std::string> defined;
      check_block(th.code, 0, defined);
      // Iids must match depth-first positions.
      std::vector<const SourceInstr*> flat;
      flatten(th.code, flat);
      for (int i = 0; i < static_cast<int>(flat.size()); ++i)
        require(flat[i]->iid == Iid{th.tid, i},
                "iid " + flat[i]->iid.str() + " does not match position " +
                    std::to_string(i));
    }

    std::set<std::string> regs_by_tid[kMaxThreads + 1];
    for (const auto& th : t.threads) {
      std::set<std::string> defined;
      collect_regs(th.code, defined);
      regs_by_tid[th.tid] = defined;
    }
    for (const auto& a : t.pred.atoms) {
      if (a.kind == PredAtom::Kind::mem) {
        check_loc(a.name);
      } else {
        require(a.tid >= 0 && a.tid < static_cast<int>(t.threads.size()),
                "predicate names unknown thread P" + std::to_string(a.tid));
        require(regs_by_tid[a.tid].count(a.name) > 0,
                "predicate register P" + std::to_string(a.tid) + ":" + a.name +
                    " is never assigned");
      }
    }
  }

  static void flatten(const std::vector<SourceInstr>& block,
                      std::vector<const SourceInstr*>& out) {
    for (const auto& ins : block) {
      out.push_back(&ins);
      if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op))
        flatten(cond->body, out);
    }
  }

  static void collect_regs(const std::vector<SourceInstr>& block,
                           std::set<std::string>& out) {
    for (const auto& ins : block) {
      if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
        if (l->reg != kDiscard) out.insert(l->reg);
      } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
        if (x->reg != kDiscard) out.insert(x->reg);
      } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
        if (f->reg != kDiscard) out.insert(f->reg);
      } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
        if (c->reg != kDiscard) out.insert(c->reg);
      } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
        collect_regs(cond->body, out);
      }
    }
  }
};

}  // namespace detail

// Rejects any test that violates a structural invariant; throws
// ValidationError with a diagnostic, never accepts silently.
inline void validate(const SourceLitmusTest& t) {
  detail::SourceValidator{t}.run();
}

}  // namespace litmix
