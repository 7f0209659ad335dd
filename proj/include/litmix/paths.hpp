#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "asmtest.hpp"
#include "source.hpp"

namespace litmix {

// Value of a register (or a write) as a function of the reads on the same
// path: the designated half of the read's value plus a constant.
struct ValueExpr {
  int slot = -1;  // read slot, -1 = constant
  enum class Half : std::uint8_t { full, lo, hi } half = Half::full;
  Value addend = 0;

  bool is_const() const { return slot < 0; }

  static ValueExpr constant(Value v) { return ValueExpr{-1, Half::full, v}; }

  Value eval(const std::vector<Value>& read_vals) const {
    Value base = 0;
    if (slot >= 0) {
      base = read_vals[slot];
      if (half == Half::lo) base &= (((Value)1 << 64) - 1);
      if (half == Half::hi) base >>= 64;
    }
    return base + addend;
  }
};

// Event skeleton on one control path; values are resolved once reads-from
// edges are chosen.
struct EvTpl {
  enum class Kind : std::uint8_t { R, W, RMWr, RMWw, F } kind = Kind::R;
  std::string loc;
  Width width = Width::w32;
  int slot = -1;              // read slot (R / RMWr)
  ValueExpr wlo, whi;         // written value (W / RMWw), hi for 128-bit
  int pair = -1;              // partner event index within the path
  bool src_level = true;
  MemOrder mo = MemOrder::relaxed;  // source attribute
  bool acq_strong = false;          // target attributes
  bool acq_pc = false;
  bool rel = false;
  bool exclusive = false;
  BarrierKind barrier = BarrierKind::ish;
  bool dmb_ld_visible = true;
  Iid origin;
  std::set<int> data_deps, addr_deps, ctrl_deps;  // read slots

  Value written(const std::vector<Value>& read_vals) const {
    Value lo = wlo.eval(read_vals) & (((Value)1 << 64) - 1);
    Value hi = whi.eval(read_vals) & (((Value)1 << 64) - 1);
    return mask_to_width(lo | (hi << 64), width);
  }
};

// Branch decisions and CAS compares recorded as constraints on read values.
struct PathConstraint {
  ValueExpr a;
  ValueExpr b;
  bool equal = true;
  Width width = Width::w32;

  bool holds(const std::vector<Value>& read_vals) const {
    Value va = mask_to_width(a.eval(read_vals), width);
    Value vb = mask_to_width(b.eval(read_vals), width);
    return equal ? va == vb : va != vb;
  }
};

struct ThreadPath {
  int tid = 0;
  std::vector<EvTpl> events;
  std::vector<PathConstraint> constraints;
  int nreads = 0;
  std::map<std::string, ValueExpr> final_regs;  // keyed as produced by walker
  bool incomplete = false;
};

namespace detail {

// ---------------------------------------------------------------------------
// Source-level walker: conditionals fork the path; there are no loops.

struct SourceWalker {
  const SourceLitmusTest& test;
  int tid;
  std::vector<ThreadPath> done;

  struct State {
    ThreadPath path;
    std::map<std::string, ValueExpr> regs;
  };

  Width width_of(const std::string& loc) const { return test.init.at(loc).width; }

  void emit_read(State& st, const std::string& loc, MemOrder mo, EvTpl::Kind k,
                 const Iid& iid, int* slot_out) {
    EvTpl e;
    e.kind = k;
    e.loc = loc;
    e.width = width_of(loc);
    e.slot = st.path.nreads++;
    e.src_level = true;
    e.mo = mo;
    e.origin = iid;
    *slot_out = e.slot;
    st.path.events.push_back(e);
  }

  void emit_write(State& st, const std::string& loc, MemOrder mo,
                  EvTpl::Kind k, ValueExpr lo, const Iid& iid, int pair = -1) {
    EvTpl e;
    e.kind = k;
    e.loc = loc;
    e.width = width_of(loc);
    e.wlo = lo;
    e.whi = ValueExpr::constant(0);
    e.src_level = true;
    e.mo = mo;
    e.origin = iid;
    e.pair = pair;
    if (pair >= 0) st.path.events[pair].pair = static_cast<int>(st.path.events.size());
    st.path.events.push_back(e);
  }

  void walk(const std::vector<SourceInstr>& block, std::size_t i, State st) {
    if (i == block.size()) {
      finish(std::move(st));
      return;
    }
    const auto& ins = block[i];
    if (const auto* s = std::get_if<SourceInstr::Store>(&ins.op)) {
      emit_write(st, s->loc, s->mo, EvTpl::Kind::W, ValueExpr::constant(s->val),
                 ins.iid);
      walk(block, i + 1, std::move(st));
    } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
      int slot;
      emit_read(st, l->loc, l->mo, EvTpl::Kind::R, ins.iid, &slot);
      if (l->reg != kDiscard)
        st.regs[l->reg] = ValueExpr{slot, ValueExpr::Half::full, 0};
      walk(block, i + 1, std::move(st));
    } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
      int slot;
      emit_read(st, x->loc, x->mo, EvTpl::Kind::RMWr, ins.iid, &slot);
      emit_write(st, x->loc, x->mo, EvTpl::Kind::RMWw,
                 ValueExpr::constant(x->val), ins.iid,
                 static_cast<int>(st.path.events.size()) - 1);
      if (x->reg != kDiscard)
        st.regs[x->reg] = ValueExpr{slot, ValueExpr::Half::full, 0};
      walk(block, i + 1, std::move(st));
    } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
      int slot;
      emit_read(st, f->loc, f->mo, EvTpl::Kind::RMWr, ins.iid, &slot);
      emit_write(st, f->loc, f->mo, EvTpl::Kind::RMWw,
                 ValueExpr{slot, ValueExpr::Half::full, f->val}, ins.iid,
                 static_cast<int>(st.path.events.size()) - 1);
      if (f->reg != kDiscard)
        st.regs[f->reg] = ValueExpr{slot, ValueExpr::Half::full, 0};
      walk(block, i + 1, std::move(st));
    } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
      // success branch
      {
        State succ = st;
        int slot;
        emit_read(succ, c->loc, c->mo, EvTpl::Kind::RMWr, ins.iid, &slot);
        emit_write(succ, c->loc, c->mo, EvTpl::Kind::RMWw,
                   ValueExpr::constant(c->desired), ins.iid,
                   static_cast<int>(succ.path.events.size()) - 1);
        succ.path.constraints.push_back(
            {ValueExpr{slot, ValueExpr::Half::full, 0},
             ValueExpr::constant(c->expected), true, width_of(c->loc)});
        if (c->reg != kDiscard)
          succ.regs[c->reg] = ValueExpr{slot, ValueExpr::Half::full, 0};
        walk(block, i + 1, std::move(succ));
      }
      // failure branch: a plain read observing a different value. The
      // release half does not apply to a failed CAS.
      {
        State fail = st;
        int slot;
        MemOrder fmo = c->mo;
        if (fmo == MemOrder::release) fmo = MemOrder::relaxed;
        if (fmo == MemOrder::acq_rel) fmo = MemOrder::acquire;
        emit_read(fail, c->loc, fmo, EvTpl::Kind::R, ins.iid, &slot);
        fail.path.constraints.push_back(
            {ValueExpr{slot, ValueExpr::Half::full, 0},
             ValueExpr::constant(c->expected), false, width_of(c->loc)});
        if (c->reg != kDiscard)
          fail.regs[c->reg] = ValueExpr{slot, ValueExpr::Half::full, 0};
        walk(block, i + 1, std::move(fail));
      }
    } else if (const auto* fe = std::get_if<SourceInstr::Fence>(&ins.op)) {
      if (fe->mo != MemOrder::relaxed) {
        EvTpl e;
        e.kind = EvTpl::Kind::F;
        e.src_level = true;
        e.mo = fe->mo;
        e.origin = ins.iid;
        st.path.events.push_back(e);
      }
      walk(block, i + 1, std::move(st));
    } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
      // a register assigned only on another path reads as its initial 0
      auto it = st.regs.find(cond->reg);
      ValueExpr r = it == st.regs.end() ? ValueExpr::constant(0) : it->second;
      // taken
      {
        State taken = st;
        taken.path.constraints.push_back(
            {r, ValueExpr::constant(cond->val), true, Width::w128});
        walk_nested(block, i, taken, cond);
      }
      // not taken
      {
        State skip = st;
        skip.path.constraints.push_back(
            {r, ValueExpr::constant(cond->val), false, Width::w128});
        walk(block, i + 1, std::move(skip));
      }
    }
  }

  void walk_nested(const std::vector<SourceInstr>& block, std::size_t i,
                   State st, const SourceInstr::If* cond) {
    // walk body, then continue after the conditional
    std::vector<SourceInstr> rest = cond->body;
    rest.insert(rest.end(), block.begin() + i + 1, block.end());
    walk(rest, 0, std::move(st));
  }

  void finish(State st) {
    st.path.tid = tid;
    st.path.final_regs = std::move(st.regs);
    done.push_back(std::move(st.path));
  }
};

// ---------------------------------------------------------------------------
// Assembly walker: a small machine over the instruction list with loop
// unrolling, call/return, exclusive pairing, and dependency tracking.

struct AsmWalker {
  const AsmLitmusTest& test;
  const AsmThread& thread;
  int unroll = 2;
  std::vector<ThreadPath> done;
  static constexpr int kMaxPaths = 4096;

  struct RegState {
    ValueExpr val = ValueExpr::constant(0);
    std::set<int> deps;
  };

  struct State {
    std::size_t pc = 0;
    ThreadPath path;
    std::vector<RegState> regs = std::vector<RegState>(32);
    std::vector<int> visits;
    std::vector<std::size_t> call_stack;
    std::set<int> ctrl;
    std::map<std::string, int> last_excl;  // loc -> event index in path
  };

  std::map<std::string, std::size_t> labels;

  explicit AsmWalker(const AsmLitmusTest& t, const AsmThread& th, int unroll)
      : test(t), thread(th), unroll(unroll) {
    for (std::size_t i = 0; i < th.code.size(); ++i)
      if (th.code[i].m == AMnem::LABEL) labels[th.code[i].label] = i;
  }

  const std::string& loc_of(const AReg& addr) const {
    const std::string* loc = test.location_of(thread.tid, addr);
    if (!loc)
      throw ValidationError("unbound address register " + addr.str());
    return *loc;
  }

  Width width_of(const std::string& loc) const {
    return test.init.at(loc).width;
  }

  static std::string reg_key(int slot) { return "s" + std::to_string(slot); }

  void run() {
    State st;
    st.visits.assign(thread.code.size(), 0);
    st.path.tid = thread.tid;
    step(std::move(st));
  }

  void finish(State st) {
    for (int i = 0; i < 31; ++i)
      st.path.final_regs[reg_key(i)] = st.regs[i].val;
    done.push_back(std::move(st.path));
    if (static_cast<int>(done.size()) > kMaxPaths)
      throw CapError("too many control paths in thread P" +
                     std::to_string(thread.tid));
  }

  RegState& reg(State& st, const AReg& r) { return st.regs[r.index]; }

  ValueExpr read_reg(State& st, const AReg& r) {
    if (r.is_zero()) return ValueExpr::constant(0);
    return st.regs[r.index].val;
  }

  std::set<int> reg_deps(State& st, const AReg& r) {
    if (r.is_zero()) return {};
    return st.regs[r.index].deps;
  }

  void write_reg(State& st, const AReg& r, ValueExpr v, std::set<int> deps) {
    if (r.is_zero()) return;  // writes to the zero register vanish
    st.regs[r.index].val = v;
    st.regs[r.index].deps = std::move(deps);
  }

  int emit_read(State& st, const std::string& loc, EvTpl::Kind k,
                const AsmInstr& ins, bool visible) {
    EvTpl e;
    e.kind = k;
    e.loc = loc;
    e.width = width_of(loc);
    e.slot = st.path.nreads++;
    e.src_level = false;
    e.acq_strong = acquires_strong(ins.m);
    e.acq_pc = acquires_pc(ins.m);
    e.exclusive = is_exclusive_load(ins.m);
    e.dmb_ld_visible = visible;
    e.addr_deps = reg_deps(st, *ins.addr);
    e.ctrl_deps = st.ctrl;
    if (ins.origin) e.origin = *ins.origin;
    st.path.events.push_back(e);
    return static_cast<int>(st.path.events.size()) - 1;
  }

  int emit_write(State& st, const std::string& loc, ValueExpr lo, ValueExpr hi,
                 std::set<int> data, const AsmInstr& ins, int pair = -1) {
    EvTpl e;
    e.kind = pair >= 0 ? EvTpl::Kind::RMWw : EvTpl::Kind::W;
    e.loc = loc;
    e.width = width_of(loc);
    e.wlo = lo;
    e.whi = hi;
    e.src_level = false;
    e.rel = releases(ins.m);
    e.exclusive = is_exclusive_store(ins.m);
    e.data_deps = std::move(data);
    e.addr_deps = reg_deps(st, *ins.addr);
    e.ctrl_deps = st.ctrl;
    e.pair = pair;
    if (ins.origin) e.origin = *ins.origin;
    if (pair >= 0) {
      st.path.events[pair].pair = static_cast<int>(st.path.events.size());
      if (st.path.events[pair].kind == EvTpl::Kind::R)
        st.path.events[pair].kind = EvTpl::Kind::RMWr;
    }
    st.path.events.push_back(e);
    return static_cast<int>(st.path.events.size()) - 1;
  }

  void step(State st) {
    while (true) {
      if (st.pc >= thread.code.size()) {
        finish(std::move(st));
        return;
      }
      const AsmInstr& ins = thread.code[st.pc];
      if (++st.visits[st.pc] > unroll) {
        st.path.incomplete = true;
        finish(std::move(st));
        return;
      }
      std::size_t next = st.pc + 1;
      switch (ins.m) {
        case AMnem::LABEL:
          break;
        case AMnem::MOV: {
          if (ins.imm)
            write_reg(st, ins.regs[0], ValueExpr::constant(*ins.imm), {});
          else
            write_reg(st, ins.regs[0], read_reg(st, ins.regs[1]),
                      reg_deps(st, ins.regs[1]));
          break;
        }
        case AMnem::LDR: case AMnem::LDA: case AMnem::LDAR: case AMnem::LDAPR: {
          const auto& loc = loc_of(*ins.addr);
          int ev = emit_read(st, loc, EvTpl::Kind::R, ins, true);
          int slot = st.path.events[ev].slot;
          write_reg(st, ins.regs[0], ValueExpr{slot, ValueExpr::Half::lo, 0},
                    {slot});
          break;
        }
        case AMnem::LDXR: case AMnem::LDAXR: {
          const auto& loc = loc_of(*ins.addr);
          int ev = emit_read(st, loc, EvTpl::Kind::R, ins, true);
          int slot = st.path.events[ev].slot;
          write_reg(st, ins.regs[0], ValueExpr{slot, ValueExpr::Half::lo, 0},
                    {slot});
          st.last_excl[loc] = ev;
          break;
        }
        case AMnem::LDP: case AMnem::LDXP: {
          const auto& loc = loc_of(*ins.addr);
          int ev = emit_read(st, loc, EvTpl::Kind::R, ins, true);
          int slot = st.path.events[ev].slot;
          write_reg(st, ins.regs[0], ValueExpr{slot, ValueExpr::Half::lo, 0},
                    {slot});
          write_reg(st, ins.regs[1], ValueExpr{slot, ValueExpr::Half::hi, 0},
                    {slot});
          if (ins.m == AMnem::LDXP) st.last_excl[loc] = ev;
          break;
        }
        case AMnem::STR: case AMnem::STL: case AMnem::STLR: {
          const auto& loc = loc_of(*ins.addr);
          emit_write(st, loc, read_reg(st, ins.regs[0]), ValueExpr::constant(0),
                     reg_deps(st, ins.regs[0]), ins);
          break;
        }
        case AMnem::STP: {
          const auto& loc = loc_of(*ins.addr);
          auto deps = reg_deps(st, ins.regs[0]);
          auto d2 = reg_deps(st, ins.regs[1]);
          deps.insert(d2.begin(), d2.end());
          emit_write(st, loc, read_reg(st, ins.regs[0]),
                     read_reg(st, ins.regs[1]), std::move(deps), ins);
          break;
        }
        case AMnem::STXR: case AMnem::STLXR: case AMnem::STXP: case AMnem::STLXP: {
          const auto& loc = loc_of(*ins.addr);
          auto it = st.last_excl.find(loc);
          if (it == st.last_excl.end())
            throw ValidationError("exclusive store without matching load on " +
                                  loc);
          bool is_pair = ins.m == AMnem::STXP || ins.m == AMnem::STLXP;
          // success
          {
            State succ = st;
            ValueExpr lo = read_reg(succ, ins.regs[1]);
            ValueExpr hi = is_pair ? read_reg(succ, ins.regs[2])
                                   : ValueExpr::constant(0);
            auto deps = reg_deps(succ, ins.regs[1]);
            if (is_pair) {
              auto d2 = reg_deps(succ, ins.regs[2]);
              deps.insert(d2.begin(), d2.end());
            }
            emit_write(succ, loc, lo, hi, std::move(deps), ins, it->second);
            write_reg(succ, ins.regs[0], ValueExpr::constant(0), {});
            succ.pc = next;
            step(std::move(succ));
          }
          // failure: writes nothing, status register becomes 1
          {
            State fail = st;
            write_reg(fail, ins.regs[0], ValueExpr::constant(1), {});
            fail.pc = next;
            step(std::move(fail));
          }
          return;
        }
        case AMnem::SWP: case AMnem::SWPA: case AMnem::SWPL: case AMnem::SWPAL: {
          const auto& loc = loc_of(*ins.addr);
          bool visible = !ins.regs[1].is_zero();
          int rd = emit_read(st, loc, EvTpl::Kind::RMWr, ins, visible);
          int slot = st.path.events[rd].slot;
          emit_write(st, loc, read_reg(st, ins.regs[0]), ValueExpr::constant(0),
                     reg_deps(st, ins.regs[0]), ins, rd);
          write_reg(st, ins.regs[1], ValueExpr{slot, ValueExpr::Half::lo, 0},
                    {slot});
          break;
        }
        case AMnem::LDADD: case AMnem::LDADDA: case AMnem::LDADDL:
        case AMnem::LDADDAL: {
          const auto& loc = loc_of(*ins.addr);
          bool visible = !ins.regs[1].is_zero();
          int rd = emit_read(st, loc, EvTpl::Kind::RMWr, ins, visible);
          int slot = st.path.events[rd].slot;
          ValueExpr addend = read_reg(st, ins.regs[0]);
          // modelled additions need a constant addend; loaded addends are out
          // of scope for the bundled mappings
          if (!addend.is_const())
            throw ValidationError("LDADD with a loaded addend is not modelled");
          emit_write(st, loc,
                     ValueExpr{slot, ValueExpr::Half::lo, addend.addend},
                     ValueExpr::constant(0), reg_deps(st, ins.regs[0]), ins, rd);
          write_reg(st, ins.regs[1], ValueExpr{slot, ValueExpr::Half::lo, 0},
                    {slot});
          break;
        }
        case AMnem::CAS: case AMnem::CASA: case AMnem::CASL: case AMnem::CASAL:
        case AMnem::CASP: case AMnem::CASPAL: {
          bool is_pair = ins.m == AMnem::CASP || ins.m == AMnem::CASPAL;
          const auto& loc = loc_of(*ins.addr);
          const AReg& exp_lo = ins.regs[0];
          const AReg exp_hi = is_pair ? ins.regs[1] : AReg{AReg::kZero, AReg::Style::X};
          const AReg& des_lo = is_pair ? ins.regs[2] : ins.regs[1];
          const AReg des_hi = is_pair ? ins.regs[3] : AReg{AReg::kZero, AReg::Style::X};
          ValueExpr elo = read_reg(st, exp_lo), ehi = read_reg(st, exp_hi);
          Width w = width_of(loc);
          bool visible = !exp_lo.is_zero();
          // success branch
          {
            State succ = st;
            int rd = emit_read(succ, loc, EvTpl::Kind::RMWr, ins, visible);
            int slot = succ.path.events[rd].slot;
            if (!elo.is_const() || !ehi.is_const()) {
              // expected halves must not themselves depend on this read
              succ.path.constraints.push_back(
                  {ValueExpr{slot, ValueExpr::Half::lo, 0}, elo, true, Width::w64});
              if (is_pair)
                succ.path.constraints.push_back(
                    {ValueExpr{slot, ValueExpr::Half::hi, 0}, ehi, true, Width::w64});
            } else {
              succ.path.constraints.push_back(
                  {ValueExpr{slot, ValueExpr::Half::full, 0},
                   ValueExpr::constant(mask_to_width(
                       elo.addend | (ehi.addend << 64), w)),
                   true, w});
            }
            auto deps = reg_deps(succ, des_lo);
            if (is_pair) {
              auto d2 = reg_deps(succ, des_hi);
              deps.insert(d2.begin(), d2.end());
            }
            emit_write(succ, loc, read_reg(succ, des_lo),
                       is_pair ? read_reg(succ, des_hi) : ValueExpr::constant(0),
                       std::move(deps), ins, rd);
            write_reg(succ, exp_lo, ValueExpr{slot, ValueExpr::Half::lo, 0},
                      {slot});
            if (is_pair)
              write_reg(succ, exp_hi, ValueExpr{slot, ValueExpr::Half::hi, 0},
                        {slot});
            succ.pc = next;
            step(std::move(succ));
          }
          // failure branch: read only, old value still loaded
          {
            State fail = st;
            int rd = emit_read(fail, loc, EvTpl::Kind::R, ins, visible);
            int slot = fail.path.events[rd].slot;
            if (!elo.is_const() || !ehi.is_const()) {
              fail.path.constraints.push_back(
                  {ValueExpr{slot, ValueExpr::Half::full, 0},
                   elo,  // lo compare only is sound for non-const halves of
                         // equal widths; pairs with loaded expected compare lo
                   false, w});
            } else {
              fail.path.constraints.push_back(
                  {ValueExpr{slot, ValueExpr::Half::full, 0},
                   ValueExpr::constant(mask_to_width(
                       elo.addend | (ehi.addend << 64), w)),
                   false, w});
            }
            write_reg(fail, exp_lo, ValueExpr{slot, ValueExpr::Half::lo, 0},
                      {slot});
            if (is_pair)
              write_reg(fail, exp_hi, ValueExpr{slot, ValueExpr::Half::hi, 0},
                        {slot});
            fail.pc = next;
            step(std::move(fail));
          }
          return;
        }
        case AMnem::DMB: {
          EvTpl e;
          e.kind = EvTpl::Kind::F;
          e.src_level = false;
          e.barrier = ins.dmb;
          if (ins.origin) e.origin = *ins.origin;
          st.path.events.push_back(e);
          break;
        }
        case AMnem::CBZ: case AMnem::CBNZ: {
          ValueExpr v = read_reg(st, ins.regs[0]);
          auto deps = reg_deps(st, ins.regs[0]);
          std::size_t target = labels.at(ins.label);
          bool on_zero = ins.m == AMnem::CBZ;
          if (v.is_const()) {
            bool taken = (v.addend == 0) == on_zero;
            next = taken ? target : next;
            break;
          }
          // branch steered by a loaded value: fork with constraints and
          // record the control dependency
          {
            State taken = st;
            taken.path.constraints.push_back(
                {v, ValueExpr::constant(0), on_zero, Width::w64});
            taken.ctrl.insert(deps.begin(), deps.end());
            taken.pc = target;
            step(std::move(taken));
          }
          {
            State fall = st;
            fall.path.constraints.push_back(
                {v, ValueExpr::constant(0), !on_zero, Width::w64});
            fall.ctrl.insert(deps.begin(), deps.end());
            fall.pc = next;
            step(std::move(fall));
          }
          return;
        }
        case AMnem::B:
          next = labels.at(ins.label);
          break;
        case AMnem::BL:
          st.call_stack.push_back(next);
          next = labels.at(ins.label);
          break;
        case AMnem::RET: {
          if (st.call_stack.empty()) {
            finish(std::move(st));
            return;
          }
          next = st.call_stack.back();
          st.call_stack.pop_back();
          break;
        }
      }
      st.pc = next;
    }
  }
};

}  // namespace detail

// All feasible straight-line skeletons of one thread, with conditional and
// exclusive-retry branches expanded at most `unroll` times. Paths exceeding
// the bound are marked incomplete; callers exclude them from outcomes.
inline std::vector<ThreadPath> thread_paths(const SourceLitmusTest& t, int tid) {
  detail::SourceWalker w{t, tid, {}};
  detail::SourceWalker::State st;
  w.walk(t.threads[tid].code, 0, std::move(st));
  return std::move(w.done);
}

inline std::vector<ThreadPath> thread_paths(const AsmLitmusTest& t, int tid,
                                            int unroll) {
  detail::AsmWalker w(t, t.threads[tid], unroll);
  w.run();
  return std::move(w.done);
}

}  // namespace litmix
