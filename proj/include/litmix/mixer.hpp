#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "profile.hpp"
#include "source.hpp"

namespace litmix {

// Profile-name -> instruction ids compiled by that profile. The sets
// partition the instruction ids of the source test.
struct MixAssignment {
  std::map<std::string, std::set<Iid>> by_profile;

  bool operator==(const MixAssignment&) const = default;

  std::string str() const {
    std::string s;
    for (const auto& [prof, iids] : by_profile) {
      if (!s.empty()) s += "; ";
      s += prof + " -> {";
      bool first = true;
      for (const auto& iid : iids) {
        if (!first) s += ", ";
        s += iid.str();
        first = false;
      }
      s += "}";
    }
    return s;
  }
};

struct MixTest {
  const SourceLitmusTest* test = nullptr;
  MixAssignment assignment;
};

struct MixOptions {
  bool glue = false;
  bool thread_level = false;  // split at thread granularity instead
  std::uint64_t max_assignments = 1'000'000;
};

struct CombinedEntry {
  const SourceLitmusTest* source = nullptr;
  MixAssignment assignment;
  AsmLitmusTest test;
  std::string digest;

  MixTest mix_test() const { return MixTest{source, assignment}; }
};

struct CombinedSet {
  std::vector<CombinedEntry> entries;                      // enumeration order
  std::map<std::string, std::vector<std::size_t>> groups;  // digest -> entries

  std::size_t representative(const std::string& digest) const {
    return groups.at(digest).front();
  }
};

// The splitting function: all instructions keyed by instruction id, in
// (thread, position) order. Conditional bodies contribute their own ids.
inline std::vector<std::pair<Iid, const SourceInstr*>> split(
    const SourceLitmusTest& s) {
  std::vector<std::pair<Iid, const SourceInstr*>> out;
  for (const auto& th : s.threads) {
    std::vector<const SourceInstr*> flat;
    detail::SourceValidator::flatten(th.code, flat);
    for (const auto* ins : flat) out.emplace_back(ins->iid, ins);
  }
  return out;
}

namespace detail {

inline unsigned __int128 pow_count(std::size_t base, std::size_t exp,
                                   unsigned __int128 cap) {
  unsigned __int128 n = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    n *= base;
    if (n > cap) return n;
  }
  return n;
}

}  // namespace detail

// Exactly |P|^|I| assignments in lexicographic order: instruction ids sorted
// by thread then index, profiles by name, the first id being the most
// significant digit. Refuses with a diagnostic when the count exceeds the cap.
inline std::vector<MixAssignment> enumerate_assignments(
    const std::vector<Iid>& iids, const std::vector<CompilerProfile>& profiles,
    std::uint64_t cap = 1'000'000) {
  if (profiles.empty()) throw Error("no profiles given");
  std::vector<Iid> ids = iids;
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> names;
  for (const auto& p : profiles) names.push_back(p.name);
  std::sort(names.begin(), names.end());

  auto total = detail::pow_count(names.size(), ids.size(), cap);
  if (total > cap)
    throw CapError("assignment space |P|^|I| = " +
                   std::to_string(names.size()) + "^" +
                   std::to_string(ids.size()) + " exceeds cap " +
                   std::to_string(cap));

  std::vector<MixAssignment> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digits(ids.size(), 0);
  while (true) {
    MixAssignment a;
    for (std::size_t k = 0; k < ids.size(); ++k)
      a.by_profile[names[digits[k]]].insert(ids[k]);
    out.push_back(std::move(a));
    // increment, least significant digit last
    std::size_t k = ids.size();
    while (k > 0) {
      --k;
      if (++digits[k] < names.size()) break;
      digits[k] = 0;
      if (k == 0) return out;
    }
    if (ids.empty()) return out;
  }
}

// Fragment of a compiled instruction. Conditionals produce a surrounding
// skeleton: `pre` opens the block, `post` closes it; plain instructions only
// fill `pre`.
struct Fragment {
  std::vector<AsmInstr> pre;
  std::vector<AsmInstr> post;
};

// Per-thread compilation state. Each location gets a fixed address register
// and each source register a fixed result register, so the observation map
// is stable across assignments.
struct ThreadContext {
  int tid = 0;
  std::map<std::string, AReg> dst_of;   // source register -> result register
  std::map<std::string, AReg> addr_of;  // location -> address register
  ThreadAllocator alloc{0};

  static ThreadContext build(const SourceLitmusTest& s, const SourceThread& th) {
    ThreadContext ctx;
    ctx.tid = th.tid;
    std::vector<std::string> regs, locs;
    collect(th.code, s, regs, locs);
    int slot = 0;
    for (const auto& r : regs)
      ctx.dst_of[r] = AReg{static_cast<std::uint8_t>(slot++), AReg::Style::W};
    for (const auto& l : locs)
      ctx.addr_of[l] = AReg{static_cast<std::uint8_t>(slot++), AReg::Style::X};
    ctx.alloc = ThreadAllocator(slot);
    return ctx;
  }

 private:
  static void collect(const std::vector<SourceInstr>& block,
                      const SourceLitmusTest& s, std::vector<std::string>& regs,
                      std::vector<std::string>& locs) {
    auto add_reg = [&](const std::string& r) {
      if (r != kDiscard && std::find(regs.begin(), regs.end(), r) == regs.end())
        regs.push_back(r);
    };
    auto add_loc = [&](const std::string& l) {
      if (std::find(locs.begin(), locs.end(), l) == locs.end()) locs.push_back(l);
    };
    for (const auto& ins : block) {
      if (const auto* st = std::get_if<SourceInstr::Store>(&ins.op)) {
        add_loc(st->loc);
      } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
        add_reg(l->reg); add_loc(l->loc);
      } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
        add_reg(x->reg); add_loc(x->loc);
      } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
        add_reg(f->reg); add_loc(f->loc);
      } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
        add_reg(c->reg); add_loc(c->loc);
      } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
        collect(cond->body, s, regs, locs);
      }
    }
  }
};

// Compiles one source instruction under one profile. The fragment is tagged
// with the source instruction id for recombination.
inline Fragment compile_instruction(const SourceInstr& ins,
                                    const CompilerProfile& p,
                                    const SourceLitmusTest& s,
                                    ThreadContext& ctx) {
  Fragment frag;
  auto width_of = [&](const std::string& loc) { return s.init.at(loc).width; };
  auto dst_or_discard = [&](const std::string& reg) -> std::optional<AReg> {
    if (reg == kDiscard) return std::nullopt;
    return ctx.dst_of.at(reg);
  };
  auto emit = [&](MappingKey key, OperandBinding bind) {
    try {
      const auto& entry = lookup(p, key);
      bind.width = key.w;
      frag.pre = instantiate(entry, bind, ctx.alloc);
    } catch (const MappingError& e) {
      throw MappingError(std::string(e.what()) + " (at " + ins.iid.str() + ")");
    }
  };

  if (const auto* st = std::get_if<SourceInstr::Store>(&ins.op)) {
    OperandBinding b;
    b.addr = ctx.addr_of.at(st->loc);
    b.val = st->val;
    emit({OpKind::store, width_of(st->loc), st->mo, false}, b);
  } else if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
    OperandBinding b;
    b.addr = ctx.addr_of.at(l->loc);
    b.dst = dst_or_discard(l->reg);
    emit({OpKind::load, width_of(l->loc), l->mo, !b.dst.has_value()}, b);
  } else if (const auto* x = std::get_if<SourceInstr::Exchange>(&ins.op)) {
    OperandBinding b;
    b.addr = ctx.addr_of.at(x->loc);
    b.dst = dst_or_discard(x->reg);
    b.val = x->val;
    emit({OpKind::exchange, width_of(x->loc), x->mo, !b.dst.has_value()}, b);
  } else if (const auto* f = std::get_if<SourceInstr::FetchAdd>(&ins.op)) {
    OperandBinding b;
    b.addr = ctx.addr_of.at(f->loc);
    b.dst = dst_or_discard(f->reg);
    b.val = f->val;
    emit({OpKind::fetch_add, width_of(f->loc), f->mo, !b.dst.has_value()}, b);
  } else if (const auto* c = std::get_if<SourceInstr::Cas>(&ins.op)) {
    OperandBinding b;
    b.addr = ctx.addr_of.at(c->loc);
    b.dst = dst_or_discard(c->reg);
    b.exp = c->expected;
    b.des = c->desired;
    emit({OpKind::cas, width_of(c->loc), c->mo, !b.dst.has_value()}, b);
  } else if (const auto* fe = std::get_if<SourceInstr::Fence>(&ins.op)) {
    if (fe->mo != MemOrder::relaxed)  // a relaxed fence is a no-op
      emit({OpKind::fence, Width::w32, fe->mo, false}, OperandBinding{});
  } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
    // Compare-and-branch skeleton around the recursively compiled block.
    // CBZ/CBNZ compare against zero only, so other constants are out of
    // reach of the vocabulary.
    if (cond->val != 0)
      throw MappingError(
          "conditional constant " + to_string(cond->val) + " at " +
          ins.iid.str() + " is not expressible (vocabulary compares with zero only)");
    std::string skip = ctx.alloc.alloc_label();
    AsmInstr br;
    br.m = AMnem::CBNZ;
    br.regs.push_back(ctx.dst_of.at(cond->reg));
    br.label = skip;
    frag.pre.push_back(br);
    AsmInstr lbl;
    lbl.m = AMnem::LABEL;
    lbl.label = skip;
    frag.post.push_back(lbl);
  }
  for (auto& i : frag.pre) i.origin = ins.iid;
  for (auto& i : frag.post) i.origin = ins.iid;
  return frag;
}

namespace detail {

inline void assemble_block(const std::vector<SourceInstr>& block,
                           const std::map<Iid, Fragment>& frags,
                           std::vector<AsmInstr>& out) {
  for (const auto& ins : block) {
    auto it = frags.find(ins.iid);
    if (it == frags.end())
      throw Error("missing fragment for " + ins.iid.str());
    out.insert(out.end(), it->second.pre.begin(), it->second.pre.end());
    if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op))
      assemble_block(cond->body, frags, out);
    out.insert(out.end(), it->second.post.begin(), it->second.post.end());
  }
}

}  // namespace detail

// The combining function: per thread, fragments concatenated in source
// order; init copied from the source test; the predicate translated through
// the observation map.
inline AsmLitmusTest combine(const SourceLitmusTest& s,
                             const std::map<Iid, Fragment>& frags,
                             const std::vector<ThreadContext>& ctxs,
                             const std::string& name) {
  AsmLitmusTest t;
  t.name = name;
  t.init = s.init;
  for (const auto& ctx : ctxs) {
    for (const auto& [loc, reg] : ctx.addr_of) t.addr_of[ctx.tid][reg] = loc;
    for (const auto& [src, reg] : ctx.dst_of) t.obs.regs[ctx.tid][src] = reg;
  }
  for (const auto& th : s.threads) {
    AsmThread at;
    at.tid = th.tid;
    detail::assemble_block(th.code, frags, at.code);
    t.threads.push_back(std::move(at));
  }
  for (const auto& a : s.pred.atoms) {
    PredAtom out = a;
    if (a.kind == PredAtom::Kind::reg)
      out.name = t.obs.regs.at(a.tid).at(a.name).str();
    t.pred.atoms.push_back(out);
  }
  validate(t);
  return t;
}

namespace detail {

struct Run {
  std::size_t begin, end;  // [begin, end)
};

inline bool wrappable(const std::vector<AsmInstr>& code, const Run& r) {
  std::set<std::string> internal;
  for (std::size_t i = r.begin; i < r.end; ++i)
    if (code[i].m == AMnem::LABEL) internal.insert(code[i].label);
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const auto& ins = code[i];
    if (ins.m == AMnem::BL || ins.m == AMnem::RET) return false;
    if ((ins.m == AMnem::CBZ || ins.m == AMnem::CBNZ || ins.m == AMnem::B) &&
        !internal.count(ins.label))
      return false;
  }
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i >= r.begin && i < r.end) continue;
    if ((code[i].m == AMnem::CBZ || code[i].m == AMnem::CBNZ ||
         code[i].m == AMnem::B) &&
        internal.count(code[i].label))
      return false;
  }
  return true;
}

}  // namespace detail

// Models true separate compilation: each fragment becomes a called routine,
// `BL Lf; ...; Lf: <fragment>; RET`. Unconditional branches impose no
// ordering in the target model, so this is semantics-neutral there.
// Idempotent: a test that is already glued is returned unchanged.
inline AsmLitmusTest insert_branch_glue(const AsmLitmusTest& t) {
  if (t.glued) return t;
  AsmLitmusTest out = t;
  out.glued = true;
  for (auto& th : out.threads) {
    const auto& code = th.code;
    // maximal same-origin runs
    std::vector<detail::Run> runs;
    std::size_t i = 0;
    while (i < code.size()) {
      std::size_t j = i + 1;
      while (j < code.size() && code[j].origin == code[i].origin) ++j;
      runs.push_back({i, j});
      i = j;
    }
    int next_glue = 0;
    auto fresh = [&]() { return "F" + std::to_string(th.tid) + "_" +
                                std::to_string(next_glue++); };
    std::vector<AsmInstr> main_part, zone;
    for (const auto& r : runs) {
      if (r.end - r.begin > 0 && detail::wrappable(code, r)) {
        std::string f = fresh();
        AsmInstr call;
        call.m = AMnem::BL;
        call.label = f;
        call.origin = code[r.begin].origin;
        main_part.push_back(call);
        AsmInstr lbl;
        lbl.m = AMnem::LABEL;
        lbl.label = f;
        lbl.origin = code[r.begin].origin;
        zone.push_back(lbl);
        for (std::size_t k = r.begin; k < r.end; ++k) zone.push_back(code[k]);
        AsmInstr ret;
        ret.m = AMnem::RET;
        ret.origin = code[r.begin].origin;
        zone.push_back(ret);
      } else {
        for (std::size_t k = r.begin; k < r.end; ++k)
          main_part.push_back(code[k]);
      }
    }
    if (!zone.empty()) {
      std::string end = "Fend" + std::to_string(th.tid);
      AsmInstr skip;
      skip.m = AMnem::B;
      skip.label = end;
      main_part.push_back(skip);
      main_part.insert(main_part.end(), zone.begin(), zone.end());
      AsmInstr endl;
      endl.m = AMnem::LABEL;
      endl.label = end;
      main_part.push_back(endl);
    }
    th.code = std::move(main_part);
  }
  validate(out);
  return out;
}

// The whole pipeline: split, enumerate assignments, compile each instruction
// under its assigned profile, recombine, and group by canonical hash.
inline CombinedSet mix(const SourceLitmusTest& s,
                       const std::vector<CompilerProfile>& profiles,
                       const MixOptions& opt = {}) {
  validate(s);
  if (profiles.empty()) throw Error("no profiles given");

  auto parts = split(s);
  std::vector<Iid> iids;
  for (const auto& [iid, ins] : parts) iids.push_back(iid);

  std::vector<const CompilerProfile*> sorted;
  for (const auto& p : profiles) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });

  std::size_t digit_count = opt.thread_level ? s.threads.size() : iids.size();
  auto total = detail::pow_count(sorted.size(), digit_count, opt.max_assignments);
  if (total > opt.max_assignments)
    throw CapError("assignment space " + std::to_string(sorted.size()) + "^" +
                   std::to_string(digit_count) + " exceeds cap " +
                   std::to_string(opt.max_assignments));

  CombinedSet result;
  std::vector<std::size_t> digits(digit_count, 0);
  std::size_t index = 0;
  while (true) {
    // profile per instruction id
    std::map<Iid, const CompilerProfile*> of_iid;
    for (std::size_t k = 0; k < iids.size(); ++k) {
      std::size_t digit = opt.thread_level ? digits[iids[k].tid] : digits[k];
      of_iid[iids[k]] = sorted[digit];
    }

    std::vector<ThreadContext> ctxs;
    std::map<Iid, Fragment> frags;
    for (std::size_t ti = 0; ti < s.threads.size(); ++ti) {
      ctxs.push_back(ThreadContext::build(s, s.threads[ti]));
      std::vector<const SourceInstr*> flat;
      detail::SourceValidator::flatten(s.threads[ti].code, flat);
      for (const auto* ins : flat)
        frags[ins->iid] =
            compile_instruction(*ins, *of_iid[ins->iid], s, ctxs.back());
    }

    CombinedEntry entry;
    entry.source = &s;
    for (std::size_t k = 0; k < iids.size(); ++k)
      entry.assignment.by_profile[of_iid[iids[k]]->name].insert(iids[k]);
    entry.test = combine(s, frags, ctxs,
                         s.name + "-mix" + std::to_string(index));
    if (opt.glue) entry.test = insert_branch_glue(entry.test);
    entry.digest = canonical_hash(entry.test);
    result.groups[entry.digest].push_back(result.entries.size());
    result.entries.push_back(std::move(entry));

    ++index;
    std::size_t k = digit_count;
    bool done = true;
    while (k > 0) {
      --k;
      if (++digits[k] < sorted.size()) {
        done = false;
        break;
      }
      digits[k] = 0;
    }
    if (done || digit_count == 0) break;
  }
  return result;
}

}  // namespace litmix
