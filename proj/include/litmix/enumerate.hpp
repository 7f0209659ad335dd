#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asmtest.hpp"
#include "exec.hpp"
#include "parse_asm.hpp"
#include "paths.hpp"
#include "source.hpp"

namespace litmix {

// One outcome: final values of the projected registers and of every memory
// location. Register keys look like "P0:t" (source) or "P0:X0" (assembly).
using Outcome = std::map<std::string, Value>;
using OutcomeSet = std::set<Outcome>;

inline std::string outcome_str(const Outcome& o) {
  std::string s;
  for (const auto& [k, v] : o) s += k + "=" + to_string(v) + "; ";
  if (!s.empty()) s.pop_back();
  return s;
}

struct RegProj {
  int tid = 0;
  std::string key;      // final_regs key in the thread path
  std::string display;  // outcome key
};

struct SimProblem {
  std::map<std::string, LocDecl> init;
  std::vector<std::vector<ThreadPath>> paths;  // complete paths per thread
  std::vector<RegProj> regs;
  Predicate pred;  // in outcome vocabulary (display names)
  std::uint64_t max_candidates = 10'000'000;
};

namespace detail {

inline std::string display_reg(int tid, const std::string& name) {
  return "P" + std::to_string(tid) + ":" + name;
}

struct CandidateEnum {
  const SimProblem& prob;
  std::function<void(const Execution&)> sink;
  std::uint64_t raw_count = 0;  // leaves visited, guarded by the cap

  // per-candidate state
  std::vector<const ThreadPath*> chosen;
  Execution exec;
  std::vector<std::vector<int>> thread_reads;   // per thread: global read idx per slot
  std::vector<int> reads;                       // global read event indices
  std::map<std::string, std::vector<int>> writes_of_loc;

  void run() {
    chosen.assign(prob.paths.size(), nullptr);
    pick_paths(0);
  }

  void pick_paths(std::size_t t) {
    if (t == prob.paths.size()) {
      build_events();
      return;
    }
    for (const auto& p : prob.paths[t]) {
      if (p.incomplete) continue;
      chosen[t] = &p;
      pick_paths(t + 1);
    }
  }

  void build_events() {
    exec = Execution{};
    thread_reads.assign(chosen.size(), {});
    reads.clear();
    writes_of_loc.clear();

    for (const auto& [loc, d] : prob.init) {
      Event ev;
      ev.idx = exec.n();
      ev.tid = -1;
      ev.kind = EvTpl::Kind::W;
      ev.loc = loc;
      ev.width = d.width;
      ev.val = d.init;
      writes_of_loc[loc].push_back(ev.idx);
      exec.events.push_back(std::move(ev));
    }

    exec.po_order.assign(chosen.size(), {});
    for (std::size_t t = 0; t < chosen.size(); ++t) {
      const ThreadPath& p = *chosen[t];
      thread_reads[t].assign(p.nreads, -1);
      std::vector<int> local_to_global(p.events.size(), -1);
      for (std::size_t k = 0; k < p.events.size(); ++k) {
        const EvTpl& tpl = p.events[k];
        Event ev;
        ev.idx = exec.n();
        ev.tid = static_cast<int>(t);
        ev.kind = tpl.kind;
        ev.loc = tpl.loc;
        ev.width = tpl.width;
        ev.src_level = tpl.src_level;
        ev.mo = tpl.mo;
        ev.acq_strong = tpl.acq_strong;
        ev.acq_pc = tpl.acq_pc;
        ev.rel = tpl.rel;
        ev.exclusive = tpl.exclusive;
        ev.barrier = tpl.barrier;
        ev.dmb_ld_visible = tpl.dmb_ld_visible;
        ev.origin = tpl.origin;
        local_to_global[k] = ev.idx;
        exec.po_order[t].push_back(ev.idx);
        if (tpl.kind == EvTpl::Kind::R || tpl.kind == EvTpl::Kind::RMWr) {
          thread_reads[t][tpl.slot] = ev.idx;
          reads.push_back(ev.idx);
        }
        if (tpl.kind == EvTpl::Kind::W || tpl.kind == EvTpl::Kind::RMWw)
          writes_of_loc[tpl.loc].push_back(ev.idx);
        exec.events.push_back(std::move(ev));
      }
      for (std::size_t k = 0; k < p.events.size(); ++k) {
        const EvTpl& tpl = p.events[k];
        Event& ev = exec.events[local_to_global[k]];
        if (tpl.pair >= 0) ev.pair = local_to_global[tpl.pair];
        for (int s : tpl.data_deps) ev.data_deps.insert(thread_reads[t][s]);
        for (int s : tpl.addr_deps) ev.addr_deps.insert(thread_reads[t][s]);
        for (int s : tpl.ctrl_deps) ev.ctrl_deps.insert(thread_reads[t][s]);
      }
    }

    exec.rf.assign(exec.n(), -1);
    pick_rf(0);
  }

  void pick_rf(std::size_t r) {
    if (r == reads.size()) {
      pick_co();
      return;
    }
    int e = reads[r];
    for (int w : writes_of_loc[exec.events[e].loc]) {
      if (w == exec.events[e].pair) continue;  // cannot read its own write
      exec.rf[e] = w;
      pick_rf(r + 1);
    }
    exec.rf[e] = -1;
  }

  void pick_co() {
    std::vector<std::string> locs;
    for (const auto& [loc, ws] : writes_of_loc) locs.push_back(loc);
    exec.co.clear();
    pick_co_loc(locs, 0);
  }

  void pick_co_loc(const std::vector<std::string>& locs, std::size_t i) {
    if (i == locs.size()) {
      candidate();
      return;
    }
    const auto& ws = writes_of_loc[locs[i]];
    std::vector<int> rest(ws.begin() + 1, ws.end());
    std::sort(rest.begin(), rest.end());
    do {
      std::vector<int> order;
      order.push_back(ws.front());  // init write first
      order.insert(order.end(), rest.begin(), rest.end());
      exec.co[locs[i]] = order;
      pick_co_loc(locs, i + 1);
    } while (std::next_permutation(rest.begin(), rest.end()));
  }

  void candidate() {
    if (++raw_count > prob.max_candidates)
      throw CapError("candidate executions exceed cap " +
                     std::to_string(prob.max_candidates));

    // Resolve values: reads take their source write's value; write values
    // may depend on reads of the same thread. Unresolvable candidates
    // (cyclic value dependencies) are discarded.
    int n = exec.n();
    std::vector<bool> resolved(n, false);
    std::vector<std::vector<Value>> vals(chosen.size());
    for (std::size_t t = 0; t < chosen.size(); ++t)
      vals[t].assign(chosen[t]->nreads, 0);
    for (int e = 0; e < n; ++e) {
      Event& ev = exec.events[e];
      if (ev.is_init()) {
        resolved[e] = true;
      } else if (ev.is_fence()) {
        resolved[e] = true;
      }
    }

    auto tpl_of = [&](int e) -> const EvTpl& {
      int t = exec.events[e].tid;
      int pos = 0;
      for (int x : exec.po_order[t]) {
        if (x == e) break;
        ++pos;
      }
      return chosen[t]->events[pos];
    };

    bool progress = true;
    while (progress) {
      progress = false;
      for (int e = 0; e < n; ++e) {
        if (resolved[e]) continue;
        Event& ev = exec.events[e];
        if (ev.is_read()) {
          int w = exec.rf[e];
          if (w >= 0 && resolved[w]) {
            ev.val = mask_to_width(exec.events[w].val, ev.width);
            const EvTpl& tpl = tpl_of(e);
            vals[ev.tid][tpl.slot] = ev.val;
            resolved[e] = true;
            progress = true;
          }
        } else if (ev.is_write()) {
          const EvTpl& tpl = tpl_of(e);
          bool ready = true;
          for (const ValueExpr* x : {&tpl.wlo, &tpl.whi})
            if (!x->is_const() &&
                !resolved[thread_reads[ev.tid][x->slot]])
              ready = false;
          if (ready) {
            ev.val = tpl.written(vals[ev.tid]);
            resolved[e] = true;
            progress = true;
          }
        }
      }
    }
    for (int e = 0; e < n; ++e)
      if (!resolved[e]) return;  // value cycle

    // path constraints (branch decisions, CAS compares)
    for (std::size_t t = 0; t < chosen.size(); ++t)
      for (const auto& c : chosen[t]->constraints)
        if (!c.holds(vals[t])) return;

    // successful exclusive / RMW atomicity at enumeration level
    if (!rmw_atomic(exec)) return;

    sink(exec);
  }
};

}  // namespace detail

inline void for_each_candidate(const SimProblem& prob,
                               std::function<void(const Execution&)> fn) {
  detail::CandidateEnum en{prob, std::move(fn)};
  en.run();
}

inline std::vector<Execution> enumerate_executions(const SimProblem& prob) {
  std::vector<Execution> out;
  for_each_candidate(prob, [&](const Execution& e) { out.push_back(e); });
  return out;
}

// Problem construction --------------------------------------------------------

inline SimProblem sim_problem(const SourceLitmusTest& t,
                              std::uint64_t max_candidates = 10'000'000) {
  validate(t);
  SimProblem p;
  p.init = t.init;
  for (std::size_t i = 0; i < t.threads.size(); ++i)
    p.paths.push_back(thread_paths(t, static_cast<int>(i)));
  std::set<std::pair<int, std::string>> seen;
  for (const auto& a : t.pred.atoms)
    if (a.kind == PredAtom::Kind::reg && seen.emplace(a.tid, a.name).second)
      p.regs.push_back({a.tid, a.name, detail::display_reg(a.tid, a.name)});
  p.pred = t.pred;
  for (auto& atom : p.pred.atoms)
    if (atom.kind == PredAtom::Kind::reg)
      atom.name = detail::display_reg(atom.tid, atom.name);
  p.max_candidates = max_candidates;
  return p;
}

inline SimProblem sim_problem(const AsmLitmusTest& t, int unroll,
                              std::uint64_t max_candidates = 10'000'000) {
  validate(t);
  SimProblem p;
  p.init = t.init;
  for (std::size_t i = 0; i < t.threads.size(); ++i)
    p.paths.push_back(thread_paths(t, static_cast<int>(i), unroll));
  std::set<std::pair<int, std::string>> seen;
  for (const auto& a : t.pred.atoms) {
    if (a.kind != PredAtom::Kind::reg) continue;
    auto r = reg_from_string(a.name);
    if (!r) throw ValidationError("bad predicate register " + a.name);
    if (seen.emplace(a.tid, a.name).second)
      p.regs.push_back({a.tid, "s" + std::to_string(r->index),
                        detail::display_reg(a.tid, a.name)});
  }
  p.pred = t.pred;
  for (auto& atom : p.pred.atoms)
    if (atom.kind == PredAtom::Kind::reg)
      atom.name = detail::display_reg(atom.tid, atom.name);
  p.max_candidates = max_candidates;
  return p;
}

// Projection through the observation map: outcomes are keyed by the source
// register names, so they compare directly against source outcomes.
inline SimProblem sim_problem_observed(const AsmLitmusTest& t,
                                       const SourceLitmusTest& src, int unroll,
                                       std::uint64_t max_candidates = 10'000'000) {
  validate(t);
  SimProblem p;
  p.init = t.init;
  for (std::size_t i = 0; i < t.threads.size(); ++i)
    p.paths.push_back(thread_paths(t, static_cast<int>(i), unroll));
  std::set<std::pair<int, std::string>> seen;
  for (const auto& a : src.pred.atoms) {
    if (a.kind != PredAtom::Kind::reg) continue;
    if (!seen.emplace(a.tid, a.name).second) continue;
    auto ti = t.obs.regs.find(a.tid);
    if (ti == t.obs.regs.end() || !ti->second.count(a.name))
      throw Error("observation map is missing P" + std::to_string(a.tid) +
                  ":" + a.name);
    const AReg& r = ti->second.at(a.name);
    p.regs.push_back({a.tid, "s" + std::to_string(r.index),
                      detail::display_reg(a.tid, a.name)});
  }
  p.pred = src.pred;
  for (auto& atom : p.pred.atoms)
    if (atom.kind == PredAtom::Kind::reg)
      atom.name = detail::display_reg(atom.tid, atom.name);
  p.max_candidates = max_candidates;
  return p;
}

// Outcome extraction ----------------------------------------------------------

struct SimResult {
  OutcomeSet outcomes;
  std::uint64_t candidates = 0;
  std::uint64_t consistent = 0;

  bool predicate_satisfied(const Predicate& pred) const {
    for (const auto& o : outcomes) {
      bool all = true;
      for (const auto& a : pred.atoms) {
        auto it = o.find(a.name);
        if (it == o.end() || it->second != a.val) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }
};

// Outcomes of the test under a consistency predicate: the final register
// values of the projected registers plus the coherence-final value of every
// location, over all consistent candidate executions.
inline SimResult outcomes(const SimProblem& prob,
                          const std::function<bool(const Execution&)>& consistent) {
  SimResult res;
  detail::CandidateEnum en{prob, {}};
  // The register projection needs the chosen thread paths, so the sink is
  // installed after construction and reads them from the enumerator itself.
  en.sink = [&](const Execution& e) {
    ++res.candidates;
    if (!consistent(e)) return;
    ++res.consistent;
    Outcome o;
    for (const auto& [loc, ws] : e.co) o[loc] = e.final_value(loc);
    std::vector<std::vector<Value>> vals(en.chosen.size());
    for (std::size_t t = 0; t < en.chosen.size(); ++t) {
      vals[t].assign(en.chosen[t]->nreads, 0);
      int pos = 0;
      for (int idx : e.po_order[t]) {
        const EvTpl& tpl = en.chosen[t]->events[pos++];
        if (tpl.slot >= 0) vals[t][tpl.slot] = e.events[idx].val;
      }
    }
    for (const auto& rp : prob.regs) {
      const auto& fr = en.chosen[rp.tid]->final_regs;
      auto it = fr.find(rp.key);
      Value v = it == fr.end() ? 0 : it->second.eval(vals[rp.tid]);
      o[rp.display] = v;
    }
    res.outcomes.insert(std::move(o));
  };
  en.run();
  return res;
}

}  // namespace litmix
