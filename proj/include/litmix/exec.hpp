#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "paths.hpp"
#include "relation.hpp"

namespace litmix {

// Fully resolved event of one candidate execution. Init writes occupy the
// first slots with tid -1.
struct Event {
  int idx = 0;
  int tid = -1;
  EvTpl::Kind kind = EvTpl::Kind::W;
  std::string loc;
  Width width = Width::w32;
  Value val = 0;  // value read or written
  bool src_level = false;
  MemOrder mo = MemOrder::relaxed;
  bool acq_strong = false;
  bool acq_pc = false;
  bool rel = false;
  bool exclusive = false;
  BarrierKind barrier = BarrierKind::ish;
  bool dmb_ld_visible = true;
  int pair = -1;  // global index of the RMW partner
  Iid origin;
  std::set<int> data_deps, addr_deps, ctrl_deps;  // global event indices

  bool is_read() const {
    return kind == EvTpl::Kind::R || kind == EvTpl::Kind::RMWr;
  }
  bool is_write() const {
    return kind == EvTpl::Kind::W || kind == EvTpl::Kind::RMWw;
  }
  bool is_fence() const { return kind == EvTpl::Kind::F; }
  bool is_access() const { return !is_fence(); }
  bool is_init() const { return tid < 0; }
};

// Candidate execution: events plus po, rf, and co; fr is derived.
struct Execution {
  std::vector<Event> events;
  std::vector<std::vector<int>> po_order;        // per thread, event indices in order
  std::vector<int> rf;                           // per event: source write, -1 for non-reads
  std::map<std::string, std::vector<int>> co;    // per location, init first

  int n() const { return static_cast<int>(events.size()); }

  Rel po_rel() const {
    Rel r(n());
    for (const auto& th : po_order)
      for (std::size_t i = 0; i < th.size(); ++i)
        for (std::size_t j = i + 1; j < th.size(); ++j)
          r.add(th[i], th[j]);
    return r;
  }

  Rel rf_rel() const {
    Rel r(n());
    for (int e = 0; e < n(); ++e)
      if (rf[e] >= 0) r.add(rf[e], e);
    return r;
  }

  Rel co_rel() const {
    Rel r(n());
    for (const auto& [loc, ws] : co)
      for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = i + 1; j < ws.size(); ++j)
          r.add(ws[i], ws[j]);
    return r;
  }

  // fr = rf^-1 ; co : from each read to every write co-after its source.
  Rel fr_rel() const {
    Rel r(n());
    for (int e = 0; e < n(); ++e) {
      if (rf[e] < 0) continue;
      const auto& ws = co.at(events[e].loc);
      bool after = false;
      for (int w : ws) {
        if (after) r.add(e, w);
        if (w == rf[e]) after = true;
      }
    }
    return r;
  }

  // Restriction of a relation to pairs of different threads (init counts as
  // external to every thread).
  Rel external(const Rel& r) const {
    Rel out(n());
    for (int a = 0; a < n(); ++a)
      for (int b = 0; b < n(); ++b)
        if (r.has(a, b) && events[a].tid != events[b].tid) out.add(a, b);
    return out;
  }

  int co_position(int w) const {
    const auto& ws = co.at(events[w].loc);
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (ws[i] == w) return static_cast<int>(i);
    return -1;
  }

  // Immediate coherence predecessor of a write.
  int co_pred(int w) const {
    int pos = co_position(w);
    if (pos <= 0) return -1;
    return co.at(events[w].loc)[pos - 1];
  }

  Value final_value(const std::string& loc) const {
    const auto& ws = co.at(loc);
    return events[ws.back()].val;
  }
};

// RMW pairs (including successful exclusive pairs) read the immediate
// coherence predecessor of their write.
inline bool rmw_atomic(const Execution& e) {
  for (const auto& ev : e.events) {
    if (ev.kind != EvTpl::Kind::RMWw) continue;
    int r = ev.pair;
    if (r < 0) return false;
    if (e.rf[r] != e.co_pred(ev.idx)) return false;
  }
  return true;
}

}  // namespace litmix
