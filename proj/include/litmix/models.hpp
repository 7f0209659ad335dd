#pragma once

#include <functional>
#include <map>
#include <string>

#include "exec.hpp"
#include "relation.hpp"

namespace litmix {

// RC11-style source model -----------------------------------------------------

namespace detail {

// Release sequence of a write: the write itself extended through chains of
// same-location RMWs reading from the tail.
inline void release_sequence(const Execution& e, int w, std::vector<int>& out) {
  out.push_back(w);
  for (int r = 0; r < e.n(); ++r) {
    if (e.rf[r] != w) continue;
    const Event& rr = e.events[r];
    if (rr.kind == EvTpl::Kind::RMWr && rr.pair >= 0)
      release_sequence(e, rr.pair, out);
  }
}

inline Rel rc11_sw(const Execution& e, const Rel& po) {
  Rel sw(e.n());
  for (int w = 0; w < e.n(); ++w) {
    const Event& ew = e.events[w];
    if (!ew.is_write() || ew.is_init()) continue;
    bool rel_anchor = at_least_release(ew.mo);
    if (!rel_anchor) {
      for (int f = 0; f < e.n() && !rel_anchor; ++f)
        if (e.events[f].is_fence() && at_least_release(e.events[f].mo) &&
            po.has(f, w))
          rel_anchor = true;
    }
    if (!rel_anchor) continue;
    std::vector<int> rs;
    release_sequence(e, w, rs);
    for (int wr : rs) {
      for (int r = 0; r < e.n(); ++r) {
        if (e.rf[r] != wr) continue;
        const Event& er = e.events[r];
        bool acq_anchor = at_least_acquire(er.mo);
        if (!acq_anchor) {
          for (int f = 0; f < e.n() && !acq_anchor; ++f)
            if (e.events[f].is_fence() && at_least_acquire(e.events[f].mo) &&
                po.has(r, f))
              acq_anchor = true;
        }
        if (acq_anchor) sw.add(w, r);
      }
    }
  }
  return sw;
}

}  // namespace detail

// Consistency under the repaired C11 axioms used here:
//   (1) COHERENCE    eco ; hb irreflexive
//   (2) ATOMICITY    RMW reads the immediate coherence predecessor
//   (3) SC           [sc] ; (hb | eco) ; [sc] acyclic
//   (4) NO-THIN-AIR  po | rf acyclic
inline bool rc11_consistent(const Execution& e) {
  Rel po = e.po_rel();
  Rel rf = e.rf_rel();
  Rel co = e.co_rel();
  Rel fr = e.fr_rel();
  Rel eco = (rf | co | fr).closure();

  Rel hb = (po | detail::rc11_sw(e, po)).closure();
  if (!eco.seq(hb).irreflexive()) return false;

  if (!rmw_atomic(e)) return false;

  Rel sc_part(e.n());
  Rel hb_eco = hb | eco;
  for (int a = 0; a < e.n(); ++a)
    for (int b = 0; b < e.n(); ++b)
      if (hb_eco.has(a, b) && e.events[a].mo == MemOrder::seq_cst &&
          e.events[b].mo == MemOrder::seq_cst && !e.events[a].is_init() &&
          !e.events[b].is_init())
        sc_part.add(a, b);
  if (!sc_part.acyclic()) return false;

  if (!(po | rf).acyclic()) return false;
  return true;
}

// Simplified unified Arm target model ----------------------------------------

namespace detail {

// Local ordered-before over same-thread access pairs.
inline Rel arm_lob(const Execution& e) {
  int n = e.n();
  Rel lob(n);
  for (const auto& order : e.po_order) {
    int len = static_cast<int>(order.size());
    // prefix barrier counts by program-order position
    std::vector<int> full(len + 1, 0), ld(len + 1, 0), st(len + 1, 0);
    for (int i = 0; i < len; ++i) {
      const Event& ev = e.events[order[i]];
      bool is_dmb = ev.is_fence() && !ev.src_level;
      full[i + 1] = full[i] + (is_dmb && ev.barrier == BarrierKind::ish);
      ld[i + 1] = ld[i] + (is_dmb && ev.barrier == BarrierKind::ishld);
      st[i + 1] = st[i] + (is_dmb && ev.barrier == BarrierKind::ishst);
    }
    for (int i = 0; i < len; ++i) {
      const Event& ea = e.events[order[i]];
      if (!ea.is_access()) continue;
      int a = order[i];
      // RMW / successful exclusive pair
      if (ea.kind == EvTpl::Kind::RMWr && ea.pair >= 0) lob.add(a, ea.pair);
      for (int j = i + 1; j < len; ++j) {
        const Event& eb = e.events[order[j]];
        if (!eb.is_access()) continue;
        int b = order[j];

        if (full[j] - full[i + 1] > 0) lob.add(a, b);
        if (ld[j] - ld[i + 1] > 0 && ea.is_read() && ea.dmb_ld_visible)
          lob.add(a, b);
        if (st[j] - st[i + 1] > 0 && ea.is_write() && eb.is_write())
          lob.add(a, b);

        // one-way orderings
        if (ea.is_read() && (ea.acq_strong || ea.acq_pc)) lob.add(a, b);
        if (eb.is_write() && eb.rel) lob.add(a, b);
        if (ea.is_write() && ea.rel && eb.is_read() && eb.acq_strong)
          lob.add(a, b);

        // dependencies out of a read
        if (ea.is_read()) {
          if (eb.is_write() && eb.data_deps.count(a)) lob.add(a, b);
          if (eb.addr_deps.count(a)) lob.add(a, b);
          if (eb.is_write() && eb.ctrl_deps.count(a)) lob.add(a, b);
        }
      }
    }
  }
  return lob;
}

}  // namespace detail

// Consistency under the simplified Arm axioms:
//   (1) SC-PER-LOCATION  per location, po-loc | rf | co | fr acyclic
//   (2) ATOMICITY        as in rc11_consistent, plus exclusive pairs
//   (3) EXTERNAL         ob = (lob | rfe | coe | fre)+ irreflexive
inline bool arm_consistent(const Execution& e) {
  int n = e.n();
  Rel po = e.po_rel();
  Rel rf = e.rf_rel();
  Rel co = e.co_rel();
  Rel fr = e.fr_rel();

  Rel po_loc(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (po.has(a, b) && e.events[a].is_access() && e.events[b].is_access() &&
          e.events[a].loc == e.events[b].loc)
        po_loc.add(a, b);
  if (!(po_loc | rf | co | fr).acyclic()) return false;

  if (!rmw_atomic(e)) return false;

  Rel ob = detail::arm_lob(e) | e.external(rf) | e.external(co) |
           e.external(fr);
  if (!ob.acyclic()) return false;
  return true;
}

// Registry --------------------------------------------------------------------

struct Model {
  std::string name;
  bool source_level = true;
  std::function<bool(const Execution&)> consistent;
};

inline const Model& model_by_name(const std::string& name) {
  static const std::map<std::string, Model> registry = {
      {"rc11", Model{"rc11", true, rc11_consistent}},
      {"arm", Model{"arm", false, arm_consistent}},
  };
  auto it = registry.find(name);
  if (it == registry.end()) throw Error("unknown model '" + name + "'");
  return it->second;
}

}  // namespace litmix
