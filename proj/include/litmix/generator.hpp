#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "profile.hpp"
#include "source.hpp"

namespace litmix {

// Only shapes with known predicate patterns are generated. The RMW variants
// replace a store with a read-modify-write on the same location.
enum class Shape : std::uint8_t { SB, MP, LB, SB_RMW, MP_RMW };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::SB: return "SB";
    case Shape::MP: return "MP";
    case Shape::LB: return "LB";
    case Shape::SB_RMW: return "SB-RMW";
    case Shape::MP_RMW: return "MP-RMW";
  }
  return "?";
}

inline std::optional<Shape> shape_from_string(const std::string& s) {
  if (s == "SB") return Shape::SB;
  if (s == "MP") return Shape::MP;
  if (s == "LB") return Shape::LB;
  if (s == "SB-RMW") return Shape::SB_RMW;
  if (s == "MP-RMW") return Shape::MP_RMW;
  return std::nullopt;
}

struct GenMatrix {
  std::vector<Shape> shapes;
  std::vector<Width> widths;
  std::vector<MemOrder> orders;
  // RMW kinds to instantiate in the *-RMW shapes
  std::vector<OpKind> rmw_ops = {OpKind::exchange, OpKind::fetch_add,
                                 OpKind::cas};
  bool rmw_discard_variants = true;  // also emit discarded-result variants
};

namespace detail {

inline std::string order_tag(MemOrder mo) {
  switch (mo) {
    case MemOrder::relaxed: return "rlx";
    case MemOrder::acquire: return "acq";
    case MemOrder::release: return "rel";
    case MemOrder::acq_rel: return "ar";
    case MemOrder::seq_cst: return "sc";
  }
  return "?";
}

inline SourceInstr mk_store(const std::string& loc, Value v, MemOrder mo) {
  SourceInstr i;
  i.op = SourceInstr::Store{loc, v, mo};
  return i;
}

inline SourceInstr mk_load(const std::string& reg, const std::string& loc,
                           MemOrder mo) {
  SourceInstr i;
  i.op = SourceInstr::Load{reg, loc, mo};
  return i;
}

// RMW that writes `target` to loc: exchange(target), fetch_add(target-init),
// or cas(expected -> target). For the generated shapes the location starts
// at 0 and has one writing thread, so all three leave the same final value.
inline SourceInstr mk_rmw(OpKind kind, const std::string& reg,
                          const std::string& loc, Value expected, Value target,
                          MemOrder mo) {
  SourceInstr i;
  switch (kind) {
    case OpKind::exchange:
      i.op = SourceInstr::Exchange{reg, loc, target, mo};
      break;
    case OpKind::fetch_add:
      i.op = SourceInstr::FetchAdd{reg, loc, target - expected, mo};
      break;
    case OpKind::cas:
      i.op = SourceInstr::Cas{reg, loc, expected, target, mo};
      break;
    default:
      throw Error("not an RMW kind");
  }
  return i;
}

inline PredAtom reg_atom(int tid, const std::string& reg, Value v) {
  return PredAtom{PredAtom::Kind::reg, tid, reg, v};
}

inline PredAtom mem_atom(const std::string& loc, Value v) {
  return PredAtom{PredAtom::Kind::mem, -1, loc, v};
}

}  // namespace detail

// Instantiates one shape at one width with a single order applied to every
// access (invalid order/op combinations are corrected to the strongest valid
// one below the requested order: loads drop release, stores drop acquire).
inline SourceLitmusTest instantiate_shape(Shape shape, Width w, MemOrder mo,
                                          OpKind rmw = OpKind::exchange,
                                          bool rmw_discard = true) {
  using namespace detail;
  MemOrder load_mo = (mo == MemOrder::release || mo == MemOrder::acq_rel)
                         ? MemOrder::acquire
                         : mo;
  MemOrder store_mo = (mo == MemOrder::acquire || mo == MemOrder::acq_rel)
                          ? MemOrder::release
                          : mo;
  std::string rmw_reg = rmw_discard ? kDiscard : "r9";

  SourceLitmusTest t;
  std::string suffix = std::string("_w") + std::to_string(width_bits(w)) +
                       "_" + order_tag(mo);
  t.init["x"] = LocDecl{w, 0, false};
  t.init["y"] = LocDecl{w, 0, false};

  switch (shape) {
    case Shape::SB: {
      t.name = "SB" + suffix;
      t.threads.push_back(
          {0, {mk_store("x", 1, store_mo), mk_load("t", "y", load_mo)}});
      t.threads.push_back(
          {1, {mk_store("y", 1, store_mo), mk_load("u", "x", load_mo)}});
      t.pred.atoms = {reg_atom(0, "t", 0), reg_atom(1, "u", 0)};
      break;
    }
    case Shape::SB_RMW: {
      t.name = std::string("SB-RMW-") + to_string(rmw) +
               (rmw_discard ? "" : "-live") + suffix;
      t.threads.push_back({0,
                           {mk_rmw(rmw, rmw_reg, "x", 0, 1, mo),
                            mk_load("t", "y", load_mo)}});
      t.threads.push_back({1,
                           {mk_rmw(rmw, rmw_reg, "y", 0, 1, mo),
                            mk_load("u", "x", load_mo)}});
      t.pred.atoms = {reg_atom(0, "t", 0), reg_atom(1, "u", 0)};
      break;
    }
    case Shape::MP: {
      t.name = "MP" + suffix;
      t.threads.push_back(
          {0, {mk_store("x", 1, store_mo), mk_store("y", 1, store_mo)}});
      t.threads.push_back(
          {1, {mk_load("r0", "y", load_mo), mk_load("r1", "x", load_mo)}});
      t.pred.atoms = {reg_atom(1, "r0", 1), reg_atom(1, "r1", 0)};
      break;
    }
    case Shape::MP_RMW: {
      // Message passing where the flag is taken by a read-modify-write; the
      // final flag value 2 certifies the RMW read the store of 1.
      t.name = std::string("MP-RMW-") + to_string(rmw) +
               (rmw_discard ? "" : "-live") + suffix;
      t.threads.push_back(
          {0, {mk_store("x", 1, store_mo), mk_store("y", 1, store_mo)}});
      t.threads.push_back({1,
                           {mk_rmw(rmw, rmw_reg, "y", 1, 2, mo),
                            mk_load("r0", "x", load_mo)}});
      t.pred.atoms = {reg_atom(1, "r0", 0), mem_atom("y", 2)};
      break;
    }
    case Shape::LB: {
      t.name = "LB" + suffix;
      t.threads.push_back(
          {0, {mk_load("t", "x", load_mo), mk_store("y", 1, store_mo)}});
      t.threads.push_back(
          {1, {mk_load("u", "y", load_mo), mk_store("x", 1, store_mo)}});
      t.pred.atoms = {reg_atom(0, "t", 1), reg_atom(1, "u", 1)};
      break;
    }
  }
  assign_iids(t);
  validate(t);
  return t;
}

// Removes tests equal to an earlier test under thread permutation plus
// location and register renaming. Idempotent; never removes non-isomorphic
// tests (canonical-form comparison).
inline std::vector<SourceLitmusTest> symmetry_reduce(
    std::vector<SourceLitmusTest> tests) {
  std::vector<SourceLitmusTest> out;
  std::set<std::string> seen;
  for (auto& t : tests)
    if (seen.insert(canonical_source_key(t)).second)
      out.push_back(std::move(t));
  return out;
}

// Cartesian instantiation of each shape over the matrix, filtered to valid
// combinations, then symmetry-reduced. Only widths mapped by the given
// profiles are emitted when a profile set is supplied.
inline std::vector<SourceLitmusTest> generate(
    const GenMatrix& m,
    const std::vector<CompilerProfile>* active_profiles = nullptr) {
  if (m.shapes.empty() || m.widths.empty() || m.orders.empty())
    throw Error("empty generation matrix");
  auto width_mapped = [&](Width w) {
    if (!active_profiles) return true;
    for (const auto& p : *active_profiles)
      for (const auto& [key, entry] : p.table)
        if (key.w == w && key.op != OpKind::fence) return true;
    return false;
  };

  std::vector<SourceLitmusTest> tests;
  for (Shape shape : m.shapes) {
    for (Width w : m.widths) {
      if ((w == Width::w8 || w == Width::w16) && !width_mapped(w)) continue;
      for (MemOrder mo : m.orders) {
        if (shape == Shape::SB_RMW || shape == Shape::MP_RMW) {
          for (OpKind rmw : m.rmw_ops) {
            if (w == Width::w128 && rmw == OpKind::fetch_add)
              continue;  // 128-bit fetch_add is outside the width invariant
            tests.push_back(instantiate_shape(shape, w, mo, rmw, true));
            if (m.rmw_discard_variants)
              tests.push_back(instantiate_shape(shape, w, mo, rmw, false));
          }
        } else {
          tests.push_back(instantiate_shape(shape, w, mo));
        }
      }
    }
  }
  return symmetry_reduce(std::move(tests));
}

}  // namespace litmix
