#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "source.hpp"

namespace litmix {

// One unified vocabulary covers AArch32-style listings (LDA/STL/R-registers)
// and AArch64 mnemonics; semantics are attached per mnemonic in the target
// model, so LDA behaves as LDAR and STL as STLR.
enum class AMnem : std::uint8_t {
  MOV,
  LDR, LDA, LDAR, LDAPR,
  STR, STL, STLR,
  LDXR, LDAXR, STXR, STLXR,
  SWP, SWPA, SWPL, SWPAL,
  CAS, CASA, CASL, CASAL,
  CASP, CASPAL,
  LDADD, LDADDA, LDADDL, LDADDAL,
  LDP, STP, LDXP, STXP, STLXP,
  DMB,
  CBZ, CBNZ, B, BL, RET,
  LABEL,  // pseudo-instruction: label definition
};

inline const char* to_string(AMnem m) {
  switch (m) {
    case AMnem::MOV: return "MOV";
    case AMnem::LDR: return "LDR";
    case AMnem::LDA: return "LDA";
    case AMnem::LDAR: return "LDAR";
    case AMnem::LDAPR: return "LDAPR";
    case AMnem::STR: return "STR";
    case AMnem::STL: return "STL";
    case AMnem::STLR: return "STLR";
    case AMnem::LDXR: return "LDXR";
    case AMnem::LDAXR: return "LDAXR";
    case AMnem::STXR: return "STXR";
    case AMnem::STLXR: return "STLXR";
    case AMnem::SWP: return "SWP";
    case AMnem::SWPA: return "SWPA";
    case AMnem::SWPL: return "SWPL";
    case AMnem::SWPAL: return "SWPAL";
    case AMnem::CAS: return "CAS";
    case AMnem::CASA: return "CASA";
    case AMnem::CASL: return "CASL";
    case AMnem::CASAL: return "CASAL";
    case AMnem::CASP: return "CASP";
    case AMnem::CASPAL: return "CASPAL";
    case AMnem::LDADD: return "LDADD";
    case AMnem::LDADDA: return "LDADDA";
    case AMnem::LDADDL: return "LDADDL";
    case AMnem::LDADDAL: return "LDADDAL";
    case AMnem::LDP: return "LDP";
    case AMnem::STP: return "STP";
    case AMnem::LDXP: return "LDXP";
    case AMnem::STXP: return "STXP";
    case AMnem::STLXP: return "STLXP";
    case AMnem::DMB: return "DMB";
    case AMnem::CBZ: return "CBZ";
    case AMnem::CBNZ: return "CBNZ";
    case AMnem::B: return "B";
    case AMnem::BL: return "BL";
    case AMnem::RET: return "RET";
    case AMnem::LABEL: return "LABEL";
  }
  return "?";
}

enum class BarrierKind : std::uint8_t { ish, ishld, ishst };

inline const char* to_string(BarrierKind b) {
  switch (b) {
    case BarrierKind::ish: return "ISH";
    case BarrierKind::ishld: return "ISHLD";
    case BarrierKind::ishst: return "ISHST";
  }
  return "?";
}

// Architectural register: identity is the slot index; the style (W/X/R) is
// how the listing spells it. Index 31 is the zero register.
struct AReg {
  std::uint8_t index = 0;
  enum class Style : std::uint8_t { W, X, R } style = Style::W;

  static constexpr std::uint8_t kZero = 31;

  bool is_zero() const { return index == kZero; }

  bool operator==(const AReg& o) const {
    return index == o.index && style == o.style;
  }
  auto operator<=>(const AReg& o) const {
    if (index != o.index) return index <=> o.index;
    return style <=> o.style;
  }

  std::string str() const {
    if (index == kZero)
      return style == Style::X ? "XZR" : "WZR";
    char prefix = style == Style::W ? 'W' : style == Style::X ? 'X' : 'R';
    return std::string(1, prefix) + std::to_string(index);
  }
};

struct AsmInstr {
  AMnem m = AMnem::MOV;
  std::vector<AReg> regs;    // operand registers in listing order
  std::optional<Value> imm;  // MOV immediate
  std::string label;         // branch target or LABEL name
  BarrierKind dmb = BarrierKind::ish;
  std::optional<AReg> addr;  // address register of the memory operand
  std::optional<Iid> origin; // source instruction this came from, if mixed

  bool operator==(const AsmInstr& o) const {
    return m == o.m && regs == o.regs && imm == o.imm && label == o.label &&
           (m != AMnem::DMB || dmb == o.dmb) && addr == o.addr;
  }
};

struct AsmThread {
  int tid = 0;
  std::vector<AsmInstr> code;

  bool operator==(const AsmThread&) const = default;
};

// Per thread, source register -> architectural register. Memory locations map
// to themselves, so only registers are recorded.
struct ObservationMap {
  // obs[tid][source register] = architectural register slot
  std::map<int, std::map<std::string, AReg>> regs;

  bool empty() const { return regs.empty(); }
  bool operator==(const ObservationMap&) const = default;
};

struct AsmLitmusTest {
  std::string name;
  std::map<std::string, LocDecl> init;
  // per thread: address register -> location
  std::map<int, std::map<AReg, std::string>> addr_of;
  std::vector<AsmThread> threads;
  Predicate pred;  // register atoms name architectural registers ("X0", "R1")
  ObservationMap obs;
  bool glued = false;

  bool operator==(const AsmLitmusTest& o) const {
    return name == o.name && init == o.init && addr_of == o.addr_of &&
           threads == o.threads && pred == o.pred && obs == o.obs;
  }

  const std::string* location_of(int tid, const AReg& r) const {
    auto t = addr_of.find(tid);
    if (t == addr_of.end()) return nullptr;
    for (const auto& [reg, loc] : t->second)
      if (reg.index == r.index) return &loc;
    return nullptr;
  }
};

inline bool is_memory_read(AMnem m) {
  switch (m) {
    case AMnem::LDR: case AMnem::LDA: case AMnem::LDAR: case AMnem::LDAPR:
    case AMnem::LDXR: case AMnem::LDAXR: case AMnem::LDP: case AMnem::LDXP:
      return true;
    default: return false;
  }
}

inline bool is_memory_write(AMnem m) {
  switch (m) {
    case AMnem::STR: case AMnem::STL: case AMnem::STLR:
    case AMnem::STXR: case AMnem::STLXR:
    case AMnem::STP: case AMnem::STXP: case AMnem::STLXP:
      return true;
    default: return false;
  }
}

inline bool is_rmw(AMnem m) {
  switch (m) {
    case AMnem::SWP: case AMnem::SWPA: case AMnem::SWPL: case AMnem::SWPAL:
    case AMnem::CAS: case AMnem::CASA: case AMnem::CASL: case AMnem::CASAL:
    case AMnem::CASP: case AMnem::CASPAL:
    case AMnem::LDADD: case AMnem::LDADDA: case AMnem::LDADDL: case AMnem::LDADDAL:
      return true;
    default: return false;
  }
}

// Instructions that store (or may store) to memory; the read-only-location
// lint flags mappings whose loads instantiate any of these.
inline bool can_store(AMnem m) {
  return is_memory_write(m) || is_rmw(m);
}

inline bool is_exclusive_load(AMnem m) {
  return m == AMnem::LDXR || m == AMnem::LDAXR || m == AMnem::LDXP;
}

inline bool is_exclusive_store(AMnem m) {
  return m == AMnem::STXR || m == AMnem::STLXR || m == AMnem::STXP ||
         m == AMnem::STLXP;
}

inline bool acquires_strong(AMnem m) {
  switch (m) {
    case AMnem::LDA: case AMnem::LDAR: case AMnem::LDAXR:
    case AMnem::SWPA: case AMnem::SWPAL:
    case AMnem::CASA: case AMnem::CASAL: case AMnem::CASPAL:
    case AMnem::LDADDA: case AMnem::LDADDAL:
      return true;
    default: return false;
  }
}

inline bool acquires_pc(AMnem m) { return m == AMnem::LDAPR; }

inline bool releases(AMnem m) {
  switch (m) {
    case AMnem::STL: case AMnem::STLR: case AMnem::STLXR: case AMnem::STLXP:
    case AMnem::SWPL: case AMnem::SWPAL:
    case AMnem::CASL: case AMnem::CASAL: case AMnem::CASPAL:
    case AMnem::LDADDL: case AMnem::LDADDAL:
      return true;
    default: return false;
  }
}

namespace detail {

struct AsmValidator {
  const AsmLitmusTest& t;
  static constexpr int kMaxThreads = 5;
  // Combined and glued tests legitimately exceed the source-level size
  // bound, so the assembly limit is looser.
  static constexpr int kMaxInstrs = 160;

  void require(bool ok, const std::string& msg) const {
    if (!ok) throw ValidationError(msg);
  }

  void run() const {
    require(!t.threads.empty(), "no threads");
    require(static_cast<int>(t.threads.size()) <= kMaxThreads,
            "more than " + std::to_string(kMaxThreads) + " threads");
    for (int i = 0; i < static_cast<int>(t.threads.size()); ++i)
      require(t.threads[i].tid == i,
              "thread P" + std::to_string(t.threads[i].tid) +
                  " out of order (expected P" + std::to_string(i) + ")");
    int total = 0;
    for (const auto& th : t.threads) total += static_cast<int>(th.code.size());
    require(total <= kMaxInstrs,
            "more than " + std::to_string(kMaxInstrs) + " instructions");

    for (const auto& th : t.threads) {
      std::set<std::string> labels;
      for (const auto& ins : th.code)
        if (ins.m == AMnem::LABEL) {
          require(labels.insert(ins.label).second,
                  "duplicate label '" + ins.label + "' in P" +
                      std::to_string(th.tid));
        }
      bool saw_exclusive_load = false;
      for (const auto& ins : th.code) {
        if (is_exclusive_load(ins.m)) saw_exclusive_load = true;
        if (is_exclusive_store(ins.m))
          require(saw_exclusive_load,
                  "exclusive store without a prior exclusive load in P" +
                      std::to_string(th.tid));
        if (ins.m == AMnem::CBZ || ins.m == AMnem::CBNZ || ins.m == AMnem::B ||
            ins.m == AMnem::BL)
          require(labels.count(ins.label) > 0,
                  "branch to undefined label '" + ins.label + "' in P" +
                      std::to_string(th.tid));
        if (ins.addr) {
          require(t.location_of(th.tid, *ins.addr) != nullptr,
                  "address register " + ins.addr->str() + " in P" +
                      std::to_string(th.tid) + " is not bound to a location");
        }
      }
    }

    for (const auto& a : t.pred.atoms) {
      if (a.kind == PredAtom::Kind::mem)
        require(t.init.count(a.name) > 0,
                "predicate names undeclared location '" + a.name + "'");
      else
        require(a.tid >= 0 && a.tid < static_cast<int>(t.threads.size()),
                "predicate names unknown thread " + std::to_string(a.tid));
    }

    // The observation map must be injective per thread and, when present,
    // cover every register the predicate names.
    for (const auto& [tid, m] : t.obs.regs) {
      std::set<std::uint8_t> used;
      for (const auto& [src, reg] : m)
        require(used.insert(reg.index).second,
                "observation map for P" + std::to_string(tid) +
                    " is not injective");
    }
    if (!t.obs.empty()) {
      for (const auto& a : t.pred.atoms) {
        if (a.kind != PredAtom::Kind::reg) continue;
        auto ti = t.obs.regs.find(a.tid);
        bool covered = false;
        if (ti != t.obs.regs.end())
          for (const auto& [src, reg] : ti->second)
            if (("W" + std::to_string(reg.index) == a.name) ||
                ("X" + std::to_string(reg.index) == a.name) ||
                ("R" + std::to_string(reg.index) == a.name))
              covered = true;
        require(covered, "observation map does not cover predicate register " +
                             std::to_string(a.tid) + ":" + a.name);
      }
    }
  }
};

}  // namespace detail

inline void validate(const AsmLitmusTest& t) { detail::AsmValidator{t}.run(); }

}  // namespace litmix
