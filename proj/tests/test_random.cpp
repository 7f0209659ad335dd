#include <doctest.h>

#include <litmix/checker.hpp>
#include <litmix/parse_source.hpp>
#include <litmix/render.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <random>

using namespace litmix;

namespace {

// Deterministically seeded program generator for differential sweeps. Not a
// shipping feature: the shape generator stays curated, this only stresses
// the engine.
struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
};

SourceLitmusTest random_test(Rng& rng, int serial) {
  static const MemOrder orders[] = {MemOrder::relaxed, MemOrder::acquire,
                                    MemOrder::release, MemOrder::acq_rel,
                                    MemOrder::seq_cst};
  static const char* locs[] = {"x", "y"};

  SourceLitmusTest t;
  t.name = "rand" + std::to_string(serial);
  t.init["x"] = LocDecl{Width::w32, 0, false};
  t.init["y"] = LocDecl{Width::w32, 0, false};

  int nthreads = 2;
  for (int tid = 0; tid < nthreads; ++tid) {
    SourceThread th;
    th.tid = tid;
    int len = 2 + rng.pick(2);
    int next_reg = 0;
    for (int i = 0; i < len; ++i) {
      SourceInstr ins;
      std::string loc = locs[rng.pick(2)];
      Value v = 1 + rng.pick(2);
      std::string reg = "r" + std::to_string(next_reg++);
      switch (rng.pick(5)) {
        case 0: {
          MemOrder mo = orders[rng.pick(5)];
          if (mo == MemOrder::acquire || mo == MemOrder::acq_rel)
            mo = MemOrder::release;
          ins.op = SourceInstr::Store{loc, v, mo};
          break;
        }
        case 1: {
          MemOrder mo = orders[rng.pick(5)];
          if (mo == MemOrder::release || mo == MemOrder::acq_rel)
            mo = MemOrder::acquire;
          ins.op = SourceInstr::Load{reg, loc, mo};
          break;
        }
        case 2:
          ins.op = SourceInstr::Exchange{reg, loc, v, orders[rng.pick(5)]};
          break;
        case 3:
          ins.op = SourceInstr::FetchAdd{reg, loc, v, orders[rng.pick(5)]};
          break;
        case 4:
          ins.op = SourceInstr::Cas{reg, loc, static_cast<Value>(rng.pick(3)),
                                    v, orders[rng.pick(5)]};
          break;
      }
      th.code.push_back(std::move(ins));
    }
    t.threads.push_back(std::move(th));
  }
  // observe every register through the predicate (values are irrelevant,
  // the projection is what matters)
  for (const auto& th : t.threads) {
    std::set<std::string> regs;
    detail::SourceValidator::collect_regs(th.code, regs);
    for (const auto& r : regs)
      t.pred.atoms.push_back(PredAtom{PredAtom::Kind::reg, th.tid, r, 0});
  }
  if (t.pred.atoms.empty())
    t.pred.atoms.push_back(PredAtom{PredAtom::Kind::mem, -1, "x", 0});
  assign_iids(t);
  validate(t);
  return t;
}

}  // namespace

TEST_CASE("random differential sweep: SC interleavings stay consistent") {
  Rng rng(20240809);
  auto lse = load_profile(fixtures::profile_text("clang-armv8.1-lse"));
  for (int i = 0; i < 60; ++i) {
    auto t = random_test(rng, i);
    CAPTURE(render_source(t));

    auto prob = sim_problem(t);
    auto rc11 = outcomes(prob, rc11_consistent);
    for (const auto& o : oracle::sc_interleavings(t))
      CHECK(rc11.outcomes.count(o));

    auto combined = mix(t, {lse});
    const auto& c = combined.entries[0].test;
    auto cprob = sim_problem_observed(c, t, 2);
    auto arm = outcomes(cprob, arm_consistent);
    for (const auto& o : oracle::sc_interleavings_observed(c, t))
      CHECK(arm.outcomes.count(o));

    // whole-program compilation through a sound profile never shrinks or
    // widens the picture for an all-SC source; for mixed orders it may only
    // add behaviours relative to SC, never lose the SC ones (checked above).
    // Also: the memory projection of every arm outcome must come from some
    // candidate, i.e. simulation stays deterministic across repetition.
    auto arm2 = outcomes(cprob, arm_consistent);
    CHECK(arm.outcomes == arm2.outcomes);
  }
}

TEST_CASE("random differential sweep: saturation equals the oracle") {
  Rng rng(987654321);
  auto lse = load_profile(fixtures::profile_text("clang-armv8.1-lse"));
  for (int i = 0; i < 25; ++i) {
    auto t = random_test(rng, 1000 + i);
    CAPTURE(render_source(t));
    auto combined = mix(t, {lse});
    AsmLitmusTest sat = combined.entries[0].test;
    for (auto& th : sat.threads) {
      std::vector<AsmInstr> code;
      for (const auto& ins : th.code) {
        code.push_back(ins);
        AsmInstr dmb;
        dmb.m = AMnem::DMB;
        dmb.dmb = BarrierKind::ish;
        code.push_back(dmb);
      }
      th.code = std::move(code);
    }
    auto sprob = sim_problem_observed(sat, t, 2);
    auto arm = outcomes(sprob, arm_consistent);
    CHECK(arm.outcomes == oracle::sc_interleavings_observed(sat, t));
  }
}
