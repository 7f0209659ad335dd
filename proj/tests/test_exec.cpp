#include <doctest.h>

#include <litmix/enumerate.hpp>
#include <litmix/generator.hpp>
#include <litmix/mixer.hpp>
#include <litmix/models.hpp>
#include <litmix/parse_asm.hpp>
#include <litmix/parse_source.hpp>
#include <litmix/relation.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace litmix;

TEST_CASE("relation calculus basics") {
  Rel empty(3);
  CHECK(empty.acyclic());

  Rel two(2);
  two.add(0, 1);
  two.add(1, 0);
  CHECK_FALSE(two.acyclic());

  // closure of a chain of n events has n(n-1)/2 pairs
  int n = 7;
  Rel chain(n);
  for (int i = 0; i + 1 < n; ++i) chain.add(i, i + 1);
  CHECK(chain.closure().count() == n * (n - 1) / 2);
  CHECK(chain.acyclic());
}

TEST_CASE("straight-line threads have exactly one skeleton") {
  auto sb = parse_source(fixtures::litmus_text("SB"));
  CHECK(thread_paths(sb, 0).size() == 1);
  CHECK(thread_paths(sb, 1).size() == 1);
}

TEST_CASE("conditionals fork into taken and not-taken skeletons") {
  auto t = parse_source(
      "C cond\n{ x : 32 = 0; y : 32 = 0; }\n"
      "P0 { r0 = load(x,relaxed); if (r0 == 1) { store(y,1,relaxed); } }\n"
      "exists (y = 1)\n");
  auto paths = thread_paths(t, 0);
  REQUIRE(paths.size() == 2);
  int with_store = 0;
  for (const auto& p : paths) {
    REQUIRE(p.constraints.size() == 1);
    if (p.events.size() == 2) {
      ++with_store;
      CHECK(p.constraints[0].equal);  // taken: r0 == 1
    } else {
      CHECK_FALSE(p.constraints[0].equal);
    }
  }
  CHECK(with_store == 1);
}

TEST_CASE("exclusive retry loops expand success and bounded failure paths") {
  // the Table-4 style exchange loop compiled from the lse-free profile
  auto src = parse_source(
      "C xchg\n{ x : 32 = 0; }\nP0 { r0 = exchange(x,1,release); }\n"
      "exists (P0:r0 = 0)\n");
  auto armv8 = load_profile(fixtures::profile_text("clang-armv8-O3"));
  auto combined = mix(src, {armv8});
  const auto& t = combined.entries[0].test;

  auto paths2 = thread_paths(t, 0, 2);
  int complete = 0, incomplete = 0;
  for (const auto& p : paths2) (p.incomplete ? incomplete : complete)++;
  CHECK(complete == 2);  // success first try; fail then success
  CHECK(incomplete == 1);  // fail-fail exceeds the bound

  auto paths1 = thread_paths(t, 0, 1);
  complete = incomplete = 0;
  for (const auto& p : paths1) (p.incomplete ? incomplete : complete)++;
  CHECK(complete == 1);
}

TEST_CASE("a conditional may guard on a register assigned on another path") {
  auto t = parse_source(
      "C maybe\n{ x : 32 = 0; y : 32 = 0; }\n"
      "P0 { r0 = load(x,relaxed);"
      " if (r0 == 1) { r1 = load(y,relaxed); }"
      " if (r1 == 0) { store(y,2,relaxed); } }\n"
      "P1 { store(x,1,relaxed); }\n"
      "exists (y = 2)\n");
  auto prob = sim_problem(t);
  auto res = outcomes(prob, rc11_consistent);
  // when the first branch is not taken, r1 keeps its initial 0 and the
  // second branch fires
  CHECK(res.predicate_satisfied(prob.pred));
}

TEST_CASE("candidate counts for the store-buffering fixture") {
  auto sb = parse_source(fixtures::litmus_text("SB"));
  auto prob = sim_problem(sb);
  auto execs = enumerate_executions(prob);
  CHECK(execs.size() == 4);  // two reads, two rf choices each, co fixed
}

TEST_CASE("tests without reads have one candidate per co linearization") {
  auto t = parse_source(
      "C wonly\n{ x : 32 = 0; }\n"
      "P0 { store(x,1,relaxed); }\nP1 { store(x,2,relaxed); }\n"
      "exists (x = 1)\n");
  auto prob = sim_problem(t);
  CHECK(enumerate_executions(prob).size() == 2);
}

TEST_CASE("model filtering separates candidates from consistent executions") {
  auto t = parse_source(
      "C selfread\n{ x : 32 = 0; }\n"
      "P0 { store(x,1,relaxed); r0 = load(x,relaxed); }\n"
      "exists (P0:r0 = 0)\n");
  auto prob = sim_problem(t);
  auto execs = enumerate_executions(prob);
  CHECK(execs.size() == 2);  // the read may source the init write or the store
  auto res = outcomes(prob, rc11_consistent);
  REQUIRE(res.outcomes.size() == 1);
  CHECK(res.outcomes.begin()->at("P0:r0") == 1);
  CHECK_FALSE(res.predicate_satisfied(prob.pred));
}

TEST_CASE("rf edges are same-location and value-coherent") {
  auto t = parse_source(fixtures::litmus_text("MP-RMW-swp"));
  auto prob = sim_problem(t);
  for (const auto& e : enumerate_executions(prob)) {
    for (int r = 0; r < e.n(); ++r) {
      if (!e.events[r].is_read()) continue;
      int w = e.rf[r];
      REQUIRE(w >= 0);
      CHECK(e.events[w].is_write());
      CHECK(e.events[w].loc == e.events[r].loc);
      CHECK(e.events[w].val == e.events[r].val);
    }
    for (const auto& [loc, ws] : e.co) {
      REQUIRE(!ws.empty());
      CHECK(e.events[ws.front()].is_init());  // init write is co-minimal
    }
  }
}

TEST_CASE("outcome memory values are the co-final writes") {
  auto t = parse_source(fixtures::litmus_text("SB"));
  auto prob = sim_problem(t);
  for_each_candidate(prob, [&](const Execution& e) {
    CHECK(e.final_value("x") == 1);
    CHECK(e.final_value("y") == 1);
  });
}

TEST_CASE("outcomes grow monotonically with the unroll bound") {
  auto t128 = parse_source(fixtures::litmus_text("SB-RMW-128"));
  auto base = load_profile(fixtures::profile_text("clang-armv8-base-128"));
  auto combined = mix(t128, {base});
  const auto& asm_test = combined.entries[0].test;
  OutcomeSet prev;
  for (int unroll : {1, 2, 3}) {
    auto prob = sim_problem_observed(asm_test, t128, unroll);
    auto res = outcomes(prob, arm_consistent);
    for (const auto& o : prev) CHECK(res.outcomes.count(o));
    prev = res.outcomes;
  }
}

TEST_CASE("source outcomes match the interleaving oracle on seq_cst tests") {
  // every bundled all-seq_cst loop-free source test
  for (const char* name : {"SB", "SB-RMW-128"}) {
    auto t = parse_source(fixtures::litmus_text(name));
    auto prob = sim_problem(t);
    auto res = outcomes(prob, rc11_consistent);
    CHECK(res.outcomes == oracle::sc_interleavings(t));
  }
}

TEST_CASE("every SC interleaving is consistent under both models") {
  // The oracle's outcomes are a lower bound for any sound model: relaxed
  // models only add behaviours.
  GenMatrix m;
  m.shapes = {Shape::SB, Shape::MP, Shape::LB, Shape::SB_RMW, Shape::MP_RMW};
  m.widths = {Width::w32};
  m.orders = {MemOrder::relaxed, MemOrder::acquire, MemOrder::release,
              MemOrder::acq_rel, MemOrder::seq_cst};
  auto lse = load_profile(fixtures::profile_text("clang-armv8.1-lse"));
  for (const auto& t : generate(m)) {
    auto prob = sim_problem(t);
    auto rc11 = outcomes(prob, rc11_consistent);
    for (const auto& o : oracle::sc_interleavings(t)) {
      CAPTURE(t.name);
      CHECK(rc11.outcomes.count(o));
    }
    auto combined = mix(t, {lse});
    const auto& c = combined.entries[0].test;
    auto cprob = sim_problem_observed(c, t, 2);
    auto arm = outcomes(cprob, arm_consistent);
    for (const auto& o : oracle::sc_interleavings_observed(c, t)) {
      CAPTURE(t.name);
      CHECK(arm.outcomes.count(o));
    }
  }
}

TEST_CASE("the candidate cap refuses oversized enumerations") {
  auto sb = parse_source(fixtures::litmus_text("SB"));
  auto prob = sim_problem(sb, 3);
  CHECK_THROWS_AS(enumerate_executions(prob), CapError);
}
