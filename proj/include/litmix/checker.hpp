#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "enumerate.hpp"
#include "mixer.hpp"
#include "models.hpp"

namespace litmix {

struct CheckOptions {
  std::string source_model = "rc11";
  std::string target_model = "arm";
  int unroll = 2;
  std::uint64_t max_assignments = 1'000'000;
  std::uint64_t max_candidates = 10'000'000;
  int jobs = 1;
  bool glue = false;
  bool thread_level = false;
};

// Evidence for one violating hash group.
struct Witness {
  std::string digest;
  std::vector<MixAssignment> assignments;  // every member of the group
  OutcomeSet violating;                    // translated, absent at source
  bool predicate_satisfied = false;
};

struct BugReport {
  enum class Verdict { no_bug, concurrency_bug, mixing_bug };

  std::string test_name;
  std::string source_model;
  std::string target_model;
  std::vector<std::string> profiles;
  Verdict verdict = Verdict::no_bug;
  std::vector<Witness> witnesses;  // digest-sorted
  std::vector<std::string> warnings;
  struct Stats {
    std::uint64_t assignments = 0;
    std::uint64_t groups = 0;
    std::uint64_t simulated = 0;
    std::uint64_t wall_ms = 0;  // reported separately, not in the document
  } stats;

  int exit_code() const { return verdict == Verdict::no_bug ? 0 : 1; }
};

inline const char* to_string(BugReport::Verdict v) {
  switch (v) {
    case BugReport::Verdict::no_bug: return "no-bug";
    case BugReport::Verdict::concurrency_bug: return "concurrency-bug";
    case BugReport::Verdict::mixing_bug: return "mixing-bug";
  }
  return "?";
}

// Outcomes of a source test, projected onto the predicate registers and all
// memory locations.
inline SimResult source_outcomes(const SourceLitmusTest& s,
                                 const CheckOptions& opt) {
  auto prob = sim_problem(s, opt.max_candidates);
  return outcomes(prob, model_by_name(opt.source_model).consistent);
}

// Whether the combined test exhibits outcomes its source forbids:
//   translate(Outcomes(c, target)) not-subset-of Outcomes(s, source).
// Returns the set difference as evidence.
inline std::pair<bool, OutcomeSet> concurrency_bug(const SourceLitmusTest& s,
                                                   const AsmLitmusTest& c,
                                                   const CheckOptions& opt) {
  auto src = source_outcomes(s, opt);
  auto prob = sim_problem_observed(c, s, opt.unroll, opt.max_candidates);
  auto tgt = outcomes(prob, model_by_name(opt.target_model).consistent);
  OutcomeSet diff;
  for (const auto& o : tgt.outcomes)
    if (!src.outcomes.count(o)) diff.insert(o);
  return {!diff.empty(), diff};
}

// Warns when a profile maps a load of a read-only location to a sequence
// containing store instructions (which would fault on read-only memory).
inline std::vector<std::string> lint_const_mutable(const SourceLitmusTest& s,
                                                   const CompilerProfile& p) {
  std::vector<std::string> warnings;
  std::function<void(const std::vector<SourceInstr>&)> scan =
      [&](const std::vector<SourceInstr>& block) {
        for (const auto& ins : block) {
          if (const auto* l = std::get_if<SourceInstr::Load>(&ins.op)) {
            auto di = s.init.find(l->loc);
            if (di == s.init.end() || !di->second.read_only) continue;
            MappingKey key{OpKind::load, di->second.width, l->mo,
                           l->reg == kDiscard};
            if (!supports(p, key)) continue;
            OperandBinding bind;
            bind.width = key.w;
            bind.dst = AReg{0, detail::default_style(key.w)};
            ThreadAllocator alloc(8);
            auto instrs = instantiate(lookup(p, key), bind, alloc);
            for (const auto& ai : instrs) {
              if (can_store(ai.m)) {
                warnings.push_back(
                    ins.iid.str() + ": load of read-only location '" + l->loc +
                    "' maps to a store-containing sequence (" +
                    std::string(to_string(ai.m)) + ") under profile " + p.name);
                break;
              }
            }
          } else if (const auto* cond = std::get_if<SourceInstr::If>(&ins.op)) {
            scan(cond->body);
          }
        }
      };
  for (const auto& th : s.threads) scan(th.code);
  return warnings;
}

// Whole-set mixing-bug check: run the mixer, dedup by hash, evaluate one
// representative per group, and report every violating group. The verdict is
// independent of worker count and identical across runs.
inline BugReport mixing_bug(const SourceLitmusTest& s,
                            const std::vector<CompilerProfile>& profiles,
                            const CheckOptions& opt = {}) {
  auto started = std::chrono::steady_clock::now();

  BugReport report;
  report.test_name = s.name;
  report.source_model = opt.source_model;
  report.target_model = opt.target_model;
  for (const auto& p : profiles) report.profiles.push_back(p.name);
  std::sort(report.profiles.begin(), report.profiles.end());

  for (const auto& p : profiles) {
    auto w = lint_const_mutable(s, p);
    report.warnings.insert(report.warnings.end(), w.begin(), w.end());
  }

  MixOptions mopt;
  mopt.glue = opt.glue;
  mopt.thread_level = opt.thread_level;
  mopt.max_assignments = opt.max_assignments;
  CombinedSet combined = mix(s, profiles, mopt);

  auto src = source_outcomes(s, opt);
  const auto& src_set = src.outcomes;

  std::vector<std::string> digests;
  for (const auto& [digest, members] : combined.groups) digests.push_back(digest);

  struct GroupResult {
    OutcomeSet violating;
    bool predicate_satisfied = false;
  };
  std::vector<GroupResult> results(digests.size());

  auto worker_body = [&](std::size_t gi) {
    const auto& members = combined.groups.at(digests[gi]);
    const AsmLitmusTest& rep = combined.entries[members.front()].test;
    auto prob = sim_problem_observed(rep, s, opt.unroll, opt.max_candidates);
    auto tgt = outcomes(prob, model_by_name(opt.target_model).consistent);
    GroupResult r;
    for (const auto& o : tgt.outcomes)
      if (!src_set.count(o)) r.violating.insert(o);
    r.predicate_satisfied = tgt.predicate_satisfied(prob.pred);
    results[gi] = std::move(r);
  };

  int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || digests.size() <= 1) {
    for (std::size_t gi = 0; gi < digests.size(); ++gi) worker_body(gi);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        while (true) {
          std::size_t gi = next.fetch_add(1);
          if (gi >= digests.size()) return;
          try {
            worker_body(gi);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  bool any_pure_violation = false;
  for (std::size_t gi = 0; gi < digests.size(); ++gi) {
    if (results[gi].violating.empty()) continue;
    Witness w;
    w.digest = digests[gi];
    for (std::size_t idx : combined.groups.at(digests[gi]))
      w.assignments.push_back(combined.entries[idx].assignment);
    w.violating = std::move(results[gi].violating);
    w.predicate_satisfied = results[gi].predicate_satisfied;
    for (const auto& a : w.assignments)
      if (a.by_profile.size() == 1) any_pure_violation = true;

    // Witness validity: re-simulate the representative and confirm every
    // reported outcome is reproducible.
    {
      const auto& members = combined.groups.at(w.digest);
      const AsmLitmusTest& rep = combined.entries[members.front()].test;
      auto prob = sim_problem_observed(rep, s, opt.unroll, opt.max_candidates);
      auto tgt = outcomes(prob, model_by_name(opt.target_model).consistent);
      for (const auto& o : w.violating)
        if (!tgt.outcomes.count(o))
          throw Error("internal: witness outcome failed re-simulation");
    }
    report.witnesses.push_back(std::move(w));
  }

  if (report.witnesses.empty())
    report.verdict = BugReport::Verdict::no_bug;
  else if (any_pure_violation)
    report.verdict = BugReport::Verdict::concurrency_bug;
  else
    report.verdict = BugReport::Verdict::mixing_bug;

  report.stats.assignments = combined.entries.size();
  report.stats.groups = combined.groups.size();
  report.stats.simulated = digests.size();
  report.stats.wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started)
          .count());
  return report;
}

// Checks that every member of every hash group has the same outcome set as
// its representative (dedup soundness at desk scale).
inline bool groups_consistent(const SourceLitmusTest& s,
                              const CombinedSet& combined,
                              const CheckOptions& opt) {
  for (const auto& [digest, members] : combined.groups) {
    OutcomeSet rep;
    bool first = true;
    for (std::size_t idx : members) {
      auto prob = sim_problem_observed(combined.entries[idx].test, s,
                                       opt.unroll, opt.max_candidates);
      auto r = outcomes(prob, model_by_name(opt.target_model).consistent);
      if (first) {
        rep = r.outcomes;
        first = false;
      } else if (r.outcomes != rep) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace litmix
