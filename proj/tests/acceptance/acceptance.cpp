// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <litmix/checker.hpp>
#include <litmix/generator.hpp>
#include <litmix/parse_asm.hpp>
#include <litmix/parse_source.hpp>
#include <litmix/render.hpp>
#include <litmix/report.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace litmix;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(LITMIX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Error("popen failed");
  CliResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& rel) {
  return fixtures::repo_dir() + "/" + rel;
}

std::string profile_arg(std::initializer_list<const char*> names) {
  std::string s = "--profiles";
  for (const char* n : names)
    s += " " + fixture("profiles/" + std::string(n) + ".profile");
  return s;
}

std::vector<CompilerProfile> load(std::initializer_list<const char*> names) {
  std::vector<CompilerProfile> out;
  for (const char* n : names)
    out.push_back(load_profile(fixtures::profile_text(n)));
  return out;
}

// Outcome lines of a `simulate` listing.
std::set<std::string> states_of(const std::string& out) {
  std::set<std::string> states;
  std::istringstream ss(out);
  std::string line;
  while (std::getline(ss, line))
    if (line.find('=') != std::string::npos && line.rfind("Test", 0) != 0 &&
        line.rfind("Model", 0) != 0 && line.rfind("States", 0) != 0)
      states.insert(line);
  return states;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

MixAssignment assignment(
    std::initializer_list<std::pair<const char*, std::set<Iid>>> parts) {
  MixAssignment a;
  for (const auto& [prof, iids] : parts) a.by_profile[prof] = iids;
  return a;
}

bool report_has_witness_assignment(const BugReport& r, const MixAssignment& a) {
  for (const auto& w : r.witnesses)
    for (const auto& wa : w.assignments)
      if (wa == a) return true;
  return false;
}

// ---------------------------------------------------------------------------

void criterion1_fig1_end_to_end() {
  auto buggy = run_cli("check " + fixture("litmus/SB.litmus") + " " +
                       profile_arg({"clang-armv8-O3", "clang-armv7a-O3-buggy"}));
  require(buggy.exit_code == 1, "check with the buggy armv7 profile must exit 1");
  require(buggy.out.find("verdict: mixing-bug") != std::string::npos,
          "report must carry a mixing-bug verdict");

  auto sb = parse_source(fixtures::litmus_text("SB"));
  auto report = mixing_bug(
      sb, load({"clang-armv8-O3", "clang-armv7a-O3-buggy"}));
  auto want = assignment({{"clang-armv8-O3", {Iid{0, 0}, Iid{1, 0}}},
                          {"clang-armv7a-O3-buggy", {Iid{0, 1}, Iid{1, 1}}}});
  require(report_has_witness_assignment(report, want),
          "witness must include stores via armv8 and loads via armv7");
  for (const auto& w : report.witnesses)
    for (const auto& a : w.assignments)
      require(a.by_profile.size() > 1, "pure assignments must be no-bug");

  auto fixed = run_cli("check " + fixture("litmus/SB.litmus") + " " +
                       profile_arg({"clang-armv8-O3", "clang-armv7a-O3-fixed"}));
  require(fixed.exit_code == 0, "the fixed armv7 profile must exit 0");
}

void criterion2_count_law() {
  fs::path dir = fs::temp_directory_path() / "litmix-acc-mix";
  fs::remove_all(dir);
  auto r = run_cli("mix " + fixture("litmus/SB.litmus") + " " +
                   profile_arg({"clang-armv8-O3", "clang-armv7a-O3-buggy"}) +
                   " -o " + dir.string());
  require(r.exit_code == 0, "mix must succeed");
  std::ifstream manifest(dir / "manifest.txt");
  require(manifest.good(), "manifest must exist");
  std::string text((std::istreambuf_iterator<char>(manifest)),
                   std::istreambuf_iterator<char>());
  require(text.find("assignments: 16") != std::string::npos,
          "manifest must record exactly 16 assignments");

  // |P|^|I| on five (|P|, |I|) shapes
  auto prof = [&](int k) {
    return load_profile("profile p" + std::to_string(k) +
                        " arch=t\nmap load w=32 mo=relaxed:\n"
                        "  LDR {dst:w}, [{addr}]\nend\n");
  };
  std::vector<CompilerProfile> ps;
  for (int k = 0; k < 4; ++k) ps.push_back(prof(k));
  auto iids = [](int n) {
    std::vector<Iid> v;
    for (int i = 0; i < n; ++i) v.push_back(Iid{0, i});
    return v;
  };
  auto count = [&](int nprof, int ninstr) {
    std::vector<CompilerProfile> sub(ps.begin(), ps.begin() + nprof);
    return enumerate_assignments(iids(ninstr), sub).size();
  };
  require(count(2, 4) == 16, "2^4");
  require(count(1, 4) == 1, "1^4");
  require(count(3, 2) == 9, "3^2");
  require(count(4, 3) == 64, "4^3");
  require(count(2, 6) == 64, "2^6");
}

void criterion3_swp_reproduction() {
  auto sim = run_cli("simulate " + fixture("litmus/MP-RMW-swp.litmus") +
                     " --model rc11");
  require(sim.exit_code == 0, "simulate must succeed");
  require(sim.out.find("\nNo\n") != std::string::npos,
          "rc11 must forbid {P1:r0=0; y=2}");

  auto buggy = run_cli("check " + fixture("litmus/MP-RMW-swp.litmus") + " " +
                       profile_arg({"clang-armv8.2-swp-buggy"}));
  require(buggy.exit_code == 1, "swp-buggy must exit 1");
  require(buggy.out.find("verdict: concurrency-bug") != std::string::npos,
          "a pure-profile violation is a concurrency bug");

  auto fixed = run_cli("check " + fixture("litmus/MP-RMW-swp.litmus") + " " +
                       profile_arg({"clang-armv8.2-swp-fixed"}));
  require(fixed.exit_code == 0, "swp-fixed must exit 0");
}

void criterion4_128bit_reproduction() {
  auto r = run_cli("check " + fixture("litmus/SB-RMW-128.litmus") + " " +
                   profile_arg({"clang-armv8-base-128", "clang-armv8.4-O3-buggy"}));
  require(r.exit_code == 1, "the 128-bit profile pair must exit 1");

  auto src = parse_source(fixtures::litmus_text("SB-RMW-128"));
  auto report = mixing_bug(
      src, load({"clang-armv8-base-128", "clang-armv8.4-O3-buggy"}));
  auto want = assignment(
      {{"clang-armv8.4-O3-buggy", {Iid{0, 0}, Iid{0, 1}, Iid{1, 1}}},
       {"clang-armv8-base-128", {Iid{1, 0}}}});
  require(report_has_witness_assignment(report, want),
          "witness group must contain comp1 -> {P0_0,P0_1,P1_1}, comp2 -> {P1_0}");
}

void criterion5_rcpc_reproduction() {
  auto r = run_cli("check " + fixture("litmus/SB.litmus") + " " +
                   profile_arg({"clang-armv8-O3", "proposed-rcpc"}));
  require(r.exit_code == 1, "mixed STLR + LDAPR must exit 1");

  auto sb = parse_source(fixtures::litmus_text("SB"));
  auto report = mixing_bug(sb, load({"clang-armv8-O3", "proposed-rcpc"}));
  require(report.verdict == BugReport::Verdict::mixing_bug,
          "the rcpc violation only arises from mixing");
  for (const auto& w : report.witnesses)
    for (const auto& a : w.assignments)
      require(a.by_profile.size() > 1, "each pure assignment alone is no-bug");
  auto want = assignment({{"clang-armv8-O3", {Iid{0, 0}, Iid{1, 0}}},
                          {"proposed-rcpc", {Iid{0, 1}, Iid{1, 1}}}});
  require(report_has_witness_assignment(report, want),
          "stores via armv8 and loads via proposed-rcpc must be a witness");
}

void criterion6_branch_glue_neutrality() {
  auto glue = run_cli("simulate " + fixture("litmus/asm/lb-blret.litmus") +
                      " --model arm");
  require(glue.exit_code == 0, "simulate of the glue fixture must succeed");
  require(glue.out.find("P0:X0=1; P1:X0=1;") != std::string::npos,
          "the listing must contain {P0:X0=1; P1:X0=1}");

  auto plain = run_cli("simulate " + fixture("litmus/asm/lb-plain.litmus") +
                       " --model arm");
  require(states_of(glue.out) == states_of(plain.out),
          "glue and glue-free outcome sets must be equal");
}

void criterion7_oracle_equivalence() {
  GenMatrix m;
  m.shapes = {Shape::SB, Shape::MP, Shape::LB, Shape::SB_RMW, Shape::MP_RMW};
  m.widths = {Width::w32, Width::w64};
  m.orders = {MemOrder::seq_cst};
  auto tests = generate(m);
  require(tests.size() >= 20, "matrix must yield at least 20 tests");

  auto lse = load({"clang-armv8.1-lse"});
  CheckOptions opt;
  for (const auto& t : tests) {
    // source side: rc11 outcomes equal the independent interleaving oracle
    auto prob = sim_problem(t);
    auto rc11 = outcomes(prob, model_by_name("rc11").consistent);
    auto oracle_set = oracle::sc_interleavings(t);
    require(rc11.outcomes == oracle_set,
            "rc11 / oracle mismatch on " + t.name);

    // target side: full fence saturation recovers the oracle set
    auto combined = mix(t, lse);
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
    auto sprob = sim_problem_observed(sat, t, opt.unroll);
    auto arm = outcomes(sprob, model_by_name("arm").consistent);
    require(arm.outcomes == oracle_set,
            "saturated target / oracle mismatch on " + t.name);
  }
}

void criterion8_dedup_soundness() {
  auto sb = parse_source(fixtures::litmus_text("SB"));
  auto combined =
      mix(sb, load({"clang-armv8-O3", "clang-armv7a-O3-buggy"}));
  CheckOptions opt;
  require(groups_consistent(sb, combined, opt),
          "every member of every hash group must match its representative");
}

void criterion9_determinism() {
  fs::path dir = fs::temp_directory_path() / "litmix-acc-suite";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy_file(fixture("litmus/SB.litmus"), dir / "SB.litmus");
  fs::copy_file(fixture("litmus/MP-RMW-swp.litmus"), dir / "MP-RMW-swp.litmus");

  std::string args = "check " + dir.string() + " " +
                     profile_arg({"clang-armv8.2-swp-buggy",
                                  "clang-armv8.2-swp-fixed"});
  auto one = run_cli(args + " --jobs 1");
  auto eight = run_cli(args + " --jobs 8");
  require(one.exit_code == eight.exit_code, "exit codes must agree");
  require(one.out == eight.out, "reports must be byte-identical across --jobs");
  require(!one.out.empty(), "reports must not be empty");

  fs::path dir2 = fs::temp_directory_path() / "litmix-acc-suite-128";
  fs::remove_all(dir2);
  fs::create_directories(dir2);
  fs::copy_file(fixture("litmus/SB-RMW-128.litmus"), dir2 / "SB-RMW-128.litmus");
  fs::copy_file(fixture("litmus/const-load-128.litmus"),
                dir2 / "const-load-128.litmus");
  std::string args2 = "check " + dir2.string() + " " +
                      profile_arg({"clang-armv8-base-128",
                                   "clang-armv8.4-O3-buggy"});
  auto a = run_cli(args2 + " --jobs 1");
  auto b = run_cli(args2 + " --jobs 8");
  require(a.out == b.out, "128-bit suite reports must be byte-identical");
}

void criterion10_lint() {
  auto t = parse_source(fixtures::litmus_text("const-load-128"));
  auto base = load_profile(fixtures::profile_text("clang-armv8-base-128"));
  auto lse = load_profile(fixtures::profile_text("clang-armv8.1-lse"));
  auto warnings = lint_const_mutable(t, base);
  require(warnings.size() == 1,
          "the exclusive-loop load mapping must emit exactly one warning");
  require(lint_const_mutable(t, lse).empty(),
          "the LDP mapping must emit none");

  // the warning also reaches check reports
  auto r = run_cli("check " + fixture("litmus/const-load-128.litmus") + " " +
                   profile_arg({"clang-armv8-base-128"}));
  require(r.out.find("warnings:") != std::string::npos &&
              r.out.find("read-only") != std::string::npos,
          "check report must carry the warning");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> run;
  };
  const Criterion criteria[] = {
      {"criterion 1: Fig-1 end-to-end mixing bug and fix", criterion1_fig1_end_to_end},
      {"criterion 2: assignment count law", criterion2_count_law},
      {"criterion 3: discarded-result swap reproduction", criterion3_swp_reproduction},
      {"criterion 4: 128-bit missing-barrier reproduction", criterion4_128bit_reproduction},
      {"criterion 5: proposed-rcpc reproduction", criterion5_rcpc_reproduction},
      {"criterion 6: branch-glue neutrality", criterion6_branch_glue_neutrality},
      {"criterion 7: oracle equivalence", criterion7_oracle_equivalence},
      {"criterion 8: dedup soundness", criterion8_dedup_soundness},
      {"criterion 9: determinism across jobs", criterion9_determinism},
      {"criterion 10: read-only location lint", criterion10_lint},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.run();
      std::cout << "PASS " << c.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL " << c.name << ": " << e.what() << "\n";
    }
  }
  if (failures) std::cout << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
