// litmix: split concurrent litmus tests into instructions, compile them via
// table-driven compiler profiles, recombine the fragments, and compare
// allowed outcome sets under a source and a target memory model.

#include <CLI11.hpp>

#include <litmix/checker.hpp>
#include <litmix/generator.hpp>
#include <litmix/parse_asm.hpp>
#include <litmix/parse_source.hpp>
#include <litmix/render.hpp>
#include <litmix/report.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace litmix;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

bool is_asm_text(const std::string& text) {
  std::istringstream ss(text);
  std::string tok;
  ss >> tok;
  return tok == "ARM" || tok == "AArch64";
}

std::vector<CompilerProfile> load_profiles(const std::vector<std::string>& files) {
  if (files.empty()) throw Error("no --profiles given");
  std::vector<CompilerProfile> out;
  for (const auto& f : files) out.push_back(load_profile(slurp(f)));
  return out;
}

struct CommonOpts {
  std::vector<std::string> profile_files;
  std::string source_model = "rc11";
  std::string target_model = "arm";
  int unroll = 2;
  std::uint64_t max_assignments = 1'000'000;
  std::uint64_t max_candidates = 10'000'000;
  int jobs = 1;
  bool glue = false;
  bool split_threads = false;
  std::string format = "text";

  CheckOptions check_options() const {
    CheckOptions o;
    o.source_model = source_model;
    o.target_model = target_model;
    o.unroll = unroll;
    o.max_assignments = max_assignments;
    o.max_candidates = max_candidates;
    o.jobs = jobs;
    o.glue = glue;
    o.thread_level = split_threads;
    return o;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_profiles) {
  if (with_profiles)
    cmd->add_option("--profiles", o.profile_files, "profile fixture files");
  cmd->add_option("--source-model", o.source_model, "source model name");
  cmd->add_option("--target-model", o.target_model, "target model name");
  cmd->add_option("--unroll", o.unroll, "loop unrolling bound (default 2)");
  cmd->add_option("--max-assignments", o.max_assignments,
                  "cap on |P|^|I| assignments");
  cmd->add_option("--max-candidates", o.max_candidates,
                  "cap on candidate executions per simulation");
  cmd->add_option("--jobs", o.jobs, "worker threads (never affects output)");
  cmd->add_flag("--glue", o.glue, "wrap fragments in BL/RET call glue");
  cmd->add_flag("--split-threads", o.split_threads,
                "split at thread granularity instead of instructions");
  cmd->add_option("--format", o.format, "report format: text|structured");
}

int cmd_mix(const std::string& test_file, const std::string& outdir,
            const CommonOpts& opts) {
  auto src = parse_source(slurp(test_file));
  auto profiles = load_profiles(opts.profile_files);
  MixOptions mopt;
  mopt.glue = opts.glue;
  mopt.thread_level = opts.split_threads;
  mopt.max_assignments = opts.max_assignments;
  auto combined = mix(src, profiles, mopt);

  fs::create_directories(outdir);
  std::map<std::string, std::string> file_of;
  int gi = 0;
  for (const auto& [digest, members] : combined.groups) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "g%03d", gi++);
    std::string fname =
        std::string(idx) + "_" + digest.substr(0, 12) + ".litmus";
    spit(fs::path(outdir) / fname,
         render_asm(combined.entries[members.front()].test));
    file_of[digest] = fname;
  }
  spit(fs::path(outdir) / "manifest.txt",
       render_manifest(src.name, combined, file_of));
  std::cout << "wrote " << combined.groups.size() << " group files ("
            << combined.entries.size() << " assignments) to " << outdir
            << "\n";
  return 0;
}

int cmd_simulate(const std::string& test_file, std::string model_name,
                 const CommonOpts& opts) {
  std::string text = slurp(test_file);
  SimResult res;
  Predicate pred;
  std::string name;
  if (is_asm_text(text)) {
    if (model_name.empty()) model_name = opts.target_model;
    const Model& model = model_by_name(model_name);
    if (model.source_level)
      throw Error("model '" + model_name + "' expects a source test");
    auto t = parse_asm(text);
    name = t.name;
    auto prob = sim_problem(t, opts.unroll, opts.max_candidates);
    pred = prob.pred;
    res = outcomes(prob, model.consistent);
  } else {
    if (model_name.empty()) model_name = opts.source_model;
    const Model& model = model_by_name(model_name);
    if (!model.source_level)
      throw Error("model '" + model_name + "' expects an assembly test");
    auto t = parse_source(text);
    name = t.name;
    auto prob = sim_problem(t, opts.max_candidates);
    pred = prob.pred;
    res = outcomes(prob, model.consistent);
  }
  std::cout << "Test " << name << "\n";
  std::cout << "Model " << model_name << "\n";
  std::cout << "States " << res.outcomes.size() << "\n";
  for (const auto& o : res.outcomes) std::cout << outcome_str(o) << "\n";
  std::cout << (res.predicate_satisfied(pred) ? "Ok" : "No") << "\n";
  return 0;
}

int cmd_check(const std::string& path, const CommonOpts& opts) {
  auto profiles = load_profiles(opts.profile_files);
  auto copt = opts.check_options();

  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.path().extension() == ".litmus") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .litmus files in " + path);
  } else {
    files.push_back(path);
  }

  bool any_bug = false;
  std::uint64_t wall = 0;
  bool first = true;
  for (const auto& f : files) {
    auto src = parse_source(slurp(f));
    auto report = mixing_bug(src, profiles, copt);
    wall += report.stats.wall_ms;
    if (report.verdict != BugReport::Verdict::no_bug) any_bug = true;
    if (!first) std::cout << (opts.format == "structured" ? "" : "\n");
    first = false;
    if (opts.format == "structured")
      std::cout << render_report_json(report);
    else
      std::cout << render_report_text(report);
  }
  std::cerr << "elapsed: " << wall << "ms\n";
  return any_bug ? 1 : 0;
}

int cmd_gen(const std::vector<std::string>& shapes,
            const std::vector<int>& widths,
            const std::vector<std::string>& orders,
            const std::vector<std::string>& rmw_ops, const std::string& outdir,
            const CommonOpts& opts) {
  GenMatrix m;
  for (const auto& s : shapes) {
    auto sh = shape_from_string(s);
    if (!sh) throw Error("unknown shape '" + s + "'");
    m.shapes.push_back(*sh);
  }
  for (int w : widths) {
    auto ww = width_from_bits(w);
    if (!ww) throw Error("bad width " + std::to_string(w));
    m.widths.push_back(*ww);
  }
  for (const auto& o : orders) {
    auto mo = mem_order_from_string(o);
    if (!mo) throw Error("unknown memory order '" + o + "'");
    m.orders.push_back(*mo);
  }
  if (!rmw_ops.empty()) {
    m.rmw_ops.clear();
    for (const auto& o : rmw_ops) {
      auto k = op_kind_from_string(o);
      if (!k || (*k != OpKind::exchange && *k != OpKind::fetch_add &&
                 *k != OpKind::cas))
        throw Error("bad rmw op '" + o + "'");
      m.rmw_ops.push_back(*k);
    }
  }

  std::vector<CompilerProfile> profiles;
  if (!opts.profile_files.empty()) profiles = load_profiles(opts.profile_files);
  auto tests =
      generate(m, opts.profile_files.empty() ? nullptr : &profiles);
  fs::create_directories(outdir);
  for (const auto& t : tests)
    spit(fs::path(outdir) / (t.name + ".litmus"), render_source(t));
  std::cout << "wrote " << tests.size() << " tests to " << outdir << "\n";
  return 0;
}

int cmd_hash(const std::string& test_file) {
  auto t = parse_asm(slurp(test_file));
  std::cout << canonical_hash(t) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "litmix: mix-compiles concurrent litmus tests across compiler "
      "profiles and compares allowed outcomes under source and target "
      "memory models"};
  app.require_subcommand(1);

  CommonOpts opts;

  std::string test_file, outdir = "out", model_name, check_path;
  std::vector<std::string> shapes, orders, rmw_ops;
  std::vector<int> widths;

  auto* mixc = app.add_subcommand("mix", "compile all profile assignments");
  mixc->add_option("test", test_file, "source litmus file")->required();
  mixc->add_option("-o,--out", outdir, "output directory");
  add_common(mixc, opts, true);

  auto* sim = app.add_subcommand("simulate", "list outcomes under a model");
  sim->add_option("test", test_file, "litmus file (source or assembly)")
      ->required();
  sim->add_option("--model", model_name, "model name (rc11|arm)");
  add_common(sim, opts, false);

  auto* chk = app.add_subcommand("check", "check for mixing bugs");
  chk->add_option("test", check_path, "source litmus file or directory")
      ->required();
  add_common(chk, opts, true);

  auto* gen = app.add_subcommand("gen", "generate source tests");
  gen->add_option("--shapes", shapes, "SB MP LB SB-RMW MP-RMW")->required();
  gen->add_option("--widths", widths, "access widths in bits")->required();
  gen->add_option("--orders", orders, "memory orders")->required();
  gen->add_option("--rmw-ops", rmw_ops, "exchange fetch_add cas");
  gen->add_option("-o,--out", outdir, "output directory");
  add_common(gen, opts, true);

  auto* hsh = app.add_subcommand("hash", "canonical digest of an assembly test");
  hsh->add_option("test", test_file, "assembly litmus file")->required();

  auto* imp = app.add_subcommand(
      "import-profile", "scrape a profile from an external compiler (stub)");
  std::string compiler_cmd;
  imp->add_option("compiler", compiler_cmd, "compiler command line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mixc->parsed()) return cmd_mix(test_file, outdir, opts);
    if (sim->parsed()) return cmd_simulate(test_file, model_name, opts);
    if (chk->parsed()) return cmd_check(check_path, opts);
    if (gen->parsed())
      return cmd_gen(shapes, widths, orders, rmw_ops, outdir, opts);
    if (hsh->parsed()) return cmd_hash(test_file);
    if (imp->parsed()) {
      std::cerr << "import-profile: scraping fragments from an external "
                   "compiler is not implemented; bundled profile files are "
                   "the supported source of mappings\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
