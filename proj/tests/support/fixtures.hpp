#pragma once

#include <litmix/common.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace litmix::fixtures {

inline std::string repo_dir() { return LITMIX_REPO_DIR; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open fixture '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string profile_text(const std::string& name) {
  return slurp(repo_dir() + "/profiles/" + name + ".profile");
}

inline std::string litmus_text(const std::string& name) {
  return slurp(repo_dir() + "/litmus/" + name + ".litmus");
}

inline std::string asm_text(const std::string& name) {
  return slurp(repo_dir() + "/litmus/asm/" + name + ".litmus");
}

}  // namespace litmix::fixtures
