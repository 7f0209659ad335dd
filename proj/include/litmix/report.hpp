#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "checker.hpp"

namespace litmix {

// Values in fixtures fit in 64 bits; wider ones are serialized as strings.
inline nlohmann::json value_json(Value v) {
  if (v <= Value(~std::uint64_t{0}))
    return nlohmann::json(static_cast<std::uint64_t>(v));
  return nlohmann::json(to_string(v));
}

inline std::string render_report_text(const BugReport& r) {
  std::ostringstream os;
  os << "test: " << r.test_name << "\n";
  os << "source-model: " << r.source_model << "\n";
  os << "target-model: " << r.target_model << "\n";
  os << "profiles:";
  for (const auto& p : r.profiles) os << " " << p;
  os << "\n";
  os << "verdict: " << to_string(r.verdict) << "\n";
  os << "stats: assignments=" << r.stats.assignments
     << " groups=" << r.stats.groups << " simulated=" << r.stats.simulated
     << "\n";
  if (!r.warnings.empty()) {
    os << "warnings:\n";
    for (const auto& w : r.warnings) os << "  - " << w << "\n";
  }
  if (!r.witnesses.empty()) {
    os << "witnesses:\n";
    for (const auto& w : r.witnesses) {
      os << "  group " << w.digest << ":\n";
      os << "    predicate-satisfied: " << (w.predicate_satisfied ? "yes" : "no")
         << "\n";
      for (const auto& o : w.violating)
        os << "    outcome: " << outcome_str(o) << "\n";
      for (const auto& a : w.assignments)
        os << "    assignment: " << a.str() << "\n";
    }
  }
  return os.str();
}

inline std::string render_report_json(const BugReport& r) {
  nlohmann::json j;
  j["test"] = r.test_name;
  j["source_model"] = r.source_model;
  j["target_model"] = r.target_model;
  j["profiles"] = r.profiles;
  j["verdict"] = to_string(r.verdict);
  j["stats"] = {{"assignments", r.stats.assignments},
                {"groups", r.stats.groups},
                {"simulated", r.stats.simulated}};
  j["warnings"] = r.warnings;
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    nlohmann::json jw;
    jw["digest"] = w.digest;
    jw["predicate_satisfied"] = w.predicate_satisfied;
    jw["violating_outcomes"] = nlohmann::json::array();
    for (const auto& o : w.violating) {
      nlohmann::json jo = nlohmann::json::object();
      for (const auto& [k, v] : o) jo[k] = value_json(v);
      jw["violating_outcomes"].push_back(jo);
    }
    jw["assignments"] = nlohmann::json::array();
    for (const auto& a : w.assignments) {
      nlohmann::json ja = nlohmann::json::object();
      for (const auto& [prof, iids] : a.by_profile) {
        auto arr = nlohmann::json::array();
        for (const auto& iid : iids) arr.push_back(iid.str());
        ja[prof] = arr;
      }
      jw["assignments"].push_back(ja);
    }
    j["witnesses"].push_back(jw);
  }
  return j.dump(2) + "\n";
}

// Manifest for a mix run: one line per assignment grouped by digest, stable
// across runs and job counts.
inline std::string render_manifest(const std::string& test_name,
                                   const CombinedSet& combined,
                                   const std::map<std::string, std::string>&
                                       file_of_digest) {
  std::ostringstream os;
  os << "manifest: " << test_name << "\n";
  os << "assignments: " << combined.entries.size() << "\n";
  os << "groups: " << combined.groups.size() << "\n";
  for (const auto& [digest, members] : combined.groups) {
    os << "group " << digest;
    auto f = file_of_digest.find(digest);
    if (f != file_of_digest.end()) os << " file=" << f->second;
    os << "\n";
    for (std::size_t idx : members)
      os << "  assignment: " << combined.entries[idx].assignment.str() << "\n";
  }
  return os.str();
}

}  // namespace litmix
