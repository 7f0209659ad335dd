#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace litmix {

// Shared-memory cell values. 128-bit accesses are modelled as single events
// over a single 128-bit value, so the value type must cover the full width.
using Value = unsigned __int128;

inline std::string to_string(Value v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg)
      : Error("invalid test: " + msg) {}
};

class MappingError : public Error {
 public:
  explicit MappingError(const std::string& msg)
      : Error("mapping error: " + msg) {}
};

class CapError : public Error {
 public:
  explicit CapError(const std::string& msg) : Error("cap exceeded: " + msg) {}
};

enum class Width : std::uint8_t { w8, w16, w32, w64, w128 };

inline int width_bits(Width w) {
  switch (w) {
    case Width::w8: return 8;
    case Width::w16: return 16;
    case Width::w32: return 32;
    case Width::w64: return 64;
    case Width::w128: return 128;
  }
  return 32;
}

inline std::optional<Width> width_from_bits(int bits) {
  switch (bits) {
    case 8: return Width::w8;
    case 16: return Width::w16;
    case 32: return Width::w32;
    case 64: return Width::w64;
    case 128: return Width::w128;
  }
  return std::nullopt;
}

inline Value mask_to_width(Value v, Width w) {
  int bits = width_bits(w);
  if (bits >= 128) return v;
  Value one = 1;
  return v & ((one << bits) - 1);
}

enum class MemOrder : std::uint8_t { relaxed, acquire, release, acq_rel, seq_cst };

inline const char* to_string(MemOrder mo) {
  switch (mo) {
    case MemOrder::relaxed: return "relaxed";
    case MemOrder::acquire: return "acquire";
    case MemOrder::release: return "release";
    case MemOrder::acq_rel: return "acq_rel";
    case MemOrder::seq_cst: return "seq_cst";
  }
  return "?";
}

inline std::optional<MemOrder> mem_order_from_string(const std::string& s) {
  if (s == "relaxed") return MemOrder::relaxed;
  if (s == "acquire") return MemOrder::acquire;
  if (s == "release") return MemOrder::release;
  if (s == "acq_rel") return MemOrder::acq_rel;
  if (s == "seq_cst") return MemOrder::seq_cst;
  return std::nullopt;
}

inline bool at_least_release(MemOrder mo) {
  return mo == MemOrder::release || mo == MemOrder::acq_rel ||
         mo == MemOrder::seq_cst;
}

inline bool at_least_acquire(MemOrder mo) {
  return mo == MemOrder::acquire || mo == MemOrder::acq_rel ||
         mo == MemOrder::seq_cst;
}

// Instruction id: thread index plus position in the thread's instruction
// list (depth-first for conditional bodies), rendered as "P0_0", "P0_1", ...
struct Iid {
  int tid = 0;
  int idx = 0;

  auto operator<=>(const Iid&) const = default;

  std::string str() const {
    return "P" + std::to_string(tid) + "_" + std::to_string(idx);
  }
};

// Register name used at source level ("r0", "t", ...). "_" discards a result.
inline const std::string kDiscard = "_";

}  // namespace litmix
