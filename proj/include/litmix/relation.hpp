#pragma once

#include <cstdint>
#include <vector>

namespace litmix {

// Binary relation over event indices 0..n-1, one bitset row per source.
class Rel {
 public:
  Rel() = default;
  explicit Rel(int n) : n_(n), words_((n + 63) / 64), rows_(n * words_, 0) {}

  int size() const { return n_; }

  void add(int a, int b) { rows_[a * words_ + b / 64] |= word_bit(b); }

  bool has(int a, int b) const {
    return (rows_[a * words_ + b / 64] & word_bit(b)) != 0;
  }

  Rel& operator|=(const Rel& o) {
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] |= o.rows_[i];
    return *this;
  }

  friend Rel operator|(Rel a, const Rel& b) {
    a |= b;
    return a;
  }

  // Transitive closure (not reflexive).
  Rel closure() const {
    Rel c = *this;
    for (int k = 0; k < n_; ++k) {
      for (int i = 0; i < n_; ++i) {
        if (!c.has(i, k)) continue;
        for (int w = 0; w < words_; ++w)
          c.rows_[i * words_ + w] |= c.rows_[k * words_ + w];
      }
    }
    return c;
  }

  bool irreflexive() const {
    for (int i = 0; i < n_; ++i)
      if (has(i, i)) return false;
    return true;
  }

  bool acyclic() const { return closure().irreflexive(); }

  int count() const {
    int c = 0;
    for (auto w : rows_) c += __builtin_popcountll(w);
    return c;
  }

  // Relational composition this;o.
  Rel seq(const Rel& o) const {
    Rel r(n_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k)
        if (has(i, k))
          for (int w = 0; w < words_; ++w)
            r.rows_[i * words_ + w] |= o.rows_[k * words_ + w];
    return r;
  }

 private:
  static std::uint64_t word_bit(int b) { return std::uint64_t{1} << (b % 64); }

  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> rows_;
};

inline bool acyclic(const Rel& r) { return r.acyclic(); }

}  // namespace litmix
