#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace cliquemc {

// Fixed-width bit vector over a vertex universe [0, n). The word layout is
// little-endian: vertex v lives in word v/64, bit v%64.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : n_(n), w_(word_count(n), 0) {}

  static VertexSet full(int n) {
    VertexSet s(n);
    for (auto& w : s.w_) w = ~0ull;
    s.trim();
    return s;
  }

  int universe() const { return n_; }
  int words() const { return static_cast<int>(w_.size()); }
  const std::uint64_t* data() const { return w_.data(); }
  std::uint64_t* data() { return w_.data(); }

  bool test(int v) const {
    assert(v >= 0 && v < n_);
    return (w_[v >> 6] >> (v & 63)) & 1ull;
  }
  void set(int v) {
    assert(v >= 0 && v < n_);
    w_[v >> 6] |= 1ull << (v & 63);
  }
  void reset(int v) {
    assert(v >= 0 && v < n_);
    w_[v >> 6] &= ~(1ull << (v & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool none() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  void clear() {
    for (auto& w : w_) w = 0;
  }

  VertexSet& and_with(const std::uint64_t* row) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= row[i];
    return *this;
  }
  VertexSet& and_with(const VertexSet& o) { return and_with(o.w_.data()); }
  VertexSet& or_with(const VertexSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  VertexSet& andnot_with(const VertexSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  // Clears every bit with index >= v.
  void clear_from(int v) {
    if (v >= n_) return;
    int wi = v >> 6;
    int bi = v & 63;
    w_[wi] &= (bi == 0) ? 0ull : (~0ull >> (64 - bi));
    for (std::size_t i = wi + 1; i < w_.size(); ++i) w_[i] = 0;
  }

  // Clears every bit with index < v.
  void clear_below(int v) {
    if (v <= 0) return;
    if (v >= n_) {
      clear();
      return;
    }
    int wi = v >> 6;
    int bi = v & 63;
    for (int i = 0; i < wi; ++i) w_[i] = 0;
    if (bi) w_[wi] &= ~0ull << bi;
  }

  bool is_subset_of(const std::uint64_t* row) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~row[i]) return false;
    return true;
  }
  bool is_subset_of(const VertexSet& o) const { return is_subset_of(o.w_.data()); }

  int intersect_count(const std::uint64_t* row) const {
    int c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & row[i]);
    return c;
  }
  int intersect_count(const VertexSet& o) const { return intersect_count(o.w_.data()); }

  bool operator==(const VertexSet& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const VertexSet& o) const { return !(*this == o); }

  // k-th set bit (0-based); k must be < count().
  int nth_set_bit(int k) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      int c = std::popcount(w_[i]);
      if (k < c) {
        std::uint64_t w = w_[i];
        while (k--) w &= w - 1;
        return static_cast<int>(i * 64 + std::countr_zero(w));
      }
      k -= c;
    }
    assert(false);
    return -1;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        f(static_cast<int>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_indices() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  static int word_count(int n) { return (n + 63) / 64; }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= ~0ull >> (64 - (n_ & 63));
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace cliquemc
