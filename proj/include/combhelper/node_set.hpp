#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "combhelper/error.hpp"

namespace combhelper {

using NodeId = std::uint32_t;

/// Fixed-universe set of node ids backed by a bitset, with cached cardinality.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
  NodeSet(std::size_t universe, std::initializer_list<NodeId> ids) : NodeSet(universe) {
    for (NodeId v : ids) insert(v);
  }

  static NodeSet full(std::size_t universe) {
    NodeSet s(universe);
    for (std::size_t v = 0; v < universe; ++v) s.insert(static_cast<NodeId>(v));
    return s;
  }

  static NodeSet from_ids(std::size_t universe, const std::vector<NodeId>& ids) {
    NodeSet s(universe);
    for (NodeId v : ids) s.insert(v);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool contains(NodeId v) const noexcept {
    return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1ULL) != 0;
  }

  /// Returns true when v was not already present.
  bool insert(NodeId v) {
    check(v);
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    if (w & bit) return false;
    w |= bit;
    ++size_;
    return true;
  }

  bool erase(NodeId v) {
    check(v);
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ULL << (v & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --size_;
    return true;
  }

  /// Calls f(v) for every member in ascending order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<NodeId>(wi * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  /// Smallest member >= from, or universe() when none exists.
  std::size_t next(std::size_t from) const noexcept {
    if (from >= universe_) return universe_;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~0ULL << (from & 63));
    while (true) {
      if (w) return wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi >= words_.size()) return universe_;
      w = words_[wi];
    }
  }

  std::vector<NodeId> to_vector() const {
    std::vector<NodeId> out;
    out.reserve(size_);
    for_each([&](NodeId v) { out.push_back(v); });
    return out;
  }

  /// Recomputes the cardinality from the bits; used by invariant checks.
  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool is_subset_of(const NodeSet& other) const noexcept {
    if (other.universe_ != universe_) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  friend bool operator==(const NodeSet& a, const NodeSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void check(NodeId v) const {
    if (v >= universe_)
      throw InvalidParameter("node id " + std::to_string(v) + " outside universe of size " +
                             std::to_string(universe_));
  }

  std::size_t universe_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace combhelper
