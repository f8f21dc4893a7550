#pragma once

// Label interning and a growable bitset over label indices.

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "advspec/core.hpp"
#include "advspec/ltl.hpp"

namespace advspec {

class DynBits {
 public:
  void set(std::size_t i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool test(std::size_t i) const {
    return i / 64 < w_.size() && ((w_[i / 64] >> (i % 64)) & 1u);
  }
  bool any() const {
    for (auto x : w_) {
      if (x) return true;
    }
    return false;
  }
  bool intersects(const DynBits& o) const {
    auto n = std::min(w_.size(), o.w_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (w_[i] & o.w_[i]) return true;
    }
    return false;
  }
  /// Returns true if any bit was added.
  bool merge(const DynBits& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    bool grew = false;
    for (std::size_t i = 0; i < o.w_.size(); ++i) {
      auto before = w_[i];
      w_[i] |= o.w_[i];
      grew |= before != w_[i];
    }
    return grew;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      auto x = w_[i];
      while (x) {
        auto b = static_cast<std::size_t>(std::countr_zero(x));
        f(i * 64 + b);
        x &= x - 1;
      }
    }
  }
  bool operator==(const DynBits& o) const {
    auto n = std::max(w_.size(), o.w_.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto a = i < w_.size() ? w_[i] : 0;
      auto b = i < o.w_.size() ? o.w_[i] : 0;
      if (a != b) return false;
    }
    return true;
  }
  /// Canonical key (trailing zero words removed).
  std::vector<std::uint64_t> key() const {
    auto k = w_;
    while (!k.empty() && k.back() == 0) k.pop_back();
    return k;
  }

 private:
  std::vector<std::uint64_t> w_;
};

class LabelTable {
 public:
  int intern(const EventLabel& l) {
    auto [it, inserted] = index_.emplace(l, static_cast<int>(labels_.size()));
    if (inserted) labels_.push_back(l);
    return it->second;
  }
  int find(const EventLabel& l) const {
    auto it = index_.find(l);
    return it == index_.end() ? -1 : it->second;
  }
  const EventLabel& at(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::map<EventLabel, int> index_;
  std::vector<EventLabel> labels_;
};

/// NF and NIF relations as bit rows over label indices.
struct OrderingIndex {
  std::vector<DynBits> nf_into, nf_from, nif_into, nif_from;

  void build(const MinedPropertySet& properties, LabelTable& labels) {
    for (const auto& p : properties.properties()) {
      if (p.kind != PropertyKind::NF && p.kind != PropertyKind::NIF) continue;
      auto a = static_cast<std::size_t>(labels.intern(p.a));
      auto b = static_cast<std::size_t>(labels.intern(p.b));
      auto& into = p.kind == PropertyKind::NF ? nf_into : nif_into;
      auto& from = p.kind == PropertyKind::NF ? nf_from : nif_from;
      grow(into, b);
      grow(from, a);
      into[b].set(a);
      from[a].set(b);
    }
  }

  static const DynBits& row(const std::vector<DynBits>& v, int i) {
    static const DynBits empty;
    return i >= 0 && static_cast<std::size_t>(i) < v.size() ? v[static_cast<std::size_t>(i)]
                                                             : empty;
  }

 private:
  static void grow(std::vector<DynBits>& v, std::size_t i) {
    if (v.size() <= i) v.resize(i + 1);
  }
};

}  // namespace advspec
