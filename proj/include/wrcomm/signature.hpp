#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wrcomm/errors.hpp"

namespace wrcomm {

/// Shape of a finite regular rooted tree: the sequence of arities
/// (p_1, ..., p_k), p_i >= 2. Level l (root = level 0) has p_1*...*p_l
/// vertices, each carrying a label in Z_{p_{l+1}}. Depth 0 is the trivial
/// group. The payload is shared and immutable, so copies are cheap and the
/// type has value semantics.
class AritySignature {
 public:
  AritySignature() : d_(trivial_payload()) {}

  explicit AritySignature(std::vector<uint32_t> arities)
      : d_(make_payload(std::move(arities))) {}

  static AritySignature binary(uint32_t depth) {
    return AritySignature(std::vector<uint32_t>(depth, 2));
  }

  uint32_t depth() const { return static_cast<uint32_t>(d_->arities.size()); }

  /// Arity below level `level`, i.e. p_{level+1}.
  uint32_t arity(uint32_t level) const {
    if (level >= depth())
      throw InvalidArgumentError("level " + std::to_string(level) +
                                 " out of range for depth " +
                                 std::to_string(depth()));
    return d_->arities[level];
  }

  /// Number of vertices at `level`, valid for level in [0, depth].
  uint64_t vertices_at(uint32_t level) const {
    if (level > depth())
      throw InvalidArgumentError("level out of range");
    return d_->nverts[level];
  }

  uint64_t leaf_count() const { return d_->nverts[depth()]; }

  /// Total number of labels (= internal vertices, levels 0..depth-1).
  uint64_t label_count() const { return d_->total_labels; }

  bool all_binary() const { return d_->all_binary; }

  const std::vector<uint32_t>& arities() const { return d_->arities; }

  /// Signature of the subtree hanging below a level-`from` vertex.
  AritySignature suffix(uint32_t from) const {
    if (from > depth()) throw InvalidArgumentError("suffix start out of range");
    if (from == 0) return *this;
    return AritySignature(std::vector<uint32_t>(d_->arities.begin() + from,
                                                d_->arities.end()));
  }

  /// Signature obtained by adding a new root of arity `p` above this one.
  AritySignature prepend(uint32_t p) const {
    std::vector<uint32_t> a;
    a.reserve(depth() + 1);
    a.push_back(p);
    a.insert(a.end(), d_->arities.begin(), d_->arities.end());
    return AritySignature(std::move(a));
  }

  /// Order of the full iterated wreath product over this signature, i.e.
  /// prod over levels of arity(l)^(vertices at l). nullopt when it does not
  /// fit in 63 bits.
  std::optional<uint64_t> group_order() const { return d_->order; }

  // Storage layout for portraits: levels of arity 2 pack one bit per vertex
  // into 64-bit words (each level starting at a word boundary), other levels
  // use one uint32 slot per vertex.
  bool level_packed(uint32_t level) const { return d_->packed[level] != 0; }
  uint64_t level_offset(uint32_t level) const { return d_->offset[level]; }
  uint64_t packed_words() const { return d_->words; }
  uint64_t int_slots() const { return d_->ints; }

  friend bool operator==(const AritySignature& a, const AritySignature& b) {
    return a.d_ == b.d_ || a.d_->arities == b.d_->arities;
  }
  friend bool operator!=(const AritySignature& a, const AritySignature& b) {
    return !(a == b);
  }

  std::string to_string() const {
    std::string s;
    for (uint32_t i = 0; i < depth(); ++i) {
      if (i) s += ',';
      s += std::to_string(d_->arities[i]);
    }
    return s;
  }

 private:
  struct Data {
    std::vector<uint32_t> arities;
    std::vector<uint64_t> nverts;   // size depth+1
    std::vector<uint64_t> offset;   // per level: word offset or int offset
    std::vector<uint8_t> packed;    // per level: 1 if bit-packed
    uint64_t words = 0;             // total packed words
    uint64_t ints = 0;              // total uint32 slots
    uint64_t total_labels = 0;
    bool all_binary = true;
    std::optional<uint64_t> order;
  };

  static std::shared_ptr<const Data> make_payload(std::vector<uint32_t> arities) {
    auto d = std::make_shared<Data>();
    d->arities = std::move(arities);
    const size_t k = d->arities.size();
    d->nverts.resize(k + 1);
    d->nverts[0] = 1;
    d->offset.resize(k);
    d->packed.resize(k);
    long double log2_order = 0.0L;
    for (size_t l = 0; l < k; ++l) {
      const uint32_t p = d->arities[l];
      if (p < 2)
        throw InvalidArgumentError("arity must be >= 2, got " +
                                   std::to_string(p));
      const uint64_t n = d->nverts[l];
      log2_order += static_cast<long double>(n) * std::log2((long double)p);
      d->total_labels += n;
      if (d->total_labels > (1ull << 31) || n > (1ull << 31))
        throw InvalidArgumentError("signature too large");
      if (p == 2) {
        d->packed[l] = 1;
        d->offset[l] = d->words;
        d->words += (n + 63) / 64;
      } else {
        d->packed[l] = 0;
        d->offset[l] = d->ints;
        d->ints += n;
        d->all_binary = false;
      }
      d->nverts[l + 1] = n * p;
    }
    if (log2_order < 62.5L) {
      uint64_t order = 1;
      for (size_t l = 0; l < k; ++l)
        for (uint64_t i = 0; i < d->nverts[l]; ++i) order *= d->arities[l];
      d->order = order;
    }
    return d;
  }

  static std::shared_ptr<const Data> trivial_payload() {
    static const std::shared_ptr<const Data> t = [] {
      auto d = std::make_shared<Data>();
      d->nverts = {1};
      d->order = 1;
      return d;
    }();
    return t;
  }

  std::shared_ptr<const Data> d_;
};

}  // namespace wrcomm
