#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "wrcomm/groups.hpp"

// Independent brute-force ground truth. Everything here is deliberately
// naive: leaf permutations are computed straight from the definition of the
// action (one root-to-leaf walk per leaf), groups are enumerated as raw
// portraits, and derived subgroups come from a worklist closure. None of it
// reuses the image-propagation multiply kernel, so a bug there cannot hide.

namespace wrcomm::oracle {

using TreeAutSet = std::unordered_set<TreeAut, TreeAutHash>;

/// The permutation a tree automorphism induces on its leaves. Points are
/// 0-based internally, 1-based in all text output. Leaves are numbered
/// lexicographically by their child-index words.
class LeafPermutation {
 public:
  explicit LeafPermutation(std::vector<uint32_t> img) : img_(std::move(img)) {
    std::vector<char> seen(img_.size(), 0);
    for (uint32_t x : img_) {
      if (x >= img_.size() || seen[x])
        throw InvalidArgumentError("image array is not a permutation");
      seen[x] = 1;
    }
  }

  static LeafPermutation identity(uint32_t degree) {
    std::vector<uint32_t> img(degree);
    for (uint32_t i = 0; i < degree; ++i) img[i] = i;
    return LeafPermutation(std::move(img));
  }

  uint32_t degree() const { return static_cast<uint32_t>(img_.size()); }
  uint32_t apply(uint32_t x) const { return img_[x]; }
  const std::vector<uint32_t>& image() const { return img_; }

  friend bool operator==(const LeafPermutation& a, const LeafPermutation& b) {
    return a.img_ == b.img_;
  }
  friend bool operator!=(const LeafPermutation& a, const LeafPermutation& b) {
    return !(a == b);
  }
  friend bool operator<(const LeafPermutation& a, const LeafPermutation& b) {
    return a.img_ < b.img_;
  }

 private:
  std::vector<uint32_t> img_;
};

/// Composition in "apply the left factor first" order, the one convention
/// under which to_leaf_perm is a homomorphism: compose(P,Q)(x) = Q(P(x)).
inline LeafPermutation compose(const LeafPermutation& first,
                               const LeafPermutation& then) {
  if (first.degree() != then.degree())
    throw InvalidArgumentError("cannot compose permutations of degrees " +
                               std::to_string(first.degree()) + " and " +
                               std::to_string(then.degree()));
  std::vector<uint32_t> img(first.degree());
  for (uint32_t x = 0; x < first.degree(); ++x)
    img[x] = then.apply(first.apply(x));
  return LeafPermutation(std::move(img));
}

enum class Parity { Even, Odd };

inline Parity permutation_parity(const LeafPermutation& p) {
  // sign from the cycle decomposition
  std::vector<char> seen(p.degree(), 0);
  uint32_t transpositions = 0;
  for (uint32_t s = 0; s < p.degree(); ++s) {
    if (seen[s]) continue;
    uint32_t len = 0;
    for (uint32_t x = s; !seen[x]; x = p.apply(x)) {
      seen[x] = 1;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? Parity::Even : Parity::Odd;
}

/// Image of every leaf under g, one root-to-leaf walk per leaf: at each
/// vertex the cycle power rewrites the next letter, then the walk descends
/// into the original child (section semantics, g(vx) = g(v) y).
inline LeafPermutation to_leaf_perm(const TreeAut& g) {
  const AritySignature& sig = g.signature();
  const uint32_t k = sig.depth();
  const uint64_t leaves = sig.leaf_count();
  std::vector<uint32_t> img(leaves);
  std::vector<uint32_t> word(k);
  for (uint64_t leaf = 0; leaf < leaves; ++leaf) {
    uint64_t rest = leaf;
    for (uint32_t l = k; l-- > 0;) {
      word[l] = static_cast<uint32_t>(rest % sig.arity(l));
      rest /= sig.arity(l);
    }
    uint64_t vertex = 0;   // current vertex (flat index at its level)
    uint64_t out = 0;      // image word, accumulated in leaf numbering
    for (uint32_t l = 0; l < k; ++l) {
      const uint32_t p = sig.arity(l);
      const uint32_t e = g.label(l, vertex);
      uint32_t y = word[l] + e;
      if (y >= p) y -= p;
      out = out * p + y;
      vertex = vertex * p + word[l];
    }
    img[leaf] = static_cast<uint32_t>(out);
  }
  return LeafPermutation(std::move(img));
}

/// Disjoint-cycle text with 1-based points; fixed points omitted, identity
/// printed as "()". Points are run together for degree <= 9 and separated
/// by spaces otherwise.
inline std::string cycle_notation(const LeafPermutation& p) {
  const bool spaced = p.degree() > 9;
  std::string out;
  std::vector<char> seen(p.degree(), 0);
  for (uint32_t s = 0; s < p.degree(); ++s) {
    if (seen[s] || p.apply(s) == s) {
      seen[s] = 1;
      continue;
    }
    out += '(';
    bool first = true;
    for (uint32_t x = s; !seen[x]; x = p.apply(x)) {
      seen[x] = 1;
      if (!first && spaced) out += ' ';
      out += std::to_string(x + 1);
      first = false;
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

/// Every element of the group, by direct portrait enumeration (FullWreath)
/// or by filtering the full wreath product through is_in_Gk (SylowAlt).
/// Refuses explicitly when the order exceeds the guard.
inline std::vector<TreeAut> enumerate_group(
    const groups::GroupId& id, uint64_t guard = default_enumeration_guard) {
  using groups::GroupKind;
  if (id.derived())
    throw InvalidArgumentError(
        "enumerate_group covers FullWreath and SylowAlt kinds; derived "
        "subgroups come from derived_subgroup_closure");
  const AritySignature& sig = id.sig;
  const auto order = sig.group_order();
  const auto own_order = groups::group_order(id);
  if (!order || !own_order || *own_order > guard)
    throw GuardExceededError(
        "refusing to enumerate: group order exceeds the guard of " +
        std::to_string(guard));
  std::vector<TreeAut> out;
  out.reserve(static_cast<size_t>(*own_order));
  const uint32_t k = sig.depth();
  TreeAut g(sig);
  // mixed-radix odometer over all portraits, level-major
  for (;;) {
    if (id.kind == GroupKind::FullWreath || groups::is_in_Gk(g))
      out.push_back(g);
    bool carried = true;
    for (uint32_t l = k; l-- > 0 && carried;) {
      const uint64_t n = sig.vertices_at(l);
      for (uint64_t j = n; j-- > 0;) {
        const uint32_t v = g.label(l, j);
        if (v + 1 < sig.arity(l)) {
          g.set_label(l, j, v + 1);
          carried = false;
          break;
        }
        g.set_label(l, j, 0);
      }
    }
    if (carried) break;  // wrapped all the way around
  }
  return out;
}

namespace detail {

inline void insert_new(TreeAutSet& set, std::deque<TreeAut>& queue,
                       const TreeAut& g, uint64_t guard) {
  if (set.insert(g).second) {
    if (set.size() > guard)
      throw GuardExceededError("closure exceeds the guard of " +
                               std::to_string(guard));
    queue.push_back(g);
  }
}

}  // namespace detail

/// The subgroup generated by `generators` (plain product closure).
inline std::vector<TreeAut> subgroup_closure(
    const std::vector<TreeAut>& generators,
    uint64_t guard = default_enumeration_guard) {
  if (generators.empty())
    throw InvalidArgumentError("subgroup_closure needs generators");
  std::vector<TreeAut> mult;
  for (const TreeAut& g : generators) {
    wrcomm::detail::require_same_signature(g, generators[0]);
    mult.push_back(g);
    mult.push_back(inverse(g));
  }
  TreeAutSet set;
  std::deque<TreeAut> queue;
  const TreeAut e = TreeAut::identity(generators[0].signature());
  set.insert(e);
  queue.push_back(e);
  while (!queue.empty()) {
    TreeAut u = std::move(queue.front());
    queue.pop_front();
    for (const TreeAut& m : mult)
      detail::insert_new(set, queue, multiply(u, m), guard);
  }
  std::vector<TreeAut> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// The derived subgroup of the group generated by `generators`: the normal
/// closure of all pairwise commutators, i.e. the smallest set containing
/// every [g_i, g_j] that is closed under multiplication, inversion and
/// conjugation by the generators. Returned in a deterministic sorted order.
inline std::vector<TreeAut> derived_subgroup_closure(
    const std::vector<TreeAut>& generators,
    uint64_t guard = default_enumeration_guard) {
  if (generators.empty())
    throw InvalidArgumentError("derived_subgroup_closure needs generators");
  const AritySignature& sig = generators[0].signature();
  for (const TreeAut& g : generators)
    wrcomm::detail::require_same_signature(g, generators[0]);

  // multipliers: all pairwise commutators; [b,a] = [a,b]^{-1} is included
  // because pairs are taken in both orders
  std::vector<TreeAut> mult;
  TreeAutSet mult_seen;
  const TreeAut e = TreeAut::identity(sig);
  for (const TreeAut& a : generators)
    for (const TreeAut& b : generators) {
      TreeAut c = commutator(a, b);
      if (c != e && mult_seen.insert(c).second) mult.push_back(std::move(c));
    }

  for (;;) {
    // subgroup generated by the current multipliers
    TreeAutSet set;
    std::deque<TreeAut> queue;
    set.insert(e);
    queue.push_back(e);
    while (!queue.empty()) {
      TreeAut u = std::move(queue.front());
      queue.pop_front();
      for (const TreeAut& m : mult)
        detail::insert_new(set, queue, multiply(u, m), guard);
    }
    // widen by conjugation until normal under the generating group
    bool grew = false;
    for (const TreeAut& s : set)
      for (const TreeAut& g : generators) {
        TreeAut c = conjugate(s, g);
        if (!set.count(c) && mult_seen.insert(c).second) {
          mult.push_back(c);
          mult.push_back(inverse(c));
          grew = true;
        }
      }
    if (!grew) {
      std::vector<TreeAut> out(set.begin(), set.end());
      std::sort(out.begin(), out.end());
      return out;
    }
  }
}

/// { [a,b] : a,b in elements } by exhaustive pairs. Refuses when the pair
/// count exceeds the cap; callers then fall back to solver-based
/// verification element by element.
inline std::vector<TreeAut> commutator_set(
    const std::vector<TreeAut>& elements, uint64_t pair_cap = default_pair_cap) {
  const uint64_t n = elements.size();
  if (n * n > pair_cap)
    throw PairCapExceededError(
        std::to_string(n) + "^2 pairs exceed the cap of " +
        std::to_string(pair_cap) + "; verify via the solver instead");
  TreeAutSet set;
  for (const TreeAut& a : elements) {
    const TreeAut ai = inverse(a);
    for (const TreeAut& b : elements)
      set.insert(multiply(multiply(multiply(a, b), ai), inverse(b)));
  }
  std::vector<TreeAut> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Derived subgroup of the subgroup formed by `elements` (typically itself a
/// derived subgroup, giving the second derived subgroup).
inline std::vector<TreeAut> second_derived(
    const std::vector<TreeAut>& elements,
    uint64_t guard = default_enumeration_guard) {
  return derived_subgroup_closure(elements, guard);
}

}  // namespace wrcomm::oracle
