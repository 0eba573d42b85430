#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wrcomm/signature.hpp"

namespace wrcomm {

/// A rooted-tree automorphism given by its portrait: one label per internal
/// vertex, the label e of a level-l vertex meaning the cycle power sigma^e
/// on its children, where sigma = (1,2,...,p_{l+1}) acts as i -> i+1 (mod p)
/// on 1-based child positions. Storage is level-major and full (labels kept
/// even under inactive parents); portraits over the same signature are equal
/// iff all labels are equal. Values are immutable under the group operations
/// below; every operation is a pure function of its inputs.
class TreeAut {
 public:
  TreeAut() : TreeAut(AritySignature()) {}

  explicit TreeAut(AritySignature sig)
      : sig_(std::move(sig)),
        words_(sig_.packed_words(), 0),
        ints_(sig_.int_slots(), 0) {}

  static TreeAut identity(const AritySignature& sig) { return TreeAut(sig); }

  const AritySignature& signature() const { return sig_; }

  uint32_t label(uint32_t level, uint64_t j) const {
    check_vertex(level, j);
    if (sig_.level_packed(level)) {
      const uint64_t off = sig_.level_offset(level);
      return static_cast<uint32_t>((words_[off + (j >> 6)] >> (j & 63)) & 1u);
    }
    return ints_[sig_.level_offset(level) + j];
  }

  void set_label(uint32_t level, uint64_t j, uint32_t v) {
    check_vertex(level, j);
    if (v >= sig_.arity(level))
      throw InvalidArgumentError("label " + std::to_string(v) +
                                 " out of range for arity " +
                                 std::to_string(sig_.arity(level)));
    if (sig_.level_packed(level)) {
      const uint64_t off = sig_.level_offset(level);
      uint64_t& w = words_[off + (j >> 6)];
      w = (w & ~(uint64_t(1) << (j & 63))) | (uint64_t(v) << (j & 63));
    } else {
      ints_[sig_.level_offset(level) + j] = v;
    }
  }

  bool is_identity() const {
    for (uint64_t w : words_)
      if (w) return false;
    for (uint32_t v : ints_)
      if (v) return false;
    return true;
  }

  /// Reset to the identity portrait, optionally over a new signature.
  void reset(const AritySignature& sig) {
    if (sig_ != sig) {
      sig_ = sig;
      words_.assign(sig_.packed_words(), 0);
      ints_.assign(sig_.int_slots(), 0);
    } else {
      std::fill(words_.begin(), words_.end(), 0);
      std::fill(ints_.begin(), ints_.end(), 0);
    }
  }

  // Raw storage access for the per-level kernels below.
  const uint64_t* words() const { return words_.data(); }
  uint64_t* words_mut() { return words_.data(); }
  const uint32_t* ints() const { return ints_.data(); }
  uint32_t* ints_mut() { return ints_.data(); }

  friend bool operator==(const TreeAut& a, const TreeAut& b) {
    return a.sig_ == b.sig_ && a.words_ == b.words_ && a.ints_ == b.ints_;
  }
  friend bool operator!=(const TreeAut& a, const TreeAut& b) {
    return !(a == b);
  }

  /// Deterministic strict total order (used for canonical set output).
  friend bool operator<(const TreeAut& a, const TreeAut& b) {
    if (a.sig_ != b.sig_) return a.sig_.arities() < b.sig_.arities();
    if (a.words_ != b.words_) return a.words_ < b.words_;
    return a.ints_ < b.ints_;
  }

 private:
  void check_vertex(uint32_t level, uint64_t j) const {
    if (level >= sig_.depth() || j >= sig_.vertices_at(level))
      throw InvalidArgumentError("vertex (" + std::to_string(level) + "," +
                                 std::to_string(j) + ") out of range");
  }

  AritySignature sig_;
  std::vector<uint64_t> words_;
  std::vector<uint32_t> ints_;
};

struct TreeAutHash {
  size_t operator()(const TreeAut& g) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    for (uint32_t a : g.signature().arities()) mix(a);
    const AritySignature& s = g.signature();
    const uint64_t* w = g.words();
    for (uint64_t i = 0; i < s.packed_words(); ++i) mix(w[i]);
    const uint32_t* v = g.ints();
    for (uint64_t i = 0; i < s.int_slots(); ++i) mix(v[i]);
    return static_cast<size_t>(h);
  }
};

/// Reusable buffers for the image-propagation loops; lets hot paths run
/// without heap allocation once warmed up.
struct MulScratch {
  std::vector<uint32_t> img, next;
};

namespace detail {

inline void require_same_signature(const TreeAut& a, const TreeAut& b) {
  if (a.signature() != b.signature())
    throw SignatureMismatchError("signature mismatch: (" +
                                 a.signature().to_string() + ") vs (" +
                                 b.signature().to_string() + ")");
}

}  // namespace detail

/// out = g * h over equal signatures. The product's label at vertex v is
/// label_g(v) + label_h(g(v)), with g(v) the image of v under g; the image
/// arrays are propagated level by level. out must not alias g or h.
inline void multiply_into(TreeAut& out, const TreeAut& g, const TreeAut& h,
                          MulScratch& s) {
  detail::require_same_signature(g, h);
  if (&out == &g || &out == &h)
    throw InvalidArgumentError("multiply_into: out must not alias an input");
  const AritySignature& sig = g.signature();
  out.reset(sig);
  const uint32_t k = sig.depth();
  s.img.assign(1, 0);
  for (uint32_t l = 0; l < k; ++l) {
    const uint64_t n = sig.vertices_at(l);
    const bool build_next = (l + 1 < k);
    if (build_next) s.next.resize(sig.vertices_at(l + 1));
    const uint64_t off = sig.level_offset(l);
    if (sig.level_packed(l)) {
      const uint64_t* gw = g.words() + off;
      const uint64_t* hw = h.words() + off;
      uint64_t* ow = out.words_mut() + off;
      for (uint64_t j = 0; j < n; ++j) {
        const uint32_t eg =
            static_cast<uint32_t>((gw[j >> 6] >> (j & 63)) & 1u);
        const uint32_t gj = s.img[j];
        const uint32_t eh =
            static_cast<uint32_t>((hw[gj >> 6] >> (gj & 63)) & 1u);
        ow[j >> 6] |= uint64_t(eg ^ eh) << (j & 63);
        if (build_next) {
          s.next[2 * j] = 2 * gj + eg;
          s.next[2 * j + 1] = 2 * gj + (eg ^ 1u);
        }
      }
    } else {
      const uint32_t p = sig.arity(l);
      const uint32_t* gi = g.ints() + off;
      const uint32_t* hi = h.ints() + off;
      uint32_t* oi = out.ints_mut() + off;
      for (uint64_t j = 0; j < n; ++j) {
        const uint32_t eg = gi[j];
        const uint32_t gj = s.img[j];
        uint32_t e = eg + hi[gj];
        if (e >= p) e -= p;
        oi[j] = e;
        if (build_next) {
          const uint64_t bs = j * p;
          const uint64_t bd = uint64_t(gj) * p;
          for (uint32_t c = 0; c < p; ++c) {
            uint32_t cc = c + eg;
            if (cc >= p) cc -= p;
            s.next[bs + c] = static_cast<uint32_t>(bd + cc);
          }
        }
      }
    }
    if (build_next) s.img.swap(s.next);
  }
}

/// out = g^{-1}. Uses label_{g^{-1}}(g(v)) = -label_g(v). out must not
/// alias g.
inline void inverse_into(TreeAut& out, const TreeAut& g, MulScratch& s) {
  if (&out == &g)
    throw InvalidArgumentError("inverse_into: out must not alias the input");
  const AritySignature& sig = g.signature();
  out.reset(sig);
  const uint32_t k = sig.depth();
  s.img.assign(1, 0);
  for (uint32_t l = 0; l < k; ++l) {
    const uint64_t n = sig.vertices_at(l);
    const bool build_next = (l + 1 < k);
    if (build_next) s.next.resize(sig.vertices_at(l + 1));
    const uint64_t off = sig.level_offset(l);
    if (sig.level_packed(l)) {
      const uint64_t* gw = g.words() + off;
      uint64_t* ow = out.words_mut() + off;
      for (uint64_t j = 0; j < n; ++j) {
        const uint32_t eg =
            static_cast<uint32_t>((gw[j >> 6] >> (j & 63)) & 1u);
        const uint32_t gj = s.img[j];
        ow[gj >> 6] |= uint64_t(eg) << (gj & 63);  // -e = e mod 2
        if (build_next) {
          s.next[2 * j] = 2 * gj + eg;
          s.next[2 * j + 1] = 2 * gj + (eg ^ 1u);
        }
      }
    } else {
      const uint32_t p = sig.arity(l);
      const uint32_t* gi = g.ints() + off;
      uint32_t* oi = out.ints_mut() + off;
      for (uint64_t j = 0; j < n; ++j) {
        const uint32_t eg = gi[j];
        const uint32_t gj = s.img[j];
        oi[gj] = eg ? p - eg : 0;
        if (build_next) {
          const uint64_t bs = j * p;
          const uint64_t bd = uint64_t(gj) * p;
          for (uint32_t c = 0; c < p; ++c) {
            uint32_t cc = c + eg;
            if (cc >= p) cc -= p;
            s.next[bs + c] = static_cast<uint32_t>(bd + cc);
          }
        }
      }
    }
    if (build_next) s.img.swap(s.next);
  }
}

inline TreeAut multiply(const TreeAut& g, const TreeAut& h) {
  TreeAut out(g.signature());
  MulScratch s;
  multiply_into(out, g, h, s);
  return out;
}

inline TreeAut inverse(const TreeAut& g) {
  TreeAut out(g.signature());
  MulScratch s;
  inverse_into(out, g, s);
  return out;
}

/// a^b = b a b^{-1} (a conjugated by b).
inline TreeAut conjugate(const TreeAut& a, const TreeAut& b) {
  detail::require_same_signature(a, b);
  return multiply(multiply(b, a), inverse(b));
}

/// [a, b] = a b a^{-1} b^{-1}.
inline TreeAut commutator(const TreeAut& a, const TreeAut& b) {
  detail::require_same_signature(a, b);
  return multiply(multiply(multiply(a, b), inverse(a)), inverse(b));
}

/// Section (state) of g at the vertex addressed by 1-based child indices:
/// the portrait of the subtree below that vertex, over the truncated
/// signature.
inline TreeAut section(const TreeAut& g, std::span<const uint32_t> addr) {
  const AritySignature& sig = g.signature();
  if (addr.size() > sig.depth())
    throw InvalidArgumentError("vertex address longer than tree depth");
  const uint32_t m = static_cast<uint32_t>(addr.size());
  uint64_t j = 0;
  for (uint32_t i = 0; i < m; ++i) {
    const uint32_t p = sig.arity(i);
    if (addr[i] < 1 || addr[i] > p)
      throw InvalidArgumentError("child index " + std::to_string(addr[i]) +
                                 " out of range at level " + std::to_string(i));
    j = j * p + (addr[i] - 1);
  }
  AritySignature sub = sig.suffix(m);
  TreeAut out(sub);
  for (uint32_t l = 0; l < sub.depth(); ++l) {
    const uint64_t nsub = sub.vertices_at(l);
    const uint64_t base = j * nsub;
    for (uint64_t jj = 0; jj < nsub; ++jj)
      out.set_label(l, jj, g.label(m + l, base + jj));
  }
  return out;
}

inline TreeAut section(const TreeAut& g, std::initializer_list<uint32_t> addr) {
  return section(g, std::span<const uint32_t>(addr.begin(), addr.size()));
}

/// Wreath-recursion view g = (g_1, ..., g_p) sigma^i: the root power and the
/// level-1 sections in child order.
struct Decomposition {
  uint32_t root_power;
  std::vector<TreeAut> sections;
};

inline Decomposition decompose(const TreeAut& g) {
  const AritySignature& sig = g.signature();
  if (sig.depth() == 0)
    throw InvalidArgumentError("cannot decompose a depth-0 portrait");
  const uint32_t p = sig.arity(0);
  Decomposition d;
  d.root_power = g.label(0, 0);
  d.sections.reserve(p);
  for (uint32_t c = 1; c <= p; ++c) d.sections.push_back(section(g, {c}));
  return d;
}

/// Inverse of decompose. sections may be empty to denote p trivial depth-0
/// sections (a depth-1 result).
inline TreeAut compose_from(uint32_t root_power,
                            std::span<const TreeAut> sections, uint32_t p) {
  if (p < 2) throw InvalidArgumentError("root arity must be >= 2");
  if (root_power >= p)
    throw InvalidArgumentError("root power " + std::to_string(root_power) +
                               " out of range for arity " + std::to_string(p));
  if (!sections.empty() && sections.size() != p)
    throw InvalidArgumentError("expected " + std::to_string(p) +
                               " sections, got " +
                               std::to_string(sections.size()));
  AritySignature sub =
      sections.empty() ? AritySignature() : sections[0].signature();
  for (const TreeAut& s : sections)
    if (s.signature() != sub)
      throw SignatureMismatchError("sections must share a signature");
  TreeAut out(sub.prepend(p));
  out.set_label(0, 0, root_power);
  for (uint32_t c = 0; c < sections.size(); ++c)
    for (uint32_t l = 0; l < sub.depth(); ++l) {
      const uint64_t nsub = sub.vertices_at(l);
      for (uint64_t jj = 0; jj < nsub; ++jj)
        out.set_label(l + 1, uint64_t(c) * nsub + jj,
                      sections[c].label(l, jj));
    }
  return out;
}

inline TreeAut compose_from(uint32_t root_power,
                            const std::vector<TreeAut>& sections, uint32_t p) {
  return compose_from(root_power,
                      std::span<const TreeAut>(sections.data(), sections.size()),
                      p);
}

/// In_l(g): number of level-l vertices with a nontrivial vertex permutation.
inline uint64_t level_index(const TreeAut& g, uint32_t level) {
  const AritySignature& sig = g.signature();
  if (level >= sig.depth())
    throw InvalidArgumentError("level " + std::to_string(level) +
                               " out of range");
  const uint64_t n = sig.vertices_at(level);
  const uint64_t off = sig.level_offset(level);
  uint64_t count = 0;
  if (sig.level_packed(level)) {
    const uint64_t* w = g.words() + off;
    for (uint64_t i = 0; i < (n + 63) / 64; ++i)
      count += std::popcount(w[i]);  // padding bits are kept zero
  } else {
    const uint32_t* v = g.ints() + off;
    for (uint64_t j = 0; j < n; ++j) count += (v[j] != 0);
  }
  return count;
}

/// Per-level counts of nontrivial labels, plus (for levels >= 1) the counts
/// restricted to each level-1 subtree.
struct LevelIndexProfile {
  std::vector<uint64_t> counts;
  std::vector<std::vector<uint64_t>> per_subtree;  // [level][root child]
};

inline LevelIndexProfile level_index_profile(const TreeAut& g) {
  const AritySignature& sig = g.signature();
  const uint32_t k = sig.depth();
  LevelIndexProfile prof;
  prof.counts.resize(k);
  prof.per_subtree.resize(k);
  for (uint32_t l = 0; l < k; ++l) prof.counts[l] = level_index(g, l);
  if (k == 0) return prof;
  const uint32_t p1 = sig.arity(0);
  for (uint32_t l = 1; l < k; ++l) {
    const uint64_t n = sig.vertices_at(l);
    const uint64_t block = n / p1;
    prof.per_subtree[l].assign(p1, 0);
    for (uint64_t j = 0; j < n; ++j)
      if (g.label(l, j) != 0) ++prof.per_subtree[l][j / block];
  }
  return prof;
}

/// Uniform integer in [0, p), rejection-sampled so it is unbiased and
/// reproducible across platforms.
inline uint32_t uniform_below(std::mt19937_64& rng, uint32_t p) {
  if (p <= 1) return 0;
  const uint64_t limit = (UINT64_MAX / p) * uint64_t(p);
  for (;;) {
    const uint64_t x = rng();
    if (x < limit) return static_cast<uint32_t>(x % p);
  }
}

/// Uniformly random portrait: labels drawn independently per vertex. Since
/// portrait <-> element is a bijection this samples the uniform distribution
/// on the group.
inline TreeAut random_element(const AritySignature& sig,
                              std::mt19937_64& rng) {
  TreeAut g(sig);
  for (uint32_t l = 0; l < sig.depth(); ++l) {
    const uint32_t p = sig.arity(l);
    const uint64_t n = sig.vertices_at(l);
    for (uint64_t j = 0; j < n; ++j) g.set_label(l, j, uniform_below(rng, p));
  }
  return g;
}

inline TreeAut random_element(const AritySignature& sig, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_element(sig, rng);
}

}  // namespace wrcomm
