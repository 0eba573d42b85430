#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wrcomm/tree_aut.hpp"

namespace wrcomm {

/// Hard limit on brute-force enumerations and closures (element count).
inline constexpr uint64_t default_enumeration_guard = uint64_t(1) << 20;

/// Hard limit on pairwise commutator enumeration (pair count).
inline constexpr uint64_t default_pair_cap = uint64_t(1) << 24;

namespace groups {

enum class GroupKind {
  FullWreath,         // the whole iterated wreath product; B_k when binary
  SylowAlt,           // G_k, the even-on-leaves subgroup (binary only)
  DerivedFullWreath,  // its derived subgroup; B_k' when binary
  DerivedSylowAlt,    // G_k' (binary only)
};

inline const char* kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::FullWreath: return "wreath";
    case GroupKind::SylowAlt: return "sylow-a";
    case GroupKind::DerivedFullWreath: return "derived-wreath";
    case GroupKind::DerivedSylowAlt: return "derived-sylow-a";
  }
  return "?";
}

struct GroupId {
  GroupKind kind;
  AritySignature sig;

  GroupId(GroupKind k, AritySignature s) : kind(k), sig(std::move(s)) {
    if ((kind == GroupKind::SylowAlt || kind == GroupKind::DerivedSylowAlt) &&
        !sig.all_binary())
      throw InvalidArgumentError(
          "sylow-alternating groups require an all-binary signature, got (" +
          sig.to_string() + ")");
  }

  bool derived() const {
    return kind == GroupKind::DerivedFullWreath ||
           kind == GroupKind::DerivedSylowAlt;
  }

  GroupKind base_kind() const {
    return (kind == GroupKind::SylowAlt || kind == GroupKind::DerivedSylowAlt)
               ? GroupKind::SylowAlt
               : GroupKind::FullWreath;
  }
};

/// Outcome of a membership check, with the first offending level when the
/// criterion is level-based.
struct MembershipReport {
  bool member = true;
  int failing_level = -1;
  std::string reason;
};

namespace detail {

inline void require_binary(const TreeAut& g, const char* who) {
  if (!g.signature().all_binary())
    throw InvalidArgumentError(std::string(who) +
                               " requires an all-binary signature, got (" +
                               g.signature().to_string() + ")");
}

inline bool gk_by_bottom_parity(const TreeAut& g) {
  const uint32_t k = g.signature().depth();
  if (k == 0) return true;
  return level_index(g, k - 1) % 2 == 0;
}

inline bool gk_by_recursion(const TreeAut& g) {
  const uint32_t k = g.signature().depth();
  if (k == 0) return true;
  if (k == 1) return g.label(0, 0) == 0;  // G_1 = <e>
  Decomposition d = decompose(g);
  return gk_by_recursion(multiply(d.sections[0], d.sections[1]));
}

}  // namespace detail

/// g in G_k (the copy of Syl_2 A_{2^k} inside B_k)? Computed both by the
/// recursion g_1 g_2 in G_{k-1} and by evenness of the bottom level index;
/// the two routes must always agree.
inline bool is_in_Gk(const TreeAut& g) {
  detail::require_binary(g, "is_in_Gk");
  const bool rec = detail::gk_by_recursion(g);
  const bool par = detail::gk_by_bottom_parity(g);
  if (rec != par)
    throw VerificationError(
        "is_in_Gk: recursive and bottom-parity routes disagree");
  return rec;
}

/// g in B_k'? True iff In_l(g) is even for every level l.
inline MembershipReport check_Bk_derived(const TreeAut& g) {
  detail::require_binary(g, "check_Bk_derived");
  const uint32_t k = g.signature().depth();
  for (uint32_t l = 0; l < k; ++l)
    if (level_index(g, l) % 2 != 0)
      return {false, static_cast<int>(l),
              "odd index " + std::to_string(level_index(g, l)) + " on level " +
                  std::to_string(l)};
  return {};
}

inline bool is_in_Bk_derived(const TreeAut& g) {
  return check_Bk_derived(g).member;
}

namespace detail {

// G_k' criterion, level form: all even indexes on levels l < k-1 and an even
// bottom-level index inside each level-1 subtree.
inline MembershipReport gk_derived_by_levels(const TreeAut& g) {
  const uint32_t k = g.signature().depth();
  if (k == 0) return {};
  if (k == 1) {
    if (g.label(0, 0) != 0) return {false, 0, "nontrivial root (G_1' = <e>)"};
    return {};
  }
  for (uint32_t l = 0; l + 1 < k; ++l)
    if (level_index(g, l) % 2 != 0)
      return {false, static_cast<int>(l),
              "odd index on level " + std::to_string(l)};
  const uint64_t n = g.signature().vertices_at(k - 1);
  const uint64_t half = n / 2;
  uint64_t left = 0, right = 0;
  for (uint64_t j = 0; j < n; ++j)
    if (g.label(k - 1, j) != 0) (j < half ? left : right) += 1;
  if (left % 2 != 0 || right % 2 != 0)
    return {false, static_cast<int>(k - 1),
            "odd bottom-level index inside a level-1 subtree (" +
                std::to_string(left) + "/" + std::to_string(right) + ")"};
  return {};
}

// G_k' criterion, recursive form: trivial root, both level-1 sections in
// G_{k-1}, and their product in B_{k-1}'.
inline MembershipReport gk_derived_by_sections(const TreeAut& g);

}  // namespace detail

/// g in G_k'? Evaluated through two independent criteria (level-parity form
/// and section form with the trivial-root requirement); the two routes must
/// always agree.
inline bool is_in_Gk_derived(const TreeAut& g) {
  detail::require_binary(g, "is_in_Gk_derived");
  const bool lvl = detail::gk_derived_by_levels(g).member;
  const bool sec = detail::gk_derived_by_sections(g).member;
  if (lvl != sec)
    throw VerificationError(
        "is_in_Gk_derived: level and section criteria disagree");
  return lvl;
}

inline MembershipReport check_Gk_derived(const TreeAut& g) {
  detail::require_binary(g, "check_Gk_derived");
  MembershipReport r = detail::gk_derived_by_levels(g);
  const bool sec = detail::gk_derived_by_sections(g).member;
  if (r.member != sec)
    throw VerificationError(
        "check_Gk_derived: level and section criteria disagree");
  return r;
}

namespace detail {

inline MembershipReport gk_derived_by_sections(const TreeAut& g) {
  const uint32_t k = g.signature().depth();
  if (k == 0) return {};
  if (g.label(0, 0) != 0)
    return {false, 0, "nontrivial root permutation"};
  if (k == 1) return {};
  Decomposition d = decompose(g);
  if (!is_in_Gk(d.sections[0]) || !is_in_Gk(d.sections[1]))
    return {false, static_cast<int>(k - 1),
            "a level-1 section is outside G_{k-1}"};
  if (!is_in_Bk_derived(multiply(d.sections[0], d.sections[1])))
    return {false, -1, "product of level-1 sections is outside B_{k-1}'"};
  return {};
}

inline MembershipReport wreath_derived_rec(const TreeAut& w, uint32_t level) {
  const uint32_t k = w.signature().depth();
  if (k == 0) return {};
  if (w.label(0, 0) != 0)
    return {false, static_cast<int>(level),
            "nontrivial cycle power at recursion level " +
                std::to_string(level)};
  if (k == 1) return {};
  Decomposition d = decompose(w);
  const uint32_t p = w.signature().arity(0);
  // ordered product r_{p-1} ... r_1 r_p
  TreeAut x = d.sections[p - 2];
  for (int i = static_cast<int>(p) - 3; i >= 0; --i)
    x = multiply(x, d.sections[i]);
  x = multiply(x, d.sections[p - 1]);
  return wreath_derived_rec(x, level + 1);
}

}  // namespace detail

/// w in the derived subgroup of the full iterated wreath product? True iff
/// the root power is trivial and the ordered product r_{p-1}...r_1 r_p of
/// the level-1 sections is again in the derived subgroup one level down.
inline MembershipReport check_wreath_derived(const TreeAut& w) {
  return detail::wreath_derived_rec(w, 0);
}

inline bool is_in_wreath_derived(const TreeAut& w) {
  return check_wreath_derived(w).member;
}

/// Individual criterion verdicts, for callers that report them separately
/// (the predicates above already assert their agreement).
struct DualVerdict {
  bool first = false, second = false;
  const char* first_name = "";
  const char* second_name = "";
};

inline DualVerdict gk_verdicts(const TreeAut& g) {
  detail::require_binary(g, "gk_verdicts");
  return {detail::gk_by_recursion(g), detail::gk_by_bottom_parity(g),
          "section recursion (g1*g2 in G_{k-1})", "bottom-level index parity"};
}

inline DualVerdict gk_derived_verdicts(const TreeAut& g) {
  detail::require_binary(g, "gk_derived_verdicts");
  return {detail::gk_derived_by_levels(g).member,
          detail::gk_derived_by_sections(g).member,
          "level-parity form (even below k-1, split bottom)",
          "section form (trivial root, sections in G, product in B')"};
}

inline DualVerdict bk_derived_verdicts(const TreeAut& g) {
  detail::require_binary(g, "bk_derived_verdicts");
  return {check_Bk_derived(g).member, is_in_wreath_derived(g),
          "even index on every level",
          "wreath recursion (ordered section product)"};
}

/// Membership in the group designated by `id`.
inline bool is_member(const GroupId& id, const TreeAut& g) {
  if (g.signature() != id.sig)
    throw SignatureMismatchError("element signature (" +
                                 g.signature().to_string() +
                                 ") does not match group signature (" +
                                 id.sig.to_string() + ")");
  switch (id.kind) {
    case GroupKind::FullWreath: return true;
    case GroupKind::SylowAlt: return is_in_Gk(g);
    case GroupKind::DerivedFullWreath:
      if (id.sig.all_binary()) return is_in_Bk_derived(g);
      return is_in_wreath_derived(g);
    case GroupKind::DerivedSylowAlt: return is_in_Gk_derived(g);
  }
  return false;
}

/// Uniform sample from a derived subgroup, drawn directly from its portrait
/// characterization: per level a uniformly random label vector with trivial
/// level sum (even weight when binary), and per-subtree even weight on the
/// bottom level for DerivedSylowAlt. Deterministic under a fixed seed.
inline TreeAut sample_derived(const GroupId& id, std::mt19937_64& rng) {
  if (!id.derived())
    throw InvalidArgumentError("sample_derived requires a derived group kind");
  const AritySignature& sig = id.sig;
  const uint32_t k = sig.depth();
  TreeAut g(sig);
  if (k == 0) return g;

  auto fill_zero_sum = [&](uint32_t level, uint64_t from, uint64_t to) {
    // labels in [from, to) at `level`, uniform subject to sum = 0 (mod p)
    const uint32_t p = sig.arity(level);
    uint32_t sum = 0;
    for (uint64_t j = from; j + 1 < to; ++j) {
      const uint32_t v = uniform_below(rng, p);
      g.set_label(level, j, v);
      sum = (sum + v) % p;
    }
    g.set_label(level, to - 1, (p - sum) % p);
  };

  if (id.kind == GroupKind::DerivedFullWreath) {
    for (uint32_t l = 0; l < k; ++l) fill_zero_sum(l, 0, sig.vertices_at(l));
    return g;
  }
  // DerivedSylowAlt: identity for k <= 2, else split the bottom level.
  if (k <= 1) return g;
  for (uint32_t l = 0; l + 1 < k; ++l) fill_zero_sum(l, 0, sig.vertices_at(l));
  const uint64_t n = sig.vertices_at(k - 1);
  fill_zero_sum(k - 1, 0, n / 2);
  fill_zero_sum(k - 1, n / 2, n);
  return g;
}

inline TreeAut sample_derived(const GroupId& id, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_derived(id, rng);
}

/// Generating sets used to seed the oracle's closure computations. For the
/// full wreath product: one element per level with a single activation at
/// the leftmost vertex. For SylowAlt the bottom generator instead activates
/// the leftmost vertex of each half (an even leaf permutation); a single
/// adjacent pair would only generate a proper subgroup for k >= 3.
inline std::vector<TreeAut> standard_generators(
    const GroupId& id, uint64_t guard = default_enumeration_guard) {
  if (id.derived())
    throw InvalidArgumentError(
        "standard_generators covers FullWreath and SylowAlt kinds only");
  const AritySignature& sig = id.sig;
  const auto order = sig.group_order();
  if (!order || *order > guard)
    throw GuardExceededError("group order exceeds the guard of " +
                             std::to_string(guard));
  std::vector<TreeAut> gens;
  const uint32_t k = sig.depth();
  if (k == 0) {
    gens.push_back(TreeAut::identity(sig));
    return gens;
  }
  if (id.kind == GroupKind::FullWreath) {
    for (uint32_t l = 0; l < k; ++l) {
      TreeAut g(sig);
      g.set_label(l, 0, 1);
      gens.push_back(std::move(g));
    }
    return gens;
  }
  // SylowAlt
  if (k == 1) {
    gens.push_back(TreeAut::identity(sig));  // G_1 = <e>
    return gens;
  }
  for (uint32_t l = 0; l + 1 < k; ++l) {
    TreeAut g(sig);
    g.set_label(l, 0, 1);
    gens.push_back(std::move(g));
  }
  TreeAut bottom(sig);
  bottom.set_label(k - 1, 0, 1);
  bottom.set_label(k - 1, sig.vertices_at(k - 1) / 2, 1);
  gens.push_back(std::move(bottom));
  return gens;
}

/// Order of the group designated by `id`, when it fits in 63 bits.
inline std::optional<uint64_t> group_order(const GroupId& id) {
  const auto full = id.sig.group_order();
  if (!full) return std::nullopt;
  switch (id.kind) {
    case GroupKind::FullWreath: return full;
    case GroupKind::SylowAlt:
      return id.sig.depth() == 0 ? 1 : *full / 2;
    default: return std::nullopt;  // derived orders come from the oracle
  }
}

}  // namespace groups
}  // namespace wrcomm
