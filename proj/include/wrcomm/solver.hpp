#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wrcomm/groups.hpp"

// Constructive commutator-width-1 machinery. Every derived-subgroup element
// w of an iterated wreath product of cyclic groups is expressed as a single
// commutator w = [a, b], recursively through the tower. Witnesses are always
// verified by multiplying them back out before they are returned, so a
// transcription slip in any of the conjugation formulas turns into a hard
// VerificationError instead of silent wrongness.

namespace wrcomm::solver {

/// A verified pair with [a, b] = target. The sylow-alt flags are recomputed
/// from the membership predicates, never asserted blindly, and are
/// meaningful only over all-binary signatures (false otherwise).
struct CommutatorWitness {
  TreeAut a, b, target;
  bool a_in_sylow_alt = false;
  bool b_in_sylow_alt = false;
  int recursion_depth = 0;
};

namespace detail {

inline void recompute_flags(CommutatorWitness& w) {
  if (w.target.signature().all_binary()) {
    w.a_in_sylow_alt = groups::is_in_Gk(w.a);
    w.b_in_sylow_alt = groups::is_in_Gk(w.b);
  } else {
    w.a_in_sylow_alt = false;
    w.b_in_sylow_alt = false;
  }
}

inline CommutatorWitness identity_witness(const TreeAut& w) {
  CommutatorWitness wit{TreeAut::identity(w.signature()),
                        TreeAut::identity(w.signature()), w, false, false, 0};
  recompute_flags(wit);
  return wit;
}

}  // namespace detail

/// Split a derived-subgroup element w = (r_1, ..., r_p) into its first p-1
/// sections and the ordered section product x = r_{p-1} ... r_1 r_p, which
/// again lies in the derived subgroup one level down (so r_p is recovered as
/// r_1^{-1} ... r_{p-1}^{-1} x).
inline std::pair<std::vector<TreeAut>, TreeAut> derived_decompose(
    const TreeAut& w) {
  groups::MembershipReport rep = groups::check_wreath_derived(w);
  if (!rep.member)
    throw MembershipError("element is not in the derived subgroup: " +
                              rep.reason,
                          rep.failing_level);
  if (w.signature().depth() == 0)
    throw InvalidArgumentError("derived_decompose needs depth >= 1");
  Decomposition d = decompose(w);
  const uint32_t p = w.signature().arity(0);
  TreeAut x = d.sections[p - 2];
  for (int i = static_cast<int>(p) - 3; i >= 0; --i)
    x = multiply(x, d.sections[i]);
  x = multiply(x, d.sections[p - 1]);
  if (!groups::is_in_wreath_derived(x))
    throw VerificationError(
        "derived_decompose: section product left the derived subgroup");
  d.sections.pop_back();
  return {std::move(d.sections), std::move(x)};
}

/// One level of the lift: given sections r_1..r_{p-1} and an inner
/// commutator pair f, g, produce a verified witness for
/// w = (r_1, ..., r_{p-1}, r_1^{-1}...r_{p-1}^{-1}[f,g]) as
/// w = [(e,...,e,a_{1,p}) sigma, (a_{2,1},...,a_{2,p})] with
///   a_{2,1} = (f^{-1})^{r_1^{-1}...r_{p-1}^{-1}},
///   a_{2,i} = r_{i-1} a_{2,i-1},
///   a_{1,p} = g^{a_{2,p}^{-1}}.
inline CommutatorWitness lift_commutator(std::span<const TreeAut> r,
                                         const TreeAut& f, const TreeAut& g) {
  if (r.empty())
    throw InvalidArgumentError("lift_commutator needs p-1 >= 1 sections");
  const uint32_t p = static_cast<uint32_t>(r.size()) + 1;
  const AritySignature& sub = f.signature();
  wrcomm::detail::require_same_signature(f, g);
  for (const TreeAut& ri : r) wrcomm::detail::require_same_signature(ri, f);

  // c = r_1^{-1} r_2^{-1} ... r_{p-1}^{-1}
  TreeAut c = inverse(r[0]);
  for (uint32_t i = 1; i < p - 1; ++i) c = multiply(c, inverse(r[i]));

  std::vector<TreeAut> a2;
  a2.reserve(p);
  a2.push_back(conjugate(inverse(f), c));
  for (uint32_t i = 1; i < p; ++i) a2.push_back(multiply(r[i - 1], a2[i - 1]));

  std::vector<TreeAut> a1(p - 1, TreeAut::identity(sub));
  a1.push_back(conjugate(g, inverse(a2[p - 1])));

  CommutatorWitness wit;
  wit.a = compose_from(1, a1, p);
  wit.b = compose_from(0, a2, p);

  // the element these sections actually define
  std::vector<TreeAut> sections(r.begin(), r.end());
  sections.push_back(multiply(c, commutator(f, g)));
  wit.target = compose_from(0, sections, p);

  if (commutator(wit.a, wit.b) != wit.target)
    throw VerificationError(
        "lift_commutator: witness failed re-multiplication");
  wit.recursion_depth = 1;
  detail::recompute_flags(wit);
  return wit;
}

inline CommutatorWitness lift_commutator(const std::vector<TreeAut>& r,
                                         const TreeAut& f, const TreeAut& g) {
  return lift_commutator(std::span<const TreeAut>(r.data(), r.size()), f, g);
}

/// Express any derived-subgroup element of the iterated wreath product as a
/// single commutator, recursing through the tower. Depth-1 towers are
/// abelian, so the recursion bottoms out at the identity.
inline CommutatorWitness solve_cyclic_tower(const TreeAut& w) {
  groups::MembershipReport rep = groups::check_wreath_derived(w);
  if (!rep.member)
    throw MembershipError("element is not in the derived subgroup: " +
                              rep.reason,
                          rep.failing_level);
  if (w.is_identity()) return detail::identity_witness(w);
  if (w.signature().depth() <= 1)
    throw VerificationError(
        "solve_cyclic_tower: nonidentity element survived the depth-1 "
        "membership check (corrupted input)");

  auto [r, x] = derived_decompose(w);
  CommutatorWitness inner = solve_cyclic_tower(x);
  CommutatorWitness wit = lift_commutator(r, inner.a, inner.b);
  if (wit.target != w)
    throw VerificationError("solve_cyclic_tower: reconstructed target differs");
  wit.recursion_depth = inner.recursion_depth + 1;
  return wit;
}

/// Solve w in B_k' with the extra guarantee a in G_k: the recursion keeps
/// the inner pair in the shape x = [f, g] with f in B_{k-1}, g in G_{k-1}.
/// An inner witness (a', b') with a' in G_{k-1} is rearranged through the
/// identity [a', b'] = [b'^{a'}, a'^{-1}] so the G-side lands in the second
/// slot, which the lift conjugates into the active section of a.
inline CommutatorWitness solve_Bk_derived(const TreeAut& w) {
  groups::MembershipReport rep = groups::check_Bk_derived(w);
  if (!rep.member)
    throw MembershipError("element is not in B_k': " + rep.reason,
                          rep.failing_level);
  if (w.is_identity()) return detail::identity_witness(w);

  Decomposition d = decompose(w);
  TreeAut x = multiply(d.sections[0], d.sections[1]);
  if (!groups::is_in_Bk_derived(x))
    throw VerificationError("solve_Bk_derived: section product left B_{k-1}'");

  CommutatorWitness inner = solve_Bk_derived(x);
  const TreeAut f = conjugate(inner.b, inner.a);
  const TreeAut g = inverse(inner.a);

  std::vector<TreeAut> r{std::move(d.sections[0])};
  CommutatorWitness wit = lift_commutator(r, f, g);
  if (wit.target != w)
    throw VerificationError("solve_Bk_derived: reconstructed target differs");
  wit.recursion_depth = inner.recursion_depth + 1;
  if (!wit.a_in_sylow_alt)
    throw VerificationError(
        "solve_Bk_derived: witness a fell outside G_k (construction-order "
        "bug)");
  return wit;
}

/// Solve w in G_k' with both witnesses inside G_k: w = (r_1, r_1^{-1} x)
/// with r_1 in G_{k-1} and x = g_1 g_2 in B_{k-1}'; the B_k' solver supplies
/// x = [f, g] with g in G_{k-1}, and the p = 2 lift then lands both sides in
/// G_k.
inline CommutatorWitness solve_Gk_derived(const TreeAut& w) {
  groups::MembershipReport rep = groups::check_Gk_derived(w);
  if (!rep.member)
    throw MembershipError("element is not in G_k': " + rep.reason,
                          rep.failing_level);
  if (w.is_identity()) return detail::identity_witness(w);

  Decomposition d = decompose(w);
  if (!groups::is_in_Gk(d.sections[0]))
    throw VerificationError("solve_Gk_derived: r_1 fell outside G_{k-1}");
  TreeAut x = multiply(d.sections[0], d.sections[1]);
  if (!groups::is_in_Bk_derived(x))
    throw VerificationError("solve_Gk_derived: section product left B_{k-1}'");

  CommutatorWitness inner = solve_Bk_derived(x);
  const TreeAut f = conjugate(inner.b, inner.a);
  const TreeAut g = inverse(inner.a);

  std::vector<TreeAut> r{std::move(d.sections[0])};
  CommutatorWitness wit = lift_commutator(r, f, g);
  if (wit.target != w)
    throw VerificationError("solve_Gk_derived: reconstructed target differs");
  wit.recursion_depth = inner.recursion_depth + 1;
  if (!wit.a_in_sylow_alt || !wit.b_in_sylow_alt)
    throw VerificationError(
        "solve_Gk_derived: a witness fell outside G_k (construction-order "
        "bug)");
  return wit;
}

}  // namespace wrcomm::solver
