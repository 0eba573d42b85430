#include <random>
#include <set>

#include "doctest.h"
#include "wrcomm/oracle.hpp"

using namespace wrcomm;
using namespace wrcomm::groups;

namespace {

GroupId bk(uint32_t k) {
  return GroupId(GroupKind::FullWreath, AritySignature::binary(k));
}
GroupId gk(uint32_t k) {
  return GroupId(GroupKind::SylowAlt, AritySignature::binary(k));
}

oracle::TreeAutSet as_set(const std::vector<TreeAut>& v) {
  return oracle::TreeAutSet(v.begin(), v.end());
}

std::vector<TreeAut> derived_of(const GroupId& id) {
  return oracle::derived_subgroup_closure(standard_generators(id));
}

}  // namespace

TEST_CASE("GroupId validation") {
  CHECK_THROWS_AS(GroupId(GroupKind::SylowAlt, AritySignature({3, 3})),
                  InvalidArgumentError);
  CHECK_THROWS_AS(GroupId(GroupKind::DerivedSylowAlt, AritySignature({2, 3})),
                  InvalidArgumentError);
  GroupId id(GroupKind::DerivedSylowAlt, AritySignature::binary(3));
  CHECK(id.derived());
  CHECK(id.base_kind() == GroupKind::SylowAlt);
}

TEST_CASE("is_in_Gk: G_1 is trivial, index 2 at every k, route agreement") {
  for (uint32_t k = 1; k <= 4; ++k)
    CHECK(is_in_Gk(TreeAut::identity(AritySignature::binary(k))));

  TreeAut rootswap(AritySignature::binary(1));
  rootswap.set_label(0, 0, 1);
  CHECK_FALSE(is_in_Gk(rootswap));  // G_1 = <e>

  CHECK_THROWS_AS(is_in_Gk(TreeAut::identity(AritySignature({3}))),
                  InvalidArgumentError);

  // |B_3 : G_3| = 2 and the parity filter matches the oracle
  const auto B3 = oracle::enumerate_group(bk(3));
  size_t members = 0;
  for (const TreeAut& g : B3) {
    const auto v = gk_verdicts(g);
    CHECK(v.first == v.second);
    if (is_in_Gk(g)) ++members;
  }
  CHECK(members == 64);
}

TEST_CASE("is_in_Bk_derived matches the oracle closure on B_3") {
  TreeAut rootswap(AritySignature::binary(3));
  rootswap.set_label(0, 0, 1);
  const auto rep = check_Bk_derived(rootswap);
  CHECK_FALSE(rep.member);
  CHECK(rep.failing_level == 0);

  const auto closure = as_set(derived_of(bk(3)));
  for (const TreeAut& g : oracle::enumerate_group(bk(3))) {
    CHECK(is_in_Bk_derived(g) == (closure.count(g) != 0));
    // binary towers: parity form and wreath-recursion form agree
    const auto v = bk_derived_verdicts(g);
    CHECK(v.first == v.second);
  }
}

TEST_CASE("is_in_Gk_derived: trivial at k = 2, the 8-element set at k = 3") {
  CHECK(is_in_Gk_derived(TreeAut::identity(AritySignature::binary(2))));

  const auto G2 = oracle::enumerate_group(gk(2));
  CHECK(G2.size() == 4);
  size_t in_derived = 0;
  for (const TreeAut& g : G2)
    if (is_in_Gk_derived(g)) ++in_derived;
  CHECK(in_derived == 1);  // G_2' is trivial

  const auto closure = as_set(derived_of(gk(3)));
  CHECK(closure.size() == 8);
  for (const TreeAut& g : oracle::enumerate_group(bk(3))) {
    const auto v = gk_derived_verdicts(g);
    CHECK(v.first == v.second);
    CHECK(is_in_Gk_derived(g) == (closure.count(g) != 0));
  }
}

TEST_CASE("the trivial-root strengthening is what the closure wants") {
  // elements (g1, g2) sigma with g1, g2 in G_{k-1} and g1 g2 in B_{k-1}'
  // exist, but never lie in G_k'; the root swap itself is the smallest case
  const auto closure = as_set(derived_of(gk(3)));
  size_t sigma_candidates = 0;
  for (const TreeAut& g : oracle::enumerate_group(gk(3))) {
    if (g.label(0, 0) == 0) continue;
    Decomposition d = decompose(g);
    if (is_in_Gk(d.sections[0]) && is_in_Gk(d.sections[1]) &&
        is_in_Bk_derived(multiply(d.sections[0], d.sections[1]))) {
      ++sigma_candidates;
      CHECK(closure.count(g) == 0);
      CHECK_FALSE(is_in_Gk_derived(g));
    }
  }
  CHECK(sigma_candidates > 0);
}

TEST_CASE("is_in_wreath_derived agrees with the closure on mixed towers") {
  for (auto arities : {std::vector<uint32_t>{2, 3}, {3, 2}, {3, 3}}) {
    GroupId id(GroupKind::FullWreath, AritySignature(arities));
    const auto closure = as_set(derived_of(id));
    for (const TreeAut& g : oracle::enumerate_group(id)) {
      CHECK(is_in_wreath_derived(g) == (closure.count(g) != 0));
      if (g.label(0, 0) != 0) CHECK_FALSE(is_in_wreath_derived(g));
    }
    CHECK(is_in_wreath_derived(TreeAut::identity(id.sig)));
  }
}

TEST_CASE("sample_derived") {
  std::mt19937_64 rng(77);

  GroupId b4d(GroupKind::DerivedFullWreath, AritySignature::binary(4));
  for (int i = 0; i < 1000; ++i)
    CHECK(is_in_Bk_derived(sample_derived(b4d, rng)));

  // k = 2: G_2' is trivial, the sampler can only return the identity
  GroupId g2d(GroupKind::DerivedSylowAlt, AritySignature::binary(2));
  for (uint64_t seed = 0; seed < 50; ++seed)
    CHECK(sample_derived(g2d, seed).is_identity());

  // k = 3: 10^4 draws hit all 8 elements of G_3'
  GroupId g3d(GroupKind::DerivedSylowAlt, AritySignature::binary(3));
  oracle::TreeAutSet seen;
  for (int i = 0; i < 10000; ++i) {
    TreeAut g = sample_derived(g3d, rng);
    CHECK(is_in_Gk_derived(g));
    seen.insert(std::move(g));
  }
  CHECK(seen == as_set(derived_of(gk(3))));

  // general tower
  GroupId w33d(GroupKind::DerivedFullWreath, AritySignature({3, 3}));
  for (int i = 0; i < 200; ++i)
    CHECK(is_in_wreath_derived(sample_derived(w33d, rng)));

  CHECK(sample_derived(b4d, 9) == sample_derived(b4d, 9));
  CHECK_THROWS_AS(sample_derived(bk(3), rng), InvalidArgumentError);
}

TEST_CASE("standard_generators close to the advertised orders") {
  CHECK(standard_generators(bk(2)).size() == 2);
  CHECK(oracle::subgroup_closure(standard_generators(bk(2))).size() == 8);
  CHECK(oracle::subgroup_closure(standard_generators(gk(3))).size() == 64);
  CHECK(oracle::subgroup_closure(standard_generators(gk(2))).size() == 4);
  GroupId c7(GroupKind::FullWreath, AritySignature({7}));
  CHECK(oracle::subgroup_closure(standard_generators(c7)).size() == 7);
  CHECK_THROWS_AS(
      standard_generators(GroupId(GroupKind::DerivedFullWreath,
                                  AritySignature::binary(2))),
      InvalidArgumentError);
  CHECK_THROWS_AS(standard_generators(bk(5)), GuardExceededError);
}

TEST_CASE("structural propositions at small k") {
  // B_k' < G_k and G_k normal in B_k, exhaustively at k = 3
  const auto B3 = oracle::enumerate_group(bk(3));
  const auto G3 = oracle::enumerate_group(gk(3));
  for (const TreeAut& w : derived_of(bk(3))) CHECK(is_in_Gk(w));
  for (const TreeAut& g : G3)
    for (const TreeAut& b : B3) CHECK(is_in_Gk(conjugate(g, b)));

  // squares land in the derived subgroups
  for (const TreeAut& g : B3) CHECK(is_in_Bk_derived(multiply(g, g)));
  for (const TreeAut& g : G3) CHECK(is_in_Gk_derived(multiply(g, g)));

  // randomized versions at k = 8
  std::mt19937_64 rng(31);
  const AritySignature s8 = AritySignature::binary(8);
  for (int i = 0; i < 1000; ++i) {
    TreeAut g = random_element(s8, rng);
    CHECK(is_in_Bk_derived(multiply(g, g)));
    TreeAut h = random_element(s8, rng);
    if (!is_in_Gk(h)) continue;
    CHECK(is_in_Gk_derived(multiply(h, h)));
    CHECK(is_in_Gk(conjugate(h, g)));
  }
}

TEST_CASE("criteria routes agree on 10^3 random elements at k = 8") {
  std::mt19937_64 rng(61);
  const AritySignature s8 = AritySignature::binary(8);
  for (int i = 0; i < 1000; ++i) {
    TreeAut g = random_element(s8, rng);
    const auto gv = gk_verdicts(g);
    CHECK(gv.first == gv.second);
    const auto bv = bk_derived_verdicts(g);
    CHECK(bv.first == bv.second);
    const auto dv = gk_derived_verdicts(g);
    CHECK(dv.first == dv.second);
  }
}

TEST_CASE("derived sets are closed under multiplication and conjugation") {
  std::mt19937_64 rng(41);
  GroupId b6d(GroupKind::DerivedFullWreath, AritySignature::binary(6));
  GroupId g6d(GroupKind::DerivedSylowAlt, AritySignature::binary(6));
  const AritySignature s6 = AritySignature::binary(6);
  for (int i = 0; i < 300; ++i) {
    TreeAut a = sample_derived(b6d, rng), b = sample_derived(b6d, rng);
    CHECK(is_in_Bk_derived(multiply(a, b)));
    CHECK(is_in_Bk_derived(conjugate(a, random_element(s6, rng))));
    TreeAut c = sample_derived(g6d, rng), d = sample_derived(g6d, rng);
    CHECK(is_in_Gk_derived(multiply(c, d)));
    // G_k' is normal in B_k as well (it is characteristic in G_k)
    CHECK(is_in_Gk_derived(conjugate(c, random_element(s6, rng))));
  }
}

TEST_CASE("half-level balance inside G_k'") {
  for (const TreeAut& w : derived_of(gk(3))) {
    CHECK(w.label(0, 0) == 0);
    const LevelIndexProfile prof = level_index_profile(w);
    for (uint32_t l = 1; l < 3; ++l)
      CHECK(prof.per_subtree[l][0] % 2 == prof.per_subtree[l][1] % 2);
    CHECK(prof.per_subtree[2][0] % 2 == 0);  // eq (7): even within each half
    CHECK(prof.per_subtree[2][1] % 2 == 0);
  }
}

TEST_CASE("second-derived states from commutators of G_3' elements") {
  const auto d = derived_of(gk(3));
  std::mt19937_64 rng(55);
  for (int i = 0; i < 100; ++i) {
    const TreeAut& g = d[uniform_below(rng, (uint32_t)d.size())];
    const TreeAut& h = d[uniform_below(rng, (uint32_t)d.size())];
    TreeAut c = commutator(g, h);
    CHECK(c.label(2, 0) == c.label(2, 1));
    CHECK(c.label(2, 2) == c.label(2, 3));
  }
}
