#include <random>

#include "doctest.h"
#include "wrcomm/oracle.hpp"
#include "wrcomm/solver.hpp"

using namespace wrcomm;
using namespace wrcomm::groups;
using namespace wrcomm::solver;

namespace {

std::vector<TreeAut> derived_of(const GroupId& id) {
  return oracle::derived_subgroup_closure(standard_generators(id));
}

GroupId bk(uint32_t k) {
  return GroupId(GroupKind::FullWreath, AritySignature::binary(k));
}
GroupId gk(uint32_t k) {
  return GroupId(GroupKind::SylowAlt, AritySignature::binary(k));
}

void check_witness(const CommutatorWitness& wit, const TreeAut& w) {
  CHECK(wit.target == w);
  CHECK(commutator(wit.a, wit.b) == w);  // re-checked by the harness
}

}  // namespace

TEST_CASE("derived_decompose") {
  AritySignature b3 = AritySignature::binary(3);
  auto [r, x] = derived_decompose(TreeAut::identity(b3));
  CHECK(r.size() == 1);
  CHECK(r[0].is_identity());
  CHECK(x.is_identity());

  // w = (r_1, r_1^{-1}) gives x = e
  std::mt19937_64 rng(2);
  TreeAut r1 = random_element(AritySignature::binary(2), rng);
  std::vector<TreeAut> secs{r1, inverse(r1)};
  TreeAut w = compose_from(0, secs, 2);
  auto [r2, x2] = derived_decompose(w);
  CHECK(r2[0] == r1);
  CHECK(x2.is_identity());

  // over C_3 wr C_3 the inner group is abelian, so x is always the identity
  GroupId w33(GroupKind::FullWreath, AritySignature({3, 3}));
  for (const TreeAut& d : derived_of(w33)) {
    auto [rr, xx] = derived_decompose(d);
    CHECK(rr.size() == 2);
    CHECK(xx.is_identity());
  }

  // rejection carries the failing level
  TreeAut bad(b3);
  bad.set_label(1, 0, 1);
  try {
    derived_decompose(bad);
    FAIL("expected MembershipError");
  } catch (const MembershipError& e) {
    CHECK(e.failing_level == 1);
  }
}

TEST_CASE("lift_commutator: identity template and commuting pairs") {
  AritySignature inner = AritySignature::binary(2);
  TreeAut e = TreeAut::identity(inner);
  std::vector<TreeAut> r{e};
  CommutatorWitness wit = lift_commutator(r, e, e);
  CHECK(wit.target.is_identity());
  CHECK(wit.a.label(0, 0) == 1);  // the sigma-rooted template
  CHECK(wit.b.label(0, 0) == 0);
  CHECK(commutator(wit.a, wit.b).is_identity());

  // commuting f, g with r_1 = e still gives w = e
  TreeAut f(inner);
  f.set_label(1, 0, 1);
  TreeAut g(inner);
  g.set_label(1, 0, 1);
  g.set_label(1, 1, 1);
  REQUIRE(multiply(f, g) == multiply(g, f));
  CommutatorWitness wit2 = lift_commutator(r, f, g);
  CHECK(wit2.target.is_identity());

  CHECK_THROWS_AS(lift_commutator(std::vector<TreeAut>{}, e, e),
                  InvalidArgumentError);
}

TEST_CASE("lift_commutator reaches the (13)(24)(57)(68) element of B_3") {
  // search B_2^3 for (r_1, f, g) whose lifted target is that permutation
  const auto B2 = oracle::enumerate_group(bk(2));
  AritySignature b3 = AritySignature::binary(3);
  TreeAut want(b3);
  want.set_label(1, 0, 1);
  want.set_label(1, 1, 1);
  REQUIRE(oracle::cycle_notation(oracle::to_leaf_perm(want)) ==
          "(13)(24)(57)(68)");
  bool found = false;
  for (const TreeAut& r1 : B2) {
    for (const TreeAut& f : B2) {
      for (const TreeAut& g : B2) {
        std::vector<TreeAut> r{r1};
        CommutatorWitness wit = lift_commutator(r, f, g);
        if (wit.target == want) {
          CHECK(commutator(wit.a, wit.b) == want);
          found = true;
        }
      }
      if (found) break;
    }
    if (found) break;
  }
  CHECK(found);
}

TEST_CASE("solve_cyclic_tower: exhaustive at desk scale") {
  // identity at assorted signatures
  for (auto arities : {std::vector<uint32_t>{2, 2}, {3, 3}, {2, 3, 2}}) {
    TreeAut e = TreeAut::identity(AritySignature(arities));
    CommutatorWitness wit = solve_cyclic_tower(e);
    check_witness(wit, e);
    CHECK(wit.recursion_depth == 0);
  }

  for (auto arities : {std::vector<uint32_t>{3, 3}, {2, 3}, {3, 2}}) {
    GroupId id(GroupKind::FullWreath, AritySignature(arities));
    for (const TreeAut& w : derived_of(id))
      check_witness(solve_cyclic_tower(w), w);
  }

  // works on binary towers too (no subgroup constraint claimed)
  for (const TreeAut& w : derived_of(bk(3)))
    check_witness(solve_cyclic_tower(w), w);

  // non-members are rejected
  TreeAut bad(AritySignature({3, 3}));
  bad.set_label(0, 0, 2);
  CHECK_THROWS_AS(solve_cyclic_tower(bad), MembershipError);
}

TEST_CASE("solve_Bk_derived: a lands in G_k, shape, determinism") {
  const auto d2 = derived_of(bk(2));
  CHECK(d2.size() == 2);
  const auto d3 = derived_of(bk(3));
  CHECK(d3.size() == 16);
  for (const auto& dset : {d2, d3}) {
    for (const TreeAut& w : dset) {
      CommutatorWitness wit = solve_Bk_derived(w);
      check_witness(wit, w);
      CHECK(wit.a_in_sylow_alt);
      CHECK(is_in_Gk(wit.a));
      if (!w.is_identity()) {
        CHECK(wit.a.label(0, 0) == 1);
        CHECK(wit.b.label(0, 0) == 0);
      }
    }
  }

  // determinism: the seed-free path reproduces the same witness
  GroupId b8d(GroupKind::DerivedFullWreath, AritySignature::binary(8));
  TreeAut w = sample_derived(b8d, 123);
  CommutatorWitness w1 = solve_Bk_derived(w), w2 = solve_Bk_derived(w);
  CHECK(w1.a == w2.a);
  CHECK(w1.b == w2.b);
  CHECK(w1.recursion_depth == w2.recursion_depth);
  check_witness(w1, w);

  TreeAut swap3(AritySignature::binary(3));
  swap3.set_label(0, 0, 1);
  CHECK_THROWS_AS(solve_Bk_derived(swap3), MembershipError);
  CHECK_THROWS_AS(solve_Bk_derived(TreeAut::identity(AritySignature({3, 3}))),
                  InvalidArgumentError);
}

TEST_CASE("solve_Gk_derived: both witnesses in G_k") {
  // k = 2: only the identity
  TreeAut e2 = TreeAut::identity(AritySignature::binary(2));
  CommutatorWitness we = solve_Gk_derived(e2);
  check_witness(we, e2);
  CHECK(we.a_in_sylow_alt);
  CHECK(we.b_in_sylow_alt);

  const auto d3 = derived_of(gk(3));
  CHECK(d3.size() == 8);
  for (const TreeAut& w : d3) {
    CommutatorWitness wit = solve_Gk_derived(w);
    check_witness(wit, w);
    CHECK(wit.a_in_sylow_alt);
    CHECK(wit.b_in_sylow_alt);
    CHECK(is_in_Gk(wit.a));
    CHECK(is_in_Gk(wit.b));
  }

  // deeper randomized instance
  GroupId g8d(GroupKind::DerivedSylowAlt, AritySignature::binary(8));
  for (uint64_t seed = 0; seed < 10; ++seed) {
    TreeAut w = sample_derived(g8d, seed);
    CommutatorWitness wit = solve_Gk_derived(w);
    check_witness(wit, w);
    CHECK(wit.a_in_sylow_alt);
    CHECK(wit.b_in_sylow_alt);
  }

  TreeAut odd1(AritySignature::binary(3));
  odd1.set_label(1, 0, 1);
  CHECK_THROWS_AS(solve_Gk_derived(odd1), MembershipError);
}

TEST_CASE("recursion_depth counts the lift levels") {
  GroupId b5d(GroupKind::DerivedFullWreath, AritySignature::binary(5));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    TreeAut w = sample_derived(b5d, rng);
    CommutatorWitness wit = solve_Bk_derived(w);
    CHECK(wit.recursion_depth >= (w.is_identity() ? 0 : 1));
    CHECK(wit.recursion_depth <= 5);
  }
}
