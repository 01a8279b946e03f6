#include <doctest.h>

#include <set>

#include "gca/error.hpp"
#include "gca/group.hpp"

using namespace gca;

TEST_CASE("cyclic groups") {
  auto G = GroupUniverse::cyclic(6);
  CHECK(G->order() == 6);
  CHECK(G->identity_index() == 0);
  auto a = G->element_of_index(2), b = G->element_of_index(5);
  CHECK(G->mul(a, b).w[0] == 1);
  CHECK(G->is_identity(G->mul(a, G->inv(a))));
}

TEST_CASE("dihedral group is nonabelian") {
  auto G = GroupUniverse::dihedral(4);
  CHECK(G->order() == 8);
  auto r = G->element_of_index(1), s = G->element_of_index(4);
  CHECK_FALSE(G->mul(r, s) == G->mul(s, r));
  // s r s = r^-1
  auto srs = G->mul(s, G->mul(r, s));
  CHECK(srs == G->inv(r));
}

TEST_CASE("symmetric group sizes and caps") {
  CHECK(GroupUniverse::symmetric(3)->order() == 6);
  CHECK(GroupUniverse::symmetric(4)->order() == 24);
  CHECK_THROWS_AS(GroupUniverse::symmetric(7), Error);
}

TEST_CASE("rejects non-groups") {
  // 2x2 table without inverses
  std::vector<std::vector<uint32_t>> t{{0, 0}, {0, 0}};
  CHECK_THROWS_AS(GroupUniverse::finite(t), Error);
  // non-associative loop on 5 elements would be caught by the cube scan
  std::vector<std::vector<uint32_t>> na{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS(GroupUniverse::finite(na), Error);
}

TEST_CASE("direct products") {
  auto G = GroupUniverse::direct_product(GroupUniverse::cyclic(2),
                                         GroupUniverse::cyclic(3));
  CHECK(G->order() == 6);
  // (1,1) has order 6: the product is cyclic
  auto g = G->element_of_index(1 * 3 + 1);
  auto x = g;
  int ord = 1;
  while (!G->is_identity(x)) {
    x = G->mul(x, g);
    ++ord;
  }
  CHECK(ord == 6);
}

TEST_CASE("free abelian balls") {
  auto Z2 = GroupUniverse::free_abelian(2);
  CHECK(ball(Z2, 0).size() == 1);
  CHECK(ball(Z2, 1).size() == 5);
  CHECK(ball(Z2, 2).size() == 13);  // 1 + 2r(r+1) lattice points
  auto a = GroupElement{{3, -2}};
  CHECK(Z2->word_norm(a) == 5);
  CHECK(Z2->mul(a, Z2->inv(a)) == Z2->identity());
}

TEST_CASE("free group words") {
  auto F2 = GroupUniverse::free_group(2);
  CHECK(ball(F2, 1).size() == 5);
  CHECK(ball(F2, 2).size() == 17);  // 1 + 4 + 4*3
  GroupElement a{{1}}, A{{-1}}, b{{2}};
  CHECK(F2->mul(a, A) == F2->identity());
  auto ab = F2->mul(a, b);
  CHECK(ab.w == std::vector<int64_t>{1, 2});
  // (ab)(b^-1 a) = a a
  auto w = F2->mul(ab, F2->mul(F2->inv(b), a));
  CHECK(w.w == std::vector<int64_t>{1, 1});
  CHECK(F2->word_norm(w) == 2);
}

TEST_CASE("finite subsets are canonical") {
  auto Z = GroupUniverse::free_abelian(1);
  auto S = FiniteSubset::of(Z, {GroupElement{{3}}, GroupElement{{-1}}, GroupElement{{3}}});
  CHECK(S.size() == 2);
  CHECK(S.elems[0].w[0] == -1);
  CHECK(S.index_of(GroupElement{{3}}).value() == 1);
  CHECK_FALSE(S.index_of(GroupElement{{0}}).has_value());
}

TEST_CASE("set algebra over the free group") {
  auto F2 = GroupUniverse::free_group(2);
  auto B1 = ball(F2, 1);
  auto B2 = product_set(B1, B1);
  // products of two balls cover the radius-2 ball exactly
  CHECK(B2.size() == 17);
  CHECK(inverse_set(B2) == B2);
  CHECK(union_set(B1, B2) == B2);
  CHECK(covering_radius(B2) == 2);
}

TEST_CASE("finite subgroup closure") {
  auto S3 = GroupUniverse::symmetric(3);
  // find a transposition (order 2) and a 3-cycle (order 3)
  GroupElement transposition, threecycle;
  for (uint32_t i = 1; i < 6; ++i) {
    auto g = S3->element_of_index(i);
    if (S3->mul(g, g) == S3->identity()) transposition = g;
    if (!(S3->mul(g, g) == S3->identity()) &&
        S3->is_identity(S3->mul(g, S3->mul(g, g))))
      threecycle = g;
  }
  auto sub2 = subgroup_generated(S3, FiniteSubset::of(S3, {transposition}));
  CHECK(sub2.sub->order() == 2);
  CHECK(sub2.subgroup_index().value() == 3);
  auto sub3 = subgroup_generated(S3, FiniteSubset::of(S3, {threecycle}));
  CHECK(sub3.sub->order() == 3);
  // the embedding is a homomorphism
  auto x = sub3.sub->element_of_index(1);
  CHECK(sub3.embed(sub3.sub->mul(x, x)) ==
        S3->mul(sub3.embed(x), sub3.embed(x)));
  CHECK(sub3.preimage(sub3.embed(x)).value() == x);
  CHECK_FALSE(sub3.preimage(transposition).has_value());
}

TEST_CASE("lattice subgroups of Z^2") {
  auto Z2 = GroupUniverse::free_abelian(2);
  auto emb = subgroup_generated(
      Z2, FiniteSubset::of(Z2, {GroupElement{{2, 0}}, GroupElement{{0, 3}},
                                GroupElement{{2, 3}}}));
  CHECK(emb.sub->kind() == GroupKind::FreeAbelian);
  CHECK(emb.sub->rank() == 2);
  CHECK(emb.subgroup_index().value() == 6);
  // independent count: lattice points inside the fundamental box [0,6)^2
  int inside = 0;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      // member iff x even and y divisible by 3
      bool member = x % 2 == 0 && y % 3 == 0;
      inside += member;
    }
  CHECK(inside == 36 / 6);
  auto p = emb.preimage(GroupElement{{4, 3}});
  REQUIRE(p.has_value());
  CHECK(emb.embed(*p) == GroupElement{{4, 3}});
  CHECK_FALSE(emb.preimage(GroupElement{{1, 0}}).has_value());
}

TEST_CASE("hermite normal form") {
  auto h = hermite_normal_form({{4, 6}, {2, 3}});
  REQUIRE(h.size() == 1);
  CHECK(h[0] == std::vector<int64_t>{2, 3});

  auto full = hermite_normal_form({{2, 1}, {0, 3}});
  REQUIRE(full.size() == 2);
  CHECK(full[0][0] > 0);
  CHECK(full[1][0] == 0);
  // determinant (lattice index) is invariant: |det| = 6
  CHECK(full[0][0] * full[1][1] == 6);
  // entries above a pivot are reduced
  CHECK(full[0][1] >= 0);
  CHECK(full[0][1] < full[1][1]);
}

TEST_CASE("enumeration needs a finite universe") {
  CHECK(enumerate_group(GroupUniverse::cyclic(4)).size() == 4);
  CHECK_THROWS_WITH_AS(enumerate_group(GroupUniverse::free_abelian(1)),
                       doctest::Contains("finite"), Error);
  try {
    enumerate_group(GroupUniverse::free_group(1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "InfiniteUniverse");
  }
}
