#include <doctest.h>

#include "gca/deciders.hpp"
#include "gca/error.hpp"
#include "gca/group_ring.hpp"
#include "gca/serial.hpp"

using namespace gca;

namespace {

FpMat scalar(uint32_t p, uint32_t v) {
  FpMat m(p, 1, 1);
  m.set(0, 0, v);
  return m;
}

// c0 + c1 t over F_2[Z/2], n = 1
GroupRingMatrix binary_pair(const GroupPtr& Z2, uint32_t c0, uint32_t c1) {
  std::vector<std::pair<GroupElement, FpMat>> terms;
  if (c0) terms.emplace_back(Z2->element_of_index(0), scalar(2, c0));
  if (c1) terms.emplace_back(Z2->element_of_index(1), scalar(2, c1));
  return gr_make(Z2, 2, 1, std::move(terms));
}

// I + xN over Mat_2(F_2[Z])
GroupRingMatrix jordan_ring(const GroupPtr& Z) {
  FpMat id(2, 2, 2), nil(2, 2, 2);
  id.set(0, 0, 1);
  id.set(1, 1, 1);
  nil.set(0, 1, 1);
  return gr_make(Z, 2, 2, {{GroupElement{{0}}, id}, {GroupElement{{1}}, nil}});
}

GroupRingMatrix monomial(const GroupPtr& Z, int64_t e) {
  return gr_make(Z, 2, 1, {{GroupElement{{e}}, scalar(2, 1)}});
}

}  // namespace

TEST_CASE("construction canonicalizes the support") {
  auto Z = GroupUniverse::free_abelian(1);
  // duplicates merge mod p and vanishing terms are pruned
  auto a = gr_make(Z, 2, 1,
                   {{GroupElement{{1}}, scalar(2, 1)},
                    {GroupElement{{0}}, scalar(2, 1)},
                    {GroupElement{{1}}, scalar(2, 1)}});
  CHECK(gr_equal(a, gr_unit(Z, 2, 1)));
  CHECK(a.support.size() == 1);
  CHECK(a.coeff(GroupElement{{1}}) == nullptr);
  REQUIRE(a.coeff(GroupElement{{0}}) != nullptr);
  CHECK(a.coeff(GroupElement{{0}})->at(0, 0) == 1);
}

TEST_CASE("construction validates its inputs") {
  auto Z = GroupUniverse::free_abelian(1);
  CHECK_THROWS_WITH_AS(gr_make(Z, 4, 1, {}), "coefficients need a prime modulus", Error);
  CHECK_THROWS_AS(gr_make(Z, 2, 0, {}), Error);
  CHECK_THROWS_WITH_AS(gr_make(Z, 2, 2, {{GroupElement{{0}}, scalar(2, 1)}}),
                       "coefficient matrix of the wrong shape", Error);
  CHECK_THROWS_WITH_AS(gr_make(Z, 2, 1, {{GroupElement{{0, 0}}, scalar(2, 1)}}),
                       "coordinate vector has the wrong length", Error);
}

TEST_CASE("ring arithmetic over a finite cyclic universe") {
  auto Z2 = GroupUniverse::cyclic(2);
  auto a = binary_pair(Z2, 1, 1);  // 1 + t
  auto t = binary_pair(Z2, 0, 1);
  CHECK(gr_equal(gr_add(a, a), gr_zero(Z2, 2, 1)));
  CHECK(gr_equal(gr_sub(a, a), gr_zero(Z2, 2, 1)));
  // (1 + t)^2 = 1 + 2t + t^2 = 0 in characteristic 2
  CHECK(gr_equal(gr_mul(a, a), gr_zero(Z2, 2, 1)));
  CHECK(gr_equal(gr_mul(t, t), gr_unit(Z2, 2, 1)));
  CHECK(gr_is_unit(gr_mul(t, t)));
  CHECK_FALSE(gr_is_unit(a));
}

TEST_CASE("the automaton of a ring element") {
  auto Z2 = GroupUniverse::cyclic(2);
  auto a = binary_pair(Z2, 1, 1);
  auto ca = phi(a);
  CHECK(ca.universe->same(*Z2));
  CHECK(ca.alphabet->kind() == AlphabetKind::VectorSpace);
  // tau(c)(g) = c(g) + c(g+1), the additive rule over the same universe
  auto A = Alphabet::vector_space(2, 1);
  auto M = FiniteSubset::of(Z2, {Z2->element_of_index(0), Z2->element_of_index(1)});
  auto direct = make_ca(Z2, make_linear_rule(A, M, {scalar(2, 1), scalar(2, 1)}));
  CHECK(ca_equal(ca, direct));
  CHECK(is_identity_ca(phi(gr_unit(Z2, 2, 1))));
  CHECK(gr_equal(phi_inv(ca), a));
}

TEST_CASE("the automaton map is multiplicative") {
  auto Z = GroupUniverse::free_abelian(1);
  auto a = gr_add(gr_unit(Z, 2, 1), monomial(Z, 1));  // 1 + x
  auto b = monomial(Z, 1);
  CHECK(ca_equal(phi(gr_mul(a, b)), compose(phi(a), phi(b))));
  CHECK(ca_equal(phi(gr_add(a, b)), phi(gr_add(b, a))));

  auto j = jordan_ring(Z);
  CHECK(gr_equal(gr_mul(j, j), gr_unit(Z, 2, 2)));
  CHECK(is_identity_ca(compose(phi(j), phi(j))));
  CHECK(gr_equal(phi_inv(phi(j)), j));
}

TEST_CASE("zero elements round-trip through the automaton") {
  auto Z = GroupUniverse::free_abelian(1);
  auto z = gr_zero(Z, 2, 1);
  CHECK(gr_equal(phi_inv(phi(z)), z));
}

TEST_CASE("regular representation of a finite universe") {
  auto Z2 = GroupUniverse::cyclic(2);
  auto rep = regular_representation(binary_pair(Z2, 1, 1));
  REQUIRE(rep.rows() == 2);
  REQUIRE(rep.cols() == 2);
  for (uint32_t r = 0; r < 2; ++r)
    for (uint32_t c = 0; c < 2; ++c) CHECK(rep.at(r, c) == 1);
  CHECK(rank_of(rep) == 1);

  auto Z3 = GroupUniverse::cyclic(3);
  CHECK(rank_of(regular_representation(gr_unit(Z3, 2, 1))) == 3);
  auto Z = GroupUniverse::free_abelian(1);
  CHECK_THROWS_WITH_AS(regular_representation(gr_unit(Z, 2, 1)),
                       "the regular representation needs a finite universe", Error);
}

TEST_CASE("flattening a grid of scalar elements") {
  auto Z2 = GroupUniverse::cyclic(2);
  auto one = binary_pair(Z2, 1, 0);
  auto t = binary_pair(Z2, 0, 1);
  auto zero = gr_zero(Z2, 2, 1);
  std::vector<std::vector<GroupRingMatrix>> cells{{one, t}, {zero, one}};
  auto flat = flatten(cells);
  CHECK(flat.n == 2);
  auto back = unflatten(flat);
  REQUIRE(back.size() == 2);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) CHECK(gr_equal(back[i][j], cells[i][j]));

  // flatten respects products: compare against the cellwise convolution
  std::vector<std::vector<GroupRingMatrix>> other{{one, zero}, {t, t}};
  std::vector<std::vector<GroupRingMatrix>> prod(2, std::vector<GroupRingMatrix>(2, zero));
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j)
      for (size_t k = 0; k < 2; ++k)
        prod[i][j] = gr_add(prod[i][j], gr_mul(cells[i][k], other[k][j]));
  CHECK(gr_equal(gr_mul(flat, flatten(other)), flatten(prod)));

  CHECK_THROWS_WITH_AS(flatten({{one}, {t, one}}), "cell array must be square", Error);
}

TEST_CASE("left inverses by coefficient matching") {
  auto Z = GroupUniverse::free_abelian(1);
  auto j = jordan_ring(Z);
  auto beta = find_left_inverse(j, 1);
  REQUIRE(beta.has_value());
  CHECK(gr_equal(*beta, j));  // the element is an involution

  auto Z2 = GroupUniverse::cyclic(2);
  CHECK_FALSE(find_left_inverse(binary_pair(Z2, 1, 1), 2).has_value());
  auto t = binary_pair(Z2, 0, 1);
  auto tinv = find_left_inverse(t, 1);
  REQUIRE(tinv.has_value());
  CHECK(gr_equal(*tinv, t));
}

TEST_CASE("stable finiteness instances") {
  auto Z = GroupUniverse::free_abelian(1);
  auto j = jordan_ring(Z);
  auto v = verify_stable_finiteness_instance(j, j);
  CHECK(v.status == Status::CertifiedYes);
  CHECK(v.witness.at("kind") == "two_sided_unit");
  CHECK(v.witness.contains("left_inverse"));
  CHECK(v.transcript.at("cross_check") == "automaton_composition");
  CHECK(v.transcript.at("agrees") == true);

  auto Z2 = GroupUniverse::cyclic(2);
  auto t = binary_pair(Z2, 0, 1);
  CHECK(verify_stable_finiteness_instance(t, t).status == Status::CertifiedYes);

  // beta that is not a left inverse is a precondition failure with the defect
  try {
    verify_stable_finiteness_instance(binary_pair(Z2, 1, 1), gr_unit(Z2, 2, 1));
    FAIL("expected a precondition failure");
  } catch (const Error& e) {
    CHECK(e.code() == "PreconditionFailed");
    auto defect = Json::parse(e.detail());
    CHECK(defect.at("support").size() == 1);
    CHECK(defect.at("support")[0].at("element") == Json::array({1}));
  }
}

TEST_CASE("Laurent form round-trips and prints") {
  auto Z = GroupUniverse::free_abelian(1);
  auto a = gr_add(gr_add(gr_unit(Z, 2, 1), monomial(Z, 1)), monomial(Z, -1));
  auto f = to_laurent(a);
  CHECK(f.rank == 1);
  CHECK(gr_equal(from_laurent(f, Z), a));
  CHECK(laurent_string(a) == "x^-1 + 1 + x");
  CHECK(laurent_string(gr_add(gr_unit(Z, 2, 1), monomial(Z, 1))) == "1 + x");
  CHECK(laurent_string(gr_zero(Z, 2, 1)) == "0");
  CHECK(laurent_string(jordan_ring(Z)) == "[[1, x]; [0, 1]]");

  auto Z2d = GroupUniverse::free_abelian(2);
  auto b = gr_make(Z2d, 3, 1, {{GroupElement{{1, -2}}, scalar(3, 2)}});
  CHECK(laurent_string(b) == "2 x0 x1^-2");
  CHECK(gr_equal(from_laurent(to_laurent(b), Z2d), b));

  auto Z2 = GroupUniverse::cyclic(2);
  CHECK_THROWS_WITH_AS(to_laurent(binary_pair(Z2, 1, 1)),
                       "Laurent form needs a free-abelian universe", Error);
}

TEST_CASE("ring serialization round-trips") {
  auto Z = GroupUniverse::free_abelian(1);
  auto j = jordan_ring(Z);
  CHECK(gr_equal(ring_from_json(Z, ring_to_json(j)), j));
  auto Z2 = GroupUniverse::cyclic(2);
  auto a = binary_pair(Z2, 1, 1);
  CHECK(gr_equal(ring_from_json(Z2, ring_to_json(a)), a));
}
