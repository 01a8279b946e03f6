#include <doctest.h>

#include "gca/error.hpp"
#include "gca/serial.hpp"

using namespace gca;

TEST_CASE("universe parsing accepts presets and emits primitives") {
  auto G = universe_from_json(Json{{"kind", "cyclic"}, {"n", 6}});
  CHECK(G->kind() == GroupKind::Finite);
  CHECK(G->order() == 6);
  Json low = universe_to_json(G);
  CHECK(low.at("kind") == "finite");
  CHECK(universe_from_json(low)->same(*G));

  CHECK(universe_from_json(Json{{"kind", "dihedral"}, {"n", 3}})->order() == 6);
  CHECK(universe_from_json(Json{{"kind", "symmetric"}, {"n", 3}})->order() == 6);
  auto P = universe_from_json(
      Json{{"kind", "direct_product"},
           {"factors", Json::array({Json{{"kind", "cyclic"}, {"n", 2}},
                                    Json{{"kind", "cyclic"}, {"n", 3}}})}});
  CHECK(P->order() == 6);

  auto Z2 = universe_from_json(Json{{"kind", "free_abelian"}, {"rank", 2}});
  CHECK(universe_to_json(Z2) == Json{{"kind", "free_abelian"}, {"rank", 2}});
  auto F2 = universe_from_json(Json{{"kind", "free"}, {"rank", 2}});
  CHECK(universe_to_json(F2) == Json{{"kind", "free"}, {"rank", 2}});

  CHECK_THROWS_WITH_AS(universe_from_json(Json{{"kind", "borel"}}),
                       "unrecognized universe kind: borel", Error);
}

TEST_CASE("alphabet parsing accepts presets and emits primitives") {
  auto V = alphabet_from_json(Json{{"kind", "vector_space"}, {"p", 3}, {"dim", 2}});
  CHECK(alphabet_to_json(V) == Json{{"kind", "vector_space"}, {"p", 3}, {"dim", 2}});

  auto C4 = alphabet_from_json(Json{{"kind", "cyclic_group"}, {"n", 4}});
  CHECK(C4->kind() == AlphabetKind::FiniteGroup);
  CHECK(C4->size() == 4);
  CHECK(alphabet_from_json(alphabet_to_json(C4))->same(*C4));

  auto K4 = alphabet_from_json(
      Json{{"kind", "product_cyclic"}, {"factors", Json::array({2, 2})}});
  CHECK(K4->size() == 4);
  CHECK(K4->mul(1, 1) == 0);  // every element is an involution

  CHECK(alphabet_from_json(Json{{"kind", "plain"}, {"size", 5}})->size() == 5);
  CHECK_THROWS_WITH_AS(
      alphabet_from_json(Json{{"kind", "plain"}, {"size", 2}, {"x", 1}}),
      "unknown key: x", Error);
}

TEST_CASE("subsets must be strictly increasing in canonical order") {
  auto Z = GroupUniverse::free_abelian(1);
  Json good = Json::array({Json::array({-1}), Json::array({0}), Json::array({1})});
  auto S = subset_from_json(Z, good);
  CHECK(S.size() == 3);
  CHECK(subset_to_json(S) == good);

  Json swapped = Json::array({Json::array({1}), Json::array({0})});
  CHECK_THROWS_WITH_AS(subset_from_json(Z, swapped),
                       "subset elements must be strictly increasing in canonical order",
                       Error);
  Json dup = Json::array({Json::array({0}), Json::array({0})});
  CHECK_THROWS_AS(subset_from_json(Z, dup), Error);
}

TEST_CASE("element validation is per-universe") {
  auto G = GroupUniverse::cyclic(3);
  CHECK_THROWS_WITH_AS(subset_from_json(G, Json::array({Json::array({7})})),
                       "element is not an index into the finite universe", Error);
  auto F = GroupUniverse::free_group(2);
  CHECK_THROWS_WITH_AS(subset_from_json(F, Json::array({Json::array({1, -1})})),
                       "word is not reduced", Error);
  auto Z2 = GroupUniverse::free_abelian(2);
  CHECK_THROWS_WITH_AS(subset_from_json(Z2, Json::array({Json::array({1})})),
                       "coordinate vector has the wrong length", Error);
}

TEST_CASE("patterns carry one value per window site") {
  auto Z = GroupUniverse::free_abelian(1);
  Json j{{"window", Json::array({Json::array({0}), Json::array({1})})},
         {"values", Json::array({1, 0})}};
  auto pat = pattern_from_json(Z, j);
  CHECK(pattern_to_json(pat) == j);
  j["values"] = Json::array({1});
  CHECK_THROWS_WITH_AS(pattern_from_json(Z, j), "pattern values do not match its window",
                       Error);
}

TEST_CASE("rules round-trip bit-exactly") {
  auto Z = GroupUniverse::free_abelian(1);
  Json mem = Json::array({Json::array({-1}), Json::array({0}), Json::array({1})});

  auto A = Alphabet::vector_space(2, 1);
  Json lin{{"body", "linear"},
           {"memory", mem},
           {"matrices", Json::array({Json::array({0}), Json::array({1}), Json::array({1})})}};
  auto r = rule_from_json(Z, A, lin);
  CHECK(rule_to_json(r) == lin);

  auto B = Alphabet::finite_group({{0, 1}, {1, 0}});
  Json hom{{"body", "hom"},
           {"memory", mem},
           {"endos", Json::array({Json::array({0, 0}), Json::array({0, 1}),
                                  Json::array({0, 1})})}};
  CHECK(rule_to_json(rule_from_json(Z, B, hom)) == hom);

  auto P = Alphabet::plain(2);
  Json tab{{"body", "table"},
           {"memory", Json::array({Json::array({0}), Json::array({1})})},
           {"table", Json::array({0, 0, 0, 1})}};
  // construction closes the memory under inverses; the table gains an
  // ignored coordinate and re-emits in canonical form
  Json canon{{"body", "table"},
             {"memory", mem},
             {"table", Json::array({0, 0, 0, 1, 0, 0, 0, 1})}};
  CHECK(rule_to_json(rule_from_json(Z, P, tab)) == canon);
  CHECK(rule_to_json(rule_from_json(Z, P, canon)) == canon);

  CHECK_THROWS_WITH_AS(rule_from_json(Z, P, lin), "linear rules need a vector-space alphabet",
                       Error);
  Json extra = tab;
  extra["weird"] = 1;
  CHECK_THROWS_WITH_AS(rule_from_json(Z, P, extra), "unknown key: weird", Error);
}

TEST_CASE("verdicts round-trip") {
  Verdict v;
  v.status = Status::CertifiedYes;
  v.radius = 3;
  v.witness = Json{{"kind", "kernel_window_empty"}, {"n", 3}};
  auto j = verdict_to_json(v);
  auto w = verdict_from_json(j);
  CHECK(w.status == Status::CertifiedYes);
  CHECK(*w.radius == 3);
  CHECK(w.witness == v.witness);
  CHECK(verdict_to_json(w) == j);

  Json bad = j;
  bad["status"] = "definitely";
  CHECK_THROWS_AS(verdict_from_json(bad), Error);
}

TEST_CASE("records serialize with a fixed key order") {
  Verdict v;  // unknown, no radius
  Json rec = make_record("d", Json::object(), v, Json::object());
  CHECK(rec.dump() ==
        "{\"tool_version\":\"0.1.0\",\"decider\":\"d\",\"parameters\":{},"
        "\"status\":\"unknown\",\"radius\":null,\"witness\":null,\"transcript\":{},"
        "\"job\":{}}");

  v.status = Status::CertifiedNo;
  v.radius = 2;
  v.witness = Json{{"kind", "orphan"}};
  Json timed = make_record("goe_search", Json{{"cap", 16}}, v, Json{{"k", 1}}, 7);
  CHECK(timed.dump() ==
        "{\"tool_version\":\"0.1.0\",\"decider\":\"goe_search\",\"parameters\":{\"cap\":16},"
        "\"status\":\"certified_no\",\"radius\":2,\"witness\":{\"kind\":\"orphan\"},"
        "\"transcript\":{},\"job\":{\"k\":1},\"duration_ms\":7}");
}

TEST_CASE("job documents are strict") {
  Json job{{"universe", Json{{"kind", "cyclic"}, {"n", 3}}},
           {"alphabet", Json{{"kind", "vector_space"}, {"p", 2}, {"dim", 1}}},
           {"rule",
            Json{{"body", "linear"},
                 {"memory", Json::array({Json::array({0}), Json::array({1}),
                                         Json::array({2})})},
                 {"matrices", Json::array({Json::array({1}), Json::array({1}),
                                           Json::array({0})})}}}};
  auto c = job_from_json(job);
  CHECK(c.universe->order() == 3);
  REQUIRE(c.ca.has_value());
  CHECK(c.ca->rule.body == RuleBody::Linear);
  CHECK_FALSE(c.ring.has_value());

  Json noalpha = job;
  noalpha.erase("alphabet");
  CHECK_THROWS_WITH_AS(job_from_json(noalpha), "a rule needs an alphabet", Error);

  Json extra = job;
  extra["frobnicate"] = true;
  CHECK_THROWS_WITH_AS(job_from_json(extra), "unknown key: frobnicate", Error);

  Json ringjob{{"universe", Json{{"kind", "free_abelian"}, {"rank", 1}}},
               {"ring",
                Json{{"p", 2},
                     {"n", 1},
                     {"support", Json::array({Json{{"element", Json::array({0})},
                                                   {"matrix", Json::array({1})}},
                                              Json{{"element", Json::array({1})},
                                                   {"matrix", Json::array({1})}}})}}}};
  auto rc = job_from_json(ringjob);
  REQUIRE(rc.ring.has_value());
  CHECK(rc.ring->support.size() == 2);
  CHECK(ring_to_json(*rc.ring) == ringjob.at("ring"));

  Json bare{{"universe", Json{{"kind", "free_abelian"}, {"rank", 1}}},
            {"memory", Json::array({Json::array({0}), Json::array({1})})}};
  auto mc = job_from_json(bare);
  REQUIRE(mc.memory.has_value());
  CHECK(mc.memory->size() == 2);
}
