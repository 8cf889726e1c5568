#include <catch2/catch.hpp>

#include <set>

#include "pmt/generators.hpp"
#include "pmt/relation.hpp"
#include "pmt/semantics.hpp"
#include "pmt/structure.hpp"
#include "pmt/suite.hpp"

using namespace pmt;

namespace {

// verdict-map fingerprint, universe listing fixed
std::string key_of(const PartialStructure& s) {
  std::string key;
  for (const auto& [name, r] : s.relations()) {
    key += name + ":";
    for (std::size_t code = 0; code < r.tuple_count(); ++code)
      key += verdict_char(r.at_code(code));
  }
  return key;
}

}  // namespace

TEST_CASE("universe invariants", "[structures]") {
  REQUIRE_THROWS_AS(Universe({}), validation_error);
  REQUIRE_THROWS_AS(Universe({"a", "a"}), validation_error);
  REQUIRE_THROWS_AS(Universe({"has space"}), validation_error);
  REQUIRE(Universe({"a", "b"}).same_element_set(Universe({"b", "a"})));
  REQUIRE_FALSE(Universe({"a"}) == Universe({"b"}));

  // tuple codec: lexicographic order, first coordinate most significant
  REQUIRE(tuple_pack(Tuple{1, 0}, 2) == 2);
  REQUIRE(tuple_unpack(2, 2, 2) == Tuple{1, 0});
  REQUIRE(tuple_space_size(3, 2) == 9);
}

TEST_CASE("relation_from_triple validates disjointness and coverage", "[structures]") {
  Universe u({"a"});
  PartialRelation r = relation_from_named_triple(u, 1, {}, {}, {{"a"}});
  REQUIRE(r.at_code(0) == Verdict::unk);

  REQUIRE_THROWS_WITH(relation_from_named_triple(u, 1, {{"a"}}, {{"a"}}, {}),
                      Catch::Contains("(a)") && Catch::Contains("more than one part"));
  REQUIRE_THROWS_WITH(relation_from_named_triple(u, 1, {}, {}, {}),
                      Catch::Contains("(a)") && Catch::Contains("missing"));
  REQUIRE_THROWS_AS(relation_from_named_triple(u, 1, {{"b"}}, {}, {{"a"}}), validation_error);
}

TEST_CASE("partial function validation", "[structures]") {
  Universe u({"a", "b"});

  // a total constant: graph positive at (a), negative at (b)
  PartialRelation g1(1, 2, Verdict::neg);
  g1.set_code(0, Verdict::pos);
  REQUIRE(!validate_partial_function(PartialFunctionTable(0, g1), u));

  // positive at (a) forces (b) negative, but (b) is unknown
  PartialRelation g2(1, 2, Verdict::unk);
  g2.set_code(0, Verdict::pos);
  auto v2 = validate_partial_function(PartialFunctionTable(0, g2), u);
  REQUIRE(v2);
  CHECK(v2->condition == 1);
  CHECK(v2->witness == Tuple{0});

  // everything negative: no candidate value remains
  PartialRelation g3(1, 2, Verdict::neg);
  auto v3 = validate_partial_function(PartialFunctionTable(0, g3), u);
  REQUIRE(v3);
  CHECK(v3->condition == 2);

  // unknown at (a) alongside positive at (b)
  PartialRelation g4(1, 2, Verdict::unk);
  g4.set_code(1, Verdict::pos);
  auto v4 = validate_partial_function(PartialFunctionTable(0, g4), u);
  REQUIRE(v4);
  CHECK(v4->condition == 3);
  CHECK(v4->witness == Tuple{0});

  // binary graph of a genuine partial function over {a,b}: value unknown at a
  PartialRelation g5(2, 2, Verdict::neg);
  g5.set({0, 0}, Verdict::unk);
  g5.set({0, 1}, Verdict::unk);
  g5.set({1, 0}, Verdict::pos);
  REQUIRE(!validate_partial_function(PartialFunctionTable(1, g5), u));
}

TEST_CASE("relationalize functions, constants and relational identity", "[structures]") {
  Universe u({"a", "b"});

  SECTION("total unary function becomes its binary graph") {
    PartialStructure s(u);
    PartialRelation graph(2, 2, Verdict::neg);
    graph.set({0, 1}, Verdict::pos);  // f(a) = b
    graph.set({1, 1}, Verdict::pos);  // f(b) = b
    s.set_function("f", PartialFunctionTable(1, graph));
    Signature sig;
    sig.add_function("f", 1);
    auto [rel, rel_sig] = relationalize(s, sig);
    REQUIRE(rel_sig.relations().at("f") == 2);
    REQUIRE(rel.relational());
    REQUIRE(rel.relation("f") == graph);
  }

  SECTION("constants become unary relations") {
    PartialStructure s(u);
    s.set_constant("c", 0);
    s.set_constant("d", std::nullopt);
    Signature sig;
    sig.add_function("c", 0);
    sig.add_function("d", 0);
    auto [rel, rel_sig] = relationalize(s, sig);
    REQUIRE(rel.relation("c").at_code(0) == Verdict::pos);
    REQUIRE(rel.relation("c").at_code(1) == Verdict::neg);
    REQUIRE(rel.relation("d").at_code(0) == Verdict::unk);
    REQUIRE(rel.relation("d").at_code(1) == Verdict::unk);
  }

  SECTION("relational input is unchanged") {
    PartialStructure s(u);
    s.set_relation("R", PartialRelation(1, 2, Verdict::pos));
    auto [rel, rel_sig] = relationalize(s, signature_of(s));
    REQUIRE(structures_equal(rel, s));
    REQUIRE(rel_sig == signature_of(s));
  }

  SECTION("an invalid function table is rejected") {
    PartialStructure s(u);
    PartialRelation bad(1, 2, Verdict::unk);
    bad.set_code(0, Verdict::pos);  // forces (b) negative; it is unknown
    s.set_function("c", PartialFunctionTable(0, bad));
    Signature sig;
    sig.add_function("c", 0);
    REQUIRE_THROWS_WITH(relationalize(s, sig).first, Catch::Contains("condition 1"));
  }
}

TEST_CASE("expansion order", "[structures]") {
  PartialStructure a = suite::point_unknown_structure();
  PartialStructure up = plus_completion(a);
  PartialStructure down = minus_completion(a);

  REQUIRE(expands(a, a));
  REQUIRE(expands(a, up));
  REQUIRE(expands(a, down));
  REQUIRE_FALSE(expands(up, a));  // resolving backwards loses the positive tuple

  PartialStructure other(Universe({"a"}));
  other.set_relation("S", PartialRelation(1, 1, Verdict::pos));
  REQUIRE_THROWS_AS(expands(a, other), validation_error);
}

TEST_CASE("completions of the single-point structure", "[structures]") {
  PartialStructure a = suite::point_unknown_structure();
  REQUIRE(plus_completion(a).relation("R").at_code(0) == Verdict::pos);
  REQUIRE(minus_completion(a).relation("R").at_code(0) == Verdict::neg);

  PartialStructure total = plus_completion(a);
  REQUIRE(structures_equal(plus_completion(total), total));
  REQUIRE(structures_equal(minus_completion(total), total));
}

TEST_CASE("normality", "[structures]") {
  PartialStructure a = suite::point_unknown_structure();
  REQUIRE(is_normal(a, plus_completion(a)));
  REQUIRE(is_normal(a, minus_completion(a)));
  REQUIRE_FALSE(is_normal(a, a));  // not total

  PartialStructure t = plus_completion(a);
  REQUIRE(is_normal(t, t));
  REQUIRE_FALSE(is_normal(t, minus_completion(a)));  // total structures admit only themselves
}

TEST_CASE("normal enumeration of the single-point structure", "[structures]") {
  PartialStructure a = suite::point_unknown_structure();
  auto normals = all_normals(a);
  REQUIRE(normals.size() == 2);
  REQUIRE(structures_equal(normals[0], minus_completion(a)));
  REQUIRE(structures_equal(normals[1], plus_completion(a)));

  auto only = all_normals(plus_completion(a));
  REQUIRE(only.size() == 1);
  REQUIRE(structures_equal(only[0], plus_completion(a)));
}

TEST_CASE("normal enumeration matches the brute-force filter", "[structures]") {
  Signature sig;
  sig.add_relation("R", 1);
  sig.add_relation("S", 2);
  gen::Rng rng(4242);
  for (int i = 0; i < 20; ++i) {
    PartialStructure a = gen::structure(rng, sig, 2, 8);
    std::set<std::string> enumerated;
    for (const auto& b : all_normals(a)) {
      REQUIRE(is_normal(a, b));
      enumerated.insert(key_of(b));
    }
    REQUIRE(enumerated.size() == all_normals(a).size());

    // independent route: filter every total structure over the same universe
    std::set<std::string> brute;
    StructureEnumerator all(sig, 2);
    while (auto candidate = all.next()) {
      if (!candidate->total()) continue;
      if (is_normal(a, *candidate)) brute.insert(key_of(*candidate));
    }
    REQUIRE(brute == enumerated);
  }
}

TEST_CASE("normal count law on a fuzzed structure", "[structures]") {
  gen::Rng rng(7);
  Signature sig;
  sig.add_relation("R", 2);
  sig.add_relation("S", 1);
  PartialStructure a = gen::structure(rng, sig, 2, 6);
  // pin u = 4: fully unknown binary relation, decided unary relation
  a.set_relation("R", PartialRelation(2, 2, Verdict::unk));
  a.set_relation("S", a.relation("S").completed(Verdict::pos));
  REQUIRE(a.unknown_count() == 4);
  auto normals = all_normals(a);
  REQUIRE(normals.size() == 16);
  std::set<std::string> keys;
  for (const auto& b : normals) {
    REQUIRE(is_normal(a, b));
    keys.insert(key_of(b));
  }
  REQUIRE(keys.size() == 16);
}

TEST_CASE("structure equality is listing-insensitive", "[structures]") {
  PartialStructure a(Universe({"a", "b"}));
  PartialRelation ra(1, 2, Verdict::neg);
  ra.set_code(0, Verdict::pos);  // R+(a), R-(b)
  a.set_relation("R", ra);
  a.set_constant("c", 0);

  PartialStructure b(Universe({"b", "a"}));
  PartialRelation rb(1, 2, Verdict::neg);
  rb.set_code(1, Verdict::pos);  // same named triple, different listing
  b.set_relation("R", rb);
  b.set_constant("c", 1);

  REQUIRE(structures_equal(a, a));
  REQUIRE(structures_equal(a, b));
  REQUIRE(structures_equal(b, a));

  b.set_constant("c", std::nullopt);
  REQUIRE_FALSE(structures_equal(a, b));

  PartialStructure base = suite::point_unknown_structure();
  REQUIRE_FALSE(structures_equal(base, plus_completion(base)));
}
