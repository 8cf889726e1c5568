#include <catch2/catch.hpp>

#include "pmt/formula.hpp"
#include "pmt/generators.hpp"
#include "pmt/parser.hpp"

using namespace pmt;

namespace {

Signature unary_sig() {
  Signature sig;
  sig.add_relation("R", 1);
  return sig;
}

}  // namespace

TEST_CASE("parsing the quantified atom", "[syntax]") {
  Formula f = parse_formula("forall x (R(x))", unary_sig());
  REQUIRE(f == fml::forall("x", fml::pred("R", {"x"})));
}

TEST_CASE("parsing a conjunction of quantified formulas", "[syntax]") {
  Signature sig = unary_sig();
  Formula expected = fml::conj(fml::forall("x", fml::pred("R", {"x"})),
                               fml::neg(fml::forall("x", fml::pred("R", {"x"}))));
  REQUIRE(parse_formula("(forall x (R(x)) & ~forall x (R(x)))", sig) == expected);

  // quantifier-body parentheses may carry a connective directly
  Formula lenient = parse_formula("forall x (R(x) & ~forall x (R(x)))", sig);
  REQUIRE(lenient.kind == FormulaKind::forall);
  REQUIRE(lenient.children[0].kind == FormulaKind::conj);
}

TEST_CASE("parser rejects arity mismatches and unknown symbols", "[syntax]") {
  Signature sig = unary_sig();
  REQUIRE_THROWS_AS(parse_formula("R(x,y)", sig), parse_error);
  REQUIRE_THROWS_WITH(parse_formula("R(x,y)", sig),
                      Catch::Contains("arity") && Catch::Contains("R"));
  REQUIRE_THROWS_WITH(parse_formula("Q(x)", sig), Catch::Contains("unknown relation"));
  REQUIRE_THROWS_AS(parse_formula("forall x R(x)", sig), parse_error);  // body needs parens
  REQUIRE_THROWS_AS(parse_formula("(R(x) &", sig), parse_error);
  REQUIRE_THROWS_AS(parse_formula("R(X)", sig), parse_error);  // variables are lowercase
  REQUIRE_THROWS_AS(parse_formula("", sig), parse_error);
  REQUIRE_THROWS_AS(parse_formula("forall x (R(x)) junk", sig), parse_error);
}

TEST_CASE("parse errors carry positions", "[syntax]") {
  try {
    parse_formula("forall x (Q(x))", unary_sig());
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    REQUIRE(e.position == 11);
  }
}

TEST_CASE("free variables", "[syntax]") {
  Formula closed = fml::forall("x", fml::pred("R", {"x"}));
  REQUIRE(free_variables(closed).empty());
  REQUIRE(is_sentence(closed));

  Formula open = fml::pred("R", {"x"});
  REQUIRE(free_variables(open) == std::set<std::string>{"x"});

  Formula binder = fml::exists("y", fml::eq("x", "y"));
  REQUIRE(free_variables(binder) == std::set<std::string>{"x"});
}

TEST_CASE("rendering canonical forms", "[syntax]") {
  Formula all = fml::forall("x", fml::pred("R", {"x"}));
  REQUIRE(render(all) == "forall x (R(x))");
  REQUIRE(render(fml::neg(all)) == "~forall x (R(x))");
  REQUIRE(render(fml::conj(fml::pred("R", {"x"}), fml::pred("R", {"y"}))) ==
          "(R(x) & R(y))");
  REQUIRE(render(fml::implies(fml::eq("x", "y"), fml::disj(all, all))) ==
          "(x = y -> (forall x (R(x)) | forall x (R(x))))");
}

TEST_CASE("parse/render round trip on fuzzed formulas", "[syntax]") {
  Signature sig;
  sig.add_relation("R", 1);
  sig.add_relation("S", 2);
  gen::Rng rng(20240817);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen::formula_open(rng, sig, 6);
    INFO(render(f));
    REQUIRE(parse_formula(render(f), sig) == f);
  }
}

TEST_CASE("parser rejects fuzzed arity mismatches", "[syntax]") {
  gen::Rng rng(99);
  gen::Bounds bounds;
  for (int i = 0; i < 200; ++i) {
    Signature sig = gen::signature(rng, bounds);
    for (const auto& [name, arity] : sig.relations()) {
      std::vector<std::string> too_many(arity + 1, "x");
      INFO(name << "/" << arity);
      REQUIRE_THROWS_AS(parse_formula(render(fml::pred(name, too_many)), sig), parse_error);
    }
  }
}
