#include <catch2/catch.hpp>

#include <set>

#include "pmt/generators.hpp"
#include "pmt/parser.hpp"
#include "pmt/semantics.hpp"
#include "pmt/suite.hpp"

using namespace pmt;

namespace {

const Formula all_r = fml::forall("x", fml::pred("R", {"x"}));
const Formula not_all_r = fml::neg(all_r);
const Formula contradiction = fml::conj(all_r, not_all_r);

}  // namespace

TEST_CASE("classical evaluation on the two completions", "[semantics]") {
  PartialStructure a = suite::point_unknown_structure();
  REQUIRE(eval_total(plus_completion(a), all_r));
  REQUIRE(eval_total(minus_completion(a), not_all_r));
  REQUIRE_FALSE(eval_total(plus_completion(a), contradiction));

  Formula identity = fml::forall("x", fml::eq("x", "x"));
  REQUIRE(eval_total(plus_completion(a), identity));
  REQUIRE(eval_total(minus_completion(a), identity));

  REQUIRE_THROWS_AS(eval_total(a, all_r), validation_error);  // not total
  REQUIRE_THROWS_AS(eval_total(plus_completion(a), fml::pred("R", {"x"})),
                    validation_error);  // unbound variable
  REQUIRE(eval_total(plus_completion(a), fml::pred("R", {"x"}), {{"x", "a"}}));
}

TEST_CASE("Kleene evaluation", "[semantics]") {
  PartialStructure a = suite::point_unknown_structure();
  REQUIRE(eval_kleene(a, all_r) == Verdict::unk);
  // the two completions disagree, so no decided verdict would be sound
  REQUIRE(eval_total(plus_completion(a), all_r) != eval_total(minus_completion(a), all_r));

  REQUIRE(eval_kleene(a, fml::forall("x", fml::eq("x", "x"))) == Verdict::pos);
  // excluded middle is only quasi-true: Kleene stays undecided on unknown atoms
  REQUIRE(eval_kleene(a, fml::disj(all_r, not_all_r)) == Verdict::unk);
  REQUIRE(quasi_true(a, fml::disj(all_r, not_all_r)));
  Formula identity = fml::forall("x", fml::eq("x", "x"));
  REQUIRE(eval_kleene(a, fml::conj(all_r, fml::neg(identity))) == Verdict::neg);

  gen::Rng rng(11);
  gen::Bounds bounds;
  for (int i = 0; i < 50; ++i) {
    Signature sig = gen::signature(rng, bounds);
    PartialStructure t = gen::total_structure(rng, sig, 2);
    Formula f = gen::sentence(rng, sig, 3, 2);
    REQUIRE((eval_kleene(t, f) == Verdict::pos) == eval_total(t, f));
  }
}

TEST_CASE("quasi-truth on the single-point structure", "[semantics]") {
  PartialStructure a = suite::point_unknown_structure();
  REQUIRE(quasi_true(a, all_r));
  REQUIRE(quasi_true(a, not_all_r));
  REQUIRE_FALSE(quasi_true(a, contradiction));

  auto witness = quasi_witness(a, all_r);
  REQUIRE(witness);
  REQUIRE(structures_equal(*witness, plus_completion(a)));

  REQUIRE_THROWS_AS(quasi_true(a, fml::pred("R", {"x"})), validation_error);  // open
}

TEST_CASE("quasi-models checks sentences independently", "[semantics]") {
  PartialStructure a = suite::point_unknown_structure();
  std::vector<Formula> gamma{all_r, not_all_r};
  REQUIRE(quasi_models(a, gamma));
  REQUIRE(quasi_models(a, {}));
  std::vector<Formula> conj_only{contradiction};
  REQUIRE_FALSE(quasi_models(a, conj_only));
}

TEST_CASE("quasi-truth is classical on total structures", "[semantics]") {
  gen::Rng rng(5);
  gen::Bounds bounds;
  for (int i = 0; i < 100; ++i) {
    Signature sig = gen::signature(rng, bounds);
    PartialStructure t = gen::total_structure(rng, sig, 1 + gen::pick(rng, 3));
    Formula f = gen::sentence(rng, sig, bounds.max_depth, bounds.max_vars);
    REQUIRE(quasi_true(t, f) == eval_total(t, f));
  }
}

TEST_CASE("partial structure enumeration counts", "[semantics]") {
  Signature r1;
  r1.add_relation("R", 1);
  StructureEnumerator e1(r1, 1);
  REQUIRE(e1.count() == 3);
  StructureEnumerator e2(r1, 2);
  REQUIRE(e2.count() == 9);

  Signature r2;
  r2.add_relation("R", 2);
  StructureEnumerator e3(r2, 2);
  REQUIRE(e3.count() == 81);

  std::set<std::string> seen;
  std::size_t n = 0;
  while (auto s = e3.next()) {
    ++n;
    std::string key;
    for (std::size_t code = 0; code < s->relation("R").tuple_count(); ++code)
      key += verdict_char(s->relation("R").at_code(code));
    seen.insert(key);
  }
  REQUIRE(n == 81);
  REQUIRE(seen.size() == 81);
}

TEST_CASE("bounded quasi-consequence finds the single-point counterexample", "[semantics]") {
  Signature sig = suite::unary_r_signature();
  std::vector<Formula> gamma{all_r, not_all_r};
  auto cex = quasi_consequence_bounded(gamma, contradiction, 1, sig);
  REQUIRE(cex);
  // the first counterexample in enumeration order: one element, R fully unknown
  REQUIRE(cex->structure.universe().size() == 1);
  REQUIRE(cex->structure.relation("R").at_code(0) == Verdict::unk);

  // replay the report
  REQUIRE(quasi_models(cex->structure, cex->satisfied));
  REQUIRE_FALSE(quasi_true(cex->structure, cex->failed));

  std::vector<Formula> just_alpha{contradiction};
  REQUIRE_FALSE(quasi_consequence_bounded(just_alpha, contradiction, 2, sig).has_value());
}

TEST_CASE("modus ponens fails for quasi-consequence", "[semantics]") {
  Signature sig = suite::unary_r_signature();
  std::vector<Formula> gamma{fml::implies(all_r, contradiction), all_r};
  auto cex = quasi_consequence_bounded(gamma, contradiction, 1, sig);
  REQUIRE(cex);
  REQUIRE(quasi_models(cex->structure, gamma));
  REQUIRE_FALSE(quasi_true(cex->structure, contradiction));
}

TEST_CASE("bounded quasi-validity", "[semantics]") {
  Signature sig = suite::unary_r_signature();
  REQUIRE_FALSE(quasi_valid_bounded(fml::forall("x", fml::eq("x", "x")), 2, sig).has_value());

  auto cex = quasi_valid_bounded(all_r, 1, sig);
  REQUIRE(cex);
  REQUIRE(cex->structure.total());
  REQUIRE(cex->structure.relation("R").at_code(0) == Verdict::neg);

  Formula excluded_middle =
      fml::forall("x", fml::disj(fml::pred("R", {"x"}), fml::neg(fml::pred("R", {"x"}))));
  REQUIRE_FALSE(quasi_valid_bounded(excluded_middle, 2, sig).has_value());
  // independent route: every normal completion is total, hence classical
  for (std::size_t size = 1; size <= 2; ++size) {
    StructureEnumerator structures(sig, size);
    while (auto s = structures.next()) {
      bool some_normal_satisfies = false;
      for (const auto& b : all_normals(*s))
        if (eval_total(b, excluded_middle)) some_normal_satisfies = true;
      REQUIRE(some_normal_satisfies);
    }
  }
}

TEST_CASE("bounded quasi-equivalence", "[semantics]") {
  Signature sig = suite::unary_r_signature();
  REQUIRE_FALSE(quasi_equivalent_bounded(all_r, all_r, 2, sig).has_value());

  auto cex = quasi_equivalent_bounded(all_r, not_all_r, 1, sig);
  REQUIRE(cex);

  Formula no_exception = fml::neg(fml::exists("x", fml::neg(fml::pred("R", {"x"}))));
  REQUIRE_FALSE(quasi_equivalent_bounded(all_r, no_exception, 2, sig).has_value());
  // independent route: quasi-truth values agree on every partial structure
  for (std::size_t size = 1; size <= 2; ++size) {
    StructureEnumerator structures(sig, size);
    while (auto s = structures.next())
      REQUIRE(quasi_true(*s, all_r) == quasi_true(*s, no_exception));
  }
}

TEST_CASE("quasi-truth agrees with the enumeration oracle", "[semantics]") {
  gen::Rng rng(31337);
  gen::Bounds bounds;
  for (int i = 0; i < 150; ++i) {
    Signature sig = gen::signature(rng, bounds);
    PartialStructure a = gen::structure(rng, sig, bounds);
    Formula f = gen::sentence(rng, sig, bounds.max_depth, bounds.max_vars);
    bool oracle = false;
    for (const auto& b : all_normals(a))
      if (eval_total(b, f)) oracle = true;
    INFO(render(f));
    REQUIRE(quasi_true(a, f) == oracle);
  }
}
