#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pmt/generators.hpp"
#include "pmt/io.hpp"
#include "pmt/suite.hpp"

using namespace pmt;

namespace {

std::filesystem::path data_dir() { return std::filesystem::path(PMT_DATA_DIR); }

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_CASE("reading the single-point structure file", "[io]") {
  PartialStructure s = read_structure_file(data_dir() / "point_unknown.pstruct");
  REQUIRE(s.universe().elements() == std::vector<std::string>{"a"});
  REQUIRE(s.unknown_count() == 1);
  REQUIRE(structures_equal(s, suite::point_unknown_structure()));
}

TEST_CASE("write/read round trip", "[io]") {
  PartialStructure s = read_structure_file(data_dir() / "with_function.pstruct");
  REQUIRE(s.constants().at("c") == std::optional<std::size_t>(0));
  REQUIRE(s.constants().at("d") == std::nullopt);
  REQUIRE(s.functions().at("f").arity == 1);

  PartialStructure again = read_structure_text(structure_to_string(s));
  REQUIRE(again.universe() == s.universe());
  REQUIRE(again.relations() == s.relations());
  REQUIRE(again.functions() == s.functions());
  REQUIRE(again.constants() == s.constants());
}

TEST_CASE("write/read round trip on fuzzed structures", "[io]") {
  gen::Rng rng(2024);
  gen::Bounds bounds;
  for (int i = 0; i < 100; ++i) {
    Signature sig = gen::signature(rng, bounds);
    PartialStructure s = gen::structure(rng, sig, bounds);
    PartialStructure again = read_structure_text(structure_to_string(s));
    REQUIRE(again.universe() == s.universe());
    REQUIRE(again.relations() == s.relations());
  }
}

TEST_CASE("structure diagnostics carry file and line", "[io]") {
  TempFile overlap("overlap.pstruct",
                   "universe a\n"
                   "relation R 1\n"
                   "+ : (a)\n"
                   "- : (a)\n");
  REQUIRE_THROWS_WITH(read_structure_file(overlap.path),
                      Catch::Contains("overlap.pstruct:2") &&
                          Catch::Contains("more than one part"));

  TempFile gap("gap.pstruct", "universe a b\nrelation R 1\n+ : (a)\n");
  REQUIRE_THROWS_WITH(read_structure_file(gap.path), Catch::Contains("missing"));

  TempFile stray("stray.pstruct", "relation R 1\n");
  REQUIRE_THROWS_WITH(read_structure_file(stray.path),
                      Catch::Contains("must start with a universe line"));

  TempFile alien("alien.pstruct", "universe a\nrelation R 1\n+ : (q)\n");
  REQUIRE_THROWS_WITH(read_structure_file(alien.path),
                      Catch::Contains("alien.pstruct:3") && Catch::Contains("unknown element"));

  TempFile badconst("badconst.pstruct", "universe a\nconstant c = q\n");
  REQUIRE_THROWS_WITH(read_structure_file(badconst.path), Catch::Contains("badconst.pstruct:2"));

  TempFile dup("dup.pstruct",
               "universe a\nrelation R 1\n+ : (a)\nrelation R 1\n- : (a)\n");
  REQUIRE_THROWS_WITH(read_structure_file(dup.path), Catch::Contains("twice"));

  TempFile noarity("noarity.pstruct", "universe a\nfunction f\n+ : (a,a)\n");
  REQUIRE_THROWS_WITH(read_structure_file(noarity.path), Catch::Contains("arity"));

  REQUIRE_THROWS_WITH(read_structure_file("no_such_file.pstruct"),
                      Catch::Contains("cannot open"));
}

TEST_CASE("family manifest loading", "[io]") {
  FamilyFile fam = read_family_file(data_dir() / "two_factor" / "family.pfam");
  REQUIRE(fam.family.index() == std::vector<std::string>{"x", "y"});
  REQUIRE(fam.family.factor("x").relation("R").at_code(0) == Verdict::pos);
  REQUIRE(fam.family.factor("y").relation("R").at_code(0) == Verdict::unk);

  REQUIRE(fam.filters.count("F") == 1);
  REQUIRE(is_filter(fam.filters.at("F")));
  REQUIRE(fam.filters.at("F").members() == std::set<std::uint64_t>{3});

  REQUIRE(fam.ultrafilters.count("U") == 1);
  REQUIRE(is_ultrafilter(fam.ultrafilters.at("U")));
}

TEST_CASE("anonymous principal ultrafilter blocks", "[io]") {
  TempFile factor("anon_factor.pstruct", "universe a\nrelation R 1\n0 : (a)\n");
  TempFile manifest("anon.pfam",
                    "index x anon_factor.pstruct\nultrafilter principal x\n");
  FamilyFile fam = read_family_file(manifest.path);
  REQUIRE(fam.ultrafilters.count("principal-x") == 1);
  REQUIRE(is_ultrafilter(fam.ultrafilters.at("principal-x")));
}

TEST_CASE("family manifest diagnostics", "[io]") {
  TempFile missing("missing.pfam", "index x nowhere.pstruct\n");
  REQUIRE_THROWS_WITH(read_family_file(missing.path),
                      Catch::Contains("missing.pfam:1") && Catch::Contains("cannot open"));

  TempFile structure_file("lone.pstruct", "universe a\nrelation R 1\n0 : (a)\n");
  TempFile bad_filter("badfilter.pfam",
                      "index x lone.pstruct\nfilter F = {}\n");
  REQUIRE_THROWS_WITH(read_family_file(bad_filter.path),
                      Catch::Contains("filter axioms"));

  TempFile bad_index("badindex.pfam",
                     "index x lone.pstruct\nultrafilter U principal q\n");
  REQUIRE_THROWS_WITH(read_family_file(bad_index.path), Catch::Contains("unknown index"));
}

TEST_CASE("sentences file", "[io]") {
  SentenceFile sents = read_sentences_file(data_dir() / "nonclassical.psents");
  REQUIRE(sents.sentences.size() == 2);
  REQUIRE(render(sents.sentences[0]) == "forall x (R(x))");
  REQUIRE(render(sents.sentences[1]) == "~forall x (R(x))");

  TempFile bad("bad.psents", "relation R 1\nsentence forall x (R(x,y))\n");
  REQUIRE_THROWS_WITH(read_sentences_file(bad.path),
                      Catch::Contains("bad.psents:2") && Catch::Contains("arity"));
}

TEST_CASE("workspace loading", "[io]") {
  Workspace ws = load_workspace(data_dir());
  REQUIRE(ws.structures.count("point_unknown") == 1);
  REQUIRE(ws.structures.count("two_total") == 1);
  REQUIRE(ws.sentence_sets.count("nonclassical") == 1);
  REQUIRE(load_workspace(data_dir() / "two_factor").families.count("family") == 1);
  REQUIRE_THROWS_AS(load_workspace(data_dir() / "nope"), validation_error);
}

TEST_CASE("canonical writer output", "[io]") {
  PartialStructure s = suite::point_unknown_structure();
  REQUIRE(structure_to_string(s) ==
          "universe a\n"
          "relation R 1\n"
          "0 : (a)\n");
}
