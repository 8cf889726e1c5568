#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using Catch::Contains;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(PMT_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    result.output.append(buffer.data(), n);
  int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string data(const std::string& rel) {
  return (std::filesystem::path(PMT_DATA_DIR) / rel).string();
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("check reports structure counts and unknowns", "[cli]") {
  auto r = run_cli("check " + data("point_unknown.pstruct"));
  CHECK(r.status == 0);
  CHECK_THAT(r.output, Contains("ok: 1 structure, u=1"));

  auto dir = run_cli("check " + std::string(PMT_DATA_DIR));
  CHECK(dir.status == 0);
  CHECK_THAT(dir.output, Contains("ok:"));
}

TEST_CASE("check rejects a broken triple with a located diagnostic", "[cli]") {
  auto path = temp("cli_overlap.pstruct");
  std::ofstream(path) << "universe a\nrelation R 1\n+ : (a)\n- : (a)\n";
  auto r = run_cli("check " + path.string());
  CHECK(r.status == 3);
  CHECK_THAT(r.output, Contains("cli_overlap.pstruct:2") && Contains("more than one part"));
  std::filesystem::remove(path);
}

TEST_CASE("check rejects a family manifest with a missing factor file", "[cli]") {
  auto path = temp("cli_missing.pfam");
  std::ofstream(path) << "index x nowhere.pstruct\n";
  auto r = run_cli("check " + path.string());
  CHECK(r.status == 3);
  CHECK_THAT(r.output, Contains("cannot open"));
  std::filesystem::remove(path);
}

TEST_CASE("eval in quasi mode with a witness", "[cli]") {
  auto r = run_cli("eval --structure " + data("point_unknown.pstruct") +
                   " --sentence \"forall x (R(x))\" --mode quasi --witness");
  CHECK(r.status == 0);
  CHECK_THAT(r.output, Contains("quasi-true") && Contains("witness:") && Contains("+ : (a)"));

  auto contradiction =
      run_cli("eval --structure " + data("point_unknown.pstruct") +
              " --sentence \"(forall x (R(x)) & ~forall x (R(x)))\"");
  CHECK(contradiction.status == 1);
  CHECK_THAT(contradiction.output, Contains("quasi-false"));
}

TEST_CASE("eval in kleene and total modes", "[cli]") {
  auto kleene = run_cli("eval --structure " + data("point_unknown.pstruct") +
                        " --sentence \"forall x (R(x))\" --mode kleene");
  CHECK(kleene.status == 1);
  CHECK_THAT(kleene.output, Contains("unknown"));

  auto total_on_partial = run_cli("eval --structure " + data("point_unknown.pstruct") +
                                  " --sentence \"forall x (R(x))\" --mode total");
  CHECK(total_on_partial.status == 3);
  CHECK_THAT(total_on_partial.output, Contains("total"));

  auto total = run_cli("eval --structure " + data("two_total.pstruct") +
                       " --sentence \"exists x (R(x))\" --mode total");
  CHECK(total.status == 0);
  CHECK_THAT(total.output, Contains("true"));
}

TEST_CASE("eval relationalizes function symbols on the fly", "[cli]") {
  auto r = run_cli("eval --structure " + data("with_function.pstruct") +
                   " --sentence \"exists x (exists y (f(x,y)))\" --mode quasi");
  CHECK(r.status == 0);
  CHECK_THAT(r.output, Contains("quasi-true"));
}

TEST_CASE("eval budget guard", "[cli]") {
  auto r = run_cli("eval --structure " + data("point_unknown.pstruct") +
                   " --sentence \"forall x (R(x))\" --max-unknowns 0");
  CHECK(r.status == 3);
  CHECK_THAT(r.output, Contains("exceeds"));
}

TEST_CASE("product subcommand covers the three constructions", "[cli]") {
  std::string fam = data("two_factor/family.pfam");

  auto direct = run_cli("product --family " + fam);
  CHECK(direct.status == 0);
  CHECK_THAT(direct.output, Contains("universe size 1") && Contains("0 : (a1.a2)"));

  auto trivial = run_cli("product --family " + fam + " --filter trivial");
  CHECK(trivial.status == 0);
  CHECK_THAT(trivial.output, Contains("- : (a1.a2)"));

  auto named = run_cli("product --family " + fam + " --filter F");
  CHECK(named.status == 0);
  CHECK_THAT(named.output, Contains("- : (a1.a2)"));

  auto ultra = run_cli("product --family " + fam + " --ultrafilter x");
  CHECK(ultra.status == 0);
  CHECK_THAT(ultra.output, Contains("+ : (a1.a2)"));

  auto bad = run_cli("product --family " + fam + " --ultrafilter q");
  CHECK(bad.status == 3);
}

TEST_CASE("product output re-parses cleanly", "[cli]") {
  auto out = temp("cli_product.pstruct");
  auto r = run_cli("product --family " + data("two_factor/family.pfam") + " --out " +
                   out.string());
  CHECK(r.status == 0);
  auto check = run_cli("check " + out.string());
  CHECK(check.status == 0);
  CHECK_THAT(check.output, Contains("ok: 1 structure, u=1"));
  std::filesystem::remove(out);
}

TEST_CASE("consequence search prints the counterexample", "[cli]") {
  auto r = run_cli("consequence --gamma " + data("nonclassical.psents") +
                   " --alpha \"(forall x (R(x)) & ~forall x (R(x)))\" --max-size 1");
  CHECK(r.status == 1);
  CHECK_THAT(r.output, Contains("counterexample") && Contains("0 : (e1)") &&
                           Contains("quasi-false"));

  auto holds = run_cli("consequence --gamma " + data("nonclassical.psents") +
                       " --alpha \"forall x (R(x))\" --max-size 2");
  CHECK(holds.status == 0);
  CHECK_THAT(holds.output, Contains("no counterexample up to size 2"));

  auto open = run_cli("consequence --gamma " + data("nonclassical.psents") +
                      " --alpha \"R(x)\" --max-size 1");
  CHECK(open.status == 3);
  CHECK_THAT(open.output, Contains("free variable"));
}

TEST_CASE("suite subcommand", "[cli]") {
  auto r = run_cli("suite structures --seed 3 --cases 20");
  CHECK(r.status == 0);
  CHECK_THAT(r.output, Contains("suite passed") && Contains("normal-count-law"));

  auto again = run_cli("suite structures --seed 3 --cases 20");
  CHECK(again.output == r.output);  // byte-identical for identical inputs

  auto unknown = run_cli("suite nonsense");
  CHECK(unknown.status == 2);
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("--help").status == 0);
}
