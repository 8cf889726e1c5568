// pmt: inspect partial structures, evaluate quasi-truth, build products and
// reduced products, search for consequence counterexamples, and run the
// property suites.
//
// Exit codes: 0 ok / positive verdict, 1 semantic negative (counterexample
// found, quasi-false, failing suite), 2 usage error, 3 validation error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmt/pmt.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;
constexpr int exit_validation = 3;

struct CheckTotals {
  std::size_t structures = 0;
  std::size_t families = 0;
  std::size_t sentence_sets = 0;
  std::size_t unknowns = 0;
  std::size_t errors = 0;
};

void check_one_file(const std::filesystem::path& path, CheckTotals& totals) {
  try {
    std::string ext = path.extension().string();
    if (ext == ".pfam") {
      pmt::FamilyFile fam = pmt::read_family_file(path);
      ++totals.families;
      for (std::size_t p = 0; p < fam.family.size(); ++p)
        totals.unknowns += fam.family.factor_at(p).unknown_count();
      totals.structures += fam.family.size();
    } else if (ext == ".psents") {
      pmt::SentenceFile sents = pmt::read_sentences_file(path);
      ++totals.sentence_sets;
      for (const auto& s : sents.sentences)
        if (!pmt::is_sentence(s))
          throw pmt::validation_error(path.string() + ": open formula '" +
                                      pmt::render(s) + "'");
    } else {
      pmt::PartialStructure s = pmt::read_structure_file(path);
      ++totals.structures;
      totals.unknowns += s.unknown_count();
    }
  } catch (const pmt::validation_error& e) {
    std::cerr << e.what() << "\n";
    ++totals.errors;
  }
}

int cmd_check(const std::vector<std::string>& paths) {
  CheckTotals totals;
  for (const auto& raw : paths) {
    std::filesystem::path path(raw);
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(path))
        if (entry.is_regular_file()) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        std::string ext = f.extension().string();
        if (ext == ".pstruct" || ext == ".pfam" || ext == ".psents")
          check_one_file(f, totals);
      }
    } else {
      check_one_file(path, totals);
    }
  }
  if (totals.errors) {
    std::cerr << totals.errors << " file(s) failed validation\n";
    return exit_validation;
  }
  std::cout << "ok: " << totals.structures
            << (totals.structures == 1 ? " structure" : " structures");
  if (totals.families)
    std::cout << ", " << totals.families << (totals.families == 1 ? " family" : " families");
  if (totals.sentence_sets)
    std::cout << ", " << totals.sentence_sets
              << (totals.sentence_sets == 1 ? " sentence set" : " sentence sets");
  std::cout << ", u=" << totals.unknowns << "\n";
  return exit_ok;
}

int cmd_eval(const std::string& structure_path, const std::string& sentence_text,
             const std::string& mode, bool witness, std::size_t max_unknowns) {
  pmt::PartialStructure loaded = pmt::read_structure_file(structure_path);
  auto [s, sig] = pmt::relationalize(loaded, pmt::signature_of(loaded));
  pmt::Formula f = pmt::parse_formula(sentence_text, sig);

  if (mode == "total") {
    bool value = pmt::eval_total(s, f);
    std::cout << (value ? "true" : "false") << "\n";
    return value ? exit_ok : exit_negative;
  }
  if (mode == "kleene") {
    pmt::Verdict v = pmt::eval_kleene(s, f);
    std::cout << (v == pmt::Verdict::pos ? "true"
                                         : v == pmt::Verdict::neg ? "false" : "unknown")
              << "\n";
    return v == pmt::Verdict::pos ? exit_ok : exit_negative;
  }
  if (s.unknown_count() > max_unknowns)
    throw pmt::validation_error("completion space 2^" + std::to_string(s.unknown_count()) +
                                " exceeds the --max-unknowns budget 2^" +
                                std::to_string(max_unknowns));
  auto found = pmt::quasi_witness(s, f);
  std::cout << (found ? "quasi-true" : "quasi-false") << "\n";
  if (found && witness) {
    std::cout << "witness:\n";
    pmt::write_structure(std::cout, *found);
  }
  return found ? exit_ok : exit_negative;
}

int cmd_product(const std::string& family_path, const std::string& filter_name,
                const std::string& ultra_index, const std::string& out_path) {
  pmt::FamilyFile fam = pmt::read_family_file(family_path);
  pmt::PartialStructure result = [&] {
    if (!ultra_index.empty()) {
      std::size_t at = 0;
      const auto& index = fam.family.index();
      while (at < index.size() && index[at] != ultra_index) ++at;
      if (at == index.size())
        throw pmt::validation_error("'" + ultra_index + "' is not an index of the family");
      return pmt::ultraproduct(fam.family, pmt::principal_ultrafilter(index, at));
    }
    if (!filter_name.empty()) {
      if (auto it = fam.filters.find(filter_name); it != fam.filters.end())
        return pmt::reduced_product(fam.family, it->second);
      if (auto it = fam.ultrafilters.find(filter_name); it != fam.ultrafilters.end())
        return pmt::reduced_product(fam.family, it->second);
      if (filter_name == "trivial")
        return pmt::reduced_product(fam.family, pmt::trivial_filter(fam.family.index()));
      throw pmt::validation_error("no filter named '" + filter_name + "' in the manifest");
    }
    return pmt::direct_product(fam.family);
  }();

  std::cout << "universe size " << result.universe().size() << "\n";
  for (const auto& [name, r] : result.relations())
    std::cout << name << ": |+|=" << r.count(pmt::Verdict::pos)
              << " |-|=" << r.count(pmt::Verdict::neg)
              << " |0|=" << r.count(pmt::Verdict::unk) << "\n";

  if (out_path.empty()) {
    pmt::write_structure(std::cout, result);
  } else {
    std::ofstream out(out_path);
    if (!out) throw pmt::validation_error("cannot write '" + out_path + "'");
    pmt::write_structure(out, result);
    std::cout << "wrote " << out_path << "\n";
  }
  return exit_ok;
}

int cmd_consequence(const std::string& gamma_path, const std::string& alpha_text,
                    std::size_t max_size) {
  pmt::SentenceFile gamma = pmt::read_sentences_file(gamma_path);
  pmt::Formula alpha = pmt::parse_formula(alpha_text, gamma.signature);
  auto cex = pmt::quasi_consequence_bounded(gamma.sentences, alpha, max_size,
                                            gamma.signature);
  if (!cex) {
    std::cout << "no counterexample up to size " << max_size << "\n";
    return exit_ok;
  }
  std::cout << "counterexample (universe size " << cex->structure.universe().size() << "):\n";
  pmt::write_structure(std::cout, cex->structure);
  for (const auto& g : cex->satisfied)
    std::cout << "quasi-true:  " << pmt::render(g) << "\n";
  std::cout << "quasi-false: " << pmt::render(cex->failed) << "\n";
  return exit_negative;
}

int cmd_suite(const std::string& name, std::uint64_t seed, std::size_t cases) {
  if (!pmt::suite::known_suite(name)) {
    std::cerr << "unknown suite '" << name
              << "' (expected structures, semantics, products or all)\n";
    return exit_usage;
  }
  std::size_t failures = 0;
  for (const auto& r : pmt::suite::run_suite(name, seed, cases)) {
    failures += r.failures;
    std::cout << (r.failures ? "FAIL" : "pass") << "  " << r.module << "/" << r.name
              << ": " << r.cases << " cases";
    if (r.failures) std::cout << ", " << r.failures << " failures [" << r.first_failure << "]";
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
  std::cout << (failures ? "suite failed\n" : "suite passed\n");
  return failures ? exit_negative : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite partial structures, quasi-truth and ultraproducts"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "validate structure/family/sentence files");
  std::vector<std::string> check_paths;
  check->add_option("paths", check_paths, "files or workspace directories")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a sentence in a structure");
  std::string eval_structure, eval_sentence, eval_mode = "quasi";
  bool eval_witness = false;
  std::size_t eval_budget = 20;
  eval->add_option("--structure", eval_structure, "structure file")->required();
  eval->add_option("--sentence", eval_sentence, "sentence text")->required();
  eval->add_option("--mode", eval_mode, "total | kleene | quasi (default)")
      ->check(CLI::IsMember({"total", "kleene", "quasi"}));
  eval->add_flag("--witness", eval_witness, "print a satisfying normal completion");
  eval->add_option("--max-unknowns", eval_budget,
                   "abort quasi queries with more unknown tuples than this (default 20)");

  auto* product = app.add_subcommand("product", "direct/reduced/ultra product of a family");
  std::string product_family, product_filter, product_ultra, product_out;
  product->add_option("--family", product_family, "family manifest")->required();
  auto* filter_opt =
      product->add_option("--filter", product_filter, "manifest filter name, or 'trivial'");
  auto* ultra_opt = product->add_option("--ultrafilter", product_ultra,
                                        "index name: principal ultrafilter there");
  filter_opt->excludes(ultra_opt);
  product->add_option("--out", product_out, "output structure file (default: stdout)");

  auto* consequence = app.add_subcommand("consequence", "bounded quasi-consequence check");
  std::string gamma_path, alpha_text;
  std::size_t max_size = 2;
  consequence->add_option("--gamma", gamma_path, "premise sentences file")->required();
  consequence->add_option("--alpha", alpha_text, "conclusion sentence text")->required();
  consequence->add_option("--max-size", max_size, "largest universe size to scan (default 2)");

  auto* suite = app.add_subcommand("suite", "run the property suites");
  std::string suite_name;
  std::uint64_t suite_seed = 1;
  std::size_t suite_cases = 200;
  suite->add_option("name", suite_name, "structures | semantics | products | all")->required();
  suite->add_option("--seed", suite_seed, "fuzzer seed (default 1)");
  suite->add_option("--cases", suite_cases, "fuzz cases per check (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (check->parsed()) return cmd_check(check_paths);
    if (eval->parsed())
      return cmd_eval(eval_structure, eval_sentence, eval_mode, eval_witness, eval_budget);
    if (product->parsed())
      return cmd_product(product_family, product_filter, product_ultra, product_out);
    if (consequence->parsed()) return cmd_consequence(gamma_path, alpha_text, max_size);
    if (suite->parsed()) return cmd_suite(suite_name, suite_seed, suite_cases);
  } catch (const pmt::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const pmt::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  return exit_usage;
}
