#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/filter.hpp"
#include "pmt/parser.hpp"
#include "pmt/product.hpp"
#include "pmt/structure.hpp"

namespace pmt {

// Text formats.
//
// Structure file (one structure per file, '#' starts a comment):
//   universe a b
//   relation R 1
//   + : (a)
//   - : (b)
//   constant c = a
//   constant d = ?
//   function f 1
//   + : (a,a) (b,b)
//   - : (a,b) (b,a)
// The three verdict lines of a relation or function block may be omitted when
// empty; together they must cover every tuple exactly once. The arity after a
// relation name is optional on input (inferred from the first tuple).
//
// Family manifest:
//   index x factor_x.pstruct
//   index y factor_y.pstruct
//   filter F = {x,y} {y}
//   ultrafilter U principal x
//
// Sentences file:
//   relation R 1
//   sentence forall x (R(x))

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] inline void fail_at(const std::string& source, int line_no,
                                 const std::string& message) {
  throw validation_error(source + ":" + std::to_string(line_no) + ": " + message);
}

// Parses "(a,b) (c,d)" into name tuples.
inline std::vector<std::vector<std::string>> parse_tuples(const std::string& text,
                                                          const std::string& source,
                                                          int line_no) {
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') fail_at(source, line_no, "expected '(' to open a tuple");
    ++i;
    std::vector<std::string> tuple;
    std::string name;
    for (;; ++i) {
      if (i >= text.size()) fail_at(source, line_no, "unterminated tuple");
      char c = text[i];
      if (c == ',' || c == ')') {
        if (name.empty()) fail_at(source, line_no, "empty element name in tuple");
        tuple.push_back(name);
        name.clear();
        if (c == ')') { ++i; break; }
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        name += c;
      }
    }
    out.push_back(std::move(tuple));
    skip_ws();
  }
  return out;
}

struct TripleBlock {
  std::string keyword;  // "relation" or "function"
  std::string name;
  std::optional<std::size_t> declared_arity;
  int line_no = 0;
  // verdict -> tuples with the line each came from
  std::vector<std::vector<std::string>> pos, neg, unk;
};

}  // namespace detail

inline PartialStructure read_structure(std::istream& in, const std::string& source) {
  std::optional<Universe> universe;
  std::vector<detail::TripleBlock> blocks;
  std::vector<std::tuple<std::string, std::optional<std::string>, int>> constants;
  int line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_comment(raw);
    std::vector<std::string> tok = detail::split_ws(line);
    if (tok.empty()) continue;
    const std::string& head = tok[0];

    if (head == "universe") {
      if (universe) detail::fail_at(source, line_no, "duplicate universe line");
      if (tok.size() < 2) detail::fail_at(source, line_no, "universe needs elements");
      try {
        universe.emplace(std::vector<std::string>(tok.begin() + 1, tok.end()));
      } catch (const validation_error& e) {
        detail::fail_at(source, line_no, e.what());
      }
      continue;
    }
    if (!universe) detail::fail_at(source, line_no, "file must start with a universe line");

    if (head == "relation" || head == "function") {
      detail::TripleBlock block;
      block.keyword = head;
      block.line_no = line_no;
      if (tok.size() < 2) detail::fail_at(source, line_no, head + " needs a name");
      block.name = tok[1];
      for (const auto& other : blocks)
        if (other.name == block.name)
          detail::fail_at(source, line_no, "symbol '" + block.name + "' declared twice");
      if (tok.size() >= 3) {
        try {
          block.declared_arity = std::stoul(tok[2]);
        } catch (...) {
          detail::fail_at(source, line_no, "bad arity '" + tok[2] + "'");
        }
      } else if (head == "function") {
        detail::fail_at(source, line_no, "function needs an explicit arity");
      }
      if (tok.size() > 3) detail::fail_at(source, line_no, "trailing tokens after " + head);
      blocks.push_back(std::move(block));
      continue;
    }
    if (head == "+" || head == "-" || head == "0") {
      if (blocks.empty())
        detail::fail_at(source, line_no, "verdict line outside a relation/function block");
      if (tok.size() < 2 || tok[1] != ":")
        detail::fail_at(source, line_no, "expected ':' after '" + head + "'");
      auto colon = line.find(':');
      auto tuples = detail::parse_tuples(line.substr(colon + 1), source, line_no);
      for (auto& t : tuples) {
        for (const auto& e : t)
          if (!universe->index_of(e))
            detail::fail_at(source, line_no, "unknown element '" + e + "' in tuple");
      }
      auto& block = blocks.back();
      auto& dest = head == "+" ? block.pos : head == "-" ? block.neg : block.unk;
      dest.insert(dest.end(), tuples.begin(), tuples.end());
      continue;
    }
    if (head == "constant") {
      if (tok.size() != 4 || tok[2] != "=")
        detail::fail_at(source, line_no, "expected: constant NAME = ELEMENT|?");
      for (const auto& [name, value, at] : constants)
        if (name == tok[1])
          detail::fail_at(source, line_no, "symbol '" + tok[1] + "' declared twice");
      if (tok[3] == "?")
        constants.emplace_back(tok[1], std::nullopt, line_no);
      else
        constants.emplace_back(tok[1], tok[3], line_no);
      continue;
    }
    detail::fail_at(source, line_no, "unrecognized line '" + head + " ...'");
  }

  if (!universe) throw validation_error(source + ": empty structure file");
  PartialStructure s(*universe);

  for (const auto& block : blocks) {
    std::size_t arity;
    if (block.declared_arity)
      arity = *block.declared_arity;
    else if (!block.pos.empty())
      arity = block.pos.front().size();
    else if (!block.neg.empty())
      arity = block.neg.front().size();
    else if (!block.unk.empty())
      arity = block.unk.front().size();
    else
      detail::fail_at(source, block.line_no,
                      "cannot infer arity of '" + block.name + "' (no tuples)");
    try {
      std::size_t relation_arity = block.keyword == "function" ? arity + 1 : arity;
      PartialRelation r = relation_from_named_triple(*universe, relation_arity, block.pos,
                                               block.neg, block.unk);
      if (block.keyword == "function")
        s.set_function(block.name, PartialFunctionTable(arity, std::move(r)));
      else
        s.set_relation(block.name, std::move(r));
    } catch (const validation_error& e) {
      detail::fail_at(source, block.line_no,
                      block.keyword + " '" + block.name + "': " + e.what());
    }
  }
  for (const auto& [name, value, at] : constants) {
    try {
      s.set_constant(name, value ? std::optional(universe->require_index(*value))
                                 : std::nullopt);
    } catch (const validation_error& e) {
      detail::fail_at(source, at, e.what());
    }
  }
  return s;
}

inline PartialStructure read_structure_text(const std::string& text,
                                            const std::string& source = "<input>") {
  std::istringstream in(text);
  return read_structure(in, source);
}

inline PartialStructure read_structure_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path.string() + "'");
  return read_structure(in, path.string());
}

inline void write_structure(std::ostream& out, const PartialStructure& s) {
  out << "universe";
  for (const auto& e : s.universe().elements()) out << ' ' << e;
  out << '\n';
  auto write_triple = [&](const PartialRelation& r) {
    for (Verdict v : {Verdict::pos, Verdict::neg, Verdict::unk}) {
      auto tuples = r.tuples_with(v);
      if (tuples.empty()) continue;
      out << verdict_char(v) << " :";
      for (const auto& t : tuples) out << ' ' << s.universe().tuple_to_string(t);
      out << '\n';
    }
  };
  for (const auto& [name, r] : s.relations()) {
    out << "relation " << name << ' ' << r.arity() << '\n';
    write_triple(r);
  }
  for (const auto& [name, c] : s.constants())
    out << "constant " << name << " = " << (c ? s.universe().name(*c) : "?") << '\n';
  for (const auto& [name, f] : s.functions()) {
    out << "function " << name << ' ' << f.arity << '\n';
    write_triple(f.graph);
  }
}

inline std::string structure_to_string(const PartialStructure& s) {
  std::ostringstream out;
  write_structure(out, s);
  return out.str();
}

struct FamilyFile {
  IndexedFamily family;
  std::map<std::string, FilterSet> filters;       // named `filter` blocks
  std::map<std::string, FilterSet> ultrafilters;  // named `ultrafilter` blocks
};

inline FamilyFile read_family_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path.string() + "'");
  const std::string source = path.string();
  const std::filesystem::path base = path.parent_path();

  std::vector<std::string> index;
  std::map<std::string, PartialStructure> factors;
  struct RawFilter {
    std::string name;
    std::string rest;
    int line_no;
    bool ultra;
  };
  std::vector<RawFilter> raw_filters;

  int line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_comment(raw);
    std::vector<std::string> tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "index") {
      if (tok.size() != 3)
        detail::fail_at(source, line_no, "expected: index NAME PATH");
      if (std::find(index.begin(), index.end(), tok[1]) != index.end())
        detail::fail_at(source, line_no, "duplicate index '" + tok[1] + "'");
      std::filesystem::path factor_path = base / tok[2];
      try {
        factors.emplace(tok[1], read_structure_file(factor_path));
      } catch (const validation_error& e) {
        detail::fail_at(source, line_no, e.what());
      }
      index.push_back(tok[1]);
      continue;
    }
    if (tok[0] == "filter") {
      if (tok.size() < 3 || tok[2] != "=")
        detail::fail_at(source, line_no, "expected: filter NAME = {..} {..}");
      auto eq = line.find('=');
      raw_filters.push_back({tok[1], line.substr(eq + 1), line_no, false});
      continue;
    }
    if (tok[0] == "ultrafilter") {
      // named (`ultrafilter U principal x`) or anonymous (`ultrafilter principal x`)
      if (tok.size() == 4 && tok[2] == "principal")
        raw_filters.push_back({tok[1], tok[3], line_no, true});
      else if (tok.size() == 3 && tok[1] == "principal")
        raw_filters.push_back({"principal-" + tok[2], tok[2], line_no, true});
      else
        detail::fail_at(source, line_no, "expected: ultrafilter [NAME] principal INDEX");
      continue;
    }
    detail::fail_at(source, line_no, "unrecognized line '" + tok[0] + " ...'");
  }

  if (index.empty()) throw validation_error(source + ": family has no index lines");
  IndexedFamily family = [&] {
    try {
      return IndexedFamily(index, std::move(factors));
    } catch (const validation_error& e) {
      throw validation_error(source + ": " + e.what());
    }
  }();

  auto position_of = [&](const std::string& name, int at) {
    for (std::size_t p = 0; p < index.size(); ++p)
      if (index[p] == name) return p;
    detail::fail_at(source, at, "unknown index '" + name + "'");
  };

  FamilyFile out{std::move(family), {}, {}};
  for (const auto& rf : raw_filters) {
    if (rf.ultra) {
      out.ultrafilters.emplace(
          rf.name, principal_ultrafilter(index, position_of(rf.rest, rf.line_no)));
      continue;
    }
    // parse "{x,y} {y}"
    std::set<std::uint64_t> members;
    std::size_t i = 0;
    const std::string& text = rf.rest;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) { ++i; continue; }
      if (text[i] != '{') detail::fail_at(source, rf.line_no, "expected '{'");
      std::uint64_t mask = 0;
      std::string name;
      for (++i;; ++i) {
        if (i >= text.size()) detail::fail_at(source, rf.line_no, "unterminated '{'");
        char c = text[i];
        if (c == ',' || c == '}') {
          if (!name.empty()) {
            mask |= std::uint64_t(1) << position_of(name, rf.line_no);
            name.clear();
          }
          if (c == '}') { ++i; break; }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
          name += c;
        }
      }
      members.insert(mask);
    }
    FilterSet f(index, std::move(members));
    if (!is_filter(f))
      detail::fail_at(source, rf.line_no,
                      "'" + rf.name + "' does not satisfy the filter axioms");
    out.filters.emplace(rf.name, std::move(f));
  }
  return out;
}

struct SentenceFile {
  Signature signature;
  std::vector<Formula> sentences;
};

inline SentenceFile read_sentences_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path.string() + "'");
  const std::string source = path.string();
  SentenceFile out;
  int line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_comment(raw);
    std::vector<std::string> tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "relation") {
      if (tok.size() != 3) detail::fail_at(source, line_no, "expected: relation NAME ARITY");
      try {
        out.signature.add_relation(tok[1], std::stoul(tok[2]));
      } catch (const validation_error& e) {
        detail::fail_at(source, line_no, e.what());
      } catch (...) {
        detail::fail_at(source, line_no, "bad arity '" + tok[2] + "'");
      }
      continue;
    }
    if (tok[0] == "sentence") {
      auto pos = line.find("sentence");
      std::string text = line.substr(pos + 8);
      try {
        Formula f = parse_formula(text, out.signature);
        out.sentences.push_back(std::move(f));
      } catch (const parse_error& e) {
        detail::fail_at(source, line_no, e.what());
      }
      continue;
    }
    detail::fail_at(source, line_no, "unrecognized line '" + tok[0] + " ...'");
  }
  return out;
}

// A directory of input files: *.pstruct structures, *.pfam family manifests
// (with their filters), *.psents sentence lists. Names are file stems.
struct Workspace {
  std::map<std::string, PartialStructure> structures;
  std::map<std::string, FamilyFile> families;
  std::map<std::string, SentenceFile> sentence_sets;
};

inline Workspace load_workspace(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw validation_error("'" + dir.string() + "' is not a directory");
  Workspace ws;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::string ext = p.extension().string();
    if (ext == ".pstruct")
      ws.structures.emplace(p.stem().string(), read_structure_file(p));
    else if (ext == ".pfam")
      ws.families.emplace(p.stem().string(), read_family_file(p));
    else if (ext == ".psents")
      ws.sentence_sets.emplace(p.stem().string(), read_sentences_file(p));
  }
  return ws;
}

}  // namespace pmt
