#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/formula.hpp"
#include "pmt/signature.hpp"

namespace pmt {

// Recursive-descent parser for the ASCII formula grammar:
//
//   formula := "forall" var group | "exists" var group
//            | "~" formula | group | atom
//   group   := "(" formula [bin formula] ")"
//   bin     := "&" | "|" | "->"
//   atom    := name "(" var {"," var} ")" | var "=" var
//
// Binary connectives always carry their own parentheses; a group without a
// connective is plain grouping. Whitespace between tokens is ignored.
// Variables are alphanumeric identifiers starting with a lowercase letter.

namespace detail {

enum class TokKind {
  lparen, rparen, comma, amp, pipe, arrow, tilde, equals,
  kw_forall, kw_exists, ident, end
};

struct Token {
  TokKind kind;
  std::string text;
  std::size_t pos;  // 1-based offset of first character
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i + 1;
    switch (c) {
      case '(': out.push_back({TokKind::lparen, "(", pos}); ++i; continue;
      case ')': out.push_back({TokKind::rparen, ")", pos}); ++i; continue;
      case ',': out.push_back({TokKind::comma, ",", pos}); ++i; continue;
      case '&': out.push_back({TokKind::amp, "&", pos}); ++i; continue;
      case '|': out.push_back({TokKind::pipe, "|", pos}); ++i; continue;
      case '~': out.push_back({TokKind::tilde, "~", pos}); ++i; continue;
      case '=': out.push_back({TokKind::equals, "=", pos}); ++i; continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({TokKind::arrow, "->", pos});
          i += 2;
          continue;
        }
        throw parse_error("stray '-' (expected '->')", pos);
      default: break;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      TokKind k = TokKind::ident;
      if (word == "forall") k = TokKind::kw_forall;
      else if (word == "exists") k = TokKind::kw_exists;
      out.push_back({k, std::move(word), pos});
      i = j;
      continue;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({TokKind::end, "", text.size() + 1});
  return out;
}

inline bool is_variable_name(const std::string& s) {
  return !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig)
      : tokens_(tokenize(text)), sig_(sig) {}

  Formula parse() {
    Formula f = parse_formula();
    expect(TokKind::end, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  Token take() { return tokens_[at_++]; }

  Token expect(TokKind kind, const char* what) {
    if (peek().kind != kind)
      throw parse_error("expected " + std::string(what) + ", got '" + peek().text + "'",
                        peek().pos);
    return take();
  }

  std::string expect_variable() {
    Token t = expect(TokKind::ident, "a variable");
    if (!is_variable_name(t.text))
      throw parse_error("variable must start with a lowercase letter: '" + t.text + "'",
                        t.pos);
    return t.text;
  }

  Formula parse_formula() {
    switch (peek().kind) {
      case TokKind::kw_forall: {
        take();
        std::string v = expect_variable();
        return fml::forall(std::move(v), parse_group());
      }
      case TokKind::kw_exists: {
        take();
        std::string v = expect_variable();
        return fml::exists(std::move(v), parse_group());
      }
      case TokKind::tilde:
        take();
        return fml::neg(parse_formula());
      case TokKind::lparen:
        return parse_group();
      case TokKind::ident:
        return parse_atom();
      default:
        throw parse_error("expected a formula, got '" + peek().text + "'", peek().pos);
    }
  }

  // "(" formula [bin formula] ")"
  Formula parse_group() {
    expect(TokKind::lparen, "'('");
    Formula lhs = parse_formula();
    switch (peek().kind) {
      case TokKind::amp: take(); lhs = fml::conj(std::move(lhs), parse_formula()); break;
      case TokKind::pipe: take(); lhs = fml::disj(std::move(lhs), parse_formula()); break;
      case TokKind::arrow: take(); lhs = fml::implies(std::move(lhs), parse_formula()); break;
      default: break;
    }
    expect(TokKind::rparen, "')'");
    return lhs;
  }

  Formula parse_atom() {
    Token head = take();
    if (peek().kind == TokKind::lparen) {
      take();
      if (!sig_.has_relation(head.text))
        throw parse_error("unknown relation symbol '" + head.text + "'", head.pos);
      std::vector<std::string> args;
      args.push_back(expect_variable());
      while (peek().kind == TokKind::comma) {
        take();
        args.push_back(expect_variable());
      }
      expect(TokKind::rparen, "')'");
      std::size_t arity = sig_.relation_arity(head.text);
      if (arity != args.size())
        throw parse_error("relation '" + head.text + "' has arity " +
                              std::to_string(arity) + " but is applied to " +
                              std::to_string(args.size()) + " variables",
                          head.pos);
      return fml::pred(head.text, std::move(args));
    }
    if (peek().kind == TokKind::equals) {
      if (!is_variable_name(head.text))
        throw parse_error("variable must start with a lowercase letter: '" + head.text + "'",
                          head.pos);
      take();
      return fml::eq(head.text, expect_variable());
    }
    throw parse_error("expected '(' or '=' after '" + head.text + "'", peek().pos);
  }

  std::vector<Token> tokens_;
  const Signature& sig_;
  std::size_t at_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

}  // namespace pmt
