#pragma once

#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/signature.hpp"

namespace pmt {

enum class FormulaKind : unsigned char {
  pred,      // name(vars...)
  eq,        // vars[0] = vars[1]
  neg,       // ~children[0]
  conj,      // (children[0] & children[1])
  disj,      // (children[0] | children[1])
  implies,   // (children[0] -> children[1])
  forall,    // forall name (children[0])
  exists,    // exists name (children[0])
};

// First-order formula over a relational signature with equality.
// Atomic formulas take variables only. Immutable value type; structural
// equality is the default ==.
struct Formula {
  FormulaKind kind = FormulaKind::eq;
  std::string name;                 // pred: relation symbol; quantifiers: bound variable
  std::vector<std::string> vars;    // pred: argument variables; eq: the two sides
  std::vector<Formula> children;

  bool operator==(const Formula&) const = default;
};

// Builders.
namespace fml {

inline Formula pred(std::string symbol, std::vector<std::string> vars) {
  return Formula{FormulaKind::pred, std::move(symbol), std::move(vars), {}};
}
inline Formula eq(std::string lhs, std::string rhs) {
  return Formula{FormulaKind::eq, {}, {std::move(lhs), std::move(rhs)}, {}};
}
inline Formula neg(Formula f) {
  return Formula{FormulaKind::neg, {}, {}, {std::move(f)}};
}
inline Formula conj(Formula a, Formula b) {
  return Formula{FormulaKind::conj, {}, {}, {std::move(a), std::move(b)}};
}
inline Formula disj(Formula a, Formula b) {
  return Formula{FormulaKind::disj, {}, {}, {std::move(a), std::move(b)}};
}
inline Formula implies(Formula a, Formula b) {
  return Formula{FormulaKind::implies, {}, {}, {std::move(a), std::move(b)}};
}
inline Formula forall(std::string var, Formula body) {
  return Formula{FormulaKind::forall, std::move(var), {}, {std::move(body)}};
}
inline Formula exists(std::string var, Formula body) {
  return Formula{FormulaKind::exists, std::move(var), {}, {std::move(body)}};
}

}  // namespace fml

namespace detail {

inline void collect_free(const Formula& f, std::vector<std::string>& bound,
                         std::set<std::string>& out) {
  auto is_bound = [&](const std::string& v) {
    for (const auto& b : bound)
      if (b == v) return true;
    return false;
  };
  switch (f.kind) {
    case FormulaKind::pred:
    case FormulaKind::eq:
      for (const auto& v : f.vars)
        if (!is_bound(v)) out.insert(v);
      break;
    case FormulaKind::forall:
    case FormulaKind::exists:
      bound.push_back(f.name);
      collect_free(f.children[0], bound, out);
      bound.pop_back();
      break;
    default:
      for (const auto& c : f.children) collect_free(c, bound, out);
      break;
  }
}

}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::collect_free(f, bound, out);
  return out;
}

// A sentence is a formula with no free variables.
inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

// Canonical text form; parse_formula(render(f)) == f.
inline std::string render(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::pred: {
      std::string out = f.name + "(";
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i) out += ',';
        out += f.vars[i];
      }
      return out + ")";
    }
    case FormulaKind::eq:
      return f.vars[0] + " = " + f.vars[1];
    case FormulaKind::neg:
      return "~" + render(f.children[0]);
    case FormulaKind::conj:
      return "(" + render(f.children[0]) + " & " + render(f.children[1]) + ")";
    case FormulaKind::disj:
      return "(" + render(f.children[0]) + " | " + render(f.children[1]) + ")";
    case FormulaKind::implies:
      return "(" + render(f.children[0]) + " -> " + render(f.children[1]) + ")";
    case FormulaKind::forall:
      return "forall " + f.name + " (" + render(f.children[0]) + ")";
    case FormulaKind::exists:
      return "exists " + f.name + " (" + render(f.children[0]) + ")";
  }
  throw validation_error("malformed formula node");
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << render(f);
}

// Checks that every predicate symbol exists in the signature with the right
// arity. Throws validation_error otherwise.
inline void validate_formula(const Formula& f, const Signature& sig) {
  switch (f.kind) {
    case FormulaKind::pred: {
      std::size_t arity = sig.relation_arity(f.name);
      if (arity != f.vars.size())
        throw validation_error("relation '" + f.name + "' has arity " +
                               std::to_string(arity) + " but is applied to " +
                               std::to_string(f.vars.size()) + " variables");
      break;
    }
    default:
      for (const auto& c : f.children) validate_formula(c, sig);
      break;
  }
}

}  // namespace pmt
