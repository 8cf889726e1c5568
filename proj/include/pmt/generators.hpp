#pragma once

#include <cstdint>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmt/filter.hpp"
#include "pmt/formula.hpp"
#include "pmt/product.hpp"
#include "pmt/signature.hpp"
#include "pmt/structure.hpp"

namespace pmt {

// Deterministic fuzzers for the property suites. All draws go through
// pick()/chance() so a fixed seed reproduces the exact case sequence on any
// platform.

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t bound) {  // uniform-ish in [0, bound)
  return static_cast<std::size_t>(rng() % bound);
}

inline bool chance(Rng& rng, double p) {
  return (rng() >> 11) * 0x1.0p-53 < p;
}

struct Bounds {
  std::size_t max_universe = 3;
  std::size_t max_relations = 2;
  std::size_t max_arity = 2;
  std::size_t max_unknowns = 8;
  std::size_t max_depth = 4;
  std::size_t max_vars = 2;
  std::size_t max_index = 3;
  std::size_t max_factor_universe = 2;
  std::size_t max_factor_unknowns = 2;
};

inline Signature signature(Rng& rng, const Bounds& b) {
  static const char* names[] = {"R", "S", "T", "Q"};
  Signature sig;
  std::size_t count = 1 + pick(rng, b.max_relations);
  for (std::size_t i = 0; i < count; ++i)
    sig.add_relation(names[i], 1 + pick(rng, b.max_arity));
  return sig;
}

// Caps the number of unknown tuples by resolving random extras.
inline void clamp_unknowns(Rng& rng, PartialStructure& s, std::size_t max_unknowns) {
  std::vector<std::pair<std::string, std::size_t>> unks;
  for (const auto& [name, r] : s.relations())
    for (std::size_t code = 0; code < r.tuple_count(); ++code)
      if (r.at_code(code) == Verdict::unk) unks.emplace_back(name, code);
  while (unks.size() > max_unknowns) {
    std::size_t j = pick(rng, unks.size());
    s.relation(unks[j].first)
        .set_code(unks[j].second, chance(rng, 0.5) ? Verdict::pos : Verdict::neg);
    unks.erase(unks.begin() + static_cast<std::ptrdiff_t>(j));
  }
}

inline PartialStructure structure(Rng& rng, const Signature& sig, std::size_t universe_size,
                                  std::size_t max_unknowns) {
  PartialStructure s(Universe::numbered(universe_size));
  for (const auto& [name, arity] : sig.relations()) {
    PartialRelation r(arity, universe_size);
    for (std::size_t code = 0; code < r.tuple_count(); ++code)
      r.set_code(code, static_cast<Verdict>(pick(rng, 3)));
    s.set_relation(name, r);
  }
  clamp_unknowns(rng, s, max_unknowns);
  return s;
}

inline PartialStructure structure(Rng& rng, const Signature& sig, const Bounds& b) {
  return structure(rng, sig, 1 + pick(rng, b.max_universe), b.max_unknowns);
}

inline PartialStructure total_structure(Rng& rng, const Signature& sig,
                                        std::size_t universe_size) {
  PartialStructure s = structure(rng, sig, universe_size, 0);
  clamp_unknowns(rng, s, 0);
  return s;
}

// A random expansion of `s`: every unknown slot is independently kept or
// resolved.
inline PartialStructure expansion_of(Rng& rng, const PartialStructure& s) {
  PartialStructure out = s;
  for (const auto& [name, r] : s.relations())
    for (std::size_t code = 0; code < r.tuple_count(); ++code)
      if (r.at_code(code) == Verdict::unk && !chance(rng, 0.34))
        out.relation(name).set_code(code, chance(rng, 0.5) ? Verdict::pos : Verdict::neg);
  return out;
}

namespace detail {

inline Formula sentence_rec(Rng& rng, const Signature& sig, std::size_t depth,
                            std::vector<std::string>& bound, std::size_t max_vars) {
  static const std::vector<std::string> pool = {"x", "y", "z"};
  const bool can_atom = !bound.empty();
  if (depth == 0 && !can_atom) {
    // no variable in scope: bind one around an atom
    std::string v = pool[0];
    bound.push_back(v);
    Formula body = sentence_rec(rng, sig, 0, bound, max_vars);
    bound.pop_back();
    return chance(rng, 0.5) ? fml::forall(v, std::move(body))
                            : fml::exists(v, std::move(body));
  }
  if (depth == 0 || (can_atom && chance(rng, 0.3))) {
    if (chance(rng, 0.15)) {
      const std::string& a = bound[pick(rng, bound.size())];
      const std::string& b = bound[pick(rng, bound.size())];
      return fml::eq(a, b);
    }
    std::size_t which = pick(rng, sig.relations().size());
    auto it = sig.relations().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(which));
    std::vector<std::string> args;
    for (std::size_t i = 0; i < it->second; ++i) args.push_back(bound[pick(rng, bound.size())]);
    return fml::pred(it->first, std::move(args));
  }
  enum : std::size_t { k_neg, k_conj, k_disj, k_implies, k_quant };
  std::size_t choice = bound.empty() ? std::size_t(k_quant) : pick(rng, 5);
  switch (choice) {
    case k_neg:
      return fml::neg(sentence_rec(rng, sig, depth - 1, bound, max_vars));
    case k_conj:
      return fml::conj(sentence_rec(rng, sig, depth - 1, bound, max_vars),
                       sentence_rec(rng, sig, depth - 1, bound, max_vars));
    case k_disj:
      return fml::disj(sentence_rec(rng, sig, depth - 1, bound, max_vars),
                       sentence_rec(rng, sig, depth - 1, bound, max_vars));
    case k_implies:
      return fml::implies(sentence_rec(rng, sig, depth - 1, bound, max_vars),
                          sentence_rec(rng, sig, depth - 1, bound, max_vars));
    default: {
      std::string v = pool[pick(rng, max_vars)];
      bound.push_back(v);
      Formula body = sentence_rec(rng, sig, depth - 1, bound, max_vars);
      bound.pop_back();
      return chance(rng, 0.5) ? fml::forall(v, std::move(body))
                              : fml::exists(v, std::move(body));
    }
  }
}

}  // namespace detail

// A closed sentence of quantifier/connective depth at most `max_depth`, using
// at most `max_vars` distinct variable names.
inline Formula sentence(Rng& rng, const Signature& sig, std::size_t max_depth,
                        std::size_t max_vars) {
  std::vector<std::string> bound;
  return detail::sentence_rec(rng, sig, 1 + pick(rng, max_depth), bound, max_vars);
}

// An open formula generator for parser round-trip fuzzing: free variables are
// allowed (drawn from the pool even when unbound).
inline Formula formula_open(Rng& rng, const Signature& sig, std::size_t depth) {
  static const std::vector<std::string> pool = {"x", "y", "zz1"};
  if (depth == 0 || chance(rng, 0.3)) {
    if (chance(rng, 0.25)) return fml::eq(pool[pick(rng, 3)], pool[pick(rng, 3)]);
    std::size_t which = pick(rng, sig.relations().size());
    auto it = sig.relations().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(which));
    std::vector<std::string> args;
    for (std::size_t i = 0; i < it->second; ++i) args.push_back(pool[pick(rng, 3)]);
    return fml::pred(it->first, std::move(args));
  }
  switch (pick(rng, 6)) {
    case 0: return fml::neg(formula_open(rng, sig, depth - 1));
    case 1: return fml::conj(formula_open(rng, sig, depth - 1), formula_open(rng, sig, depth - 1));
    case 2: return fml::disj(formula_open(rng, sig, depth - 1), formula_open(rng, sig, depth - 1));
    case 3: return fml::implies(formula_open(rng, sig, depth - 1), formula_open(rng, sig, depth - 1));
    case 4: return fml::forall(pool[pick(rng, 3)], formula_open(rng, sig, depth - 1));
    default: return fml::exists(pool[pick(rng, 3)], formula_open(rng, sig, depth - 1));
  }
}

inline std::vector<std::string> index_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("i" + std::to_string(i));
  return out;
}

inline IndexedFamily family(Rng& rng, const Signature& sig, const Bounds& b) {
  std::size_t n = 1 + pick(rng, b.max_index);
  std::vector<std::string> index = index_names(n);
  std::map<std::string, PartialStructure> factors;
  for (const auto& name : index)
    factors.emplace(name, structure(rng, sig, 1 + pick(rng, b.max_factor_universe),
                                    b.max_factor_unknowns));
  return IndexedFamily(std::move(index), std::move(factors));
}

inline IndexedFamily total_family(Rng& rng, const Signature& sig, const Bounds& b) {
  std::size_t n = 1 + pick(rng, b.max_index);
  std::vector<std::string> index = index_names(n);
  std::map<std::string, PartialStructure> factors;
  for (const auto& name : index)
    factors.emplace(name, total_structure(rng, sig, 1 + pick(rng, b.max_factor_universe)));
  return IndexedFamily(std::move(index), std::move(factors));
}

// Every filter over a finite ground set is the up-set of a non-empty base.
inline FilterSet filter(Rng& rng, std::vector<std::string> ground) {
  std::uint64_t full = (std::uint64_t(1) << ground.size()) - 1;
  std::uint64_t base = 1 + pick(rng, full);  // any non-empty subset
  std::set<std::uint64_t> members;
  for (std::uint64_t x = 0; x <= full; ++x)
    if ((x & base) == base) members.insert(x);
  return FilterSet(std::move(ground), std::move(members));
}

inline FilterSet ultrafilter(Rng& rng, std::vector<std::string> ground) {
  std::size_t at = pick(rng, ground.size());
  return principal_ultrafilter(std::move(ground), at);
}

}  // namespace gen
}  // namespace pmt
