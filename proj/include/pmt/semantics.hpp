#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/formula.hpp"
#include "pmt/signature.hpp"
#include "pmt/structure.hpp"
#include "pmt/universe.hpp"
#include "pmt/verdict.hpp"

namespace pmt {

// Variable assignment: variable name -> universe element name.
using Assignment = std::map<std::string, std::string>;

namespace detail {

// Evaluation environment: a scope stack of (variable, element index) pairs;
// lookup from the back so quantifiers shadow outer bindings.
struct Env {
  std::vector<std::pair<std::string, std::size_t>> bindings;

  std::size_t lookup(const std::string& var) const {
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
      if (it->first == var) return it->second;
    throw validation_error("unbound variable '" + var + "'");
  }
};

// Strong-Kleene evaluation; on a total structure this is classical
// satisfaction and never returns unk.
inline Verdict eval3(const PartialStructure& s, const Formula& f, Env& env) {
  switch (f.kind) {
    case FormulaKind::pred: {
      const PartialRelation& r = s.relation(f.name);
      if (r.arity() != f.vars.size())
        throw validation_error("relation '" + f.name + "' has arity " +
                               std::to_string(r.arity()) + " but is applied to " +
                               std::to_string(f.vars.size()) + " variables");
      Tuple t(f.vars.size());
      for (std::size_t i = 0; i < f.vars.size(); ++i) t[i] = env.lookup(f.vars[i]);
      return r.at(t);
    }
    case FormulaKind::eq:
      return verdict_of(env.lookup(f.vars[0]) == env.lookup(f.vars[1]));
    case FormulaKind::neg:
      return verdict_not(eval3(s, f.children[0], env));
    case FormulaKind::conj: {
      Verdict a = eval3(s, f.children[0], env);
      if (a == Verdict::neg) return Verdict::neg;
      return verdict_and(a, eval3(s, f.children[1], env));
    }
    case FormulaKind::disj: {
      Verdict a = eval3(s, f.children[0], env);
      if (a == Verdict::pos) return Verdict::pos;
      return verdict_or(a, eval3(s, f.children[1], env));
    }
    case FormulaKind::implies: {
      Verdict a = eval3(s, f.children[0], env);
      if (a == Verdict::neg) return Verdict::pos;
      return verdict_implies(a, eval3(s, f.children[1], env));
    }
    case FormulaKind::forall: {
      Verdict acc = Verdict::pos;
      env.bindings.emplace_back(f.name, 0);
      for (std::size_t e = 0; e < s.universe().size(); ++e) {
        env.bindings.back().second = e;
        acc = verdict_and(acc, eval3(s, f.children[0], env));
        if (acc == Verdict::neg) break;
      }
      env.bindings.pop_back();
      return acc;
    }
    case FormulaKind::exists: {
      Verdict acc = Verdict::neg;
      env.bindings.emplace_back(f.name, 0);
      for (std::size_t e = 0; e < s.universe().size(); ++e) {
        env.bindings.back().second = e;
        acc = verdict_or(acc, eval3(s, f.children[0], env));
        if (acc == Verdict::pos) break;
      }
      env.bindings.pop_back();
      return acc;
    }
  }
  throw validation_error("malformed formula node");
}

inline Env env_from_assignment(const PartialStructure& s, const Formula& f,
                               const Assignment& asg) {
  Env env;
  for (const auto& [var, element] : asg)
    env.bindings.emplace_back(var, s.universe().require_index(element));
  for (const auto& v : free_variables(f))
    if (!asg.count(v)) throw validation_error("unbound variable '" + v + "'");
  return env;
}

}  // namespace detail

// Classical (Tarskian) satisfaction on a total structure.
inline bool eval_total(const PartialStructure& s, const Formula& f,
                       const Assignment& asg = {}) {
  if (!s.total())
    throw validation_error("eval_total requires a total structure");
  detail::Env env = detail::env_from_assignment(s, f, asg);
  return detail::eval3(s, f, env) == Verdict::pos;
}

// Strong-Kleene three-valued evaluation on a partial structure. Sound for
// quasi-truth: pos means every normal completion satisfies f, neg means none
// does, unk decides nothing.
inline Verdict eval_kleene(const PartialStructure& s, const Formula& f,
                           const Assignment& asg = {}) {
  detail::Env env = detail::env_from_assignment(s, f, asg);
  return detail::eval3(s, f, env);
}

namespace detail {

inline void require_sentence(const Formula& f, const char* op) {
  auto fv = free_variables(f);
  if (!fv.empty())
    throw validation_error(std::string(op) + ": formula has free variables (e.g. '" +
                           *fv.begin() + "')");
}

// Depth-first search over the unknown slots: Kleene-evaluate, and when the
// verdict is still unknown resolve the next slot both ways. Returns a total
// structure expanding `s` that satisfies the sentence, if one exists.
inline std::optional<PartialStructure> quasi_search(PartialStructure s, const Formula& f,
                                                    std::span<const std::pair<std::string, std::size_t>> slots) {
  Env env;
  Verdict v = eval3(s, f, env);
  if (v == Verdict::neg) return std::nullopt;
  if (v == Verdict::pos) return plus_completion(s);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const auto& [name, code] = slots[j];
    if (s.relation(name).at_code(code) != Verdict::unk) continue;
    for (Verdict choice : {Verdict::pos, Verdict::neg}) {
      PartialStructure resolved = s;
      resolved.relation(name).set_code(code, choice);
      if (auto found = quasi_search(std::move(resolved), f, slots.subspan(j + 1)))
        return found;
    }
    return std::nullopt;
  }
  return std::nullopt;  // unreachable: no unknown slot left implies a decided verdict
}

}  // namespace detail

// A normal completion of `s` satisfying the sentence, if any (the witness for
// quasi-truth).
inline std::optional<PartialStructure> quasi_witness(const PartialStructure& s,
                                                     const Formula& sentence) {
  detail::require_relational(s, "quasi_true");
  detail::require_sentence(sentence, "quasi_true");
  std::vector<std::pair<std::string, std::size_t>> slots;
  for (const auto& [name, r] : s.relations())
    for (std::size_t code = 0; code < r.tuple_count(); ++code)
      if (r.at_code(code) == Verdict::unk) slots.emplace_back(name, code);
  return detail::quasi_search(s, sentence, slots);
}

// Quasi-truth: some normal completion of `s` classically satisfies the
// sentence.
inline bool quasi_true(const PartialStructure& s, const Formula& sentence) {
  return quasi_witness(s, sentence).has_value();
}

// Partial model of a set: quasi-truth sentence by sentence (each sentence may
// use a different normal completion).
inline bool quasi_models(const PartialStructure& s, std::span<const Formula> gamma) {
  for (const Formula& g : gamma)
    if (!quasi_true(s, g)) return false;
  return true;
}

// Enumerates every partial structure for a relational signature over the
// universe {e1..e_size}: one verdict per tuple per relation, counted in
// mixed radix (neg, unk, pos), the first slot most significant. The first
// structure is everywhere-negative, the last everywhere-positive.
class StructureEnumerator {
 public:
  StructureEnumerator(Signature sig, std::size_t size)
      : sig_(std::move(sig)), universe_(Universe::numbered(size)) {
    if (!sig_.relational())
      throw validation_error("structure enumeration needs a relational signature");
    std::uint64_t total = 1;
    for (const auto& [name, arity] : sig_.relations()) {
      std::size_t tuples = tuple_space_size(size, arity);
      for (std::size_t i = 0; i < tuples; ++i) {
        slots_.emplace_back(name, i);
        if (total > (std::uint64_t(1) << 40))
          throw validation_error("structure space too large to enumerate");
        total *= 3;
      }
    }
    count_ = total;
  }

  std::uint64_t count() const { return count_; }

  std::optional<PartialStructure> next() {
    if (at_ >= count_) return std::nullopt;
    PartialStructure s(universe_);
    for (const auto& [name, arity] : sig_.relations())
      s.set_relation(name, PartialRelation(arity, universe_.size()));
    std::uint64_t k = at_;
    for (std::size_t j = slots_.size(); j-- > 0;) {
      s.relation(slots_[j].first).set_code(slots_[j].second,
                                           static_cast<Verdict>(k % 3));
      k /= 3;
    }
    ++at_;
    return s;
  }

  void reset() { at_ = 0; }

 private:
  Signature sig_;
  Universe universe_;
  std::vector<std::pair<std::string, std::size_t>> slots_;
  std::uint64_t count_ = 1;
  std::uint64_t at_ = 0;
};

// A bounded-search refutation: a structure quasi-modelling the premises but
// not the conclusion. Replaying `satisfied`/`failed` through quasi_true
// reproduces the stated verdicts.
struct CounterexampleReport {
  PartialStructure structure;
  std::vector<Formula> satisfied;  // premises, each quasi-true in `structure`
  Formula failed;                  // conclusion, quasi-false in `structure`
};

// Scans all partial structures over `sig` with universe sizes 1..max_size in
// enumeration order and returns the first partial model of `gamma` that is
// not a partial model of `alpha`. nullopt means no counterexample up to the
// bound, which is not a proof of consequence.
inline std::optional<CounterexampleReport> quasi_consequence_bounded(
    std::span<const Formula> gamma, const Formula& alpha, std::size_t max_size,
    const Signature& sig) {
  detail::require_sentence(alpha, "quasi_consequence_bounded");
  for (const Formula& g : gamma) detail::require_sentence(g, "quasi_consequence_bounded");
  for (std::size_t size = 1; size <= max_size; ++size) {
    StructureEnumerator structures(sig, size);
    while (auto s = structures.next()) {
      if (!quasi_models(*s, gamma)) continue;
      if (quasi_true(*s, alpha)) continue;
      return CounterexampleReport{std::move(*s),
                                  std::vector<Formula>(gamma.begin(), gamma.end()), alpha};
    }
  }
  return std::nullopt;
}

inline std::optional<CounterexampleReport> quasi_valid_bounded(const Formula& alpha,
                                                               std::size_t max_size,
                                                               const Signature& sig) {
  return quasi_consequence_bounded({}, alpha, max_size, sig);
}

// Quasi-equivalence, refuted in either direction.
inline std::optional<CounterexampleReport> quasi_equivalent_bounded(const Formula& a,
                                                                    const Formula& b,
                                                                    std::size_t max_size,
                                                                    const Signature& sig) {
  std::vector<Formula> lhs{a};
  if (auto cex = quasi_consequence_bounded(lhs, b, max_size, sig)) return cex;
  std::vector<Formula> rhs{b};
  return quasi_consequence_bounded(rhs, a, max_size, sig);
}

}  // namespace pmt
