#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/relation.hpp"
#include "pmt/signature.hpp"
#include "pmt/universe.hpp"

namespace pmt {

// A finite partial structure: universe plus one partial relation per relation
// symbol. Function tables and constants may be attached as relationalization
// inputs; everything past this module works on the relational part.
class PartialStructure {
 public:
  explicit PartialStructure(Universe universe) : universe_(std::move(universe)) {}

  const Universe& universe() const { return universe_; }

  void set_relation(const std::string& name, PartialRelation r) {
    if (r.universe_size() != universe_.size())
      throw validation_error("relation '" + name + "' is over a universe of size " +
                             std::to_string(r.universe_size()) + ", expected " +
                             std::to_string(universe_.size()));
    relations_.insert_or_assign(name, std::move(r));
  }

  const PartialRelation& relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end())
      throw validation_error("structure does not interpret relation '" + name + "'");
    return it->second;
  }

  PartialRelation& relation(const std::string& name) {
    auto it = relations_.find(name);
    if (it == relations_.end())
      throw validation_error("structure does not interpret relation '" + name + "'");
    return it->second;
  }

  const std::map<std::string, PartialRelation>& relations() const { return relations_; }

  void set_function(const std::string& name, PartialFunctionTable f) {
    if (f.graph.universe_size() != universe_.size())
      throw validation_error("function '" + name + "' is over the wrong universe");
    functions_.insert_or_assign(name, std::move(f));
  }

  const std::map<std::string, PartialFunctionTable>& functions() const { return functions_; }

  // A constant interpretation is an element index, or nullopt when undefined.
  void set_constant(const std::string& name, std::optional<std::size_t> value) {
    if (value && *value >= universe_.size())
      throw validation_error("constant '" + name + "' maps to an element out of range");
    constants_.insert_or_assign(name, value);
  }

  const std::map<std::string, std::optional<std::size_t>>& constants() const {
    return constants_;
  }

  bool relational() const { return functions_.empty() && constants_.empty(); }

  bool total() const {
    for (const auto& [name, r] : relations_)
      if (!r.total()) return false;
    for (const auto& [name, f] : functions_)
      if (!f.total()) return false;
    return true;
  }

  // Total number of unknown tuples across all relations (the size of the
  // normal-completion space is 2 to this power).
  std::size_t unknown_count() const {
    std::size_t u = 0;
    for (const auto& [name, r] : relations_) u += r.unknown_count();
    return u;
  }

 private:
  Universe universe_;
  std::map<std::string, PartialRelation> relations_;
  std::map<std::string, PartialFunctionTable> functions_;
  std::map<std::string, std::optional<std::size_t>> constants_;
};

// The signature a structure interprets, read off its interpretation maps.
inline Signature signature_of(const PartialStructure& s) {
  Signature sig;
  for (const auto& [name, r] : s.relations()) sig.add_relation(name, r.arity());
  for (const auto& [name, f] : s.functions()) sig.add_function(name, f.arity);
  for (const auto& [name, c] : s.constants()) sig.add_function(name, 0);
  return sig;
}

// Same relation and function symbols with the same arities, and the same
// constant symbols. The constant/function-table split must agree as well, so
// interpretation lookups line up one to one.
inline bool same_signature(const PartialStructure& a, const PartialStructure& b) {
  if (a.relations().size() != b.relations().size()) return false;
  for (const auto& [name, r] : a.relations()) {
    auto it = b.relations().find(name);
    if (it == b.relations().end() || it->second.arity() != r.arity()) return false;
  }
  if (a.functions().size() != b.functions().size()) return false;
  for (const auto& [name, f] : a.functions()) {
    auto it = b.functions().find(name);
    if (it == b.functions().end() || it->second.arity != f.arity) return false;
  }
  if (a.constants().size() != b.constants().size()) return false;
  for (const auto& [name, c] : a.constants())
    if (!b.constants().count(name)) return false;
  return true;
}

namespace detail {

inline void require_same_signature(const PartialStructure& a, const PartialStructure& b,
                                   const char* op) {
  if (!same_signature(a, b))
    throw validation_error(std::string(op) + ": structures have different signatures");
}

inline void require_relational(const PartialStructure& s, const char* op) {
  if (!s.relational())
    throw validation_error(std::string(op) +
                           ": structure carries function or constant interpretations; "
                           "relationalize it first");
}

// Index translation from a's universe listing to b's; nullopt when the
// element sets differ.
inline std::optional<std::vector<std::size_t>> universe_remap(const Universe& a,
                                                              const Universe& b) {
  if (!a.same_element_set(b)) return std::nullopt;
  std::vector<std::size_t> map(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) map[i] = *b.index_of(a.name(i));
  return map;
}

}  // namespace detail

// Structure equality: equal universes (as sets), agreeing constants
// (definedness and value), equal relation and function interpretations.
inline bool structures_equal(const PartialStructure& a, const PartialStructure& b) {
  detail::require_same_signature(a, b, "structures_equal");
  auto remap = detail::universe_remap(a.universe(), b.universe());
  if (!remap) return false;
  auto relations_match = [&](const PartialRelation& ra, const PartialRelation& rb) {
    Tuple t(ra.arity()), tb(ra.arity());
    for (std::size_t code = 0; code < ra.tuple_count(); ++code) {
      t = tuple_unpack(code, ra.arity(), a.universe().size());
      for (std::size_t i = 0; i < t.size(); ++i) tb[i] = (*remap)[t[i]];
      if (ra.at_code(code) != rb.at(tb)) return false;
    }
    return true;
  };
  for (const auto& [name, ra] : a.relations())
    if (!relations_match(ra, b.relation(name))) return false;
  for (const auto& [name, fa] : a.functions())
    if (!relations_match(fa.graph, b.functions().at(name).graph)) return false;
  for (const auto& [name, ca] : a.constants()) {
    const auto& cb = b.constants().at(name);
    if (ca.has_value() != cb.has_value()) return false;
    if (ca && a.universe().name(*ca) != b.universe().name(*cb)) return false;
  }
  return true;
}

// Does `bigger` expand `base`? Same universe, and every relation's positive
// and negative parts grow (knowledge increase).
inline bool expands(const PartialStructure& base, const PartialStructure& bigger) {
  detail::require_same_signature(base, bigger, "expands");
  detail::require_relational(base, "expands");
  auto remap = detail::universe_remap(base.universe(), bigger.universe());
  if (!remap) return false;
  Tuple tb;
  for (const auto& [name, ra] : base.relations()) {
    const PartialRelation& rb = bigger.relation(name);
    tb.assign(ra.arity(), 0);
    for (std::size_t code = 0; code < ra.tuple_count(); ++code) {
      Verdict va = ra.at_code(code);
      if (va == Verdict::unk) continue;
      Tuple t = tuple_unpack(code, ra.arity(), base.universe().size());
      for (std::size_t i = 0; i < t.size(); ++i) tb[i] = (*remap)[t[i]];
      if (rb.at(tb) != va) return false;
    }
  }
  return true;
}

// Resolves every unknown tuple positively.
inline PartialStructure plus_completion(const PartialStructure& s) {
  detail::require_relational(s, "plus_completion");
  PartialStructure out(s.universe());
  for (const auto& [name, r] : s.relations())
    out.set_relation(name, r.completed(Verdict::pos));
  return out;
}

// Resolves every unknown tuple negatively.
inline PartialStructure minus_completion(const PartialStructure& s) {
  detail::require_relational(s, "minus_completion");
  PartialStructure out(s.universe());
  for (const auto& [name, r] : s.relations())
    out.set_relation(name, r.completed(Verdict::neg));
  return out;
}

// Is `candidate` a total expansion of `base`?
inline bool is_normal(const PartialStructure& base, const PartialStructure& candidate) {
  return candidate.total() && expands(base, candidate);
}

// Enumerates the normal (total expanding) structures of a base structure:
// each of the u unknown slots is resolved to positive or negative, subsets in
// binary-counter order (bit j of the counter set => slot j positive, so the
// minus completion comes first and the plus completion last).
class NormalEnumerator {
 public:
  explicit NormalEnumerator(PartialStructure base) : base_(std::move(base)) {
    detail::require_relational(base_, "enumerate_normals");
    for (const auto& [name, r] : base_.relations())
      for (std::size_t code = 0; code < r.tuple_count(); ++code)
        if (r.at_code(code) == Verdict::unk) slots_.emplace_back(name, code);
    if (slots_.size() > 62)
      throw validation_error("completion space too large: 2^" +
                             std::to_string(slots_.size()) + " normal structures");
  }

  std::uint64_t count() const { return std::uint64_t(1) << slots_.size(); }

  std::optional<PartialStructure> next() {
    if (at_ >= count()) return std::nullopt;
    PartialStructure out = base_;
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      Verdict v = (at_ >> j) & 1 ? Verdict::pos : Verdict::neg;
      out.relation(slots_[j].first).set_code(slots_[j].second, v);
    }
    ++at_;
    return out;
  }

  void reset() { at_ = 0; }

 private:
  PartialStructure base_;
  std::vector<std::pair<std::string, std::size_t>> slots_;
  std::uint64_t at_ = 0;
};

inline std::vector<PartialStructure> all_normals(const PartialStructure& s) {
  NormalEnumerator e(s);
  std::vector<PartialStructure> out;
  out.reserve(e.count());
  while (auto n = e.next()) out.push_back(std::move(*n));
  return out;
}

// Converts a structure with functions and constants into a purely relational
// one: an n-ary function symbol becomes the (n+1)-ary relation interpreting
// its graph, a defined constant c = a becomes a unary relation positive
// exactly at (a), and an undefined constant becomes the fully unknown unary
// relation. Function tables are validated first.
inline std::pair<PartialStructure, Signature> relationalize(const PartialStructure& s,
                                                            const Signature& sig) {
  Signature out_sig;
  for (const auto& [name, arity] : sig.relations()) out_sig.add_relation(name, arity);
  for (const auto& [name, arity] : sig.functions()) out_sig.add_relation(name, arity + 1);

  PartialStructure out(s.universe());
  for (const auto& [name, r] : s.relations()) out.set_relation(name, r);

  for (const auto& [name, arity] : sig.functions()) {
    auto fit = s.functions().find(name);
    if (fit != s.functions().end()) {
      const PartialFunctionTable& table = fit->second;
      if (table.arity != arity)
        throw validation_error("function '" + name + "' interpreted with arity " +
                               std::to_string(table.arity) + ", declared " +
                               std::to_string(arity));
      if (auto violation = validate_partial_function(table, s.universe()))
        throw validation_error("function '" + name + "': " + violation->message);
      out.set_relation(name, table.graph);
      continue;
    }
    auto cit = s.constants().find(name);
    if (cit != s.constants().end()) {
      if (arity != 0)
        throw validation_error("symbol '" + name + "' has arity " + std::to_string(arity) +
                               " but is interpreted as a constant");
      PartialRelation r(1, s.universe().size(),
                        cit->second ? Verdict::neg : Verdict::unk);
      if (cit->second) r.set_code(*cit->second, Verdict::pos);
      out.set_relation(name, r);
      continue;
    }
    throw validation_error("structure does not interpret function symbol '" + name + "'");
  }
  return {std::move(out), std::move(out_sig)};
}

}  // namespace pmt
