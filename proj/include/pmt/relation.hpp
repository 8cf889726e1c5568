#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/universe.hpp"
#include "pmt/verdict.hpp"

namespace pmt {

// An n-ary partial relation over a universe of `universe_size` elements,
// stored as a total verdict map on all n-tuples. The classic triple
// (pos set, neg set, unk set) is the derived view: disjointness and coverage
// hold by construction because every tuple has exactly one verdict.
class PartialRelation {
 public:
  PartialRelation(std::size_t arity, std::size_t universe_size, Verdict fill = Verdict::unk)
      : arity_(arity),
        universe_size_(universe_size),
        verdicts_(tuple_space_size(universe_size, arity), fill) {
    if (arity == 0) throw validation_error("relation arity must be >= 1");
    if (universe_size == 0) throw validation_error("relation needs a non-empty universe");
  }

  std::size_t arity() const { return arity_; }
  std::size_t universe_size() const { return universe_size_; }
  std::size_t tuple_count() const { return verdicts_.size(); }

  Verdict at_code(std::size_t code) const { return verdicts_.at(code); }
  void set_code(std::size_t code, Verdict v) { verdicts_.at(code) = v; }

  Verdict at(std::span<const std::size_t> tuple) const {
    return verdicts_.at(pack(tuple));
  }
  Verdict at(std::initializer_list<std::size_t> tuple) const {
    return at(std::span<const std::size_t>(tuple.begin(), tuple.size()));
  }
  void set(std::span<const std::size_t> tuple, Verdict v) {
    verdicts_.at(pack(tuple)) = v;
  }
  void set(std::initializer_list<std::size_t> tuple, Verdict v) {
    set(std::span<const std::size_t>(tuple.begin(), tuple.size()), v);
  }

  bool total() const {
    for (Verdict v : verdicts_)
      if (v == Verdict::unk) return false;
    return true;
  }

  std::size_t count(Verdict wanted) const {
    std::size_t n = 0;
    for (Verdict v : verdicts_)
      if (v == wanted) ++n;
    return n;
  }

  std::size_t unknown_count() const { return count(Verdict::unk); }

  bool empty_positive_part() const {
    // a relation with empty positive and unknown parts is the empty relation
    return count(Verdict::pos) == 0 && count(Verdict::unk) == 0;
  }

  // Tuples carrying `wanted`, in lexicographic order.
  std::vector<Tuple> tuples_with(Verdict wanted) const {
    std::vector<Tuple> out;
    for (std::size_t code = 0; code < verdicts_.size(); ++code)
      if (verdicts_[code] == wanted)
        out.push_back(tuple_unpack(code, arity_, universe_size_));
    return out;
  }

  PartialRelation completed(Verdict resolve_unknown_to) const {
    PartialRelation r = *this;
    for (Verdict& v : r.verdicts_)
      if (v == Verdict::unk) v = resolve_unknown_to;
    return r;
  }

  bool operator==(const PartialRelation&) const = default;

 private:
  std::size_t pack(std::span<const std::size_t> tuple) const {
    if (tuple.size() != arity_)
      throw validation_error("tuple length " + std::to_string(tuple.size()) +
                             " does not match relation arity " + std::to_string(arity_));
    for (std::size_t c : tuple)
      if (c >= universe_size_) throw validation_error("tuple element index out of range");
    return tuple_pack(tuple, universe_size_);
  }

  std::size_t arity_;
  std::size_t universe_size_;
  std::vector<Verdict> verdicts_;
};

// Builds a relation from the three tuple sets, rejecting overlaps and gaps.
inline PartialRelation relation_from_triple(const Universe& universe, std::size_t arity,
                                            std::span<const Tuple> pos,
                                            std::span<const Tuple> neg,
                                            std::span<const Tuple> unk) {
  PartialRelation r(arity, universe.size());
  std::vector<bool> seen(r.tuple_count(), false);
  auto place = [&](std::span<const Tuple> tuples, Verdict v) {
    for (const Tuple& t : tuples) {
      if (t.size() != arity)
        throw validation_error("tuple " + universe.tuple_to_string(t) +
                               " does not match arity " + std::to_string(arity));
      std::size_t code = tuple_pack(t, universe.size());
      if (seen.at(code))
        throw validation_error("tuple " + universe.tuple_to_string(t) +
                               " appears in more than one part of the triple");
      seen[code] = true;
      r.set_code(code, v);
    }
  };
  place(pos, Verdict::pos);
  place(neg, Verdict::neg);
  place(unk, Verdict::unk);
  for (std::size_t code = 0; code < seen.size(); ++code)
    if (!seen[code])
      throw validation_error(
          "tuple " + universe.tuple_to_string(tuple_unpack(code, arity, universe.size())) +
          " is missing from the triple (the three parts must cover every tuple)");
  return r;
}

// Name-based convenience variant.
inline PartialRelation relation_from_named_triple(
    const Universe& universe, std::size_t arity,
    const std::vector<std::vector<std::string>>& pos,
    const std::vector<std::vector<std::string>>& neg,
    const std::vector<std::vector<std::string>>& unk) {
  auto to_indices = [&](const std::vector<std::vector<std::string>>& named) {
    std::vector<Tuple> out;
    out.reserve(named.size());
    for (const auto& t : named) {
      Tuple indices;
      indices.reserve(t.size());
      for (const auto& name : t) indices.push_back(universe.require_index(name));
      out.push_back(std::move(indices));
    }
    return out;
  };
  std::vector<Tuple> p = to_indices(pos), n = to_indices(neg), u = to_indices(unk);
  return relation_from_triple(universe, arity, p, n, u);
}

// An n-ary partial function stored as its (n+1)-ary graph relation: the last
// coordinate is the value column.
struct PartialFunctionTable {
  std::size_t arity = 0;   // n; graph has arity n+1
  PartialRelation graph;

  PartialFunctionTable(std::size_t arity, PartialRelation graph_relation)
      : arity(arity), graph(std::move(graph_relation)) {
    if (graph.arity() != arity + 1)
      throw validation_error("function of arity " + std::to_string(arity) +
                             " needs a graph of arity " + std::to_string(arity + 1));
  }

  bool total() const { return graph.total(); }
  bool operator==(const PartialFunctionTable&) const = default;
};

struct FunctionViolation {
  int condition = 0;  // 1, 2 or 3
  Tuple witness;      // the (args..., value) tuple where the condition fails
  std::string message;
};

// Checks the three functionality conditions on the graph triple:
//   1. a positive entry forces every other value for the same arguments negative;
//   2. a negative entry requires some positive-or-unknown value to remain;
//   3. an unknown entry forbids any positive value for the same arguments.
// Tuples are scanned in lexicographic order, conditions in order 1..3 at each
// tuple; the first failure is reported.
inline std::optional<FunctionViolation> validate_partial_function(
    const PartialFunctionTable& f, const Universe& universe) {
  const PartialRelation& g = f.graph;
  const std::size_t n = universe.size();
  for (std::size_t code = 0; code < g.tuple_count(); ++code) {
    Tuple t = tuple_unpack(code, g.arity(), n);
    const std::size_t value = t.back();
    const std::size_t args_base = code - value;  // code with value column zeroed
    Verdict v = g.at_code(code);
    if (v == Verdict::pos) {
      for (std::size_t other = 0; other < n; ++other) {
        if (other == value) continue;
        if (g.at_code(args_base + other) != Verdict::neg)
          return FunctionViolation{
              1, t,
              "condition 1 fails at " + universe.tuple_to_string(t) + ": value '" +
                  universe.name(other) + "' for the same arguments is not negative"};
      }
    } else if (v == Verdict::neg) {
      bool has_candidate = false;
      for (std::size_t other = 0; other < n; ++other)
        if (g.at_code(args_base + other) != Verdict::neg) {
          has_candidate = true;
          break;
        }
      if (!has_candidate)
        return FunctionViolation{
            2, t,
            "condition 2 fails at " + universe.tuple_to_string(t) +
                ": no positive or unknown value remains for these arguments"};
    } else {
      for (std::size_t other = 0; other < n; ++other)
        if (g.at_code(args_base + other) == Verdict::pos)
          return FunctionViolation{
              3, t,
              "condition 3 fails at " + universe.tuple_to_string(t) + ": value '" +
                  universe.name(other) + "' for the same arguments is positive"};
    }
  }
  return std::nullopt;
}

}  // namespace pmt
