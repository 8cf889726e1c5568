#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pmt/errors.hpp"

namespace pmt {

// A set of subsets of a finite ground set, subsets encoded as bitmasks over
// the ground listing. Whether the set actually satisfies the filter axioms is
// checked by is_filter / is_ultrafilter.
class FilterSet {
 public:
  FilterSet(std::vector<std::string> ground, std::set<std::uint64_t> members)
      : ground_(std::move(ground)), members_(std::move(members)) {
    if (ground_.empty()) throw validation_error("filter ground set must be non-empty");
    if (ground_.size() > 62) throw validation_error("ground set too large");
    for (std::size_t i = 0; i < ground_.size(); ++i)
      for (std::size_t j = i + 1; j < ground_.size(); ++j)
        if (ground_[i] == ground_[j])
          throw validation_error("duplicate ground element '" + ground_[i] + "'");
    for (std::uint64_t m : members_)
      if (m & ~full_mask())
        throw validation_error("filter member is not a subset of the ground set");
  }

  const std::vector<std::string>& ground() const { return ground_; }
  std::size_t ground_size() const { return ground_.size(); }
  const std::set<std::uint64_t>& members() const { return members_; }
  std::uint64_t full_mask() const {
    return (std::uint64_t(1) << ground_.size()) - 1;
  }
  bool contains(std::uint64_t subset) const { return members_.count(subset) != 0; }

  std::size_t ground_index(const std::string& name) const {
    for (std::size_t i = 0; i < ground_.size(); ++i)
      if (ground_[i] == name) return i;
    throw validation_error("'" + name + "' is not in the ground set");
  }

  std::string subset_to_string(std::uint64_t mask) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      if (!first) out += ',';
      out += ground_[i];
      first = false;
    }
    return out + "}";
  }

 private:
  std::vector<std::string> ground_;
  std::set<std::uint64_t> members_;
};

// Filter axioms, checked exhaustively: contains the ground set, excludes the
// empty set, closed under pairwise intersection and under superset.
inline bool is_filter(const FilterSet& f) {
  const std::uint64_t full = f.full_mask();
  if (!f.contains(full) || f.contains(0)) return false;
  for (std::uint64_t x : f.members())
    for (std::uint64_t y : f.members())
      if (!f.contains(x & y)) return false;
  for (std::uint64_t x : f.members())
    for (std::uint64_t y = 0; y <= full; ++y)
      if ((x & y) == x && !f.contains(y)) return false;
  return true;
}

inline FilterSet trivial_filter(std::vector<std::string> ground) {
  std::uint64_t full = (std::uint64_t(1) << ground.size()) - 1;
  return FilterSet(std::move(ground), {full});
}

// Ultrafilter: a filter that decides every subset (X in U iff complement not
// in U), checked over all subsets of the ground set.
inline bool is_ultrafilter(const FilterSet& f) {
  if (!is_filter(f)) return false;
  const std::uint64_t full = f.full_mask();
  for (std::uint64_t x = 0; x <= full; ++x)
    if (f.contains(x) == f.contains(full & ~x)) return false;
  return true;
}

inline FilterSet principal_ultrafilter(std::vector<std::string> ground,
                                       std::size_t at_index) {
  if (at_index >= ground.size())
    throw validation_error("principal index out of range");
  std::set<std::uint64_t> members;
  std::uint64_t full = (std::uint64_t(1) << ground.size()) - 1;
  for (std::uint64_t x = 0; x <= full; ++x)
    if (x >> at_index & 1) members.insert(x);
  return FilterSet(std::move(ground), std::move(members));
}

// Finite intersection property, checked literally: every non-empty
// sub-collection has a non-empty intersection.
inline bool has_fip(std::span<const std::uint64_t> sets, std::size_t ground_size) {
  if (ground_size == 0 || ground_size > 62)
    throw validation_error("bad ground set size");
  const std::uint64_t full = (std::uint64_t(1) << ground_size) - 1;
  for (std::uint64_t s : sets)
    if (s & ~full) throw validation_error("set is not a subset of the ground set");
  if (sets.size() > 20) {
    // Same criterion without the exponential scan: intersections only shrink.
    std::uint64_t inter = full;
    for (std::uint64_t s : sets) inter &= s;
    return inter != 0;
  }
  for (std::uint64_t pick = 1; pick < (std::uint64_t(1) << sets.size()); ++pick) {
    std::uint64_t inter = full;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (pick >> i & 1) inter &= sets[i];
    if (inter == 0) return false;
  }
  return true;
}

// Extends a collection with the finite intersection property to an
// ultrafilter. Over a finite ground set the full intersection is non-empty
// and every ultrafilter is principal, so the result is the principal
// ultrafilter at the least element of the intersection.
inline FilterSet extend_to_ultrafilter(std::span<const std::uint64_t> sets,
                                       std::vector<std::string> ground) {
  if (!has_fip(sets, ground.size()))
    throw validation_error("collection lacks the finite intersection property");
  std::uint64_t inter = (std::uint64_t(1) << ground.size()) - 1;
  for (std::uint64_t s : sets) inter &= s;
  std::size_t at = 0;
  while (!(inter >> at & 1)) ++at;
  return principal_ultrafilter(std::move(ground), at);
}

}  // namespace pmt
