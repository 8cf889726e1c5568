#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmt/errors.hpp"
#include "pmt/filter.hpp"
#include "pmt/semantics.hpp"
#include "pmt/structure.hpp"

namespace pmt {

// A non-empty finite indexed family of partial structures over one relational
// signature. Factors may have different universes.
class IndexedFamily {
 public:
  IndexedFamily(std::vector<std::string> index,
                std::map<std::string, PartialStructure> factors)
      : index_(std::move(index)), factors_(std::move(factors)) {
    if (index_.empty()) throw validation_error("family index set must be non-empty");
    for (std::size_t i = 0; i < index_.size(); ++i)
      for (std::size_t j = i + 1; j < index_.size(); ++j)
        if (index_[i] == index_[j])
          throw validation_error("duplicate index '" + index_[i] + "'");
    if (factors_.size() != index_.size())
      throw validation_error("family must map each index to exactly one factor");
    for (const auto& name : index_) {
      auto it = factors_.find(name);
      if (it == factors_.end())
        throw validation_error("missing factor for index '" + name + "'");
      detail::require_relational(it->second, "indexed family");
      if (!same_signature(it->second, factors_.at(index_[0])))
        throw validation_error("factor '" + name + "' has a different signature");
    }
  }

  const std::vector<std::string>& index() const { return index_; }
  std::size_t size() const { return index_.size(); }

  const PartialStructure& factor(const std::string& name) const {
    return factors_.at(name);
  }
  const PartialStructure& factor_at(std::size_t pos) const {
    return factors_.at(index_.at(pos));
  }

  Signature signature() const { return signature_of(factor_at(0)); }

  // Applies a completion (or any relational map) factor-wise.
  template <typename Fn>
  IndexedFamily map_factors(Fn&& fn) const {
    std::map<std::string, PartialStructure> out;
    for (const auto& name : index_) out.emplace(name, fn(factors_.at(name)));
    return IndexedFamily(index_, std::move(out));
  }

 private:
  std::vector<std::string> index_;
  std::map<std::string, PartialStructure> factors_;
};

// An element of the product universe: one element index per factor, aligned
// with the family's index listing.
struct ProductElement {
  std::vector<std::size_t> coords;

  std::string name(const IndexedFamily& fam) const {
    std::string out;
    for (std::size_t p = 0; p < coords.size(); ++p) {
      if (p) out += '.';
      out += fam.factor_at(p).universe().name(coords[p]);
    }
    return out;
  }

  bool operator==(const ProductElement&) const = default;
};

// All product elements in lexicographic order (first factor most significant).
inline std::vector<ProductElement> product_elements(const IndexedFamily& fam) {
  std::size_t total = 1;
  for (std::size_t p = 0; p < fam.size(); ++p) {
    total *= fam.factor_at(p).universe().size();
    if (total > (std::size_t(1) << 24))
      throw validation_error("product universe too large");
  }
  std::vector<ProductElement> out;
  out.reserve(total);
  ProductElement cur{std::vector<std::size_t>(fam.size(), 0)};
  for (std::size_t k = 0; k < total; ++k) {
    out.push_back(cur);
    for (std::size_t p = fam.size(); p-- > 0;) {
      if (++cur.coords[p] < fam.factor_at(p).universe().size()) break;
      cur.coords[p] = 0;
    }
  }
  return out;
}

namespace detail {

// Index sets {i : factor verdict of the tuple at i is v}, as masks over the
// family index positions, for a tuple of product elements.
struct FactorVerdictMasks {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  std::uint64_t unk = 0;
};

inline FactorVerdictMasks factor_verdict_masks(const IndexedFamily& fam,
                                               const std::string& relation,
                                               std::span<const ProductElement> tuple) {
  FactorVerdictMasks masks;
  Tuple point(tuple.size());
  for (std::size_t p = 0; p < fam.size(); ++p) {
    for (std::size_t k = 0; k < tuple.size(); ++k) point[k] = tuple[k].coords.at(p);
    switch (fam.factor_at(p).relation(relation).at(point)) {
      case Verdict::pos: masks.pos |= std::uint64_t(1) << p; break;
      case Verdict::neg: masks.neg |= std::uint64_t(1) << p; break;
      default: masks.unk |= std::uint64_t(1) << p; break;
    }
  }
  return masks;
}

}  // namespace detail

// Verdict of a tuple in the direct product: positive when every factor is
// positive, negative when some factor is negative, unknown otherwise.
inline Verdict product_verdict(const IndexedFamily& fam, const std::string& relation,
                               std::span<const ProductElement> tuple) {
  auto masks = detail::factor_verdict_masks(fam, relation, tuple);
  const std::uint64_t full = (std::uint64_t(1) << fam.size()) - 1;
  if (masks.pos == full) return Verdict::pos;
  if (masks.neg != 0) return Verdict::neg;
  return Verdict::unk;
}

inline Universe product_universe(const IndexedFamily& fam,
                                 std::span<const ProductElement> elements) {
  std::vector<std::string> names;
  names.reserve(elements.size());
  for (const auto& h : elements) names.push_back(h.name(fam));
  return Universe(std::move(names));  // rejects name collisions
}

inline PartialStructure direct_product(const IndexedFamily& fam) {
  std::vector<ProductElement> elements = product_elements(fam);
  PartialStructure out(product_universe(fam, elements));
  Signature sig = fam.signature();
  for (const auto& [name, arity] : sig.relations()) {
    PartialRelation r(arity, elements.size());
    std::vector<ProductElement> tuple(arity);
    for (std::size_t code = 0; code < r.tuple_count(); ++code) {
      Tuple picks = tuple_unpack(code, arity, elements.size());
      for (std::size_t k = 0; k < arity; ++k) tuple[k] = elements[picks[k]];
      r.set_code(code, product_verdict(fam, name, tuple));
    }
    out.set_relation(name, r);
  }
  return out;
}

// Both sides of the characterization of a non-empty unknown part in the
// product: the left side reads the direct product, the right side scans the
// factors (some factor has an unknown tuple, and every factor's positive or
// unknown part is non-empty).
inline std::pair<bool, bool> product_unknown_nonempty(const IndexedFamily& fam,
                                                      const std::string& relation) {
  PartialStructure prod = direct_product(fam);
  bool left = prod.relation(relation).unknown_count() > 0;
  bool some_unknown = false;
  bool all_nonempty = true;
  for (std::size_t p = 0; p < fam.size(); ++p) {
    const PartialRelation& r = fam.factor_at(p).relation(relation);
    if (r.unknown_count() > 0) some_unknown = true;
    if (r.empty_positive_part()) all_nonempty = false;
  }
  return {left, some_unknown && all_nonempty};
}

// u ~F v iff the agreement set {i : u(i) = v(i)} belongs to F.
inline bool equivalent_mod_filter(const ProductElement& u, const ProductElement& v,
                                  const FilterSet& f) {
  if (u.coords.size() != f.ground_size() || v.coords.size() != f.ground_size())
    throw validation_error("product elements do not match the filter's ground set");
  std::uint64_t agree = 0;
  for (std::size_t p = 0; p < f.ground_size(); ++p)
    if (u.coords[p] == v.coords[p]) agree |= std::uint64_t(1) << p;
  return f.contains(agree);
}

// Equivalence classes of ~F over the product universe; classes and their
// members in lexicographic order, the first member is the representative.
inline std::vector<std::vector<ProductElement>> filter_classes(const IndexedFamily& fam,
                                                               const FilterSet& f) {
  if (f.ground() != fam.index())
    throw validation_error("filter ground set does not match the family index");
  std::vector<ProductElement> elements = product_elements(fam);
  std::vector<std::vector<ProductElement>> classes;
  std::vector<bool> placed(elements.size(), false);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (placed[i]) continue;
    std::vector<ProductElement> cls{elements[i]};
    placed[i] = true;
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (placed[j]) continue;
      if (equivalent_mod_filter(elements[i], elements[j], f)) {
        cls.push_back(elements[j]);
        placed[j] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

// Verdict of a class tuple in the reduced product, computed from the given
// representatives: positive when the positive index set is in the filter,
// unknown when the unknown index set is, negative otherwise. The positive and
// unknown cases exclude each other because disjoint sets cannot both belong
// to a filter.
inline Verdict reduced_verdict(const IndexedFamily& fam, const FilterSet& f,
                               const std::string& relation,
                               std::span<const ProductElement> representatives) {
  auto masks = detail::factor_verdict_masks(fam, relation, representatives);
  bool positive = f.contains(masks.pos);
  bool unknown = f.contains(masks.unk);
  if (positive && unknown)
    throw validation_error("filter contains two disjoint index sets");
  if (positive) return Verdict::pos;
  if (unknown) return Verdict::unk;
  return Verdict::neg;
}

inline PartialStructure reduced_product(const IndexedFamily& fam, const FilterSet& f) {
  if (!is_filter(f)) throw validation_error("reduced product needs a filter");
  std::vector<std::vector<ProductElement>> classes = filter_classes(fam, f);
  std::vector<ProductElement> reps;
  reps.reserve(classes.size());
  for (const auto& cls : classes) reps.push_back(cls.front());
  PartialStructure out(product_universe(fam, reps));
  Signature sig = fam.signature();
  for (const auto& [name, arity] : sig.relations()) {
    PartialRelation r(arity, reps.size());
    std::vector<ProductElement> tuple(arity);
    for (std::size_t code = 0; code < r.tuple_count(); ++code) {
      Tuple picks = tuple_unpack(code, arity, reps.size());
      for (std::size_t k = 0; k < arity; ++k) tuple[k] = reps[picks[k]];
      r.set_code(code, reduced_verdict(fam, f, name, tuple));
    }
    out.set_relation(name, r);
  }
  return out;
}

inline PartialStructure ultraproduct(const IndexedFamily& fam, const FilterSet& u) {
  if (!is_ultrafilter(u)) throw validation_error("ultraproduct needs an ultrafilter");
  return reduced_product(fam, u);
}

inline IndexedFamily family_plus(const IndexedFamily& fam) {
  return fam.map_factors([](const PartialStructure& s) { return plus_completion(s); });
}

inline IndexedFamily family_minus(const IndexedFamily& fam) {
  return fam.map_factors([](const PartialStructure& s) { return minus_completion(s); });
}

// Enumerates the families of factor-wise normal completions; the count is the
// product of the per-factor normal counts.
class FamilyNormalsEnumerator {
 public:
  explicit FamilyNormalsEnumerator(const IndexedFamily& fam) : fam_(fam) {
    std::uint64_t total = 1;
    for (std::size_t p = 0; p < fam.size(); ++p) {
      per_factor_.push_back(all_normals(fam.factor_at(p)));
      if (per_factor_.back().size() > (std::uint64_t(1) << 40) / total)
        throw validation_error("normal family space too large");
      total *= per_factor_.back().size();
    }
    count_ = total;
  }

  std::uint64_t count() const { return count_; }

  std::optional<IndexedFamily> next() {
    if (at_ >= count_) return std::nullopt;
    std::uint64_t k = at_;
    std::map<std::string, PartialStructure> factors;
    for (std::size_t p = fam_.size(); p-- > 0;) {
      factors.emplace(fam_.index()[p], per_factor_[p][k % per_factor_[p].size()]);
      k /= per_factor_[p].size();
    }
    ++at_;
    return IndexedFamily(fam_.index(), std::move(factors));
  }

  void reset() { at_ = 0; }

 private:
  IndexedFamily fam_;
  std::vector<std::vector<PartialStructure>> per_factor_;
  std::uint64_t count_ = 1;
  std::uint64_t at_ = 0;
};

inline std::vector<IndexedFamily> all_family_normals(const IndexedFamily& fam) {
  FamilyNormalsEnumerator e(fam);
  std::vector<IndexedFamily> out;
  out.reserve(e.count());
  while (auto n = e.next()) out.push_back(std::move(*n));
  return out;
}

// Both sides of the ultraproduct transfer law for total factors: truth of the
// sentence in the ultraproduct, and membership of the satisfying index set in
// the ultrafilter.
inline std::pair<bool, bool> los_check(const IndexedFamily& fam, const FilterSet& u,
                                       const Formula& sentence) {
  for (std::size_t p = 0; p < fam.size(); ++p)
    if (!fam.factor_at(p).total())
      throw validation_error("los_check needs total factors");
  if (!is_ultrafilter(u)) throw validation_error("los_check needs an ultrafilter");
  detail::require_sentence(sentence, "los_check");
  bool left = eval_total(ultraproduct(fam, u), sentence);
  std::uint64_t sat = 0;
  for (std::size_t p = 0; p < fam.size(); ++p)
    if (eval_total(fam.factor_at(p), sentence)) sat |= std::uint64_t(1) << p;
  return {left, u.contains(sat)};
}

// Forward transfer for quasi-truth: (hypothesis, conclusion) where the
// hypothesis is that the quasi-satisfying index set belongs to the
// ultrafilter and the conclusion is quasi-truth in the ultraproduct. The law
// is hypothesis => conclusion; callers assert it. The converse can fail.
inline std::pair<bool, bool> quasi_los_forward(const IndexedFamily& fam, const FilterSet& u,
                                               const Formula& sentence) {
  if (!is_ultrafilter(u)) throw validation_error("quasi_los_forward needs an ultrafilter");
  detail::require_sentence(sentence, "quasi_los_forward");
  std::uint64_t sat = 0;
  for (std::size_t p = 0; p < fam.size(); ++p)
    if (quasi_true(fam.factor_at(p), sentence)) sat |= std::uint64_t(1) << p;
  bool hypothesis = u.contains(sat);
  bool conclusion = quasi_true(ultraproduct(fam, u), sentence);
  return {hypothesis, conclusion};
}

// The compactness construction for a finite sentence set: index the non-empty
// subsets of gamma, take the supplied partial model of each subset as the
// factor, extend the supports E = {gamma*} to an ultrafilter, and return the
// ultraproduct. The witness quasi-models every sentence of gamma.
struct CompactnessResult {
  IndexedFamily family;
  std::vector<std::uint64_t> support_sets;  // one mask over the subset index per sentence
  FilterSet ultrafilter;
  PartialStructure witness;
};

inline CompactnessResult compactness_witness(
    std::span<const Formula> gamma, const std::map<std::uint64_t, PartialStructure>& models) {
  if (gamma.empty())
    throw validation_error("compactness_witness needs a non-empty sentence set");
  if (gamma.size() > 16) throw validation_error("sentence set too large");
  for (const Formula& g : gamma) detail::require_sentence(g, "compactness_witness");

  const std::uint64_t subsets = (std::uint64_t(1) << gamma.size()) - 1;
  std::vector<std::string> index_names;
  std::map<std::string, PartialStructure> factors;
  for (std::uint64_t mask = 1; mask <= subsets; ++mask) {
    auto it = models.find(mask);
    if (it == models.end())
      throw validation_error("missing model for subset mask " + std::to_string(mask));
    std::vector<Formula> subset;
    std::string name = "g";
    for (std::size_t j = 0; j < gamma.size(); ++j)
      if (mask >> j & 1) {
        subset.push_back(gamma[j]);
        name += std::to_string(j + 1);
      }
    if (!quasi_models(it->second, subset))
      throw validation_error("supplied structure for subset " + name +
                             " is not a partial model of it");
    index_names.push_back(name);
    factors.emplace(name, it->second);
  }
  IndexedFamily family(index_names, std::move(factors));

  // support of sentence j: the positions of subsets containing it
  std::vector<std::uint64_t> supports(gamma.size(), 0);
  for (std::uint64_t mask = 1; mask <= subsets; ++mask)
    for (std::size_t j = 0; j < gamma.size(); ++j)
      if (mask >> j & 1) supports[j] |= std::uint64_t(1) << (mask - 1);

  if (!has_fip(supports, index_names.size()))
    throw std::logic_error("sentence supports lost the finite intersection property");
  FilterSet u = extend_to_ultrafilter(supports, index_names);
  PartialStructure witness = ultraproduct(family, u);
  return CompactnessResult{std::move(family), std::move(supports), std::move(u),
                           std::move(witness)};
}

}  // namespace pmt
