#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmt/errors.hpp"

namespace pmt {

// A tuple of universe elements, stored as indices into the universe listing.
using Tuple = std::vector<std::size_t>;

inline bool valid_element_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '(' || c == ')' || c == ',' || c == '{' ||
        c == '}' || c == '=' || c == '?' || c == '#')
      return false;
  }
  return true;
}

// Finite, non-empty, ordered universe of named elements.
class Universe {
 public:
  explicit Universe(std::vector<std::string> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw validation_error("universe must be non-empty");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (!valid_element_name(elements_[i]))
        throw validation_error("invalid element name '" + elements_[i] + "'");
      for (std::size_t j = i + 1; j < elements_.size(); ++j)
        if (elements_[i] == elements_[j])
          throw validation_error("duplicate element '" + elements_[i] + "' in universe");
    }
  }

  // Universe {prefix1, ..., prefixN}.
  static Universe numbered(std::size_t n, const std::string& prefix = "e") {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
    return Universe(std::move(names));
  }

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(std::size_t index) const { return elements_.at(index); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t require_index(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw validation_error("element '" + std::string(name) + "' is not in the universe");
  }

  // Same element set, listing order ignored.
  bool same_element_set(const Universe& other) const {
    if (size() != other.size()) return false;
    for (const auto& e : elements_)
      if (!other.index_of(e)) return false;
    return true;
  }

  bool operator==(const Universe& other) const = default;

  std::string tuple_to_string(std::span<const std::size_t> tuple) const {
    std::string out = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out += ',';
      out += name(tuple[i]);
    }
    out += ')';
    return out;
  }

 private:
  std::vector<std::string> elements_;
};

// Mixed-radix codec for tuples over a universe of `base` elements; the first
// coordinate is the most significant digit, so numeric order of codes equals
// lexicographic order of tuples.
inline std::size_t tuple_space_size(std::size_t base, std::size_t arity) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) n *= base;
  return n;
}

inline std::size_t tuple_pack(std::span<const std::size_t> tuple, std::size_t base) {
  std::size_t code = 0;
  for (std::size_t c : tuple) code = code * base + c;
  return code;
}

inline Tuple tuple_unpack(std::size_t code, std::size_t arity, std::size_t base) {
  Tuple t(arity, 0);
  for (std::size_t i = arity; i-- > 0;) {
    t[i] = code % base;
    code /= base;
  }
  return t;
}

}  // namespace pmt
