#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pmt/errors.hpp"

namespace pmt {

// Relation symbols with arities >= 1, plus optional function symbols with
// arities >= 0 (arity 0 means a constant symbol). Relation and function name
// sets are disjoint.
class Signature {
 public:
  Signature() = default;

  void add_relation(const std::string& name, std::size_t arity) {
    check_name(name);
    if (arity == 0) throw validation_error("relation '" + name + "' must have arity >= 1");
    relations_.emplace(name, arity);
  }

  void add_function(const std::string& name, std::size_t arity) {
    check_name(name);
    functions_.emplace(name, arity);
  }

  const std::map<std::string, std::size_t>& relations() const { return relations_; }
  const std::map<std::string, std::size_t>& functions() const { return functions_; }

  bool has_relation(std::string_view name) const {
    return relations_.count(std::string(name)) != 0;
  }

  std::size_t relation_arity(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end())
      throw validation_error("unknown relation symbol '" + name + "'");
    return it->second;
  }

  bool relational() const { return functions_.empty(); }

  bool operator==(const Signature&) const = default;

 private:
  void check_name(const std::string& name) const {
    if (name.empty()) throw validation_error("empty symbol name");
    if (relations_.count(name) || functions_.count(name))
      throw validation_error("symbol '" + name + "' declared twice");
  }

  std::map<std::string, std::size_t> relations_;
  std::map<std::string, std::size_t> functions_;
};

}  // namespace pmt
