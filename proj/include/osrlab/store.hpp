#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "osrlab/value.hpp"

namespace osrlab {

/// Finite map from variable names to values; unbound means undefined.
class Store {
 public:
  Store() = default;
  Store(std::initializer_list<std::pair<const std::string, Value>> init) : bindings_(init) {}

  bool defined(const std::string& x) const { return bindings_.count(x) != 0; }
  std::optional<Value> get(const std::string& x) const;
  void set(const std::string& x, Value v) { bindings_[x] = std::move(v); }

  /// Store with domain restricted to the given variable set.
  Store restricted(const std::set<std::string>& keep) const;

  const std::map<std::string, Value>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  size_t size() const { return bindings_.size(); }

  bool operator==(const Store& o) const { return bindings_ == o.bindings_; }
  bool operator!=(const Store& o) const { return !(*this == o); }

  /// "{X:5, Y:8}" with keys sorted.
  std::string str() const;

 private:
  std::map<std::string, Value> bindings_;
};

}  // namespace osrlab
