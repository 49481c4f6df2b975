#include "osrlab/store.hpp"

namespace osrlab {

std::optional<Value> Store::get(const std::string& x) const {
  auto it = bindings_.find(x);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

Store Store::restricted(const std::set<std::string>& keep) const {
  Store out;
  for (const auto& [name, value] : bindings_)
    if (keep.count(name)) out.bindings_.emplace(name, value);
  return out;
}

std::string Store::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : bindings_) {
    if (!first) out += ", ";
    first = false;
    out += name + ":" + value.str();
  }
  out += "}";
  return out;
}

}  // namespace osrlab
