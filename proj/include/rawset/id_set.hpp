#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "rawset/core.hpp"

namespace rawset {

/// Small set of UniqueIds kept as a sorted vector. Typical sizes are a
/// handful of ids per element, so flat storage beats node containers and the
/// sorted order doubles as the canonical encoding order.
class IdSet {
 public:
  using const_iterator = std::vector<UniqueId>::const_iterator;

  IdSet() = default;
  IdSet(std::initializer_list<UniqueId> ids) {
    for (const auto& id : ids) insert(id);
  }

  bool insert(const UniqueId& id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) return false;
    ids_.insert(it, id);
    return true;
  }

  bool erase(const UniqueId& id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || !(*it == id)) return false;
    ids_.erase(it);
    return true;
  }

  bool contains(const UniqueId& id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  void clear() { ids_.clear(); }

  void union_with(const IdSet& other) {
    for (const auto& id : other.ids_) insert(id);
  }

  void subtract(const IdSet& other) {
    if (other.empty() || empty()) return;
    auto keep = [&](const UniqueId& id) { return other.contains(id); };
    ids_.erase(std::remove_if(ids_.begin(), ids_.end(), keep), ids_.end());
  }

  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }

  friend bool operator==(const IdSet&, const IdSet&) = default;

 private:
  std::vector<UniqueId> ids_;
};

/// Element -> id set. Empty entries are always erased, so map equality is
/// structural state equality.
using IdMap = std::unordered_map<Element, IdSet>;

inline const IdSet& ids_at(const IdMap& m, Element e) {
  static const IdSet empty;
  auto it = m.find(e);
  return it == m.end() ? empty : it->second;
}

}  // namespace rawset
