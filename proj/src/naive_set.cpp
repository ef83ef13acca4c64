#include "rawset/naive_set.hpp"

#include <algorithm>

namespace rawset {

bool NaiveSet::lookup(Element e) const {
  const IdSet& r = ids_at(removes_, e);
  for (const auto& id : r)
    if (!tombstones_.contains(id)) return false;
  const IdSet& a = ids_at(adds_, e);
  return std::any_of(a.begin(), a.end(),
                     [&](const UniqueId& id) { return !tombstones_.contains(id); });
}

void NaiveSet::add(Element e, const UniqueId& u) {
  for (const auto& id : ids_at(removes_, e)) tombstones_.insert(id);
  adds_[e].insert(u);
}

bool NaiveSet::remove(Element e) {
  if (!lookup(e)) return false;
  for (const auto& id : ids_at(adds_, e)) tombstones_.insert(id);
  return true;
}

void NaiveSet::remove_wins(Element e, const UniqueId& u) {
  removes_[e].insert(u);
}

NaiveSet NaiveSet::merge(const NaiveSet& x, const NaiveSet& y) {
  NaiveSet z = x;
  z.merge_in(y);
  return z;
}

void NaiveSet::merge_in(const NaiveSet& other) {
  for (const auto& [e, ids] : other.removes_) removes_[e].union_with(ids);
  for (const auto& [e, ids] : other.adds_) adds_[e].union_with(ids);
  tombstones_.insert(other.tombstones_.begin(), other.tombstones_.end());
}

std::vector<Element> NaiveSet::live_elements() const {
  std::vector<Element> out;
  for (const auto& [e, ids] : adds_)
    if (lookup(e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t NaiveSet::live_count() const {
  std::size_t n = 0;
  for (const auto& [e, ids] : adds_)
    if (lookup(e)) ++n;
  return n;
}

void NaiveSet::encode(ByteWriter& w) const {
  encode_id_map(w, removes_);
  encode_id_map(w, adds_);
  encode_sorted_ids(w, tombstones_);
}

std::size_t NaiveSet::encoded_bytes() const {
  ByteWriter w;
  encode(w);
  return w.size();
}

}  // namespace rawset
