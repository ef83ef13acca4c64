#include "rawset/optimized_set.hpp"

#include <algorithm>

namespace rawset {

IdSet merge_observed_ids(const IdSet& x, const VersionVector& xv,
                         const IdSet& y, const VersionVector& yv) {
  IdSet out;
  auto xi = x.begin();
  auto yi = y.begin();
  while (xi != x.end() || yi != y.end()) {
    if (yi == y.end() || (xi != x.end() && *xi < *yi)) {
      if (!yv.covers(*xi)) out.insert(*xi);
      ++xi;
    } else if (xi == x.end() || *yi < *xi) {
      if (!xv.covers(*yi)) out.insert(*yi);
      ++yi;
    } else {  // present on both sides
      out.insert(*xi);
      ++xi;
      ++yi;
    }
  }
  return out;
}

void OptimizedSet::add(Element e, ReplicaId r) {
  UniqueId u = fresh_id(r, vv_);
  removes_.erase(e);
  adds_[e].insert(u);
}

bool OptimizedSet::remove(Element e) {
  if (!lookup(e)) return false;
  adds_.erase(e);  // vv_ keeps counting the erased tags as observed
  return true;
}

bool OptimizedSet::remove_wins(Element e, ReplicaId r) {
  if (!lookup(e)) return false;
  UniqueId u = fresh_id(r, vv_);
  removes_[e].insert(u);
  adds_.erase(e);
  return true;
}

OptimizedSet OptimizedSet::merge(const OptimizedSet& x, const OptimizedSet& y) {
  OptimizedSet z(x.vv_.size());

  for (const auto& [e, ids] : x.removes_) {
    IdSet merged = merge_observed_ids(ids, x.vv_, ids_at(y.removes_, e), y.vv_);
    if (!merged.empty()) z.removes_[e] = std::move(merged);
  }
  for (const auto& [e, ids] : y.removes_) {
    if (x.removes_.find(e) != x.removes_.end()) continue;
    IdSet merged = merge_observed_ids(IdSet{}, x.vv_, ids, y.vv_);
    if (!merged.empty()) z.removes_[e] = std::move(merged);
  }

  // Add tags merge independently of the remove-wins tags: an add tag masked
  // by a surviving remove-wins tag is kept (hidden only through lookup), so
  // it can resurface when a later add cancels that remove-wins tag. Deleting
  // it here would make merge order-sensitive, because whether the tag dies
  // would depend on whether the cancelling add arrives before or after the
  // remove-wins tag does.
  auto merge_adds = [&](Element e, const IdSet& xs, const IdSet& ys) {
    IdSet merged = merge_observed_ids(xs, x.vv_, ys, y.vv_);
    if (!merged.empty()) z.adds_[e] = std::move(merged);
  };
  for (const auto& [e, ids] : x.adds_) merge_adds(e, ids, ids_at(y.adds_, e));
  for (const auto& [e, ids] : y.adds_) {
    if (x.adds_.find(e) == x.adds_.end()) merge_adds(e, IdSet{}, ids);
  }

  z.vv_ = x.vv_;
  z.vv_.join(y.vv_);
  return z;
}

std::vector<Element> OptimizedSet::live_elements() const {
  std::vector<Element> out;
  out.reserve(adds_.size());
  for (const auto& [e, ids] : adds_) {
    if (removes_.find(e) == removes_.end()) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t OptimizedSet::live_count() const {
  std::size_t n = 0;
  for (const auto& [e, ids] : adds_) {
    if (removes_.find(e) == removes_.end()) ++n;
  }
  return n;
}

void OptimizedSet::encode(ByteWriter& w) const {
  encode_id_map(w, removes_);
  encode_id_map(w, adds_);
  encode_version_vector(w, vv_);
}

std::size_t OptimizedSet::encoded_bytes() const {
  ByteWriter w;
  encode(w);
  return w.size();
}

}  // namespace rawset
