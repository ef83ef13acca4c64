#include "rawset/orset.hpp"

#include <algorithm>

namespace rawset {

ORSet ORSet::merge(const ORSet& x, const ORSet& y) {
  ORSet z(x.vv_.size());
  for (const auto& [e, ids] : x.adds_) {
    IdSet merged = merge_observed_ids(ids, x.vv_, ids_at(y.adds_, e), y.vv_);
    if (!merged.empty()) z.adds_[e] = std::move(merged);
  }
  for (const auto& [e, ids] : y.adds_) {
    if (x.adds_.find(e) != x.adds_.end()) continue;
    IdSet merged = merge_observed_ids(IdSet{}, x.vv_, ids, y.vv_);
    if (!merged.empty()) z.adds_[e] = std::move(merged);
  }
  z.vv_ = x.vv_;
  z.vv_.join(y.vv_);
  return z;
}

std::vector<Element> ORSet::live_elements() const {
  std::vector<Element> out;
  out.reserve(adds_.size());
  for (const auto& [e, ids] : adds_) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

void ORSet::encode(ByteWriter& w) const {
  encode_id_map(w, adds_);
  encode_version_vector(w, vv_);
}

std::size_t ORSet::encoded_bytes() const {
  ByteWriter w;
  encode(w);
  return w.size();
}

}  // namespace rawset
