#pragma once

#include "rawset/encoding.hpp"
#include "rawset/id_set.hpp"
#include "rawset/optimized_set.hpp"

namespace rawset {

/// Add-wins observed-remove set with version-vector compaction. Baseline for
/// the benchmark: same machinery as OptimizedSet minus the remove-wins map,
/// so the cost of supporting remove-wins shows up as the difference.
class ORSet {
 public:
  explicit ORSet(std::size_t n_replicas) : vv_(n_replicas) {}

  bool lookup(Element e) const { return adds_.find(e) != adds_.end(); }

  void add(Element e, ReplicaId r) {
    UniqueId u = fresh_id(r, vv_);
    adds_[e].insert(u);
  }

  /// Returns false (no state change) when e is not present.
  bool remove(Element e) {
    if (!lookup(e)) return false;
    adds_.erase(e);
    return true;
  }

  static ORSet merge(const ORSet& x, const ORSet& y);
  void merge_in(const ORSet& other) { *this = merge(*this, other); }

  std::vector<Element> live_elements() const;
  std::size_t live_count() const { return adds_.size(); }

  const IdMap& adds() const { return adds_; }
  const VersionVector& vv() const { return vv_; }

  void encode(ByteWriter& w) const;
  std::size_t encoded_bytes() const;

  friend bool operator==(const ORSet&, const ORSet&) = default;

 private:
  IdMap adds_;
  VersionVector vv_;
};

}  // namespace rawset
