#pragma once

#include "rawset/encoding.hpp"
#include "rawset/id_set.hpp"

namespace rawset {

/// Merge rule for observed-id sets under version-vector coverage: an id
/// survives if both sides hold it, or if one side holds it and the other
/// side's vector has not yet counted it (i.e. the other side never saw it,
/// as opposed to saw it and dropped it).
IdSet merge_observed_ids(const IdSet& x, const VersionVector& xv,
                         const IdSet& y, const VersionVector& yv);

/// Compact state CRDT with add-wins and remove-wins removals. Instead of
/// tombstones it keeps one version vector per state; cancelled tags are
/// physically deleted and the vector tells merge which deletions were
/// observed. The R and A maps merge independently, so a merged state can
/// hold add tags for an element that also has live remove-wins tags: the
/// remove-wins tags mask those adds through lookup rather than destroying
/// them, and the adds resurface if a later add cancels the remove-wins.
class OptimizedSet {
 public:
  explicit OptimizedSet(std::size_t n_replicas) : vv_(n_replicas) {}

  bool lookup(Element e) const {
    return removes_.find(e) == removes_.end() && adds_.find(e) != adds_.end();
  }

  void add(Element e, ReplicaId r);

  /// Returns false (no state change) when e is not present.
  bool remove(Element e);

  /// Remove-wins removal; requires presence, returns false otherwise.
  bool remove_wins(Element e, ReplicaId r);

  static OptimizedSet merge(const OptimizedSet& x, const OptimizedSet& y);
  void merge_in(const OptimizedSet& other) { *this = merge(*this, other); }

  std::vector<Element> live_elements() const;
  std::size_t live_count() const;

  const IdMap& removes() const { return removes_; }
  const IdMap& adds() const { return adds_; }
  const VersionVector& vv() const { return vv_; }

  void encode(ByteWriter& w) const;
  std::size_t encoded_bytes() const;

  friend bool operator==(const OptimizedSet&, const OptimizedSet&) = default;

 private:
  IdMap removes_;
  IdMap adds_;
  VersionVector vv_;
};

}  // namespace rawset
