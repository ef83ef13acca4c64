#pragma once

#include <unordered_set>

#include "rawset/encoding.hpp"
#include "rawset/id_set.hpp"

namespace rawset {

/// Tombstone-based state CRDT with add-wins removal and a stronger
/// remove-wins removal. R holds remove-wins tags, A holds add tags, T holds
/// every tag that has been cancelled. Tags are never dropped, so metadata
/// grows with the operation count; OptimizedSet is the compact version.
class NaiveSet {
 public:
  using Tombstones = std::unordered_set<UniqueId, UniqueIdHash>;

  /// Present iff every remove-wins tag is cancelled and some add tag is not.
  bool lookup(Element e) const;

  /// Cancels the remove-wins tags observed for e, then registers u.
  void add(Element e, const UniqueId& u);

  /// Cancels the add tags observed for e. Returns false (no state change)
  /// when e is not present.
  bool remove(Element e);

  /// Registers a remove-wins tag for e. No presence precondition: the tag
  /// suppresses e until some later add observes and cancels it.
  void remove_wins(Element e, const UniqueId& u);

  static NaiveSet merge(const NaiveSet& x, const NaiveSet& y);

  /// Same result as merge(*this, other); avoids copying the larger side.
  void merge_in(const NaiveSet& other);

  std::vector<Element> live_elements() const;
  std::size_t live_count() const;

  const IdMap& removes() const { return removes_; }
  const IdMap& adds() const { return adds_; }
  const Tombstones& tombstones() const { return tombstones_; }

  void encode(ByteWriter& w) const;
  std::size_t encoded_bytes() const;

  friend bool operator==(const NaiveSet&, const NaiveSet&) = default;

 private:
  IdMap removes_;
  IdMap adds_;
  Tombstones tombstones_;
};

}  // namespace rawset
