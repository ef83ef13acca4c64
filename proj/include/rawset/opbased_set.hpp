#pragma once

#include <optional>

#include "rawset/encoding.hpp"
#include "rawset/id_set.hpp"

namespace rawset {

/// Wire operation for the op-based set. Add carries its fresh tag plus the
/// remove-wins tags it observed; Remove carries the add tags it observed;
/// RemoveWins carries only its fresh tag.
struct OpMessage {
  OpKind kind = OpKind::Add;
  Element e = 0;
  std::optional<UniqueId> id;
  IdSet observed;

  void encode(ByteWriter& w) const;
  std::size_t encoded_bytes() const;

  friend bool operator==(const OpMessage&, const OpMessage&) = default;
};

/// Op-based variant: prepare_* runs at the source and only reads state;
/// effect applies a message and must see messages in causal order (the
/// delivery layer's job). The source delivers its own message to itself
/// immediately after prepare.
///
/// Causal delivery is asserted, not assumed silently: the state keeps a
/// per-origin summary of delivered tag counters, which is exact because each
/// origin's tags are minted in causal order. Violations throw
/// std::logic_error.
class OpBasedSet {
 public:
  explicit OpBasedSet(std::size_t n_replicas) : seen_(n_replicas) {}

  bool lookup(Element e) const {
    return removes_.find(e) == removes_.end() && adds_.find(e) != adds_.end();
  }

  OpMessage prepare_add(Element e, ReplicaId r, VersionVector& idgen) const;

  /// nullopt when e is not present (precondition rejected, nothing to send).
  std::optional<OpMessage> prepare_remove(Element e) const;

  OpMessage prepare_remove_wins(Element e, ReplicaId r, VersionVector& idgen) const;

  void effect(const OpMessage& m);

  std::vector<Element> live_elements() const;
  std::size_t live_count() const;

  const IdMap& removes() const { return removes_; }
  const IdMap& adds() const { return adds_; }

  void encode(ByteWriter& w) const;
  std::size_t encoded_bytes() const;

 private:
  IdMap removes_;
  IdMap adds_;
  VersionVector seen_;  // delivery bookkeeping only, not CRDT payload
};

/// Payload comparison; the delivery bookkeeping is ignored.
bool state_equal(const OpBasedSet& x, const OpBasedSet& y);

}  // namespace rawset
