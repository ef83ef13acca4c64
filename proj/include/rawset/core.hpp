#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rawset {

/// Elements are opaque 64-bit values; callers map their own domain onto them.
using Element = std::uint64_t;

/// Replica ids are dense indices in [0, n_replicas). The replica set is fixed
/// for the lifetime of a run.
using ReplicaId = std::uint16_t;

enum class OpKind : std::uint8_t { Add = 0, Remove = 1, RemoveWins = 2 };

/// Globally unique operation tag: per-replica counter + replica id.
/// Ordered lexicographically by (t, r) so sorted containers are canonical.
struct UniqueId {
  std::uint64_t t = 0;
  ReplicaId r = 0;

  friend auto operator<=>(const UniqueId&, const UniqueId&) = default;
};

struct UniqueIdHash {
  std::size_t operator()(const UniqueId& id) const noexcept {
    std::uint64_t x = id.t * 0x9e3779b97f4a7c15ull + id.r;
    x ^= x >> 32;
    return static_cast<std::size_t>(x * 0xbf58476d1ce4e5b9ull);
  }
};

/// Per-replica counter vector. covers() answers "was this id already counted
/// here", which is what the optimized merge uses to tell "seen and dropped"
/// from "never seen".
class VersionVector {
 public:
  VersionVector() = default;
  explicit VersionVector(std::size_t n_replicas) : entries_(n_replicas, 0) {}

  std::size_t size() const { return entries_.size(); }

  std::uint64_t at(ReplicaId r) const { return entries_.at(r); }

  bool covers(const UniqueId& id) const {
    return id.r < entries_.size() && entries_[id.r] >= id.t;
  }

  /// Raise this replica's entry to at least id.t.
  void observe(const UniqueId& id) {
    if (id.r >= entries_.size()) throw std::invalid_argument("VersionVector::observe: replica out of range");
    if (entries_[id.r] < id.t) entries_[id.r] = id.t;
  }

  /// Pre-increment entry r and return the new counter value.
  std::uint64_t bump(ReplicaId r) {
    if (r >= entries_.size()) throw std::invalid_argument("VersionVector::bump: replica out of range");
    return ++entries_[r];
  }

  /// Entrywise max. Vectors must come from the same replica set.
  void join(const VersionVector& other) {
    if (other.entries_.size() != entries_.size())
      throw std::invalid_argument("VersionVector::join: length mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (other.entries_[i] > entries_[i]) entries_[i] = other.entries_[i];
  }

  bool dominates(const VersionVector& other) const {
    if (other.entries_.size() != entries_.size())
      throw std::invalid_argument("VersionVector::dominates: length mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i] < other.entries_[i]) return false;
    return true;
  }

  friend bool operator==(const VersionVector&, const VersionVector&) = default;

  const std::vector<std::uint64_t>& entries() const { return entries_; }

 private:
  std::vector<std::uint64_t> entries_;
};

/// Mints the next id for `replica`, advancing its counter in `v`.
inline UniqueId fresh_id(ReplicaId replica, VersionVector& v) {
  return UniqueId{v.bump(replica), replica};
}

/// Logical time for history events. Same counters as VersionVector but a
/// distinct type: clocks order events, version vectors summarize seen ids.
class VectorClock {
 public:
  VectorClock() = default;
  explicit VectorClock(std::size_t n_replicas) : entries_(n_replicas, 0) {}

  std::size_t size() const { return entries_.size(); }
  std::uint64_t at(ReplicaId r) const { return entries_.at(r); }

  void tick(ReplicaId r) {
    if (r >= entries_.size()) throw std::invalid_argument("VectorClock::tick: replica out of range");
    ++entries_[r];
  }

  void join(const VectorClock& other) {
    if (other.entries_.size() != entries_.size())
      throw std::invalid_argument("VectorClock::join: length mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (other.entries_[i] > entries_[i]) entries_[i] = other.entries_[i];
  }

  friend bool operator==(const VectorClock&, const VectorClock&) = default;

  const std::vector<std::uint64_t>& entries() const { return entries_; }
  std::vector<std::uint64_t>& entries() { return entries_; }

 private:
  std::vector<std::uint64_t> entries_;
};

/// Strict happens-before: a <= b pointwise and a != b.
inline bool happens_before(const VectorClock& a, const VectorClock& b) {
  if (a.size() != b.size()) throw std::invalid_argument("happens_before: length mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries()[i] > b.entries()[i]) return false;
    if (a.entries()[i] < b.entries()[i]) strict = true;
  }
  return strict;
}

inline bool concurrent(const VectorClock& a, const VectorClock& b) {
  return !happens_before(a, b) && !happens_before(b, a) && !(a == b);
}

}  // namespace rawset
