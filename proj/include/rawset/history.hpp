#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rawset/core.hpp"

namespace rawset {

/// One executed operation with its causal position. The clock entry for
/// replica r counts the operations by r in this event's causal past,
/// including the event itself, so happens_before on clocks is exactly the
/// causal order of the run.
struct Event {
  OpKind op = OpKind::Add;
  Element e = 0;
  ReplicaId origin = 0;
  VectorClock clock;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Append-only record of a run. Only the partial order matters; the list
/// order is whatever the run produced.
struct History {
  std::vector<Event> events;

  void append(OpKind op, Element e, ReplicaId origin, const VectorClock& clock) {
    events.push_back(Event{op, e, origin, clock});
  }

  friend bool operator==(const History&, const History&) = default;
};

/// Declarative membership: e is in the set iff some add(e) has no remove(e)
/// after it, and every removeWins(e) has some add(e) after it. Concurrent
/// removes lose to an add; a removeWins beats every add except those issued
/// causally after it.
bool member(const History& h, Element e);

/// All members, sorted. Considers every element that was ever added.
std::vector<Element> contents(const History& h);

/// One event per line: kind element origin c0,c1,...,cn-1
std::string to_text(const History& h);

/// Inverse of to_text. Throws std::runtime_error naming the bad line.
History history_from_text(std::string_view text);

}  // namespace rawset
