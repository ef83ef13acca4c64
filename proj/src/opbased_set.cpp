#include "rawset/opbased_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace rawset {

void OpMessage::encode(ByteWriter& w) const {
  w.u8(static_cast<std::uint8_t>(kind));
  w.u64(e);
  if (id) encode_unique_id(w, *id);
  encode_id_block(w, observed);
}

std::size_t OpMessage::encoded_bytes() const {
  ByteWriter w;
  encode(w);
  return w.size();
}

OpMessage OpBasedSet::prepare_add(Element e, ReplicaId r, VersionVector& idgen) const {
  return OpMessage{OpKind::Add, e, fresh_id(r, idgen), ids_at(removes_, e)};
}

std::optional<OpMessage> OpBasedSet::prepare_remove(Element e) const {
  if (!lookup(e)) return std::nullopt;
  return OpMessage{OpKind::Remove, e, std::nullopt, ids_at(adds_, e)};
}

OpMessage OpBasedSet::prepare_remove_wins(Element e, ReplicaId r, VersionVector& idgen) const {
  return OpMessage{OpKind::RemoveWins, e, fresh_id(r, idgen), IdSet{}};
}

void OpBasedSet::effect(const OpMessage& m) {
  for (const auto& id : m.observed)
    if (!seen_.covers(id))
      throw std::logic_error("OpBasedSet::effect: observed tag delivered out of causal order");
  if (m.id) {
    if (seen_.covers(*m.id))
      throw std::logic_error("OpBasedSet::effect: duplicate or out-of-order tag delivery");
    seen_.observe(*m.id);
  }

  // Every deletion below touches only tags the message's source had already
  // delivered, so under causal delivery each tag is inserted before any
  // message that deletes it and concurrent effects commute: the final maps
  // do not depend on the interleaving of concurrent deliveries. Add tags are
  // always kept — a live remove-wins tag masks them through lookup instead
  // of discarding them, so they resurface if a later add cancels that tag.
  switch (m.kind) {
    case OpKind::Add: {
      auto it = removes_.find(m.e);
      if (it != removes_.end()) {
        it->second.subtract(m.observed);
        if (it->second.empty()) removes_.erase(it);
      }
      adds_[m.e].insert(*m.id);
      break;
    }
    case OpKind::Remove: {
      auto it = adds_.find(m.e);
      if (it != adds_.end()) {
        it->second.subtract(m.observed);
        if (it->second.empty()) adds_.erase(it);
      }
      break;
    }
    case OpKind::RemoveWins: {
      removes_[m.e].insert(*m.id);
      break;
    }
  }
}

std::vector<Element> OpBasedSet::live_elements() const {
  std::vector<Element> out;
  for (const auto& [e, ids] : adds_)
    if (removes_.find(e) == removes_.end()) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t OpBasedSet::live_count() const {
  std::size_t n = 0;
  for (const auto& [e, ids] : adds_)
    if (removes_.find(e) == removes_.end()) ++n;
  return n;
}

void OpBasedSet::encode(ByteWriter& w) const {
  encode_id_map(w, removes_);
  encode_id_map(w, adds_);
}

std::size_t OpBasedSet::encoded_bytes() const {
  ByteWriter w;
  encode(w);
  return w.size();
}

bool state_equal(const OpBasedSet& x, const OpBasedSet& y) {
  return x.removes() == y.removes() && x.adds() == y.adds();
}

}  // namespace rawset
