#pragma once

#include <cstdint>
#include <vector>

#include "rawset/core.hpp"
#include "rawset/id_set.hpp"

namespace rawset {

/// Little-endian byte sink for the canonical state/message encodings.
/// The encodings exist to give metadata a precise size; nothing decodes them.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::size_t size() const { return buf_.size(); }
  const std::vector<std::uint8_t>& bytes() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

inline void encode_unique_id(ByteWriter& w, const UniqueId& id) {
  w.u64(id.t);
  w.u16(id.r);
}

inline void encode_version_vector(ByteWriter& w, const VersionVector& v) {
  w.u16(static_cast<std::uint16_t>(v.size()));
  for (auto e : v.entries()) w.u64(e);
}

/// u32 id count + ids in sorted order.
inline void encode_id_block(ByteWriter& w, const IdSet& ids) {
  w.u32(static_cast<std::uint32_t>(ids.size()));
  for (const auto& id : ids) encode_unique_id(w, id);
}

template <typename IdContainer>
inline void encode_sorted_ids(ByteWriter& w, const IdContainer& ids) {
  std::vector<UniqueId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  w.u32(static_cast<std::uint32_t>(sorted.size()));
  for (const auto& id : sorted) encode_unique_id(w, id);
}

/// u32 entry count, then per entry (ascending element): u64 element,
/// u32 id count, ids in sorted order.
inline void encode_id_map(ByteWriter& w, const IdMap& m) {
  std::vector<Element> keys;
  keys.reserve(m.size());
  for (const auto& [e, ids] : m) keys.push_back(e);
  std::sort(keys.begin(), keys.end());
  w.u32(static_cast<std::uint32_t>(keys.size()));
  for (Element e : keys) {
    w.u64(e);
    encode_id_block(w, m.at(e));
  }
}

}  // namespace rawset
