#pragma once

#include <cstdint>
#include <functional>

namespace iterlogic {

// Dense ids assigned at ingestion, contiguous from 0.
using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

// Packed-key limits. Large enough for the usual benchmark graphs
// (FB15K: 14,951 entities / 1,345 relations; DB100K: 99,604 / 470).
inline constexpr std::uint64_t kMaxEntities = 1ull << 24;
inline constexpr std::uint64_t kMaxRelations = 1ull << 16;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// (head, relation, tail) in one 64-bit key: 24 + 16 + 24 bits.
inline std::uint64_t pack_triple(const Triple& t) {
  return (std::uint64_t(t.head) << 40) | (std::uint64_t(t.relation) << 24) |
         std::uint64_t(t.tail);
}

inline Triple unpack_triple(std::uint64_t key) {
  return Triple{EntityId(key >> 40), RelationId((key >> 24) & 0xffff),
                EntityId(key & 0xffffff)};
}

inline std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t(a) << 32) | std::uint64_t(b);
}

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    return std::hash<std::uint64_t>{}(pack_triple(t));
  }
};

}  // namespace iterlogic
