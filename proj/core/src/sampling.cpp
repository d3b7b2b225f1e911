#include "iterlogic/sampling.hpp"

namespace iterlogic {

std::vector<Triple> sample_negatives(const KnowledgeGraph& kg, const Triple& positive,
                                     std::uint32_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> entity(0, kg.entity_count() - 1);
  std::uniform_int_distribution<int> side(0, 1);

  std::vector<Triple> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    Triple candidate = positive;
    for (int attempt = 0; attempt < 100; ++attempt) {
      candidate = positive;
      if (side(rng) == 0) {
        candidate.head = entity(rng);
      } else {
        candidate.tail = entity(rng);
      }
      if (!kg.contains(candidate)) break;
      // Saturated relation: after 100 tries the last draw is accepted.
    }
    out.push_back(candidate);
  }
  return out;
}

}  // namespace iterlogic
