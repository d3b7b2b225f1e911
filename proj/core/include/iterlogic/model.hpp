#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "iterlogic/config.hpp"
#include "iterlogic/types.hpp"

namespace iterlogic {

// Complex-valued entity and relation embeddings plus the AdaGrad
// accumulators. Matrices are row-major count x dim. For the rotational
// scorer relation_re holds the phase angle and relation_im is unused.
struct EmbeddingModel {
  ScorerKind scorer = ScorerKind::Complex;
  std::uint32_t dim = 0;
  std::uint32_t entity_count = 0;
  std::uint32_t relation_count = 0;
  double rotate_margin = 12.0;

  std::vector<double> entity_re, entity_im;
  std::vector<double> relation_re, relation_im;
  std::vector<double> acc_entity_re, acc_entity_im;
  std::vector<double> acc_relation_re, acc_relation_im;

  static EmbeddingModel init(std::uint32_t entity_count, std::uint32_t relation_count,
                             const TrainingConfig& config, std::mt19937_64& rng);

  std::span<const double> ent_re(EntityId e) const { return {&entity_re[std::size_t(e) * dim], dim}; }
  std::span<const double> ent_im(EntityId e) const { return {&entity_im[std::size_t(e) * dim], dim}; }
  std::span<const double> rel_re(RelationId r) const { return {&relation_re[std::size_t(r) * dim], dim}; }
  std::span<const double> rel_im(RelationId r) const { return {&relation_im[std::size_t(r) * dim], dim}; }

  // Raw triple score. Bilinear scorer: Re(h^T diag(r) conj(t)).
  // Rotational scorer: margin - sum_i |h_i * r_i - t_i|.
  double score(const Triple& t) const;

  // sigmoid(score), clamped input, strictly inside (0, 1).
  double probability(const Triple& t) const;

  bool all_finite() const;

  // Binary checkpoint, round-trip exact (layout documented in the header
  // written to the file; includes the AdaGrad accumulators so training can
  // resume).
  void save(const std::string& path) const;
  static EmbeddingModel load(const std::string& path);
};

// Numerically safe sigmoid; input clamped to [-30, 30].
double stable_sigmoid(double x);
// log(1 + exp(x)) without overflow.
double softplus(double x);

}  // namespace iterlogic
