#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "iterlogic/config.hpp"
#include "iterlogic/model.hpp"
#include "iterlogic/rules.hpp"
#include "iterlogic/sampling.hpp"

namespace iterlogic {

// The slice of the candidate conclusion pool used in one optimization
// step, grouped per rule. rule_index points into the rule list passed
// alongside.
struct ConclusionBatch {
  struct Group {
    std::size_t rule_index = 0;
    std::vector<Triple> triples;
  };
  std::vector<Group> groups;

  bool empty() const;
  std::size_t total() const;

  static ConclusionBatch from_set(const ConclusionSet& set);
};

struct LossBreakdown {
  double logistic = 0.0;
  double dc = 0.0;
  double rc = 0.0;
  double reg = 0.0;
  double total() const { return logistic + dc + rc + reg; }
};

// Mean softplus(-y * F) over the batch.
double logistic_loss(const EmbeddingModel& model, std::span<const LabeledExample> batch);

// sigmoid(F) per conclusion, grouping preserved.
std::vector<std::vector<double>> conclusion_scores(const EmbeddingModel& model,
                                                   const ConclusionBatch& batch);

// Deterministic-conclusion loss, averaged over non-empty groups:
// per group -(1/n) * sum (S_i - 0.5)^2. Range [-0.25, 0].
double dc_loss(std::span<const std::vector<double>> scores);

// Rule-confidence loss, averaged over non-empty groups:
// per group ((1/n) * sum S_i - c_f)^2. Range [0, 1].
double rc_loss(std::span<const std::vector<double>> scores,
               std::span<const double> confidences);

// Joint objective for one batch:
//   mean logistic over the labeled examples
//   + (1/|F'|) * sum over non-empty groups of (L_dc + L_rc)   (Iterlogic mode)
//   + mu * ||touched parameter rows||^2
// In AllPositive/Weighted mode the conclusions enter the logistic mean as
// y=+1 / soft-labeled examples instead of the dc/rc terms. The l2 term is
// lazy: only rows referenced by the batch are counted, so the analytic
// gradient is exactly the derivative of this function.
LossBreakdown total_objective(const EmbeddingModel& model,
                              std::span<const LabeledExample> batch,
                              const ConclusionBatch& conclusions,
                              std::span<const HornRule> rules,
                              const TrainingConfig& config);

// Row-sparse gradient: parameters in absent rows are zero.
struct SparseGrad {
  std::unordered_map<std::uint32_t, std::vector<double>> ent_re, ent_im, rel_re, rel_im;

  void clear();
  std::vector<double>& row(std::unordered_map<std::uint32_t, std::vector<double>>& m,
                           std::uint32_t id, std::uint32_t dim);
};

// Analytic gradient of total_objective with respect to every touched
// parameter. Returns the same loss breakdown as total_objective.
LossBreakdown gradients(const EmbeddingModel& model,
                        std::span<const LabeledExample> batch,
                        const ConclusionBatch& conclusions,
                        std::span<const HornRule> rules,
                        const TrainingConfig& config, SparseGrad& out);

// AdaGrad step over the sparse rows, then the non-negativity projection on
// entity rows when enabled. Accumulators start at 1e-8.
void apply_adagrad(EmbeddingModel& model, const SparseGrad& grad,
                   const TrainingConfig& config);

// Full-shape copy of a sparse gradient (for gradient checks).
struct DenseGrad {
  std::vector<double> entity_re, entity_im, relation_re, relation_im;
};
DenseGrad to_dense(const SparseGrad& grad, const EmbeddingModel& model);

}  // namespace iterlogic
