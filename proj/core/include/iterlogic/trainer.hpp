#pragma once

#include <string>
#include <vector>

#include "iterlogic/config.hpp"
#include "iterlogic/grounding.hpp"
#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/losses.hpp"
#include "iterlogic/model.hpp"
#include "iterlogic/rules.hpp"

namespace iterlogic {

struct EpochStats {
  std::uint32_t epoch = 0;
  double logistic = 0.0;
  double dc = 0.0;
  double rc = 0.0;
  double reg = 0.0;
  double total = 0.0;
  std::size_t candidates = 0;       // pool size after the epoch
  std::size_t promoted = 0;         // promoted this epoch
  std::size_t promoted_total = 0;   // cumulative
  std::size_t kg_size = 0;
};

struct TrainResult {
  EmbeddingModel model;
  KnowledgeGraph kg;                   // input graph plus promoted conclusions
  std::vector<EpochStats> log;
  std::vector<Triple> accepted;        // cumulative promoted conclusions
  ConclusionSet remaining_candidates;
};

// Candidates whose probability reaches the threshold are returned and
// removed from the pool. Triples already present in the graph are never
// returned (they are dropped from the pool instead).
std::vector<Triple> filter_conclusions(const EmbeddingModel& model, ConclusionSet& pool,
                                       const KnowledgeGraph& kg, double threshold);

// Top-n variant: per rule, promotes the round(|C_f| * c_f) highest-scoring
// candidates (score-descending, ties by triple id).
std::vector<Triple> filter_conclusions_top_n(const EmbeddingModel& model,
                                             ConclusionSet& pool,
                                             const KnowledgeGraph& kg,
                                             const std::vector<HornRule>& rules);

// Called after each epoch's promotion step (progress reporting,
// score tracing). The model and pool reflect the state entering the next
// epoch.
using EpochCallback =
    std::function<void(const EpochStats&, const EmbeddingModel&, const ConclusionSet&)>;

// The iterative training loop:
//   for n = 1..N:
//     re-ground the rules when n is a multiple of floor(N/M) (with
//     iterative learning off, only the first scheduled grounding runs)
//     one epoch of minibatch updates of the joint objective
//     promote candidates that pass the acceptance threshold into the KG
// An empty rule list degrades to plain base-model training. Promoted
// conclusions participate as ordinary positive triples afterwards.
//
// checkpoint_dir, when non-empty, receives model_epoch<n>.ckpt files every
// config.checkpoint_every epochs.
TrainResult run_training(const KnowledgeGraph& kg, const std::vector<HornRule>& rules,
                         const TrainingConfig& config,
                         const std::string& checkpoint_dir = "",
                         const EpochCallback& on_epoch = {});

// Line-delimited per-epoch records (CSV with header), byte-stable for a
// fixed run.
void save_epoch_log(const std::vector<EpochStats>& log, const std::string& path);

}  // namespace iterlogic
