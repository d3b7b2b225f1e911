#pragma once

#include <span>
#include <string>
#include <vector>

#include "iterlogic/config.hpp"
#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/model.hpp"
#include "iterlogic/rules.hpp"
#include "iterlogic/trainer.hpp"

namespace iterlogic {

// Ranks are >= 1. Ties get the mean rank of the tied block, so ranks may
// be fractional (e.g. 2.5 for a two-way tie at positions 2 and 3).
struct RankResult {
  Triple triple;
  double head_rank = 0.0;
  double tail_rank = 0.0;
};

// Scores every head (and tail) substitution of the test triple. In the
// filtered setting a corrupted triple present in the filter graph is
// excluded from the ranking unless it is the test triple itself.
RankResult rank_entities(const EmbeddingModel& model, const KnowledgeGraph& filter,
                         const Triple& test, bool filtered = true);

struct Metrics {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t triples = 0;
};

// MRR and Hits@{1,3,10} averaged over head and tail replacement for every
// test triple. Read-only; parallel over test triples when workers > 1
// (results are identical either way).
Metrics evaluate(const EmbeddingModel& model, const KnowledgeGraph& filter,
                 std::span<const Triple> test, bool filtered = true,
                 unsigned workers = 1);

// Re-filters the rule set at each confidence threshold, retrains from
// scratch and evaluates. Rows come back in the given threshold order.
struct SweepRow {
  double threshold = 0.0;
  std::size_t rules_used = 0;
  Metrics metrics;
};

std::vector<SweepRow> confidence_sweep(const KnowledgeGraph& train,
                                       const KnowledgeGraph& filter,
                                       std::span<const Triple> test,
                                       const std::vector<HornRule>& rules,
                                       const TrainingConfig& config,
                                       std::span<const double> thresholds);

// metrics.csv rows: split,metric,value.
void save_metrics_csv(const Metrics& metrics, const std::string& split,
                      const std::string& path);
// sweep.csv rows: threshold,rules,mrr,hits1,hits3,hits10.
void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

std::string metrics_table(const Metrics& metrics, const std::string& split);

}  // namespace iterlogic
