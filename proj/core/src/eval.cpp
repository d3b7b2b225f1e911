#include "iterlogic/eval.hpp"

#include <algorithm>
#include <thread>

#include "iterlogic/text.hpp"

namespace iterlogic {

namespace {

// Mean rank of the tied block: strictly-better count + (ties + 1) / 2,
// where the tie count includes the test entity itself.
double one_side_rank(const EmbeddingModel& model, const KnowledgeGraph& filter,
                     const Triple& test, bool replace_head, bool filtered) {
  const double s_true = model.score(test);
  const EntityId true_entity = replace_head ? test.head : test.tail;
  std::size_t greater = 0;
  std::size_t ties = 0;
  for (EntityId e = 0; e < filter.entity_count(); ++e) {
    Triple cand = test;
    (replace_head ? cand.head : cand.tail) = e;
    if (filtered && e != true_entity && filter.contains(cand)) continue;
    const double s = e == true_entity ? s_true : model.score(cand);
    if (s > s_true) {
      ++greater;
    } else if (s == s_true) {
      ++ties;
    }
  }
  return double(greater) + double(ties + 1) / 2.0;
}

}  // namespace

RankResult rank_entities(const EmbeddingModel& model, const KnowledgeGraph& filter,
                         const Triple& test, bool filtered) {
  return RankResult{test, one_side_rank(model, filter, test, true, filtered),
                    one_side_rank(model, filter, test, false, filtered)};
}

Metrics evaluate(const EmbeddingModel& model, const KnowledgeGraph& filter,
                 std::span<const Triple> test, bool filtered, unsigned workers) {
  std::vector<RankResult> results(test.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      results[i] = rank_entities(model, filter, test[i], filtered);
    }
  };

  if (workers > 1 && test.size() > 1) {
    const std::size_t n_jobs = std::min<std::size_t>(workers, test.size());
    std::vector<std::thread> threads;
    threads.reserve(n_jobs);
    const std::size_t chunk = (test.size() + n_jobs - 1) / n_jobs;
    for (std::size_t w = 0; w < n_jobs; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(test.size(), begin + chunk);
      threads.emplace_back(run_range, begin, end);
    }
    for (auto& t : threads) t.join();
  } else {
    run_range(0, test.size());
  }

  Metrics m;
  m.triples = test.size();
  for (const RankResult& r : results) {
    for (double rank : {r.head_rank, r.tail_rank}) {
      m.mrr += 1.0 / rank;
      m.hits1 += rank <= 1.0 ? 1.0 : 0.0;
      m.hits3 += rank <= 3.0 ? 1.0 : 0.0;
      m.hits10 += rank <= 10.0 ? 1.0 : 0.0;
    }
  }
  const double denom = 2.0 * double(test.size());
  if (denom > 0) {
    m.mrr /= denom;
    m.hits1 /= denom;
    m.hits3 /= denom;
    m.hits10 /= denom;
  }
  return m;
}

std::vector<SweepRow> confidence_sweep(const KnowledgeGraph& train,
                                       const KnowledgeGraph& filter,
                                       std::span<const Triple> test,
                                       const std::vector<HornRule>& rules,
                                       const TrainingConfig& config,
                                       std::span<const double> thresholds) {
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (double threshold : thresholds) {
    std::vector<HornRule> used;
    for (const HornRule& r : rules) {
      if (r.confidence >= threshold) used.push_back(r);
    }
    TrainResult result = run_training(train, used, config);
    SweepRow row;
    row.threshold = threshold;
    row.rules_used = used.size();
    row.metrics = evaluate(result.model, filter, test, true, config.workers);
    rows.push_back(row);
  }
  return rows;
}

void save_metrics_csv(const Metrics& metrics, const std::string& split,
                      const std::string& path) {
  FileWriter out(path);
  out.write("split,metric,value\n");
  out.write(split + ",mrr," + format_double(metrics.mrr) + "\n");
  out.write(split + ",hits@1," + format_double(metrics.hits1) + "\n");
  out.write(split + ",hits@3," + format_double(metrics.hits3) + "\n");
  out.write(split + ",hits@10," + format_double(metrics.hits10) + "\n");
  out.commit();
}

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  FileWriter out(path);
  out.write("threshold,rules,mrr,hits@1,hits@3,hits@10\n");
  for (const SweepRow& r : rows) {
    out.write(format_double(r.threshold) + "," + std::to_string(r.rules_used) + "," +
              format_double(r.metrics.mrr) + "," + format_double(r.metrics.hits1) +
              "," + format_double(r.metrics.hits3) + "," +
              format_double(r.metrics.hits10) + "\n");
  }
  out.commit();
}

std::string metrics_table(const Metrics& metrics, const std::string& split) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-8s  MRR %.4f  H@1 %.4f  H@3 %.4f  H@10 %.4f  (%zu triples)",
                split.c_str(), metrics.mrr, metrics.hits1, metrics.hits3,
                metrics.hits10, metrics.triples);
  return buf;
}

}  // namespace iterlogic
