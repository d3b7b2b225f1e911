#include "iterlogic/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "iterlogic/sampling.hpp"
#include "iterlogic/text.hpp"

namespace iterlogic {

std::vector<Triple> filter_conclusions(const EmbeddingModel& model, ConclusionSet& pool,
                                       const KnowledgeGraph& kg, double threshold) {
  std::unordered_set<std::uint64_t> promoted_keys;
  std::vector<Triple> promoted;
  for (auto& group : pool.groups) {
    std::vector<Triple> keep;
    keep.reserve(group.triples.size());
    for (const Triple& t : group.triples) {
      if (kg.contains(t)) continue;  // already a fact, drop silently
      if (model.probability(t) >= threshold) {
        if (promoted_keys.insert(pack_triple(t)).second) promoted.push_back(t);
        continue;
      }
      keep.push_back(t);
    }
    group.triples = std::move(keep);
  }
  return promoted;
}

std::vector<Triple> filter_conclusions_top_n(const EmbeddingModel& model,
                                             ConclusionSet& pool,
                                             const KnowledgeGraph& kg,
                                             const std::vector<HornRule>& rules) {
  std::unordered_set<std::uint64_t> promoted_keys;
  std::vector<Triple> promoted;
  for (auto& group : pool.groups) {
    std::erase_if(group.triples, [&](const Triple& t) { return kg.contains(t); });
    if (group.triples.empty()) continue;
    const double c = rules[group.rule_index].confidence;
    const auto take = std::size_t(std::llround(double(group.triples.size()) * c));
    if (take == 0) continue;

    std::vector<std::pair<double, Triple>> scored;
    scored.reserve(group.triples.size());
    for (const Triple& t : group.triples) scored.emplace_back(model.probability(t), t);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return pack_triple(a.second) < pack_triple(b.second);
    });
    for (std::size_t i = 0; i < std::min(take, scored.size()); ++i) {
      if (promoted_keys.insert(pack_triple(scored[i].second)).second) {
        promoted.push_back(scored[i].second);
      }
    }
  }
  for (const Triple& t : promoted) pool.erase(t);
  return promoted;
}

namespace {

struct FlatCandidate {
  std::size_t group = 0;
  Triple triple;
};

ConclusionBatch slice_to_batch(const ConclusionSet& pool,
                               std::span<const FlatCandidate> slice) {
  ConclusionBatch batch;
  if (slice.empty()) return batch;
  std::vector<std::vector<Triple>> per_group(pool.groups.size());
  for (const FlatCandidate& c : slice) per_group[c.group].push_back(c.triple);
  for (std::size_t g = 0; g < per_group.size(); ++g) {
    if (per_group[g].empty()) continue;
    batch.groups.push_back({pool.groups[g].rule_index, std::move(per_group[g])});
  }
  return batch;
}

struct StepPlan {
  std::size_t pos_begin = 0, pos_end = 0;    // into shuffled triple order
  std::size_t cand_begin = 0, cand_end = 0;  // into shuffled candidate order
};

std::vector<LabeledExample> build_examples(const KnowledgeGraph& kg,
                                           const std::vector<Triple>& triples,
                                           std::span<const std::uint32_t> order,
                                           const StepPlan& plan,
                                           const TrainingConfig& cfg,
                                           std::mt19937_64& rng) {
  std::vector<LabeledExample> examples;
  examples.reserve((plan.pos_end - plan.pos_begin) * (1 + cfg.negatives_per_positive));
  for (std::size_t i = plan.pos_begin; i < plan.pos_end; ++i) {
    const Triple& pos = triples[order[i]];
    examples.push_back({pos, +1});
    for (const Triple& neg : sample_negatives(kg, pos, cfg.negatives_per_positive, rng)) {
      examples.push_back({neg, -1});
    }
  }
  return examples;
}

struct EpochLoss {
  LossBreakdown sum;
  std::size_t steps = 0;
  void add(const LossBreakdown& l) {
    sum.logistic += l.logistic;
    sum.dc += l.dc;
    sum.rc += l.rc;
    sum.reg += l.reg;
    ++steps;
  }
  LossBreakdown mean() const {
    if (steps == 0) return {};
    return {sum.logistic / double(steps), sum.dc / double(steps),
            sum.rc / double(steps), sum.reg / double(steps)};
  }
};

EpochLoss run_epoch(const KnowledgeGraph& kg, const std::vector<HornRule>& rules,
                    const ConclusionSet& pool, EmbeddingModel& model,
                    const TrainingConfig& cfg, std::mt19937_64& rng) {
  const auto& triples = kg.triples();
  std::vector<std::uint32_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<FlatCandidate> candidates;
  candidates.reserve(pool.total());
  for (std::size_t g = 0; g < pool.groups.size(); ++g) {
    for (const Triple& t : pool.groups[g].triples) candidates.push_back({g, t});
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);

  const std::size_t steps =
      std::max<std::size_t>(1, (triples.size() + cfg.batch_size - 1) / cfg.batch_size);

  // Every step gets one triple batch and a proportional candidate slice,
  // so both sets are covered exactly once per epoch.
  std::vector<StepPlan> plan(steps);
  const std::size_t cand_base = candidates.size() / steps;
  const std::size_t cand_rem = candidates.size() % steps;
  std::size_t cpos = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    plan[s].pos_begin = std::min(triples.size(), s * cfg.batch_size);
    plan[s].pos_end = std::min(triples.size(), (s + 1) * cfg.batch_size);
    plan[s].cand_begin = cpos;
    cpos += cand_base + (s < cand_rem ? 1 : 0);
    plan[s].cand_end = cpos;
  }

  EpochLoss epoch;
  if (cfg.deterministic || cfg.workers <= 1) {
    SparseGrad grad;
    for (const StepPlan& p : plan) {
      auto examples = build_examples(kg, triples, order, p, cfg, rng);
      auto batch = slice_to_batch(
          pool, std::span(candidates).subspan(p.cand_begin, p.cand_end - p.cand_begin));
      epoch.add(gradients(model, examples, batch, rules, cfg, grad));
      apply_adagrad(model, grad, cfg);
    }
    return epoch;
  }

  // Throughput mode: steps are distributed over workers which apply
  // unsynchronized sparse updates. Races are accepted; results are not
  // deterministic.
  std::vector<EpochLoss> worker_loss(cfg.workers);
  std::vector<std::thread> threads;
  threads.reserve(cfg.workers);
  for (std::uint32_t w = 0; w < cfg.workers; ++w) {
    threads.emplace_back([&, w] {
      std::mt19937_64 worker_rng(cfg.seed ^ (0x9e3779b97f4a7c15ull * (w + 1)));
      SparseGrad grad;
      for (std::size_t s = w; s < plan.size(); s += cfg.workers) {
        auto examples = build_examples(kg, triples, order, plan[s], cfg, worker_rng);
        auto batch = slice_to_batch(
            pool, std::span(candidates)
                      .subspan(plan[s].cand_begin, plan[s].cand_end - plan[s].cand_begin));
        worker_loss[w].add(gradients(model, examples, batch, rules, cfg, grad));
        apply_adagrad(model, grad, cfg);
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const EpochLoss& wl : worker_loss) {
    epoch.sum.logistic += wl.sum.logistic;
    epoch.sum.dc += wl.sum.dc;
    epoch.sum.rc += wl.sum.rc;
    epoch.sum.reg += wl.sum.reg;
    epoch.steps += wl.steps;
  }
  return epoch;
}

}  // namespace

TrainResult run_training(const KnowledgeGraph& kg, const std::vector<HornRule>& rules,
                         const TrainingConfig& config, const std::string& checkpoint_dir) {
  config.validate();
  for (const HornRule& rule : rules) rule.validate(kg.relation_count());

  std::mt19937_64 rng(config.seed);
  TrainResult result{EmbeddingModel::init(kg.entity_count(), kg.relation_count(),
                                          config, rng),
                     kg,
                     {},
                     {},
                     {}};
  KnowledgeGraph& graph = result.kg;
  ConclusionSet& pool = result.remaining_candidates;

  const std::uint32_t interval =
      std::max<std::uint32_t>(1, config.epochs / config.iterative_steps);
  bool grounded_once = false;

  for (std::uint32_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (!rules.empty() && epoch % interval == 0 &&
        (config.iterative_learning || !grounded_once)) {
      pool = ground_rules(graph, rules, config.workers);
      grounded_once = true;
    }

    EpochLoss loss = run_epoch(graph, rules, pool, result.model, config, rng);

    std::vector<Triple> promoted;
    if (config.iterative_learning) {
      if (config.top_n_promotion) {
        if (epoch % interval == 0) {
          promoted = filter_conclusions_top_n(result.model, pool, graph, rules);
        }
      } else {
        promoted = filter_conclusions(result.model, pool, graph,
                                      config.acceptance_threshold);
      }
    }
    graph.add_triples(promoted);
    result.accepted.insert(result.accepted.end(), promoted.begin(), promoted.end());

    LossBreakdown mean = loss.mean();
    result.log.push_back({epoch, mean.logistic, mean.dc, mean.rc, mean.reg,
                          mean.total(), pool.total(), promoted.size(),
                          result.accepted.size(), graph.size()});

    if (!result.model.all_finite()) {
      throw std::runtime_error("non-finite model parameters after epoch " +
                               std::to_string(epoch));
    }
    if (config.checkpoint_every > 0 && !checkpoint_dir.empty() &&
        epoch % config.checkpoint_every == 0) {
      result.model.save(checkpoint_dir + "/model_epoch" + std::to_string(epoch) +
                        ".ckpt");
    }
  }
  return result;
}

void save_epoch_log(const std::vector<EpochStats>& log, const std::string& path) {
  FileWriter out(path);
  out.write("epoch,logistic,dc,rc,reg,total,candidates,promoted,promoted_total,kg_size\n");
  for (const EpochStats& e : log) {
    out.write(std::to_string(e.epoch) + "," + format_double(e.logistic) + "," +
              format_double(e.dc) + "," + format_double(e.rc) + "," +
              format_double(e.reg) + "," + format_double(e.total) + "," +
              std::to_string(e.candidates) + "," + std::to_string(e.promoted) + "," +
              std::to_string(e.promoted_total) + "," + std::to_string(e.kg_size) + "\n");
  }
  out.commit();
}

}  // namespace iterlogic
