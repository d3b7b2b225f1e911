// Command-line front end: mine, ground, train, eval, pipeline, synth.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iterlogic/eval.hpp"
#include "iterlogic/grounding.hpp"
#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/mining.hpp"
#include "iterlogic/run_config.hpp"
#include "iterlogic/synth.hpp"
#include "iterlogic/text.hpp"
#include "iterlogic/trainer.hpp"

namespace fs = std::filesystem;
using namespace iterlogic;

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value, win over config and env
  bool ac = false;
  bool wc = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "key=value config file");
  cmd->add_option("--set", flags.overrides, "override a config key (key=value)")
      ->take_all();
  cmd->add_flag("--ac", flags.ac, "treat all conclusions as positive examples");
  cmd->add_flag("--wc", flags.wc, "use rule confidences as soft conclusion labels");
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) config = parse_run_config(flags.config_path);
  apply_env_overrides(config);
  for (const std::string& kv : flags.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    apply_config_line(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.ac && flags.wc) {
    throw std::invalid_argument("--ac and --wc are contradictory");
  }
  if (flags.ac) config.training.conclusion_mode = ConclusionMode::AllPositive;
  if (flags.wc) config.training.conclusion_mode = ConclusionMode::Weighted;
  return config;
}

void ensure_output_dir(const RunConfig& config) {
  fs::create_directories(config.output_dir);
}

std::vector<HornRule> obtain_rules(const RunConfig& config, const KnowledgeGraph& train,
                                   bool allow_mining) {
  if (!config.rules_path.empty()) {
    auto rules = parse_rules(config.rules_path, train.vocab());
    std::printf("loaded %zu rules from %s (mining skipped)\n", rules.size(),
                config.rules_path.c_str());
    return rules;
  }
  if (!allow_mining) {
    throw std::invalid_argument("no rules file configured (set rules=...)");
  }
  auto rules = dedupe_rules(mine_rules(train, config.mining));
  std::printf("mined %zu rules (min_confidence=%s, min_support=%llu)\n", rules.size(),
              format_double(config.mining.min_confidence).c_str(),
              (unsigned long long)config.mining.min_support);
  return rules;
}

int cmd_mine(const CommonFlags& flags) {
  RunConfig config = resolve_config(flags);
  config.validate_paths(false);
  ensure_output_dir(config);

  LoadReport report;
  KnowledgeGraph train = KnowledgeGraph::load_tsv(config.train_path, nullptr, true, &report);
  std::printf("train: %zu triples (%zu lines, %zu duplicates dropped), %u entities, %u relations\n",
              train.size(), report.lines_read, report.duplicates_dropped,
              train.entity_count(), train.relation_count());

  auto rules = dedupe_rules(mine_rules(train, config.mining));
  const std::string out = config.output_dir + "/rules.txt";
  serialize_rules(rules, train.vocab(), out);
  std::printf("mined %zu rules -> %s\n", rules.size(), out.c_str());
  return 0;
}

int cmd_ground(const CommonFlags& flags) {
  RunConfig config = resolve_config(flags);
  config.validate_paths(false);
  ensure_output_dir(config);

  KnowledgeGraph train = KnowledgeGraph::load_tsv(config.train_path, nullptr, true);
  auto rules = obtain_rules(config, train, /*allow_mining=*/true);
  ConclusionSet conclusions = ground_rules(train, rules, config.training.workers);

  const std::string out = config.output_dir + "/conclusions.tsv";
  FileWriter writer(out);
  const Vocabulary& vocab = train.vocab();
  for (const auto& group : conclusions.groups) {
    for (const Triple& t : group.triples) {
      writer.write(vocab.entity_name(t.head) + "\t" + vocab.relation_name(t.relation) +
                   "\t" + vocab.entity_name(t.tail) + "\t" +
                   std::to_string(group.rule_index) + "\n");
    }
  }
  writer.commit();
  std::printf("grounded %zu conclusions (%zu distinct) -> %s\n", conclusions.total(),
              conclusions.distinct().size(), out.c_str());
  return 0;
}

int run_train_stage(const RunConfig& config, const Dataset& data,
                    const std::vector<HornRule>& rules, TrainResult& result) {
  result = run_training(data.train, rules, config.training, config.output_dir);
  result.model.save(config.output_dir + "/model.ckpt");
  result.kg.save_tsv(config.output_dir + "/augmented_train.tsv");
  save_epoch_log(result.log, config.output_dir + "/epoch_log.csv");
  data.vocab->save(config.output_dir + "/entities.tsv", config.output_dir + "/relations.tsv");
  std::printf("trained %u epochs (%s): %zu conclusions promoted, graph %zu -> %zu triples\n",
              config.training.epochs, variant_name(config.training).c_str(),
              result.accepted.size(), data.train.size(), result.kg.size());
  return 0;
}

KnowledgeGraph build_filter(const Dataset& data) {
  KnowledgeGraph filter = data.train;
  filter.add_triples(data.valid);
  filter.add_triples(data.test);
  return filter;
}

int cmd_train(const CommonFlags& flags) {
  RunConfig config = resolve_config(flags);
  config.validate_paths(false);
  ensure_output_dir(config);

  Dataset data = load_dataset(config.train_path, config.valid_path, config.test_path);
  auto rules = obtain_rules(config, data.train, /*allow_mining=*/true);
  TrainResult result;
  return run_train_stage(config, data, rules, result);
}

int cmd_eval(const CommonFlags& flags, const std::string& checkpoint,
             const std::string& sweep_spec) {
  RunConfig config = resolve_config(flags);
  config.validate_paths(true);
  ensure_output_dir(config);

  Dataset data = load_dataset(config.train_path, config.valid_path, config.test_path);
  KnowledgeGraph filter = build_filter(data);

  if (!sweep_spec.empty()) {
    // lo:hi:step threshold sweep, retraining at each threshold.
    auto parts = split(sweep_spec, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("--sweep expects lo:hi:step");
    }
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad sweep range");
    std::vector<double> thresholds;
    for (double t = lo; t <= hi + 1e-12; t += step) thresholds.push_back(t);

    auto rules = obtain_rules(config, data.train, /*allow_mining=*/true);
    auto rows = confidence_sweep(data.train, filter, data.test, rules,
                                 config.training, thresholds);
    save_sweep_csv(rows, config.output_dir + "/sweep.csv");
    for (const SweepRow& row : rows) {
      std::printf("threshold %-5s rules %-5zu %s\n", format_double(row.threshold).c_str(),
                  row.rules_used, metrics_table(row.metrics, "test").c_str());
    }
    return 0;
  }

  const std::string path =
      checkpoint.empty() ? config.output_dir + "/model.ckpt" : checkpoint;
  EmbeddingModel model = EmbeddingModel::load(path);
  Metrics metrics = evaluate(model, filter, data.test, !config.eval_raw,
                             config.training.workers);
  save_metrics_csv(metrics, "test", config.output_dir + "/metrics.csv");
  std::printf("%s\n", metrics_table(metrics, "test").c_str());
  return 0;
}

int cmd_pipeline(const CommonFlags& flags) {
  RunConfig config = resolve_config(flags);
  config.validate_paths(true);
  ensure_output_dir(config);

  Dataset data = load_dataset(config.train_path, config.valid_path, config.test_path);
  std::printf("train %zu / valid %zu / test %zu triples, %u entities, %u relations\n",
              data.train.size(), data.valid.size(), data.test.size(),
              data.train.entity_count(), data.train.relation_count());

  auto rules = obtain_rules(config, data.train, /*allow_mining=*/true);
  if (config.rules_path.empty()) {
    serialize_rules(rules, data.train.vocab(), config.output_dir + "/rules.txt");
  }

  TrainResult result;
  run_train_stage(config, data, rules, result);

  KnowledgeGraph filter = build_filter(data);
  Metrics metrics = evaluate(result.model, filter, data.test, !config.eval_raw,
                             config.training.workers);
  save_metrics_csv(metrics, "test", config.output_dir + "/metrics.csv");
  std::printf("%s\n", metrics_table(metrics, "test").c_str());
  if (!data.valid.empty()) {
    Metrics vm = evaluate(result.model, filter, data.valid, !config.eval_raw,
                          config.training.workers);
    std::printf("%s\n", metrics_table(vm, "valid").c_str());
  }
  return 0;
}

int cmd_synth(const std::string& out_dir, std::uint32_t entities, std::uint32_t clusters,
              const std::vector<double>& confidences, std::uint64_t seed) {
  SynthConfig config;
  config.entities = entities;
  config.clusters = clusters;
  config.seed = seed;
  if (!confidences.empty()) {
    config.rules.clear();
    for (double c : confidences) {
      SynthRuleSpec spec;
      spec.confidence = c;
      // Candidate pool split so the true fraction matches the confidence.
      spec.true_candidates = std::uint32_t(std::llround(100.0 * c));
      spec.false_candidates = 100 - spec.true_candidates;
      config.rules.push_back(spec);
    }
  }
  fs::create_directories(out_dir);
  SynthDataset data = generate_synthetic(config);
  save_synthetic(data, out_dir);
  std::printf("synthetic dataset: %zu train, %zu valid, %zu test, %zu rules -> %s\n",
              data.train.size(), data.valid.size(), data.test.size(),
              data.rules.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft-rule guided knowledge graph embedding"};
  app.require_subcommand(1);

  CommonFlags mine_flags, ground_flags, train_flags, eval_flags, pipeline_flags;
  std::string eval_checkpoint, eval_sweep;

  add_common(app.add_subcommand("mine", "mine Horn rules from the train split"), mine_flags);
  add_common(app.add_subcommand("ground", "one forward-chaining cycle"), ground_flags);
  add_common(app.add_subcommand("train", "joint training with rule conclusions"), train_flags);
  auto* eval_cmd = app.add_subcommand("eval", "filtered link-prediction metrics");
  add_common(eval_cmd, eval_flags);
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "model checkpoint to evaluate");
  eval_cmd->add_option("--sweep", eval_sweep, "confidence sweep lo:hi:step (retrains)");
  add_common(app.add_subcommand("pipeline", "mine -> ground -> train -> eval"), pipeline_flags);

  auto* synth_cmd = app.add_subcommand("synth", "generate a planted-rule dataset");
  std::string synth_out = "synth_out";
  std::uint32_t synth_entities = 200, synth_clusters = 10;
  std::uint64_t synth_seed = 7;
  std::vector<double> synth_confidences;
  synth_cmd->add_option("-o,--out", synth_out, "output directory");
  synth_cmd->add_option("--entities", synth_entities, "entity count");
  synth_cmd->add_option("--clusters", synth_clusters, "cluster count");
  synth_cmd->add_option("--confidences", synth_confidences, "planted rule confidences")
      ->take_all();
  synth_cmd->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (stage == "mine") return cmd_mine(mine_flags);
    if (stage == "ground") return cmd_ground(ground_flags);
    if (stage == "train") return cmd_train(train_flags);
    if (stage == "eval") return cmd_eval(eval_flags, eval_checkpoint, eval_sweep);
    if (stage == "pipeline") return cmd_pipeline(pipeline_flags);
    if (stage == "synth") {
      return cmd_synth(synth_out, synth_entities, synth_clusters, synth_confidences,
                       synth_seed);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[%s] error: %s\n", stage.c_str(), e.what());
    return 1;
  }
  return 1;
}
