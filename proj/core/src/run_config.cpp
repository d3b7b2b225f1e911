#include "iterlogic/run_config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "iterlogic/text.hpp"

namespace iterlogic {

namespace {

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(v) + "'");
}

}  // namespace

void apply_config_line(RunConfig& c, const std::string& key, const std::string& value) {
  // Paths and artifacts.
  if (key == "train") { c.train_path = value; return; }
  if (key == "valid") { c.valid_path = value; return; }
  if (key == "test") { c.test_path = value; return; }
  if (key == "rules") { c.rules_path = value; return; }
  if (key == "output_dir") { c.output_dir = value; return; }
  // Mining.
  if (key == "max_rule_length") { c.mining.max_length = int(parse_uint(value)); return; }
  if (key == "min_confidence") { c.mining.min_confidence = parse_double(value); return; }
  if (key == "min_support") { c.mining.min_support = parse_uint(value); return; }
  if (key == "confidence_kind") {
    if (value == "standard") c.mining.confidence_kind = ConfidenceKind::Standard;
    else if (value == "pca") c.mining.confidence_kind = ConfidenceKind::Pca;
    else throw std::invalid_argument("confidence_kind must be standard or pca");
    return;
  }
  if (key == "pca_object_direction") { c.mining.pca_object_direction = parse_bool(value); return; }
  // Training.
  if (key == "dim") { c.training.dim = std::uint32_t(parse_uint(value)); return; }
  if (key == "learning_rate") { c.training.learning_rate = parse_double(value); return; }
  if (key == "negatives") { c.training.negatives_per_positive = std::uint32_t(parse_uint(value)); return; }
  if (key == "l2") { c.training.l2_coefficient = parse_double(value); return; }
  if (key == "nne") { c.training.nne_enabled = parse_bool(value); return; }
  if (key == "dc_loss") { c.training.dc_loss_enabled = parse_bool(value); return; }
  if (key == "rc_loss") { c.training.rc_loss_enabled = parse_bool(value); return; }
  if (key == "conclusion_mode") {
    if (value == "iterlogic") c.training.conclusion_mode = ConclusionMode::Iterlogic;
    else if (value == "ac") c.training.conclusion_mode = ConclusionMode::AllPositive;
    else if (value == "wc") c.training.conclusion_mode = ConclusionMode::Weighted;
    else throw std::invalid_argument("conclusion_mode must be iterlogic, ac or wc");
    return;
  }
  if (key == "epochs") { c.training.epochs = std::uint32_t(parse_uint(value)); return; }
  if (key == "iterative_steps") { c.training.iterative_steps = std::uint32_t(parse_uint(value)); return; }
  if (key == "iterative_learning") { c.training.iterative_learning = parse_bool(value); return; }
  if (key == "top_n_promotion") { c.training.top_n_promotion = parse_bool(value); return; }
  if (key == "acceptance_threshold") { c.training.acceptance_threshold = parse_double(value); return; }
  if (key == "batch_size") { c.training.batch_size = std::uint32_t(parse_uint(value)); return; }
  if (key == "seed") { c.training.seed = parse_uint(value); return; }
  if (key == "scorer") {
    if (value == "complex") c.training.scorer = ScorerKind::Complex;
    else if (value == "rotate") c.training.scorer = ScorerKind::Rotate;
    else throw std::invalid_argument("scorer must be complex or rotate");
    return;
  }
  if (key == "rotate_margin") { c.training.rotate_margin = parse_double(value); return; }
  if (key == "workers") { c.training.workers = std::uint32_t(parse_uint(value)); return; }
  if (key == "deterministic") { c.training.deterministic = parse_bool(value); return; }
  if (key == "checkpoint_every") { c.training.checkpoint_every = std::uint32_t(parse_uint(value)); return; }
  // Evaluation.
  if (key == "eval_raw") { c.eval_raw = parse_bool(value); return; }

  throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    try {
      apply_config_line(config, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return config;
}

void apply_env_overrides(RunConfig& config) {
  if (const char* dir = std::getenv("ITERLOGIC_OUT_DIR")) {
    config.output_dir = dir;
  }
  if (const char* workers = std::getenv("ITERLOGIC_WORKERS")) {
    config.training.workers = std::uint32_t(parse_uint(workers));
  }
}

void RunConfig::validate_paths(bool need_valid_test) const {
  namespace fs = std::filesystem;
  auto require = [](const std::string& path, const char* what) {
    if (path.empty()) {
      throw std::invalid_argument(std::string(what) + " path not configured");
    }
    if (!fs::exists(path)) {
      throw std::invalid_argument(std::string(what) + " path does not exist: " + path);
    }
  };
  require(train_path, "train");
  if (need_valid_test) {
    require(test_path, "test");
  }
  if (!rules_path.empty() && !fs::exists(rules_path)) {
    throw std::invalid_argument("rules path does not exist: " + rules_path);
  }
}

}  // namespace iterlogic
