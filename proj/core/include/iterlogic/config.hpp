#pragma once

#include <cstdint>
#include <string>

namespace iterlogic {

enum class ScorerKind : std::uint8_t { Complex = 0, Rotate = 1 };

// How grounded conclusions enter the objective.
//   Iterlogic:   deterministic-conclusion + rule-confidence losses
//   AllPositive: conclusions join the logistic term as y=+1 examples (AC)
//   Weighted:    conclusions join the logistic term with the rule
//                confidence as a soft label (WC)
enum class ConclusionMode : std::uint8_t { Iterlogic = 0, AllPositive = 1, Weighted = 2 };

struct TrainingConfig {
  std::uint32_t dim = 100;                  // embedding dimensionality d
  double learning_rate = 1e-3;              // AdaGrad initial rate
  std::uint32_t negatives_per_positive = 10;
  double l2_coefficient = 3e-5;
  bool nne_enabled = true;                  // project entity embeddings to >= 0
  bool dc_loss_enabled = true;
  bool rc_loss_enabled = true;
  ConclusionMode conclusion_mode = ConclusionMode::Iterlogic;
  std::uint32_t epochs = 1000;              // N
  std::uint32_t iterative_steps = 5;        // M; grounding at epochs n = k*floor(N/M)
  bool iterative_learning = true;           // off: single grounding, no promotion
  bool top_n_promotion = false;             // promote round(|C_f| * c_f) best per rule
  // Candidates with sigmoid(score) >= threshold are promoted into the KG.
  // A value > 1 disables promotion entirely.
  double acceptance_threshold = 0.99;
  std::uint32_t batch_size = 1024;
  std::uint64_t seed = 1;
  ScorerKind scorer = ScorerKind::Complex;
  double rotate_margin = 12.0;
  std::uint32_t workers = 1;
  // Deterministic single-writer updates when true; unsynchronized parallel
  // sparse updates (non-deterministic, throughput mode) when false.
  bool deterministic = true;
  std::uint32_t checkpoint_every = 0;       // epochs between checkpoints; 0 = off

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// Short name of the training behavior selected by the ablation flags
// ("iterlogic-e", "w/o IL", "AC+IL", ...). Used for logging.
std::string variant_name(const TrainingConfig& config);

const char* scorer_name(ScorerKind kind);
const char* conclusion_mode_name(ConclusionMode mode);

}  // namespace iterlogic
