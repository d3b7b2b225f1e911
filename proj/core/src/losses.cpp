#include "iterlogic/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace iterlogic {

bool ConclusionBatch::empty() const { return total() == 0; }

std::size_t ConclusionBatch::total() const {
  std::size_t n = 0;
  for (const Group& g : groups) n += g.triples.size();
  return n;
}

ConclusionBatch ConclusionBatch::from_set(const ConclusionSet& set) {
  ConclusionBatch batch;
  batch.groups.reserve(set.groups.size());
  for (const auto& g : set.groups) {
    batch.groups.push_back({g.rule_index, g.triples});
  }
  return batch;
}

double logistic_loss(const EmbeddingModel& model, std::span<const LabeledExample> batch) {
  if (batch.empty()) throw std::invalid_argument("logistic loss needs a non-empty batch");
  double sum = 0.0;
  for (const LabeledExample& ex : batch) {
    sum += softplus(-double(ex.label) * model.score(ex.triple));
  }
  return sum / double(batch.size());
}

std::vector<std::vector<double>> conclusion_scores(const EmbeddingModel& model,
                                                   const ConclusionBatch& batch) {
  std::vector<std::vector<double>> out;
  out.reserve(batch.groups.size());
  for (const auto& g : batch.groups) {
    std::vector<double> scores;
    scores.reserve(g.triples.size());
    for (const Triple& t : g.triples) scores.push_back(model.probability(t));
    out.push_back(std::move(scores));
  }
  return out;
}

double dc_loss(std::span<const std::vector<double>> scores) {
  double sum = 0.0;
  std::size_t groups = 0;
  for (const auto& s : scores) {
    if (s.empty()) continue;
    ++groups;
    double acc = 0.0;
    for (double v : s) acc += (v - 0.5) * (v - 0.5);
    sum += -acc / double(s.size());
  }
  return groups == 0 ? 0.0 : sum / double(groups);
}

double rc_loss(std::span<const std::vector<double>> scores,
               std::span<const double> confidences) {
  if (scores.size() != confidences.size()) {
    throw std::invalid_argument("rc_loss needs one confidence per score group");
  }
  double sum = 0.0;
  std::size_t groups = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].empty()) continue;
    ++groups;
    double mean = 0.0;
    for (double v : scores[i]) mean += v;
    mean /= double(scores[i].size());
    sum += (mean - confidences[i]) * (mean - confidences[i]);
  }
  return groups == 0 ? 0.0 : sum / double(groups);
}

namespace {

struct TouchedRows {
  std::vector<EntityId> entities;
  std::vector<RelationId> relations;
};

// Rows whose parameters enter the lazy l2 term: everything referenced by
// the labeled batch, plus the conclusion triples when their loss terms are
// active.
TouchedRows collect_touched(std::span<const LabeledExample> batch,
                            const ConclusionBatch& conclusions, bool conclusions_active) {
  std::unordered_map<std::uint32_t, bool> ents, rels;
  for (const LabeledExample& ex : batch) {
    ents[ex.triple.head] = true;
    ents[ex.triple.tail] = true;
    rels[ex.triple.relation] = true;
  }
  if (conclusions_active) {
    for (const auto& g : conclusions.groups) {
      for (const Triple& t : g.triples) {
        ents[t.head] = true;
        ents[t.tail] = true;
        rels[t.relation] = true;
      }
    }
  }
  TouchedRows out;
  out.entities.reserve(ents.size());
  for (const auto& [id, _] : ents) out.entities.push_back(id);
  for (const auto& [id, _] : rels) out.relations.push_back(id);
  return out;
}

double row_sq_norm(const std::vector<double>& m, std::uint32_t id, std::uint32_t dim) {
  const double* p = &m[std::size_t(id) * dim];
  double s = 0.0;
  for (std::uint32_t i = 0; i < dim; ++i) s += p[i] * p[i];
  return s;
}

bool conclusions_enter_losses(const TrainingConfig& config) {
  if (config.conclusion_mode != ConclusionMode::Iterlogic) return true;
  return config.dc_loss_enabled || config.rc_loss_enabled;
}

}  // namespace

LossBreakdown total_objective(const EmbeddingModel& model,
                              std::span<const LabeledExample> batch,
                              const ConclusionBatch& conclusions,
                              std::span<const HornRule> rules,
                              const TrainingConfig& config) {
  LossBreakdown out;
  const bool iterlogic = config.conclusion_mode == ConclusionMode::Iterlogic;

  std::size_t denom = batch.size();
  if (!iterlogic) denom += conclusions.total();

  double logistic = 0.0;
  for (const LabeledExample& ex : batch) {
    logistic += softplus(-double(ex.label) * model.score(ex.triple));
  }
  if (!iterlogic) {
    for (const auto& g : conclusions.groups) {
      const double c = rules[g.rule_index].confidence;
      for (const Triple& t : g.triples) {
        const double f = model.score(t);
        if (config.conclusion_mode == ConclusionMode::AllPositive) {
          logistic += softplus(-f);
        } else {
          logistic += c * softplus(-f) + (1.0 - c) * softplus(f);
        }
      }
    }
  }
  out.logistic = denom == 0 ? 0.0 : logistic / double(denom);

  if (iterlogic && (config.dc_loss_enabled || config.rc_loss_enabled)) {
    auto scores = conclusion_scores(model, conclusions);
    if (config.dc_loss_enabled) out.dc = dc_loss(scores);
    if (config.rc_loss_enabled) {
      std::vector<double> confs;
      confs.reserve(conclusions.groups.size());
      for (const auto& g : conclusions.groups) {
        confs.push_back(rules[g.rule_index].confidence);
      }
      out.rc = rc_loss(scores, confs);
    }
  }

  if (config.l2_coefficient > 0.0) {
    auto touched = collect_touched(batch, conclusions, conclusions_enter_losses(config));
    double sq = 0.0;
    for (EntityId e : touched.entities) {
      sq += row_sq_norm(model.entity_re, e, model.dim) +
            row_sq_norm(model.entity_im, e, model.dim);
    }
    for (RelationId r : touched.relations) {
      sq += row_sq_norm(model.relation_re, r, model.dim) +
            row_sq_norm(model.relation_im, r, model.dim);
    }
    out.reg = config.l2_coefficient * sq;
  }
  return out;
}

void SparseGrad::clear() {
  ent_re.clear();
  ent_im.clear();
  rel_re.clear();
  rel_im.clear();
}

std::vector<double>& SparseGrad::row(
    std::unordered_map<std::uint32_t, std::vector<double>>& m, std::uint32_t id,
    std::uint32_t dim) {
  auto& r = m[id];
  if (r.empty()) r.assign(dim, 0.0);
  return r;
}

namespace {

// dL/dF -> parameter rows for one triple.
void backprop_score(const EmbeddingModel& model, const Triple& t, double g,
                    SparseGrad& out) {
  const std::uint32_t d = model.dim;
  const double* hr = &model.entity_re[std::size_t(t.head) * d];
  const double* hi = &model.entity_im[std::size_t(t.head) * d];
  const double* rr = &model.relation_re[std::size_t(t.relation) * d];
  const double* ri = &model.relation_im[std::size_t(t.relation) * d];
  const double* tr = &model.entity_re[std::size_t(t.tail) * d];
  const double* ti = &model.entity_im[std::size_t(t.tail) * d];

  auto& g_hr = out.row(out.ent_re, t.head, d);
  auto& g_hi = out.row(out.ent_im, t.head, d);
  auto& g_rr = out.row(out.rel_re, t.relation, d);
  auto& g_ri = out.row(out.rel_im, t.relation, d);
  auto& g_tr = out.row(out.ent_re, t.tail, d);
  auto& g_ti = out.row(out.ent_im, t.tail, d);

  if (model.scorer == ScorerKind::Complex) {
    for (std::uint32_t i = 0; i < d; ++i) {
      g_hr[i] += g * (rr[i] * tr[i] + ri[i] * ti[i]);
      g_hi[i] += g * (rr[i] * ti[i] - ri[i] * tr[i]);
      g_rr[i] += g * (hr[i] * tr[i] + hi[i] * ti[i]);
      g_ri[i] += g * (hr[i] * ti[i] - hi[i] * tr[i]);
      g_tr[i] += g * (hr[i] * rr[i] - hi[i] * ri[i]);
      g_ti[i] += g * (hi[i] * rr[i] + hr[i] * ri[i]);
    }
    return;
  }

  // Rotational scorer: F = margin - sum_i sqrt(dr^2 + di^2 + eps).
  for (std::uint32_t i = 0; i < d; ++i) {
    const double c = std::cos(rr[i]);
    const double s = std::sin(rr[i]);
    const double rot_re = hr[i] * c - hi[i] * s;
    const double rot_im = hr[i] * s + hi[i] * c;
    const double dr = rot_re - tr[i];
    const double di = rot_im - ti[i];
    const double m = std::sqrt(dr * dr + di * di + 1e-12);
    const double gm = -g / m;  // dF/d(dist_i) = -1
    g_hr[i] += gm * (dr * c + di * s);
    g_hi[i] += gm * (-dr * s + di * c);
    g_rr[i] += gm * (dr * -rot_im + di * rot_re);
    g_tr[i] += gm * -dr;
    g_ti[i] += gm * -di;
  }
}

}  // namespace

LossBreakdown gradients(const EmbeddingModel& model,
                        std::span<const LabeledExample> batch,
                        const ConclusionBatch& conclusions,
                        std::span<const HornRule> rules, const TrainingConfig& config,
                        SparseGrad& out) {
  out.clear();
  LossBreakdown loss;
  const bool iterlogic = config.conclusion_mode == ConclusionMode::Iterlogic;

  std::size_t denom = batch.size();
  if (!iterlogic) denom += conclusions.total();
  const double inv_denom = denom == 0 ? 0.0 : 1.0 / double(denom);

  double logistic = 0.0;
  for (const LabeledExample& ex : batch) {
    const double y = double(ex.label);
    const double f = model.score(ex.triple);
    logistic += softplus(-y * f);
    backprop_score(model, ex.triple, -y * stable_sigmoid(-y * f) * inv_denom, out);
  }
  if (!iterlogic) {
    for (const auto& g : conclusions.groups) {
      const double c = rules[g.rule_index].confidence;
      for (const Triple& t : g.triples) {
        const double f = model.score(t);
        if (config.conclusion_mode == ConclusionMode::AllPositive) {
          logistic += softplus(-f);
          backprop_score(model, t, -stable_sigmoid(-f) * inv_denom, out);
        } else {
          logistic += c * softplus(-f) + (1.0 - c) * softplus(f);
          backprop_score(model, t, (stable_sigmoid(f) - c) * inv_denom, out);
        }
      }
    }
  }
  loss.logistic = logistic * inv_denom;

  if (iterlogic && (config.dc_loss_enabled || config.rc_loss_enabled)) {
    std::size_t active_groups = 0;
    for (const auto& g : conclusions.groups) {
      if (!g.triples.empty()) ++active_groups;
    }
    if (active_groups > 0) {
      const double inv_groups = 1.0 / double(active_groups);
      for (const auto& g : conclusions.groups) {
        if (g.triples.empty()) continue;
        const double n = double(g.triples.size());
        const double c = rules[g.rule_index].confidence;

        std::vector<double> f_values(g.triples.size());
        std::vector<double> s_values(g.triples.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < g.triples.size(); ++i) {
          f_values[i] = model.score(g.triples[i]);
          s_values[i] = stable_sigmoid(f_values[i]);
          mean += s_values[i];
        }
        mean /= n;

        if (config.dc_loss_enabled) {
          double acc = 0.0;
          for (double s : s_values) acc += (s - 0.5) * (s - 0.5);
          loss.dc += -acc / n * inv_groups;
        }
        if (config.rc_loss_enabled) {
          loss.rc += (mean - c) * (mean - c) * inv_groups;
        }

        for (std::size_t i = 0; i < g.triples.size(); ++i) {
          const double s = s_values[i];
          double dl_ds = 0.0;
          if (config.dc_loss_enabled) dl_ds += -2.0 * (s - 0.5) / n;
          if (config.rc_loss_enabled) dl_ds += 2.0 * (mean - c) / n;
          const double g_f = dl_ds * s * (1.0 - s) * inv_groups;
          backprop_score(model, g.triples[i], g_f, out);
        }
      }
    }
  }

  if (config.l2_coefficient > 0.0) {
    auto touched = collect_touched(batch, conclusions, conclusions_enter_losses(config));
    const double mu = config.l2_coefficient;
    double sq = 0.0;
    for (EntityId e : touched.entities) {
      auto& gre = out.row(out.ent_re, e, model.dim);
      auto& gim = out.row(out.ent_im, e, model.dim);
      const double* re = &model.entity_re[std::size_t(e) * model.dim];
      const double* im = &model.entity_im[std::size_t(e) * model.dim];
      for (std::uint32_t i = 0; i < model.dim; ++i) {
        gre[i] += 2.0 * mu * re[i];
        gim[i] += 2.0 * mu * im[i];
        sq += re[i] * re[i] + im[i] * im[i];
      }
    }
    for (RelationId r : touched.relations) {
      auto& gre = out.row(out.rel_re, r, model.dim);
      auto& gim = out.row(out.rel_im, r, model.dim);
      const double* re = &model.relation_re[std::size_t(r) * model.dim];
      const double* im = &model.relation_im[std::size_t(r) * model.dim];
      for (std::uint32_t i = 0; i < model.dim; ++i) {
        gre[i] += 2.0 * mu * re[i];
        gim[i] += 2.0 * mu * im[i];
        sq += re[i] * re[i] + im[i] * im[i];
      }
    }
    loss.reg = mu * sq;
  }
  return loss;
}

void apply_adagrad(EmbeddingModel& model, const SparseGrad& grad,
                   const TrainingConfig& config) {
  const double lr = config.learning_rate;
  auto update = [&](std::vector<double>& theta, std::vector<double>& acc,
                    const std::unordered_map<std::uint32_t, std::vector<double>>& rows,
                    bool nonneg) {
    for (const auto& [id, g_row] : rows) {
      const std::size_t base = std::size_t(id) * model.dim;
      for (std::uint32_t i = 0; i < model.dim; ++i) {
        const double g = g_row[i];
        acc[base + i] += g * g;
        theta[base + i] -= lr * g / std::sqrt(acc[base + i]);
        if (nonneg && theta[base + i] < 0.0) theta[base + i] = 0.0;
      }
    }
  };
  update(model.entity_re, model.acc_entity_re, grad.ent_re, config.nne_enabled);
  update(model.entity_im, model.acc_entity_im, grad.ent_im, config.nne_enabled);
  update(model.relation_re, model.acc_relation_re, grad.rel_re, false);
  update(model.relation_im, model.acc_relation_im, grad.rel_im, false);
}

DenseGrad to_dense(const SparseGrad& grad, const EmbeddingModel& model) {
  DenseGrad dense;
  dense.entity_re.assign(model.entity_re.size(), 0.0);
  dense.entity_im.assign(model.entity_im.size(), 0.0);
  dense.relation_re.assign(model.relation_re.size(), 0.0);
  dense.relation_im.assign(model.relation_im.size(), 0.0);
  auto fill = [&](std::vector<double>& dst,
                  const std::unordered_map<std::uint32_t, std::vector<double>>& rows) {
    for (const auto& [id, row] : rows) {
      std::copy(row.begin(), row.end(), dst.begin() + std::ptrdiff_t(id) * model.dim);
    }
  };
  fill(dense.entity_re, grad.ent_re);
  fill(dense.entity_im, grad.ent_im);
  fill(dense.relation_re, grad.rel_re);
  fill(dense.relation_im, grad.rel_im);
  return dense;
}

}  // namespace iterlogic
