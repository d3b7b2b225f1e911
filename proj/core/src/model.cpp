#include "iterlogic/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace iterlogic {

void TrainingConfig::validate() const {
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (l2_coefficient < 0.0) throw std::invalid_argument("l2_coefficient must be >= 0");
  if (negatives_per_positive < 1) {
    throw std::invalid_argument("negatives_per_positive must be >= 1");
  }
  if (epochs < 1 || iterative_steps < 1 || iterative_steps > epochs) {
    throw std::invalid_argument("need epochs >= iterative_steps >= 1");
  }
  // Values above 1 are allowed and mean "never promote".
  if (!(acceptance_threshold > 0.5)) {
    throw std::invalid_argument("acceptance_threshold must exceed 0.5");
  }
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");
}

std::string variant_name(const TrainingConfig& config) {
  std::string name = scorer_name(config.scorer);
  if (config.conclusion_mode == ConclusionMode::AllPositive) {
    name += "+AC";
  } else if (config.conclusion_mode == ConclusionMode::Weighted) {
    name += "+WC";
  } else {
    if (!config.dc_loss_enabled) name += " w/o Ldc";
    if (!config.rc_loss_enabled) name += " w/o Lrc";
  }
  if (!config.iterative_learning) {
    name += " w/o IL";
  } else if (config.top_n_promotion) {
    name += "+top-n";
  } else {
    name += "+IL";
  }
  if (!config.nne_enabled) name += " w/o NNE";
  if (config.l2_coefficient == 0.0) name += " w/o l2";
  return name;
}

const char* scorer_name(ScorerKind kind) {
  return kind == ScorerKind::Complex ? "complex" : "rotate";
}

const char* conclusion_mode_name(ConclusionMode mode) {
  switch (mode) {
    case ConclusionMode::Iterlogic: return "iterlogic";
    case ConclusionMode::AllPositive: return "ac";
    case ConclusionMode::Weighted: return "wc";
  }
  return "?";
}

double stable_sigmoid(double x) {
  x = std::clamp(x, -30.0, 30.0);
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

EmbeddingModel EmbeddingModel::init(std::uint32_t entity_count,
                                    std::uint32_t relation_count,
                                    const TrainingConfig& config, std::mt19937_64& rng) {
  EmbeddingModel m;
  m.scorer = config.scorer;
  m.dim = config.dim;
  m.entity_count = entity_count;
  m.relation_count = relation_count;
  m.rotate_margin = config.rotate_margin;

  const std::size_t esz = std::size_t(entity_count) * config.dim;
  const std::size_t rsz = std::size_t(relation_count) * config.dim;
  m.entity_re.resize(esz);
  m.entity_im.resize(esz);
  m.relation_re.resize(rsz);
  m.relation_im.resize(rsz);
  m.acc_entity_re.assign(esz, 1e-8);
  m.acc_entity_im.assign(esz, 1e-8);
  m.acc_relation_re.assign(rsz, 1e-8);
  m.acc_relation_im.assign(rsz, 1e-8);

  const double scale = 6.0 / std::sqrt(double(config.dim));
  std::uniform_real_distribution<double> sym(-scale, scale);
  std::uniform_real_distribution<double> pos(0.0, scale);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);

  for (double& v : m.entity_re) v = config.nne_enabled ? pos(rng) : sym(rng);
  for (double& v : m.entity_im) v = config.nne_enabled ? pos(rng) : sym(rng);
  if (config.scorer == ScorerKind::Rotate) {
    for (double& v : m.relation_re) v = phase(rng);
    // relation_im stays zero; the rotation is a pure phase.
  } else {
    for (double& v : m.relation_re) v = sym(rng);
    for (double& v : m.relation_im) v = sym(rng);
  }
  return m;
}

double EmbeddingModel::score(const Triple& t) const {
  const double* hr = &entity_re[std::size_t(t.head) * dim];
  const double* hi = &entity_im[std::size_t(t.head) * dim];
  const double* rr = &relation_re[std::size_t(t.relation) * dim];
  const double* ri = &relation_im[std::size_t(t.relation) * dim];
  const double* tr = &entity_re[std::size_t(t.tail) * dim];
  const double* ti = &entity_im[std::size_t(t.tail) * dim];

  if (scorer == ScorerKind::Complex) {
    double f = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) {
      f += hr[i] * rr[i] * tr[i] + hi[i] * rr[i] * ti[i] + hr[i] * ri[i] * ti[i] -
           hi[i] * ri[i] * tr[i];
    }
    return f;
  }

  double dist = 0.0;
  for (std::uint32_t i = 0; i < dim; ++i) {
    const double c = std::cos(rr[i]);
    const double s = std::sin(rr[i]);
    const double dr = hr[i] * c - hi[i] * s - tr[i];
    const double di = hr[i] * s + hi[i] * c - ti[i];
    dist += std::sqrt(dr * dr + di * di + 1e-12);
  }
  return rotate_margin - dist;
}

double EmbeddingModel::probability(const Triple& t) const {
  return stable_sigmoid(score(t));
}

bool EmbeddingModel::all_finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return ok(entity_re) && ok(entity_im) && ok(relation_re) && ok(relation_im);
}

// Checkpoint layout (little-endian):
//   magic "ILKC", u32 version=1, u8 scorer, u32 dim, u32 entity_count,
//   u32 relation_count, f64 rotate_margin, then the eight matrices in
//   declaration order as raw f64 rows.
namespace {

constexpr char kMagic[4] = {'I', 'L', 'K', 'C'};

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

void put_matrix(std::ofstream& out, const std::vector<double>& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            std::streamsize(m.size() * sizeof(double)));
}

void take_matrix(std::ifstream& in, std::vector<double>& m, std::size_t size) {
  m.resize(size);
  in.read(reinterpret_cast<char*>(m.data()), std::streamsize(size * sizeof(double)));
}

}  // namespace

void EmbeddingModel::save(const std::string& path) const {
  std::ofstream out(path + ".partial", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, 1);
  put<std::uint8_t>(out, std::uint8_t(scorer));
  put<std::uint32_t>(out, dim);
  put<std::uint32_t>(out, entity_count);
  put<std::uint32_t>(out, relation_count);
  put<double>(out, rotate_margin);
  for (const auto* m : {&entity_re, &entity_im, &relation_re, &relation_im,
                        &acc_entity_re, &acc_entity_im, &acc_relation_re,
                        &acc_relation_im}) {
    put_matrix(out, *m);
  }
  out.close();
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
  if (std::rename((path + ".partial").c_str(), path.c_str()) != 0) {
    throw std::runtime_error("checkpoint rename failed: " + path);
  }
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("not a model checkpoint: " + path);
  }
  auto version = take<std::uint32_t>(in);
  if (version != 1) {
    throw std::runtime_error("unsupported checkpoint version in " + path);
  }
  EmbeddingModel m;
  m.scorer = ScorerKind(take<std::uint8_t>(in));
  m.dim = take<std::uint32_t>(in);
  m.entity_count = take<std::uint32_t>(in);
  m.relation_count = take<std::uint32_t>(in);
  m.rotate_margin = take<double>(in);
  const std::size_t esz = std::size_t(m.entity_count) * m.dim;
  const std::size_t rsz = std::size_t(m.relation_count) * m.dim;
  for (auto* mat : {&m.entity_re, &m.entity_im}) take_matrix(in, *mat, esz);
  for (auto* mat : {&m.relation_re, &m.relation_im}) take_matrix(in, *mat, rsz);
  for (auto* mat : {&m.acc_entity_re, &m.acc_entity_im}) take_matrix(in, *mat, esz);
  for (auto* mat : {&m.acc_relation_re, &m.acc_relation_im}) take_matrix(in, *mat, rsz);
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return m;
}

}  // namespace iterlogic
