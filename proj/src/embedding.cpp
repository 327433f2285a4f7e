#include "di/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "di/common.hpp"
#include "di/kernels.hpp"
#include "di/log.hpp"
#include "di/rng.hpp"

namespace di {

std::vector<double> EmbeddingModel::embed(const std::vector<std::int32_t>& tokens) const {
  std::vector<float> acc(static_cast<std::size_t>(dim_), 0.0f);
  int n = 0;
  const auto& k = kern::active();
  for (std::int32_t t : tokens) {
    if (t < 0 || t >= vocab_size()) continue;
    k.axpy_f32(1.0f, vector(t), acc.data(), acc.size());
    ++n;
  }
  std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
  if (n == 0) return out;
  for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(acc[static_cast<std::size_t>(i)]) / n;
  return out;
}

namespace {

inline float sigmoidf(float x) {
  if (x > 8.0f) return 1.0f;
  if (x < -8.0f) return 0.0f;
  return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace

EmbeddingModel train_embeddings(const Corpus& corpus, const Vocabulary& vocab,
                                const EmbeddingConfig& cfg) {
  if (cfg.dim < 2) throw ValidationError("embedding dim must be >= 2");
  if (cfg.epochs < 1) throw ValidationError("embedding epochs must be >= 1");
  if (cfg.window < 1) throw ValidationError("embedding window must be >= 1");
  const std::int32_t V = vocab.size();
  const int dim = cfg.dim;

  // Compact in-vocabulary token lists per utterance.
  std::vector<std::vector<std::int32_t>> sents;
  std::size_t total_pairs = 0;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      std::vector<std::int32_t> toks;
      for (std::int32_t t : u.tokens) {
        if (t >= 0) toks.push_back(t);
      }
      if (toks.size() < 2) continue;
      const std::size_t len = toks.size();
      for (std::size_t c = 0; c < len; ++c) {
        const std::size_t lo = c > static_cast<std::size_t>(cfg.window) ? c - static_cast<std::size_t>(cfg.window) : 0;
        const std::size_t hi = std::min(len, c + static_cast<std::size_t>(cfg.window) + 1);
        total_pairs += (hi - lo - 1);
      }
      sents.push_back(std::move(toks));
    }
  }
  if (total_pairs == 0)
    throw ValidationError("embedding: corpus smaller than window, no training pairs");

  // Unigram noise distribution, freq^0.75.
  std::vector<double> noise_cdf(static_cast<std::size_t>(V));
  double acc = 0.0;
  for (std::int32_t w = 0; w < V; ++w) {
    acc += std::pow(static_cast<double>(vocab.term_freq(w)), 0.75);
    noise_cdf[static_cast<std::size_t>(w)] = acc;
  }

  EmbeddingModel in_vec(dim, V);
  std::vector<float> out_vec(static_cast<std::size_t>(dim) * static_cast<std::size_t>(V), 0.0f);
  Rng rng(cfg.seed);
  for (float& f : in_vec.raw()) {
    f = static_cast<float>((rng.uniform01() - 0.5) / dim);
  }

  const auto& k = kern::active();
  const double total_steps = static_cast<double>(total_pairs) * cfg.epochs;
  double done = 0.0;
  std::vector<float> grad(static_cast<std::size_t>(dim));

  auto sample_noise = [&]() -> std::int32_t {
    const double u = rng.uniform01() * acc;
    const auto it = std::lower_bound(noise_cdf.begin(), noise_cdf.end(), u);
    return static_cast<std::int32_t>(it - noise_cdf.begin());
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& toks : sents) {
      const std::size_t len = toks.size();
      for (std::size_t c = 0; c < len; ++c) {
        const std::size_t lo = c > static_cast<std::size_t>(cfg.window) ? c - static_cast<std::size_t>(cfg.window) : 0;
        const std::size_t hi = std::min(len, c + static_cast<std::size_t>(cfg.window) + 1);
        float* center = in_vec.vector(toks[c]);
        for (std::size_t o = lo; o < hi; ++o) {
          if (o == c) continue;
          const float lr = static_cast<float>(
              cfg.learning_rate * std::max(1e-4, 1.0 - done / total_steps));
          done += 1.0;
          std::fill(grad.begin(), grad.end(), 0.0f);
          for (int neg = 0; neg <= cfg.negatives; ++neg) {
            std::int32_t target;
            float label;
            if (neg == 0) {
              target = toks[o];
              label = 1.0f;
            } else {
              target = sample_noise();
              if (target == toks[o]) continue;
              label = 0.0f;
            }
            float* out_row = out_vec.data() + static_cast<std::size_t>(target) * static_cast<std::size_t>(dim);
            const float score = sigmoidf(k.dot_f32(center, out_row, static_cast<std::size_t>(dim)));
            const float g = (label - score) * lr;
            k.axpy_f32(g, out_row, grad.data(), static_cast<std::size_t>(dim));
            k.axpy_f32(g, center, out_row, static_cast<std::size_t>(dim));
          }
          k.axpy_f32(1.0f, grad.data(), center, static_cast<std::size_t>(dim));
        }
      }
    }
  }

  for (float f : in_vec.raw()) {
    if (!std::isfinite(f)) throw std::runtime_error("embedding training diverged");
  }
  return in_vec;
}

EmbeddingModel load_word_vectors_text(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open word vector file: " + path);
  std::string line;
  int dim = -1;
  std::size_t loaded = 0;
  EmbeddingModel model;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> vals;
    float v;
    while (ls >> v) vals.push_back(v);
    if (vals.empty()) throw ValidationError("word vector file: line without values");
    if (dim < 0) {
      dim = static_cast<int>(vals.size());
      model = EmbeddingModel(dim, vocab.size());
    } else if (static_cast<int>(vals.size()) != dim) {
      throw ValidationError("word vector file: inconsistent dimension");
    }
    const std::int32_t id = vocab.id(word);
    if (id < 0) continue;
    std::copy(vals.begin(), vals.end(), model.vector(id));
    ++loaded;
  }
  if (dim < 0) throw ValidationError("word vector file is empty: " + path);
  if (loaded < static_cast<std::size_t>(vocab.size()))
    log::warn("word vectors: ", vocab.size() - static_cast<std::int32_t>(loaded),
              " vocabulary words missing from ", path, ", left at zero");
  return model;
}

static constexpr char kEmbMagic[4] = {'D', 'I', 'E', 'M'};
static constexpr std::uint32_t kEmbVersion = 1;

void save_embedding_model(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kEmbMagic, 4);
  const std::uint32_t version = kEmbVersion;
  const std::uint32_t dim = static_cast<std::uint32_t>(model.dim());
  const std::uint64_t vocab_size = static_cast<std::uint64_t>(model.vocab_size());
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(&vocab_size), sizeof(vocab_size));
  out.write(reinterpret_cast<const char*>(model.raw().data()),
            static_cast<std::streamsize>(model.raw().size() * sizeof(float)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingModel load_embedding_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding model: " + path);
  char magic[4];
  std::uint32_t version = 0, dim = 0;
  std::uint64_t vocab_size = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  in.read(reinterpret_cast<char*>(&vocab_size), sizeof(vocab_size));
  if (!in || std::memcmp(magic, kEmbMagic, 4) != 0)
    throw std::runtime_error("not an embedding model file: " + path);
  if (version != kEmbVersion)
    throw std::runtime_error("embedding model " + path + ": unsupported version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kEmbVersion) + ")");
  EmbeddingModel model(static_cast<int>(dim), static_cast<std::int32_t>(vocab_size));
  in.read(reinterpret_cast<char*>(model.raw().data()),
          static_cast<std::streamsize>(model.raw().size() * sizeof(float)));
  if (!in || in.gcount() != static_cast<std::streamsize>(model.raw().size() * sizeof(float)))
    throw std::runtime_error("embedding model " + path + ": truncated file");
  return model;
}

UtteranceEmbeddings embed_corpus(const EmbeddingModel& model, const Corpus& corpus) {
  UtteranceEmbeddings out;
  out.dim = model.dim();
  out.count = corpus.utterance_count();
  out.data.resize(out.count * static_cast<std::size_t>(out.dim));
  std::size_t i = 0;
  for (const auto& dlg : corpus.dialogues) {
    for (const auto& u : dlg.utterances) {
      const auto e = model.embed(u.tokens);
      std::copy(e.begin(), e.end(), out.row(i));
      ++i;
    }
  }
  return out;
}

GaussianIntentStats estimate_gaussians(const UtteranceEmbeddings& emb,
                                       const std::vector<int>& assignments, int intents,
                                       double variance_floor) {
  if (variance_floor <= 0.0) throw ValidationError("variance floor must be > 0");
  const int dim = emb.dim;
  const std::size_t n = emb.count;
  GaussianIntentStats stats;
  stats.intents = intents;
  stats.dim = dim;
  stats.variance_floor = variance_floor;
  stats.mean.assign(static_cast<std::size_t>(intents) * static_cast<std::size_t>(dim), 0.0);
  stats.var.assign(stats.mean.size(), 0.0);
  stats.inv_var.assign(stats.mean.size(), 0.0);
  stats.log_norm.assign(static_cast<std::size_t>(intents), 0.0);
  stats.count.assign(static_cast<std::size_t>(intents), 0);

  const auto& k = kern::active();
  std::vector<double> sum(stats.mean.size(), 0.0), sumsq(stats.mean.size(), 0.0);
  std::vector<double> gsum(static_cast<std::size_t>(dim), 0.0), gsumsq(static_cast<std::size_t>(dim), 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const int z = assignments[i];
    if (z < 0 || z >= intents) throw ValidationError("assignment out of range");
    ++stats.count[static_cast<std::size_t>(z)];
    k.acc2_f64(emb.row(i), sum.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(dim),
               sumsq.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(dim),
               static_cast<std::size_t>(dim));
    k.acc2_f64(emb.row(i), gsum.data(), gsumsq.data(), static_cast<std::size_t>(dim));
  }

  // Global fallback statistics.
  std::vector<double> gmean(static_cast<std::size_t>(dim), 0.0), gvar(static_cast<std::size_t>(dim), variance_floor);
  if (n > 0) {
    for (int d = 0; d < dim; ++d) {
      const double m = gsum[static_cast<std::size_t>(d)] / static_cast<double>(n);
      gmean[static_cast<std::size_t>(d)] = m;
      gvar[static_cast<std::size_t>(d)] =
          std::max(gsumsq[static_cast<std::size_t>(d)] / static_cast<double>(n) - m * m, variance_floor);
    }
  }

  for (int z = 0; z < intents; ++z) {
    const std::size_t off = static_cast<std::size_t>(z) * static_cast<std::size_t>(dim);
    const std::int64_t c = stats.count[static_cast<std::size_t>(z)];
    double log_norm = 0.0;
    for (int d = 0; d < dim; ++d) {
      double m, v;
      if (c <= 1) {
        m = gmean[static_cast<std::size_t>(d)];
        v = gvar[static_cast<std::size_t>(d)];
      } else {
        m = sum[off + static_cast<std::size_t>(d)] / static_cast<double>(c);
        v = std::max(sumsq[off + static_cast<std::size_t>(d)] / static_cast<double>(c) - m * m,
                     variance_floor);
      }
      stats.mean[off + static_cast<std::size_t>(d)] = m;
      stats.var[off + static_cast<std::size_t>(d)] = v;
      stats.inv_var[off + static_cast<std::size_t>(d)] = 1.0 / v;
      log_norm += std::log(2.0 * M_PI * v);
    }
    stats.log_norm[static_cast<std::size_t>(z)] = -0.5 * log_norm;
  }
  return stats;
}

double log_gaussian_likelihood(const double* e, const GaussianIntentStats& stats, int z) {
  const auto& k = kern::active();
  const double maha = k.sq_maha_f64(e, stats.mean_row(z), stats.inv_var_row(z),
                                    static_cast<std::size_t>(stats.dim));
  return stats.log_norm[static_cast<std::size_t>(z)] - 0.5 * maha;
}

}  // namespace di
