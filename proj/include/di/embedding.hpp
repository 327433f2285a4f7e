#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "di/corpus.hpp"

namespace di {

struct EmbeddingConfig {
  int dim = 64;
  int epochs = 10;
  int window = 5;
  int negatives = 5;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

// Word vectors aligned with vocabulary ids (row w = vector of word w).
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(int dim, std::int32_t vocab_size)
      : dim_(dim), vectors_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(vocab_size), 0.0f) {}

  int dim() const { return dim_; }
  std::int32_t vocab_size() const {
    return dim_ == 0 ? 0 : static_cast<std::int32_t>(vectors_.size() / static_cast<std::size_t>(dim_));
  }
  const float* vector(std::int32_t word) const {
    return vectors_.data() + static_cast<std::size_t>(word) * static_cast<std::size_t>(dim_);
  }
  float* vector(std::int32_t word) {
    return vectors_.data() + static_cast<std::size_t>(word) * static_cast<std::size_t>(dim_);
  }
  const std::vector<float>& raw() const { return vectors_; }
  std::vector<float>& raw() { return vectors_; }

  // Mean of in-vocabulary word vectors; zero vector when nothing applies.
  std::vector<double> embed(const std::vector<std::int32_t>& tokens) const;

 private:
  int dim_ = 0;
  std::vector<float> vectors_;
};

// Negative-sampling trainer over utterance-internal windows, single
// threaded and bitwise deterministic given the seed.
EmbeddingModel train_embeddings(const Corpus& corpus, const Vocabulary& vocab,
                                const EmbeddingConfig& cfg);

// Text format, one "word v1 v2 ... vdim" line per word; words missing from
// the file get zero vectors.
EmbeddingModel load_word_vectors_text(const std::string& path, const Vocabulary& vocab);

// Binary container: magic, version, dim, vocab size, then little-endian
// 32-bit floats in id order.
void save_embedding_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_embedding_model(const std::string& path);

// Per-utterance embeddings in corpus order (dialogue-major, turn-minor).
struct UtteranceEmbeddings {
  std::size_t count = 0;
  int dim = 0;
  std::vector<double> data;  // count x dim

  const double* row(std::size_t i) const { return data.data() + i * static_cast<std::size_t>(dim); }
  double* row(std::size_t i) { return data.data() + i * static_cast<std::size_t>(dim); }
};

UtteranceEmbeddings embed_corpus(const EmbeddingModel& model, const Corpus& corpus);

// Diagonal Gaussian per intent over utterance embeddings.
struct GaussianIntentStats {
  int intents = 0;
  int dim = 0;
  double variance_floor = 1e-4;
  std::vector<double> mean;      // intents x dim
  std::vector<double> var;       // intents x dim, every component >= floor
  std::vector<double> inv_var;   // intents x dim
  std::vector<double> log_norm;  // per intent: -0.5 * sum log(2 pi var)
  std::vector<std::int64_t> count;

  const double* mean_row(int z) const { return mean.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(dim); }
  const double* var_row(int z) const { return var.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(dim); }
  const double* inv_var_row(int z) const { return inv_var.data() + static_cast<std::size_t>(z) * static_cast<std::size_t>(dim); }
};

// Per-intent sample mean and floored population variance; intents with
// fewer than two members fall back to the global statistics.
GaussianIntentStats estimate_gaussians(const UtteranceEmbeddings& emb,
                                       const std::vector<int>& assignments, int intents,
                                       double variance_floor);

double log_gaussian_likelihood(const double* e, const GaussianIntentStats& stats, int z);

}  // namespace di
