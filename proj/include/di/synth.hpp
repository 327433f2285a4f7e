#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "di/corpus.hpp"
#include "di/inference.hpp"

namespace di {

// Ground-truth parameters for forward simulation.
struct TruthParams {
  int intents = 0;     // K
  int vocab = 0;       // V
  int dialogues = 0;   // D
  int dim = 0;         // embedding dimension
  double tau = 0.5;
  double doc_alpha = 1.0;          // Dirichlet prior of per-dialogue intent mixes
  std::vector<double> phi;         // K x V word distributions, rows sum to 1
  std::vector<double> mean;        // K x dim Gaussian means
  std::vector<double> var;         // K x dim Gaussian variances
  std::vector<double> transition;  // K x K rows sum to 1
  int min_utterances = 2, max_utterances = 10;
  int min_words = 3, max_words = 8;
  std::uint64_t seed = 1;

  void validate() const;

  // Convenience constructor: random dense word distributions (optionally
  // mixed with a shared background), axis-aligned Gaussian means separated
  // by `separation` (in per-dimension sigma units), and a cyclic
  // transition matrix with `cycle_mass` on the next-intent edge.
  static TruthParams make(int intents, int vocab, int dialogues, int dim, double tau,
                          double separation, double cycle_mass, std::uint64_t seed,
                          double word_background = 0.0);
};

struct SynthData {
  Corpus corpus;                     // gold intents "i<k>" on every utterance
  Vocabulary vocab;                  // identity map: word "w<j>" has id j
  UtteranceEmbeddings embeddings;    // drawn from the intents' Gaussians
  std::vector<int> gold_z;
  std::vector<std::uint8_t> gold_x;  // 1 = document path
};

// Forward simulation: per-dialogue intent mix, Bernoulli(tau) path switch
// per utterance (the first utterance always draws from the dialogue mix),
// words from the intent's word distribution, embedding from its Gaussian.
// Fully determined by the seed.
SynthData generate_corpus(const TruthParams& truth);

// The truth's word distributions as an intent set in the same id space as
// the generated corpus (names "i<k>").
IntentSet truth_intents(const TruthParams& truth);

void save_truth(const TruthParams& truth, const std::string& path);
TruthParams load_truth(const std::string& path);

// Exact per-utterance intent conditionals for tiny instances, obtained by
// scoring every joint (z, x) configuration with the complete likelihood
// and marginalizing the target utterance's indicator while all other
// assignments stay at the reference configuration. Limits: at most 8
// utterances and at most 3 intents.
std::vector<std::vector<double>> brute_force_posterior(
    const CorpusLayout& layout, const UtteranceEmbeddings& embeddings,
    const GaussianIntentStats& gaussians, double tau, const PriorSpec& priors,
    const std::vector<int>& ref_z, const std::vector<std::uint8_t>& ref_x);

struct Alignment {
  std::vector<int> permutation;  // predicted intent -> gold intent
  double accuracy = 0.0;
};

// Resolve label switching: the intent permutation maximizing agreement
// between predicted and gold assignments (optimal assignment over the
// confusion matrix) and the accuracy under it.
Alignment align_intents(const std::vector<int>& predicted, const std::vector<int>& gold, int intents);

// Maximum-total assignment of a square score matrix; returns row -> column.
std::vector<int> max_assignment(const std::vector<std::vector<double>>& score);

}  // namespace di
